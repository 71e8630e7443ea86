//! Table rendering. Every function here is pure: the same input always
//! produces byte-identical output.
//!
//! Markdown and plain-text tables carry display headers and footnotes. CSV
//! tables carry machine-readable headers and no footnotes, and the summary CSV
//! can be read back with [`parse_summary_csv`].

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use crate::analysis::{DomainBreakdown, ParetoResult};
use crate::error::{Error, Result};
use crate::metrics;
use crate::model::{AgentSummary, PricingTable, RunRecord};
use crate::reliability::{self, PassSemantics};
use crate::stats::ApproachCorrelation;

/// Placeholder for an undefined value.
pub const MISSING: &str = "—";

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub enum Format {
    #[default]
    Markdown,
    Csv,
    Text,
}

impl Format {
    pub fn extension(self) -> &'static str {
        match self {
            Format::Markdown => "md",
            Format::Csv => "csv",
            Format::Text => "txt",
        }
    }
}

impl fmt::Display for Format {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Format::Markdown => "md",
            Format::Csv => "csv",
            Format::Text => "text",
        })
    }
}

impl FromStr for Format {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s.to_ascii_lowercase().as_str() {
            "md" | "markdown" => Ok(Format::Markdown),
            "csv" => Ok(Format::Csv),
            "text" | "txt" | "plain" => Ok(Format::Text),
            other => Err(format!(
                "unknown format `{other}` (expected md, csv or text)"
            )),
        }
    }
}

/// A column with a display header and a CSV key.
#[derive(Debug, Clone)]
struct Column {
    display: String,
    key: String,
}

impl Column {
    fn new(display: impl Into<String>, key: impl Into<String>) -> Self {
        Column {
            display: display.into(),
            key: key.into(),
        }
    }
}

#[derive(Debug, Clone, Default)]
struct Table {
    columns: Vec<Column>,
    rows: Vec<Vec<String>>,
    /// Markdown/text only.
    notes: Vec<String>,
}

impl Table {
    fn render(&self, format: Format) -> String {
        match format {
            Format::Markdown => self.markdown(),
            Format::Csv => self.csv(),
            Format::Text => self.text(),
        }
    }

    fn markdown(&self) -> String {
        let mut out = String::new();
        let header: Vec<&str> = self.columns.iter().map(|c| c.display.as_str()).collect();
        out.push_str(&format!("| {} |\n", header.join(" | ")));
        let rule: Vec<&str> = self
            .columns
            .iter()
            .enumerate()
            .map(|(i, _)| if i == 0 { "---" } else { "---:" })
            .collect();
        out.push_str(&format!("|{}|\n", rule.join("|")));
        for row in &self.rows {
            let cells: Vec<String> = row.iter().map(|c| c.replace('|', "\\|")).collect();
            out.push_str(&format!("| {} |\n", cells.join(" | ")));
        }
        self.push_notes(&mut out);
        out
    }

    fn text(&self) -> String {
        let widths: Vec<usize> = (0..self.columns.len())
            .map(|i| {
                self.rows
                    .iter()
                    .map(|r| r[i].chars().count())
                    .chain(std::iter::once(self.columns[i].display.chars().count()))
                    .max()
                    .unwrap_or(0)
            })
            .collect();
        let line = |cells: Vec<&str>| -> String {
            let padded: Vec<String> = cells
                .iter()
                .zip(&widths)
                .enumerate()
                .map(|(i, (c, w))| {
                    let pad = w - c.chars().count();
                    if i == 0 {
                        format!("{c}{}", " ".repeat(pad))
                    } else {
                        format!("{}{c}", " ".repeat(pad))
                    }
                })
                .collect();
            format!("{}\n", padded.join("  ").trim_end())
        };
        let mut out = line(self.columns.iter().map(|c| c.display.as_str()).collect());
        let total = widths.iter().sum::<usize>() + 2 * widths.len().saturating_sub(1);
        out.push_str(&format!("{}\n", "-".repeat(total)));
        for row in &self.rows {
            out.push_str(&line(row.iter().map(String::as_str).collect()));
        }
        self.push_notes(&mut out);
        out
    }

    fn csv(&self) -> String {
        let mut w = csv::WriterBuilder::new().from_writer(Vec::new());
        let header: Vec<&str> = self.columns.iter().map(|c| c.key.as_str()).collect();
        // Writing to a Vec cannot fail.
        w.write_record(&header).expect("in-memory csv");
        for row in &self.rows {
            w.write_record(row).expect("in-memory csv");
        }
        String::from_utf8(w.into_inner().expect("in-memory csv")).expect("utf-8 cells")
    }

    fn push_notes(&self, out: &mut String) {
        if !self.notes.is_empty() {
            out.push('\n');
            for n in &self.notes {
                out.push_str(n);
                out.push('\n');
            }
        }
    }
}

fn fixed(v: f64, places: usize) -> String {
    format!("{v:.places$}")
}

fn opt(v: Option<f64>, places: usize) -> String {
    v.map_or_else(|| MISSING.to_string(), |x| fixed(x, places))
}

fn pct(v: Option<f64>) -> String {
    opt(v.map(|x| x * 100.0), 1)
}

#[derive(Debug, Clone, PartialEq)]
pub struct SummaryOptions {
    /// k shown as the headline reliability column and used for the drop.
    pub reliability_k: usize,
    pub semantics: PassSemantics,
    /// Externally reported frontier to compare against, if any.
    pub reference_frontier: Option<Vec<String>>,
}

impl Default for SummaryOptions {
    fn default() -> Self {
        SummaryOptions {
            reliability_k: 8,
            semantics: PassSemantics::Window,
            reference_frontier: None,
        }
    }
}

/// The per-agent summary table.
///
/// Fixed columns: agent, efficacy %, mean cost, CNA, mean latency, PAS and
/// R@k %. Extra columns: CPS, SCR %, injection resistance %, the remaining
/// pass@k values, the consistency drop from efficacy to R@k, and the
/// composite. Frontier members get a `*` suffix when `pareto` is given.
pub fn render_summary_table(
    summaries: &[AgentSummary],
    pareto: Option<&ParetoResult>,
    options: &SummaryOptions,
    format: Format,
) -> String {
    let k = options.reliability_k;
    let other_ks: Vec<usize> = {
        let mut ks: Vec<usize> = summaries
            .iter()
            .flat_map(|s| s.pass_at.keys().copied())
            .filter(|&x| x != k)
            .collect();
        ks.sort_unstable();
        ks.dedup();
        ks
    };

    let mut columns = vec![
        Column::new("Agent", "agent"),
        Column::new("Eff.", "efficacy_pct"),
        Column::new("Cost", "cost_usd"),
        Column::new("CNA", "cna"),
        Column::new("Lat.", "latency_s"),
        Column::new("PAS", "pas"),
        Column::new(format!("R@{k}"), format!("pass@{k}_pct")),
        Column::new("CPS", "cps_usd"),
        Column::new("SCR", "scr_pct"),
        Column::new("Inj. Res.", "injection_resistance_pct"),
    ];
    for x in &other_ks {
        columns.push(Column::new(format!("R@{x}"), format!("pass@{x}_pct")));
    }
    columns.push(Column::new(format!("Drop@{k}"), format!("drop@{k}_pct")));
    columns.push(Column::new("CLEAR", "composite"));
    if format == Format::Csv {
        columns.push(Column::new("Frontier", "pareto_optimal"));
        columns.push(Column::new("Semantics", "passk_semantics"));
    }

    let rows = summaries
        .iter()
        .map(|s| {
            let on_frontier = pareto.is_some_and(|p| p.is_on_frontier(&s.agent_id));
            let name = if on_frontier && format != Format::Csv {
                format!("{}*", s.agent_id)
            } else {
                s.agent_id.clone()
            };
            let rk = s.pass_at.get(&k).copied();
            let drop = rk.and_then(|pk| reliability::consistency_drop(s.efficacy, pk).ok());
            let mut row = vec![
                name,
                pct(Some(s.efficacy)),
                fixed(s.mean_cost_usd, 2),
                opt(s.cna, 1),
                fixed(s.mean_latency_s, 1),
                opt(s.pas, 2),
                pct(rk),
                opt(s.cps_usd, 2),
                pct(Some(s.scr)),
                pct(s.injection_resistance),
            ];
            for x in &other_ks {
                row.push(pct(s.pass_at.get(x).copied()));
            }
            row.push(pct(drop));
            row.push(opt(s.composite, 3));
            if format == Format::Csv {
                row.push(match pareto {
                    Some(_) => on_frontier.to_string(),
                    None => String::new(),
                });
                row.push(options.semantics.to_string());
            }
            row
        })
        .collect();

    let mut notes = vec![format!(
        "R@k columns use pass@k semantics `{}`.",
        options.semantics
    )];
    if let Some(p) = pareto {
        let dims: Vec<String> = p.dimensions.iter().map(ToString::to_string).collect();
        notes.push(format!("* Pareto-optimal over {}.", dims.join(", ")));
        if let Some(reference) = &options.reference_frontier {
            if let Some(d) = p.divergence(reference) {
                let list = |v: &[String]| {
                    if v.is_empty() {
                        "none".to_string()
                    } else {
                        v.join(", ")
                    }
                };
                notes.push(format!(
                    "Computed frontier differs from the reference frontier ({}): only computed: {}; only reference: {}.",
                    d.reference.join(", "),
                    list(&d.only_computed),
                    list(&d.only_reference)
                ));
            }
        }
    }

    Table {
        columns,
        rows,
        notes,
    }
    .render(format)
}

fn parse_cell(cell: &str, row: usize, key: &str) -> std::result::Result<Option<f64>, String> {
    let cell = cell.trim();
    if cell.is_empty() || cell == MISSING {
        return Ok(None);
    }
    cell.parse::<f64>()
        .map(Some)
        .map_err(|_| format!("row {row}: column `{key}`: `{cell}` is not a number"))
}

/// Read a summary CSV written by [`render_summary_table`] with [`Format::Csv`].
///
/// Values come back at the rendered precision.
pub fn parse_summary_csv(text: &str) -> std::result::Result<Vec<AgentSummary>, String> {
    let mut reader = csv::ReaderBuilder::new().from_reader(text.as_bytes());
    let headers = reader.headers().map_err(|e| e.to_string())?.clone();
    let index: BTreeMap<&str, usize> = headers.iter().enumerate().map(|(i, h)| (h, i)).collect();
    for required in ["agent", "efficacy_pct", "cost_usd", "latency_s", "scr_pct"] {
        if !index.contains_key(required) {
            return Err(format!("missing column `{required}`"));
        }
    }
    let ks: Vec<(usize, usize)> = headers
        .iter()
        .enumerate()
        .filter_map(|(i, h)| {
            let k = h
                .strip_prefix("pass@")?
                .strip_suffix("_pct")?
                .parse()
                .ok()?;
            Some((k, i))
        })
        .collect();

    let mut out = Vec::new();
    for (n, rec) in reader.records().enumerate() {
        let row = n + 1;
        let rec = rec.map_err(|e| format!("row {row}: {e}"))?;
        let get = |key: &str| -> std::result::Result<Option<f64>, String> {
            match index.get(key) {
                Some(&i) => parse_cell(rec.get(i).unwrap_or(""), row, key),
                None => Ok(None),
            }
        };
        let need = |key: &str| -> std::result::Result<f64, String> {
            get(key)?.ok_or_else(|| format!("row {row}: column `{key}` is empty"))
        };
        let mut pass_at = BTreeMap::new();
        for &(k, i) in &ks {
            if let Some(v) = parse_cell(rec.get(i).unwrap_or(""), row, &headers[i])? {
                pass_at.insert(k, v / 100.0);
            }
        }
        out.push(AgentSummary {
            agent_id: rec.get(index["agent"]).unwrap_or("").to_string(),
            efficacy: need("efficacy_pct")? / 100.0,
            mean_cost_usd: need("cost_usd")?,
            cna: get("cna")?,
            cps_usd: get("cps_usd")?,
            mean_latency_s: need("latency_s")?,
            scr: need("scr_pct")? / 100.0,
            pas: get("pas")?,
            pass_at,
            injection_resistance: get("injection_resistance_pct")?.map(|v| v / 100.0),
            composite: get("composite")?,
        });
    }
    Ok(out)
}

/// Efficacy and PAS per domain, one row per domain plus an overall row.
pub fn render_domain_table(breakdown: &DomainBreakdown, format: Format) -> String {
    let mut columns = vec![Column::new("Domain", "domain")];
    for a in &breakdown.agents {
        columns.push(Column::new(
            format!("{} Eff.", a.agent_id),
            format!("{}:efficacy_pct", a.agent_id),
        ));
        columns.push(Column::new(
            format!("{} PAS", a.agent_id),
            format!("{}:pas", a.agent_id),
        ));
    }

    let mut rows = Vec::new();
    for d in breakdown.present_domains() {
        let mut row = vec![match format {
            Format::Csv => d.as_str().to_string(),
            _ => d.label().to_string(),
        }];
        for a in &breakdown.agents {
            match a.domains.get(&d) {
                Some(cell) => {
                    row.push(pct(Some(cell.efficacy)));
                    row.push(opt(cell.pas, 2));
                }
                None => {
                    row.push(MISSING.into());
                    row.push(MISSING.into());
                }
            }
        }
        rows.push(row);
    }
    let mut overall = vec![match format {
        Format::Csv => "overall".to_string(),
        _ => "Overall".to_string(),
    }];
    for a in &breakdown.agents {
        overall.push(pct(Some(a.overall.efficacy)));
        overall.push(opt(a.overall.pas, 2));
    }
    rows.push(overall);

    let mut notes = Vec::new();
    if !breakdown.omitted.is_empty() {
        let names: Vec<&str> = breakdown.omitted.iter().map(|d| d.label()).collect();
        notes.push(format!(
            "No tasks for {}; omitted. Overall is recomputed from the domains shown.",
            names.join(", ")
        ));
    }
    Table {
        columns,
        rows,
        notes,
    }
    .render(format)
}

fn thousands(tokens: f64) -> String {
    format!("{:.1}K", tokens / 1000.0)
}

/// Mean tokens, cost and phase latencies per agent over first-trial records.
pub fn render_cost_latency_table(
    records: &[RunRecord],
    pricing: &PricingTable,
    format: Format,
) -> Result<String> {
    let columns = vec![
        Column::new("Agent", "agent"),
        Column::new("Input Tokens", "input_tokens"),
        Column::new("Output Tokens", "output_tokens"),
        Column::new("Total Cost", "total_cost"),
        Column::new("Plan (s)", "plan_s"),
        Column::new("Exec (s)", "exec_s"),
        Column::new("Reflect (s)", "reflect_s"),
    ];
    let mut rows = Vec::new();
    for runs in metrics::group_by_agent(records) {
        let first: Vec<&RunRecord> = runs.first_trials().collect();
        if first.is_empty() {
            return Err(Error::NoData(runs.agent_id.clone()));
        }
        let n = first.len() as f64;
        let mean = |f: &dyn Fn(&RunRecord) -> f64| first.iter().map(|r| f(r)).sum::<f64>() / n;
        let mut cost = 0.0;
        for r in &first {
            cost += metrics::cost_of_run(r, pricing)?;
        }
        rows.push(vec![
            runs.agent_id.clone(),
            thousands(mean(&|r| r.input_tokens as f64)),
            thousands(mean(&|r| r.output_tokens as f64)),
            format!("${:.2}", cost / n),
            fixed(mean(&|r| r.latency_plan_s), 1),
            fixed(mean(&|r| r.latency_exec_s), 1),
            fixed(mean(&|r| r.latency_reflect_s), 1),
        ]);
    }
    Ok(Table {
        columns,
        rows,
        notes: Vec::new(),
    }
    .render(format))
}

fn with_ci(value: f64, ci: Option<&crate::stats::BootstrapInterval>) -> String {
    match ci {
        Some(c) => format!("{value:.2} ({:.2}, {:.2})", c.low, c.high),
        None => format!("{value:.2}"),
    }
}

/// Pearson and Spearman correlation per approach. Interval columns appear
/// only when a bootstrap was run.
pub fn render_correlation_table(results: &[ApproachCorrelation], format: Format) -> String {
    let bootstrapped = results.iter().any(|r| r.pearson_ci.is_some());
    let mut columns = vec![
        Column::new("Evaluation Approach", "approach"),
        Column::new("n", "agents"),
        Column::new("Pearson", "pearson"),
        Column::new("Spearman", "spearman"),
    ];
    if bootstrapped && format == Format::Csv {
        for key in [
            "pearson_ci_low",
            "pearson_ci_high",
            "spearman_ci_low",
            "spearman_ci_high",
        ] {
            columns.push(Column::new(key, key));
        }
    }
    let rows = results
        .iter()
        .map(|r| {
            let mut row = vec![r.approach.label().to_string(), r.agents.to_string()];
            if format == Format::Csv {
                row.push(fixed(r.pearson, 2));
                row.push(fixed(r.spearman, 2));
                if bootstrapped {
                    for ci in [r.pearson_ci, r.spearman_ci] {
                        row.push(opt(ci.map(|c| c.low), 2));
                        row.push(opt(ci.map(|c| c.high), 2));
                    }
                }
            } else {
                row.push(with_ci(r.pearson, r.pearson_ci.as_ref()));
                row.push(with_ci(r.spearman, r.spearman_ci.as_ref()));
            }
            row
        })
        .collect();
    let mut notes = Vec::new();
    if let Some(ci) = results.iter().find_map(|r| r.pearson_ci) {
        let redraws: usize = results
            .iter()
            .flat_map(|r| [r.pearson_ci, r.spearman_ci])
            .flatten()
            .map(|c| c.redraws)
            .sum();
        notes.push(format!(
            "Parentheses: 95% percentile bootstrap interval, {} resamples ({redraws} degenerate resamples redrawn).",
            ci.resamples
        ));
    }
    Table {
        columns,
        rows,
        notes,
    }
    .render(format)
}

/// Frontier membership and dominators per agent.
pub fn render_pareto(result: &ParetoResult, format: Format) -> String {
    let columns = vec![
        Column::new("Agent", "agent"),
        Column::new("Frontier", "pareto_optimal"),
        Column::new("Dominated by", "dominated_by"),
    ];
    let rows = result
        .agents
        .iter()
        .map(|a| {
            vec![
                a.agent_id.clone(),
                if a.on_frontier { "yes" } else { "no" }.to_string(),
                if a.dominated_by.is_empty() {
                    String::new()
                } else {
                    a.dominated_by
                        .join(if format == Format::Csv { ";" } else { ", " })
                },
            ]
        })
        .collect();
    let dims: Vec<String> = result.dimensions.iter().map(ToString::to_string).collect();
    let notes = vec![format!("Dimensions: {}.", dims.join(", "))];
    Table {
        columns,
        rows,
        notes,
    }
    .render(format)
}

/// Full Markdown report for one evaluation.
pub fn render_report(
    eval: &crate::pipeline::Evaluation,
    options: &SummaryOptions,
    pricing: &PricingTable,
    records: &[RunRecord],
    correlation: Option<&[ApproachCorrelation]>,
) -> Result<String> {
    let mut out = String::from("# Agent evaluation report\n\n");
    let ks: Vec<String> = eval.config.ks.iter().map(ToString::to_string).collect();
    out.push_str(&format!(
        "- Agents: {}\n- Weights: {}\n- pass@k semantics: {}\n- k: {}\n",
        eval.summaries.len(),
        eval.config.weights_name,
        eval.config.semantics,
        if ks.is_empty() {
            "none".to_string()
        } else {
            ks.join(", ")
        },
    ));
    match &eval.reliability_tasks {
        Some(t) => out.push_str(&format!("- Reliability tasks: {}\n", t.len())),
        None => out.push_str("- Reliability tasks: all tasks per agent\n"),
    }

    out.push_str("\n## Summary\n\n");
    out.push_str(&render_summary_table(
        &eval.summaries,
        eval.pareto.as_ref(),
        options,
        Format::Markdown,
    ));

    if let Some(p) = &eval.pareto {
        out.push_str("\n## Pareto frontier\n\n");
        out.push_str(&render_pareto(p, Format::Markdown));
    }

    out.push_str("\n## Domains\n\n");
    out.push_str(&render_domain_table(&eval.breakdown, Format::Markdown));

    out.push_str("\n## Cost and latency\n\n");
    out.push_str(&render_cost_latency_table(
        records,
        pricing,
        Format::Markdown,
    )?);

    if let Some(c) = correlation {
        out.push_str("\n## Correlation with expert ratings\n\n");
        out.push_str(&render_correlation_table(c, Format::Markdown));
    }

    if !eval.notes.is_empty() {
        out.push_str("\n## Notes\n\n");
        for n in &eval.notes {
            out.push_str(&format!("- {n}\n"));
        }
    }
    Ok(out)
}
