//! Command-line front end. Exit codes: 0 success, 1 validation or domain
//! error (including bad flags), 2 I/O failure.

use std::fs;
use std::io::{IsTerminal, Write};
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};

use crate::analysis::{self, Dimension};
use crate::error::{Error, Result};
use crate::ingestion::{self, Dataset, RunLog};
use crate::model::{PricingTable, ValidationReport, WeightProfile, WeightSet};
use crate::pipeline::{self, EvalConfig};
use crate::reliability::PassSemantics;
use crate::report::{self, Format, SummaryOptions};
use crate::simgen;
use crate::stats::{self, Approach, BootstrapConfig};

#[derive(Debug, Parser)]
#[command(
    name = "clear-eval",
    version,
    about = "Multi-dimensional evaluation of agent run logs"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Check run logs against a task suite.
    Validate(ValidateArgs),
    /// Compute every metric and write report.md, summary.csv, domains.csv,
    /// cost_latency.csv (and correlation.csv with --ratings).
    Evaluate(EvaluateArgs),
    /// Pareto frontier over selected dimensions.
    Pareto(ParetoArgs),
    /// Correlate evaluation approaches with mean expert ratings.
    ///
    /// Approaches: `efficacy` (raw efficacy), `efficacy_cost` (equal-weighted
    /// mean of min-max normalized efficacy and normalized cost), `clear`
    /// (the full weighted composite).
    Correlate(CorrelateArgs),
    /// Generate a synthetic run log from agent profiles.
    Simulate(SimulateArgs),
}

#[derive(Debug, Args)]
pub struct InputArgs {
    /// Run log(s), one JSON object per line.
    #[arg(long, required = true, num_args = 1..)]
    pub runs: Vec<PathBuf>,
    /// Task suite manifest (TOML).
    #[arg(long)]
    pub suite: PathBuf,
}

#[derive(Debug, Args)]
pub struct ValidateArgs {
    #[command(flatten)]
    pub input: InputArgs,
}

#[derive(Debug, Args)]
pub struct ScoringArgs {
    /// Pricing table (TOML). Needed only for records without cost_usd.
    #[arg(long)]
    pub pricing: Option<PathBuf>,
    /// Weight profile name.
    #[arg(long, default_value = "equal")]
    pub weights: String,
    /// Weight profiles (TOML); built-in presets are used otherwise.
    #[arg(long)]
    pub weights_file: Option<PathBuf>,
    /// Task ids used for pass@k, one per line.
    #[arg(long)]
    pub reliability_tasks: Option<PathBuf>,
    /// pass@k semantics: window, prefix or combinatorial.
    #[arg(long, default_value = "window")]
    pub passk_semantics: String,
}

#[derive(Debug, Args)]
pub struct EvaluateArgs {
    #[command(flatten)]
    pub input: InputArgs,
    #[command(flatten)]
    pub scoring: ScoringArgs,
    /// Comma-separated pass@k values; the largest is the composite's k.
    #[arg(long, default_value = "1,3,5,8")]
    pub k: String,
    /// Output directory.
    #[arg(long, default_value = "clear-report")]
    pub out: PathBuf,
    /// Expert ratings CSV; also writes correlation.csv.
    #[arg(long)]
    pub ratings: Option<PathBuf>,
    /// Comma-separated reference frontier to compare against.
    #[arg(long)]
    pub reference_frontier: Option<String>,
    /// Format of the table printed to stdout: text, md or csv.
    #[arg(long, default_value = "text")]
    pub format: String,
}

#[derive(Debug, Args)]
pub struct ParetoArgs {
    /// Run log(s); requires --suite.
    #[arg(long, num_args = 1.., conflicts_with = "summary", requires = "suite")]
    pub runs: Vec<PathBuf>,
    /// Task suite manifest (TOML).
    #[arg(long)]
    pub suite: Option<PathBuf>,
    /// summary.csv from `evaluate`.
    #[arg(long, required_unless_present = "runs")]
    pub summary: Option<PathBuf>,
    /// Pricing table (TOML). Needed only for records without cost_usd.
    #[arg(long)]
    pub pricing: Option<PathBuf>,
    /// Task ids used for pass@k, one per line.
    #[arg(long)]
    pub reliability_tasks: Option<PathBuf>,
    /// pass@k semantics: window, prefix or combinatorial.
    #[arg(long, default_value = "window")]
    pub passk_semantics: String,
    /// Comma-separated dimensions: cost, efficacy, latency, pas, pass@K,
    /// cna, scr, injection.
    #[arg(long, default_value = "cost,efficacy,latency,pas,pass@8")]
    pub dims: String,
    /// Comma-separated reference frontier to compare against.
    #[arg(long)]
    pub reference_frontier: Option<String>,
    /// Output format: text, md or csv.
    #[arg(long, default_value = "text")]
    pub format: String,
}

#[derive(Debug, Args)]
pub struct CorrelateArgs {
    /// summary.csv from `evaluate`.
    #[arg(long)]
    pub summary: PathBuf,
    /// Expert ratings CSV: rater_id,agent_id,task_id,score.
    #[arg(long)]
    pub ratings: PathBuf,
    /// Comma-separated approaches: efficacy, efficacy_cost, clear.
    #[arg(long, default_value = "efficacy,efficacy_cost,clear")]
    pub approaches: String,
    /// Bootstrap resamples for 95% intervals (at least 1000).
    #[arg(long)]
    pub bootstrap: Option<usize>,
    /// Bootstrap seed.
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Weight profile name used for the `clear` approach.
    #[arg(long, default_value = "equal")]
    pub weights: String,
    /// Weight profiles (TOML); built-in presets are used otherwise.
    #[arg(long)]
    pub weights_file: Option<PathBuf>,
    /// Output directory for correlation.csv; defaults to the summary's directory.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Output format: text, md or csv.
    #[arg(long, default_value = "text")]
    pub format: String,
}

#[derive(Debug, Args)]
pub struct SimulateArgs {
    /// Agent profiles (TOML, `[[agents]]` tables).
    #[arg(long)]
    pub profiles: PathBuf,
    /// Task suite manifest (TOML).
    #[arg(long)]
    pub suite: PathBuf,
    /// Trials per task.
    #[arg(long, default_value_t = 1)]
    pub trials: u32,
    /// Generator seed; equal seeds give byte-identical logs.
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Output run log.
    #[arg(long)]
    pub out: PathBuf,
}

/// Terminal styling; off when CLEAR_NO_COLOR is set or stdout is not a tty.
#[derive(Debug, Clone, Copy)]
pub struct Style {
    pub enabled: bool,
}

impl Style {
    pub fn detect() -> Self {
        Style {
            enabled: std::env::var_os("CLEAR_NO_COLOR").is_none()
                && std::io::stdout().is_terminal(),
        }
    }

    fn heading(self, text: &str) -> String {
        if self.enabled {
            format!("\x1b[1m{text}\x1b[0m\n")
        } else {
            format!("{text}\n")
        }
    }
}

/// Parse `args` (including the program name) and run. Never panics on bad input.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write, style: Style) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let text = e.render().to_string();
            let _ = if code == 0 {
                out.write_all(text.as_bytes())
            } else {
                err.write_all(text.as_bytes())
            };
            return code;
        }
    };
    match dispatch(cli.command, out, err, style) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            if e.is_io() {
                2
            } else {
                1
            }
        }
    }
}

fn dispatch(cmd: Command, out: &mut dyn Write, err: &mut dyn Write, style: Style) -> Result<i32> {
    match cmd {
        Command::Validate(a) => cmd_validate(&a, out, err),
        Command::Evaluate(a) => cmd_evaluate(&a, out, err, style),
        Command::Pareto(a) => cmd_pareto(&a, out, err),
        Command::Correlate(a) => cmd_correlate(&a, out, style),
        Command::Simulate(a) => cmd_simulate(&a, out),
    }
}

fn stdout_io(e: std::io::Error) -> Error {
    Error::io("<stdout>", e)
}

fn parse_flag<T: std::str::FromStr>(flag: &str, value: &str) -> Result<T>
where
    T::Err: std::fmt::Display,
{
    value
        .parse()
        .map_err(|e| Error::parse(format!("--{flag}"), e))
}

fn parse_ks(list: &str) -> Result<Vec<usize>> {
    list.split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(|s| parse_flag::<usize>("k", s))
        .collect()
}

fn parse_names(list: &Option<String>) -> Option<Vec<String>> {
    list.as_ref().map(|l| {
        l.split(',')
            .map(|s| s.trim().to_string())
            .filter(|s| !s.is_empty())
            .collect()
    })
}

fn report_findings(log: &RunLog, report: &ValidationReport, w: &mut dyn Write) -> Result<usize> {
    for e in &log.errors {
        writeln!(w, "line {}: {}", e.line, e.message).map_err(stdout_io)?;
    }
    for v in &report.violations {
        writeln!(w, "{v}").map_err(stdout_io)?;
    }
    Ok(log.errors.len() + report.len())
}

fn load_weights(name: &str, file: Option<&Path>) -> Result<WeightProfile> {
    let set = match file {
        Some(p) => ingestion::load_weights(p)?,
        None => WeightSet::presets(),
    };
    let w = *set.get(name)?;
    w.validate(name)?;
    Ok(w)
}

/// Load and validate a dataset; on findings, print them and return `None`.
fn load_dataset(
    input: &InputArgs,
    pricing: Option<&Path>,
    reliability_tasks: Option<&Path>,
    err: &mut dyn Write,
) -> Result<Option<Dataset>> {
    let log = ingestion::load_runs_many(&input.runs)?;
    for w in &log.warnings {
        writeln!(err, "warning: {w}").map_err(stdout_io)?;
    }
    let (suite, profiles) = ingestion::load_suite(&input.suite)?;
    let pricing = match pricing {
        Some(p) => ingestion::load_pricing(p)?,
        None => PricingTable::default(),
    };
    let reliability_tasks = match reliability_tasks {
        Some(p) => ingestion::load_task_list(p)?,
        None => Vec::new(),
    };
    let dataset = Dataset {
        records: log.records.clone(),
        suite,
        profiles,
        pricing,
        weights: WeightSet::presets(),
        reliability_tasks,
    };
    let findings = report_findings(&log, &dataset.validate(), err)?;
    if findings > 0 {
        writeln!(err, "{findings} violations").map_err(stdout_io)?;
        return Ok(None);
    }
    Ok(Some(dataset))
}

fn cmd_validate(a: &ValidateArgs, out: &mut dyn Write, _err: &mut dyn Write) -> Result<i32> {
    let log = ingestion::load_runs_many(&a.input.runs)?;
    let (suite, _) = ingestion::load_suite(&a.input.suite)?;
    for w in &log.warnings {
        writeln!(out, "warning: {w}").map_err(stdout_io)?;
    }
    let report = crate::model::validate_dataset(&log.records, &suite);
    let findings = report_findings(&log, &report, out)?;
    writeln!(out, "{findings} violations").map_err(stdout_io)?;
    Ok(if findings == 0 { 0 } else { 1 })
}

fn write_file(dir: &Path, name: &str, contents: &str) -> Result<()> {
    let path = dir.join(name);
    fs::write(&path, contents).map_err(|e| Error::io(&path, e))
}

fn cmd_evaluate(
    a: &EvaluateArgs,
    out: &mut dyn Write,
    err: &mut dyn Write,
    style: Style,
) -> Result<i32> {
    let format: Format = parse_flag("format", &a.format)?;
    let semantics: PassSemantics = parse_flag("passk-semantics", &a.scoring.passk_semantics)?;
    let ks = parse_ks(&a.k)?;
    let weights = load_weights(&a.scoring.weights, a.scoring.weights_file.as_deref())?;
    let Some(dataset) = load_dataset(
        &a.input,
        a.scoring.pricing.as_deref(),
        a.scoring.reliability_tasks.as_deref(),
        err,
    )?
    else {
        return Ok(1);
    };
    let ratings = a
        .ratings
        .as_ref()
        .map(ingestion::load_ratings)
        .transpose()?;

    let config = EvalConfig {
        weights_name: a.scoring.weights.clone(),
        weights,
        semantics,
        ks,
        dimensions: None,
    };
    let eval = pipeline::evaluate(&dataset, &config)?;
    let options = SummaryOptions {
        reliability_k: eval.config.reliability_k().unwrap_or(8),
        semantics,
        reference_frontier: parse_names(&a.reference_frontier),
    };
    let correlation = match &ratings {
        Some(r) => Some(stats::correlate_approaches(
            &eval.summaries,
            r,
            &Approach::ALL,
            &config.weights,
            options.reliability_k,
            None,
        )?),
        None => None,
    };

    fs::create_dir_all(&a.out).map_err(|e| Error::io(&a.out, e))?;
    let report_md = report::render_report(
        &eval,
        &options,
        &dataset.pricing,
        &dataset.records,
        correlation.as_deref(),
    )?;
    write_file(&a.out, "report.md", &report_md)?;
    write_file(
        &a.out,
        "summary.csv",
        &report::render_summary_table(&eval.summaries, eval.pareto.as_ref(), &options, Format::Csv),
    )?;
    write_file(
        &a.out,
        "domains.csv",
        &report::render_domain_table(&eval.breakdown, Format::Csv),
    )?;
    write_file(
        &a.out,
        "cost_latency.csv",
        &report::render_cost_latency_table(&dataset.records, &dataset.pricing, Format::Csv)?,
    )?;
    if let Some(c) = &correlation {
        write_file(
            &a.out,
            "correlation.csv",
            &report::render_correlation_table(c, Format::Csv),
        )?;
    }

    let mut text = style.heading("Summary");
    text.push_str(&report::render_summary_table(
        &eval.summaries,
        eval.pareto.as_ref(),
        &options,
        format,
    ));
    for n in &eval.notes {
        text.push_str(&format!("note: {n}\n"));
    }
    text.push_str(&format!("wrote {}\n", a.out.display()));
    out.write_all(text.as_bytes()).map_err(stdout_io)?;
    Ok(0)
}

fn cmd_pareto(a: &ParetoArgs, out: &mut dyn Write, err: &mut dyn Write) -> Result<i32> {
    let format: Format = parse_flag("format", &a.format)?;
    let dims = Dimension::parse_list(&a.dims)?;
    let summaries = match &a.summary {
        Some(path) => ingestion::load_summary(path)?,
        None => {
            let semantics: PassSemantics = parse_flag("passk-semantics", &a.passk_semantics)?;
            let input = InputArgs {
                runs: a.runs.clone(),
                suite: a.suite.clone().expect("clap enforces --suite with --runs"),
            };
            let Some(dataset) = load_dataset(
                &input,
                a.pricing.as_deref(),
                a.reliability_tasks.as_deref(),
                err,
            )?
            else {
                return Ok(1);
            };
            let ks: Vec<usize> = dims
                .iter()
                .filter_map(|d| match d {
                    Dimension::Reliability(k) => Some(*k),
                    _ => None,
                })
                .collect();
            let config = EvalConfig {
                semantics,
                ks,
                dimensions: Some(dims.clone()),
                ..EvalConfig::default()
            };
            pipeline::evaluate(&dataset, &config)?.summaries
        }
    };
    let result = analysis::pareto_frontier(&summaries, &dims)?;
    let mut text = report::render_pareto(&result, format);
    if format != Format::Csv {
        text.push_str(&format!("Frontier: {}\n", result.frontier().join(", ")));
        if let Some(reference) = parse_names(&a.reference_frontier) {
            if let Some(d) = result.divergence(&reference) {
                text.push_str(&format!(
                    "Differs from reference ({}): only computed [{}], only reference [{}]\n",
                    d.reference.join(", "),
                    d.only_computed.join(", "),
                    d.only_reference.join(", ")
                ));
            }
        }
    }
    out.write_all(text.as_bytes()).map_err(stdout_io)?;
    Ok(0)
}

fn cmd_correlate(a: &CorrelateArgs, out: &mut dyn Write, style: Style) -> Result<i32> {
    let format: Format = parse_flag("format", &a.format)?;
    let approaches =
        Approach::parse_list(&a.approaches).map_err(|e| Error::parse("--approaches", e))?;
    let weights = load_weights(&a.weights, a.weights_file.as_deref())?;
    let summaries = ingestion::load_summary(&a.summary)?;
    let ratings = ingestion::load_ratings(&a.ratings)?;
    let k = summaries
        .iter()
        .flat_map(|s| s.pass_at.keys().copied())
        .max()
        .unwrap_or(8);
    let bootstrap = a.bootstrap.map(|resamples| BootstrapConfig {
        resamples,
        seed: a.seed,
    });
    let results =
        stats::correlate_approaches(&summaries, &ratings, &approaches, &weights, k, bootstrap)?;

    let dir = match &a.out {
        Some(d) => d.clone(),
        None => a
            .summary
            .parent()
            .map(Path::to_path_buf)
            .unwrap_or_default(),
    };
    if !dir.as_os_str().is_empty() {
        fs::create_dir_all(&dir).map_err(|e| Error::io(&dir, e))?;
    }
    write_file(
        &dir,
        "correlation.csv",
        &report::render_correlation_table(&results, Format::Csv),
    )?;

    let mut text = style.heading("Correlation with expert ratings");
    text.push_str(&report::render_correlation_table(&results, format));
    out.write_all(text.as_bytes()).map_err(stdout_io)?;
    Ok(0)
}

fn cmd_simulate(a: &SimulateArgs, out: &mut dyn Write) -> Result<i32> {
    let text = fs::read_to_string(&a.profiles).map_err(|e| Error::io(&a.profiles, e))?;
    let profiles = simgen::parse_profiles(&text)?;
    let (suite, _) = ingestion::load_suite(&a.suite)?;
    let records = simgen::generate(&profiles, &suite, a.trials, a.seed)?;
    ingestion::save_runs(&a.out, &records)?;

    let mut table = String::from("agent\tsuccess_rate\tautocorrelation\tlatency_s\tcost_usd\tviolation_rate\tattack_success_rate\n");
    for p in &profiles {
        let cost = p
            .cost_usd_mean
            .map_or_else(|| report::MISSING.to_string(), |c| format!("{c:.2}"));
        table.push_str(&format!(
            "{}\t{:.3}\t{:.3}\t{:.2}\t{}\t{:.3}\t{:.3}\n",
            p.agent_id,
            p.success_rate,
            p.success_autocorrelation,
            p.latency_plan_s + p.latency_exec_s + p.latency_reflect_s,
            cost,
            p.violation_rate,
            p.attack_success_rate,
        ));
    }
    table.push_str(&format!(
        "wrote {} records ({} agents x {} tasks x {} trials, seed {}) to {}\n",
        records.len(),
        profiles.len(),
        suite.len(),
        a.trials,
        a.seed,
        a.out.display()
    ));
    out.write_all(table.as_bytes()).map_err(stdout_io)?;
    Ok(0)
}

/// Entry point for the binary.
pub fn main() -> i32 {
    let stdout = std::io::stdout();
    let stderr = std::io::stderr();
    run(
        std::env::args_os(),
        &mut stdout.lock(),
        &mut stderr.lock(),
        Style::detect(),
    )
}
