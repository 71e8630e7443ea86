//! Dataset -> per-agent summaries, composite scores, frontier and domain
//! breakdown. This is what `evaluate` runs.

use std::collections::{BTreeMap, BTreeSet};

use crate::analysis::{self, Dimension, DomainBreakdown, ParetoResult};
use crate::error::{Error, Result};
use crate::ingestion::Dataset;
use crate::metrics::{self, AgentRuns};
use crate::model::{AgentSummary, RunRecord, WeightProfile};
use crate::reliability::{self, PassSemantics, TrialMatrix};

pub const DEFAULT_KS: [usize; 4] = [1, 3, 5, 8];

#[derive(Debug, Clone, PartialEq)]
pub struct EvalConfig {
    pub weights_name: String,
    pub weights: WeightProfile,
    pub semantics: PassSemantics,
    /// pass@k values to compute. The largest one feeds the composite's
    /// reliability term and the default frontier.
    pub ks: Vec<usize>,
    pub dimensions: Option<Vec<Dimension>>,
}

impl Default for EvalConfig {
    fn default() -> Self {
        EvalConfig {
            weights_name: "equal".into(),
            weights: WeightProfile::equal(),
            semantics: PassSemantics::Window,
            ks: DEFAULT_KS.to_vec(),
            dimensions: None,
        }
    }
}

impl EvalConfig {
    pub fn reliability_k(&self) -> Option<usize> {
        self.ks.iter().copied().max()
    }

    /// Frontier dimensions: explicit ones, else cost/efficacy/latency/PAS
    /// plus pass@k at the reliability k (omitted when no k is requested).
    pub fn pareto_dimensions(&self) -> Vec<Dimension> {
        if let Some(d) = &self.dimensions {
            return d.clone();
        }
        let mut dims = vec![
            Dimension::Cost,
            Dimension::Efficacy,
            Dimension::Latency,
            Dimension::Pas,
        ];
        if let Some(k) = self.reliability_k() {
            dims.push(Dimension::Reliability(k));
        }
        dims
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Evaluation {
    pub config: EvalConfig,
    pub summaries: Vec<AgentSummary>,
    pub pareto: Option<ParetoResult>,
    pub breakdown: DomainBreakdown,
    /// Task ids used for pass@k, or `None` when every agent's own tasks were used.
    pub reliability_tasks: Option<Vec<String>>,
    /// Non-fatal issues, e.g. a composite that could not be computed.
    pub notes: Vec<String>,
}

/// Tasks for pass@k: the explicit list if given; otherwise every suite task
/// that some agent ran more than once; `None` if nothing was repeated.
pub fn reliability_subset(dataset: &Dataset) -> Option<Vec<String>> {
    if !dataset.reliability_tasks.is_empty() {
        return Some(dataset.reliability_tasks.clone());
    }
    let repeated: BTreeSet<&str> = dataset
        .records
        .iter()
        .filter(|r| r.trial_index > 0)
        .map(|r| r.task_id.as_str())
        .collect();
    if repeated.is_empty() {
        return None;
    }
    Some(
        dataset
            .suite
            .iter()
            .filter(|t| repeated.contains(t.task_id.as_str()))
            .map(|t| t.task_id.clone())
            .collect(),
    )
}

/// pass@k for each requested k.
pub fn pass_at_ks(
    runs: &AgentRuns<'_>,
    subset: Option<&[String]>,
    ks: &[usize],
    semantics: PassSemantics,
) -> Result<BTreeMap<usize, f64>> {
    if ks.is_empty() {
        return Ok(BTreeMap::new());
    }
    let matrix = TrialMatrix::from_runs(runs, subset)?;
    ks.iter()
        .map(|&k| Ok((k, reliability::pass_at_k(&matrix, k, semantics)?)))
        .collect()
}

/// Summaries for every agent in `records`, in first-appearance order.
/// Composite scores are left empty.
pub fn summarize(
    records: &[RunRecord],
    dataset: &Dataset,
    subset: Option<&[String]>,
    ks: &[usize],
    semantics: PassSemantics,
) -> Result<Vec<AgentSummary>> {
    let slas = metrics::sla_index(&dataset.suite);
    metrics::group_by_agent(records)
        .iter()
        .map(|runs| {
            let d = metrics::score_agent_indexed(runs, &slas, &dataset.pricing)?;
            Ok(AgentSummary {
                agent_id: d.agent_id,
                efficacy: d.efficacy,
                mean_cost_usd: d.mean_cost_usd,
                cna: d.cna,
                cps_usd: d.cps_usd,
                mean_latency_s: d.mean_latency_s,
                scr: d.scr,
                pas: d.pas,
                pass_at: pass_at_ks(runs, subset, ks, semantics)?,
                injection_resistance: d.injection_resistance,
                composite: None,
            })
        })
        .collect()
}

/// Validate, then compute everything.
pub fn evaluate(dataset: &Dataset, config: &EvalConfig) -> Result<Evaluation> {
    let report = dataset.validate();
    if !report.is_clean() {
        return Err(Error::Validation(report.len()));
    }
    config.weights.validate(&config.weights_name)?;
    if config.ks.contains(&0) {
        return Err(Error::ZeroK);
    }
    let mut ks = config.ks.clone();
    ks.sort_unstable();
    ks.dedup();

    let subset = reliability_subset(dataset);
    let mut summaries = summarize(
        &dataset.records,
        dataset,
        subset.as_deref(),
        &ks,
        config.semantics,
    )?;

    let mut notes = Vec::new();
    if let Some(k) = config.reliability_k() {
        match analysis::score_cohort(&mut summaries, &config.weights, k) {
            Ok(()) => {}
            Err(e @ (Error::MissingValue { .. } | Error::EmptyCohort)) => {
                notes.push(format!("composite not computed: {e}"));
            }
            Err(e) => return Err(e),
        }
    } else {
        notes.push("composite not computed: no pass@k requested".into());
    }

    let pareto = if summaries.is_empty() {
        None
    } else {
        match analysis::pareto_frontier(&summaries, &config.pareto_dimensions()) {
            Ok(p) => Some(p),
            Err(e @ Error::MissingValue { .. }) => {
                notes.push(format!("frontier not computed: {e}"));
                None
            }
            Err(e) => return Err(e),
        }
    };

    let breakdown = analysis::domain_breakdown(&dataset.records, &dataset.suite)?;
    for d in &breakdown.omitted {
        notes.push(format!(
            "domain `{d}` has no tasks; omitted from the breakdown"
        ));
    }

    Ok(Evaluation {
        config: EvalConfig {
            ks,
            ..config.clone()
        },
        summaries,
        pareto,
        breakdown,
        reliability_tasks: subset,
        notes,
    })
}
