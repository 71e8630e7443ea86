//! Domain types shared by ingestion, metrics, analysis and reporting.
//!
//! Every type here is a plain value: once built it is never mutated by the
//! rest of the crate, so summaries and records can be shared across threads
//! freely. [`validate_dataset`] is the single gate that checks the record
//! invariants before any metric is computed.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Relative tolerance between the summed latency phases and the total.
pub const PHASE_TOLERANCE: f64 = 0.05;

/// Tolerance on weight and token-share sums.
pub const SUM_TOLERANCE: f64 = 1e-9;

pub const MIN_STEPS: u32 = 5;
pub const MAX_STEPS: u32 = 15;

/// Outcome of one adversarial prompt-injection probe attached to a run.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SecurityProbe {
    pub attack_case_id: String,
    pub attack_succeeded: bool,
}

/// One agent execution of one task trial.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunRecord {
    pub run_id: String,
    pub agent_id: String,
    pub task_id: String,
    /// 0-based; orders repeated trials of the same task in time.
    pub trial_index: u32,
    pub success: bool,
    pub input_tokens: u64,
    pub output_tokens: u64,
    /// Overrides token-derived cost when present.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub cost_usd: Option<f64>,
    pub latency_plan_s: f64,
    pub latency_exec_s: f64,
    pub latency_reflect_s: f64,
    pub latency_total_s: f64,
    pub policy_critical_actions: u64,
    pub policy_violations: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub security_probe: Option<SecurityProbe>,
}

impl RunRecord {
    /// Field names accepted in a run log line.
    pub const FIELDS: &'static [&'static str] = &[
        "run_id",
        "agent_id",
        "task_id",
        "trial_index",
        "success",
        "input_tokens",
        "output_tokens",
        "cost_usd",
        "latency_plan_s",
        "latency_exec_s",
        "latency_reflect_s",
        "latency_total_s",
        "policy_critical_actions",
        "policy_violations",
        "security_probe",
    ];

    pub fn phase_sum(&self) -> f64 {
        self.latency_plan_s + self.latency_exec_s + self.latency_reflect_s
    }

    pub fn is_first_trial(&self) -> bool {
        self.trial_index == 0
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Domain {
    CustomerSupport,
    DataAnalysis,
    ProcessAutomation,
    SoftwareDevelopment,
    Compliance,
    MultiStakeholder,
}

impl Domain {
    pub const ALL: [Domain; 6] = [
        Domain::CustomerSupport,
        Domain::DataAnalysis,
        Domain::ProcessAutomation,
        Domain::SoftwareDevelopment,
        Domain::Compliance,
        Domain::MultiStakeholder,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            Domain::CustomerSupport => "customer_support",
            Domain::DataAnalysis => "data_analysis",
            Domain::ProcessAutomation => "process_automation",
            Domain::SoftwareDevelopment => "software_development",
            Domain::Compliance => "compliance",
            Domain::MultiStakeholder => "multi_stakeholder",
        }
    }

    /// Human-readable row label used in reports.
    pub fn label(self) -> &'static str {
        match self {
            Domain::CustomerSupport => "Customer Support",
            Domain::DataAnalysis => "Data Analysis",
            Domain::ProcessAutomation => "Process Automation",
            Domain::SoftwareDevelopment => "Software Dev.",
            Domain::Compliance => "Compliance",
            Domain::MultiStakeholder => "Multi-Stakeholder",
        }
    }
}

impl fmt::Display for Domain {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Domain {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        Domain::ALL
            .into_iter()
            .find(|d| d.as_str() == s)
            .ok_or_else(|| format!("unknown domain `{s}`"))
    }
}

/// A task in the suite with its SLA already resolved.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TaskSpec {
    pub task_id: String,
    pub domain: Domain,
    pub subtype: String,
    pub step_count: u32,
    pub sla_seconds: f64,
}

/// Per-domain SLA thresholds keyed by task subtype; `"*"` is the fallback.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DomainProfile {
    pub domain: Domain,
    pub sla_map: BTreeMap<String, f64>,
}

impl DomainProfile {
    pub const FALLBACK: &'static str = "*";

    pub fn new<I, S>(domain: Domain, entries: I) -> Self
    where
        I: IntoIterator<Item = (S, f64)>,
        S: Into<String>,
    {
        DomainProfile {
            domain,
            sla_map: entries.into_iter().map(|(k, v)| (k.into(), v)).collect(),
        }
    }

    pub fn resolve(&self, subtype: &str) -> Option<f64> {
        self.sla_map
            .get(subtype)
            .or_else(|| self.sla_map.get(Self::FALLBACK))
            .copied()
    }

    /// The six enterprise domains with their published SLA thresholds.
    pub fn enterprise_defaults() -> Vec<DomainProfile> {
        vec![
            DomainProfile::new(Domain::CustomerSupport, [("*", 3.0)]),
            DomainProfile::new(
                Domain::DataAnalysis,
                [("*", 15.0), ("query", 15.0), ("report", 45.0)],
            ),
            DomainProfile::new(Domain::ProcessAutomation, [("*", 10.0)]),
            DomainProfile::new(
                Domain::SoftwareDevelopment,
                [("*", 30.0), ("analysis", 30.0), ("generation", 60.0)],
            ),
            DomainProfile::new(Domain::Compliance, [("*", 20.0)]),
            DomainProfile::new(Domain::MultiStakeholder, [("*", 15.0)]),
        ]
    }
}

/// Resolve a task's SLA against the domain profiles.
pub fn resolve_sla(
    task_id: &str,
    domain: Domain,
    subtype: &str,
    profiles: &[DomainProfile],
) -> Result<f64> {
    let profile = profiles
        .iter()
        .find(|p| p.domain == domain)
        .ok_or_else(|| Error::MissingProfile(domain.to_string()))?;
    profile.resolve(subtype).ok_or_else(|| Error::MissingSla {
        task_id: task_id.to_string(),
        domain: domain.to_string(),
        subtype: subtype.to_string(),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ModelPrice {
    pub input_usd_per_1k: f64,
    pub output_usd_per_1k: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ModelShare {
    pub model: String,
    pub share: f64,
}

/// Which model(s) an agent's tokens are billed against.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum ModelAssignment {
    Single(String),
    Mixed(Vec<ModelShare>),
}

impl ModelAssignment {
    /// `(model, token_share)` pairs; a single model carries the full share.
    pub fn shares(&self) -> Vec<(&str, f64)> {
        match self {
            ModelAssignment::Single(m) => vec![(m.as_str(), 1.0)],
            ModelAssignment::Mixed(v) => v.iter().map(|s| (s.model.as_str(), s.share)).collect(),
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct PricingTable {
    #[serde(default)]
    pub models: BTreeMap<String, ModelPrice>,
    #[serde(default)]
    pub agent_model_map: BTreeMap<String, ModelAssignment>,
}

impl PricingTable {
    pub fn validate(&self) -> Result<()> {
        for (id, p) in &self.models {
            let ok = |v: f64| v.is_finite() && v >= 0.0;
            if !ok(p.input_usd_per_1k) || !ok(p.output_usd_per_1k) {
                return Err(Error::InvalidPricing(format!(
                    "model `{id}` has a negative or non-finite price"
                )));
            }
        }
        for (agent, assignment) in &self.agent_model_map {
            let shares = assignment.shares();
            if shares.is_empty() {
                return Err(Error::InvalidPricing(format!(
                    "agent `{agent}` maps to no model"
                )));
            }
            for (model, share) in &shares {
                if !self.models.contains_key(*model) {
                    return Err(Error::UnknownModel {
                        agent: agent.clone(),
                        model: model.to_string(),
                    });
                }
                if !(share.is_finite() && *share >= 0.0) {
                    return Err(Error::InvalidPricing(format!(
                        "agent `{agent}`: negative token share for `{model}`"
                    )));
                }
            }
            let total: f64 = shares.iter().map(|(_, s)| s).sum();
            if (total - 1.0).abs() > SUM_TOLERANCE {
                return Err(Error::InvalidPricing(format!(
                    "agent `{agent}`: token shares sum to {total}, expected 1"
                )));
            }
        }
        Ok(())
    }
}

/// Composite-score weights. Must sum to one.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct WeightProfile {
    #[serde(alias = "w_cost")]
    pub cost: f64,
    #[serde(alias = "w_latency")]
    pub latency: f64,
    #[serde(alias = "w_efficacy")]
    pub efficacy: f64,
    #[serde(alias = "w_assurance")]
    pub assurance: f64,
    #[serde(alias = "w_reliability")]
    pub reliability: f64,
}

impl WeightProfile {
    pub fn equal() -> Self {
        WeightProfile {
            cost: 0.2,
            latency: 0.2,
            efficacy: 0.2,
            assurance: 0.2,
            reliability: 0.2,
        }
    }

    pub fn financial_services() -> Self {
        WeightProfile {
            cost: 0.1,
            latency: 0.1,
            efficacy: 0.1,
            assurance: 0.3,
            reliability: 0.4,
        }
    }

    pub fn customer_facing() -> Self {
        WeightProfile {
            cost: 0.1625,
            latency: 0.35,
            efficacy: 0.1625,
            assurance: 0.1625,
            reliability: 0.1625,
        }
    }

    pub fn as_array(&self) -> [f64; 5] {
        [
            self.cost,
            self.latency,
            self.efficacy,
            self.assurance,
            self.reliability,
        ]
    }

    pub fn validate(&self, name: &str) -> Result<()> {
        let w = self.as_array();
        if w.iter().any(|v| !(0.0..=1.0).contains(v)) {
            return Err(Error::InvalidWeights {
                name: name.to_string(),
                reason: "every weight must lie in [0, 1]".into(),
            });
        }
        let total: f64 = w.iter().sum();
        if (total - 1.0).abs() > SUM_TOLERANCE {
            return Err(Error::InvalidWeights {
                name: name.to_string(),
                reason: format!("weights sum to {total}, expected 1"),
            });
        }
        Ok(())
    }
}

/// Named weight profiles.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WeightSet {
    pub profiles: BTreeMap<String, WeightProfile>,
}

impl WeightSet {
    pub fn presets() -> Self {
        let profiles = [
            ("equal", WeightProfile::equal()),
            ("financial_services", WeightProfile::financial_services()),
            ("customer_facing", WeightProfile::customer_facing()),
        ]
        .into_iter()
        .map(|(k, v)| (k.to_string(), v))
        .collect();
        WeightSet { profiles }
    }

    pub fn get(&self, name: &str) -> Result<&WeightProfile> {
        self.profiles
            .get(name)
            .ok_or_else(|| Error::UnknownWeightProfile(name.to_string()))
    }
}

impl Default for WeightSet {
    fn default() -> Self {
        Self::presets()
    }
}

/// Per-agent aggregates across all five dimensions; one leaderboard row.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AgentSummary {
    pub agent_id: String,
    pub efficacy: f64,
    pub mean_cost_usd: f64,
    /// `None` when the mean cost is zero.
    pub cna: Option<f64>,
    /// `None` when the agent has no successes.
    pub cps_usd: Option<f64>,
    pub mean_latency_s: f64,
    pub scr: f64,
    /// `None` when the agent logged no policy-critical actions.
    pub pas: Option<f64>,
    pub pass_at: BTreeMap<usize, f64>,
    /// `None` when no security probes were run.
    pub injection_resistance: Option<f64>,
    pub composite: Option<f64>,
}

/// One expert's 1-5 deployment-readiness rating of an agent on a task.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExpertRating {
    pub rater_id: String,
    pub agent_id: String,
    pub task_id: String,
    pub score: u8,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Rule {
    ViolationsExceedActions,
    LatencyPhaseMismatch,
    NegativeQuantity,
    NonFinite,
    DuplicateRunId,
    DuplicateTrial,
    UnknownTask,
    StepCountOutOfRange,
    NonPositiveSla,
    DuplicateTaskId,
}

impl Rule {
    pub fn as_str(self) -> &'static str {
        match self {
            Rule::ViolationsExceedActions => "violations_exceed_actions",
            Rule::LatencyPhaseMismatch => "latency_phase_mismatch",
            Rule::NegativeQuantity => "negative_quantity",
            Rule::NonFinite => "non_finite",
            Rule::DuplicateRunId => "duplicate_run_id",
            Rule::DuplicateTrial => "duplicate_trial",
            Rule::UnknownTask => "unknown_task",
            Rule::StepCountOutOfRange => "step_count_out_of_range",
            Rule::NonPositiveSla => "non_positive_sla",
            Rule::DuplicateTaskId => "duplicate_task_id",
        }
    }
}

impl fmt::Display for Rule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Violation {
    /// run_id for record findings, task_id for suite findings.
    pub subject: String,
    pub rule: Rule,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}", self.subject, self.rule)
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn is_clean(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn len(&self) -> usize {
        self.violations.len()
    }

    pub fn is_empty(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn rules(&self) -> Vec<Rule> {
        self.violations.iter().map(|v| v.rule).collect()
    }
}

/// Check every record and task invariant. Findings are returned sorted, so
/// the report does not depend on record order.
pub fn validate_dataset(records: &[RunRecord], suite: &[TaskSpec]) -> ValidationReport {
    let mut found = BTreeSet::new();
    let mut push = |subject: &str, rule| {
        found.insert(Violation {
            subject: subject.to_string(),
            rule,
        });
    };

    let mut task_ids: HashMap<&str, usize> = HashMap::new();
    for t in suite {
        *task_ids.entry(t.task_id.as_str()).or_default() += 1;
        if !(MIN_STEPS..=MAX_STEPS).contains(&t.step_count) {
            push(&t.task_id, Rule::StepCountOutOfRange);
        }
        if !(t.sla_seconds.is_finite() && t.sla_seconds > 0.0) {
            push(&t.task_id, Rule::NonPositiveSla);
        }
    }
    for (id, n) in &task_ids {
        if *n > 1 {
            push(id, Rule::DuplicateTaskId);
        }
    }

    let mut run_ids: HashMap<&str, usize> = HashMap::new();
    let mut trials: HashMap<(&str, &str, u32), usize> = HashMap::new();
    for r in records {
        *run_ids.entry(r.run_id.as_str()).or_default() += 1;
        *trials
            .entry((r.agent_id.as_str(), r.task_id.as_str(), r.trial_index))
            .or_default() += 1;

        if r.policy_violations > r.policy_critical_actions {
            push(&r.run_id, Rule::ViolationsExceedActions);
        }
        let floats = [
            r.latency_plan_s,
            r.latency_exec_s,
            r.latency_reflect_s,
            r.latency_total_s,
        ]
        .into_iter()
        .chain(r.cost_usd);
        let mut finite = true;
        for v in floats {
            if !v.is_finite() {
                finite = false;
                push(&r.run_id, Rule::NonFinite);
            } else if v < 0.0 {
                push(&r.run_id, Rule::NegativeQuantity);
            }
        }
        if finite && (r.phase_sum() - r.latency_total_s).abs() > PHASE_TOLERANCE * r.latency_total_s
        {
            push(&r.run_id, Rule::LatencyPhaseMismatch);
        }
        if !task_ids.contains_key(r.task_id.as_str()) {
            push(&r.run_id, Rule::UnknownTask);
        }
    }
    for r in records {
        if run_ids[r.run_id.as_str()] > 1 {
            push(&r.run_id, Rule::DuplicateRunId);
        }
        if trials[&(r.agent_id.as_str(), r.task_id.as_str(), r.trial_index)] > 1 {
            push(&r.run_id, Rule::DuplicateTrial);
        }
    }

    ValidationReport {
        violations: found.into_iter().collect(),
    }
}


#[cfg(test)]
mod tests {
    use super::testutil::*;
    use super::*;

    fn suite() -> Vec<TaskSpec> {
        vec![
            task("t1", Domain::CustomerSupport),
            task("t2", Domain::Compliance),
        ]
    }

    fn fixture() -> Vec<RunRecord> {
        vec![
            record("a", "t1", 0, true),
            record("a", "t2", 0, false),
            record("b", "t1", 0, true),
        ]
    }

    #[test]
    fn well_formed_fixture_is_clean() {
        assert!(validate_dataset(&fixture(), &suite()).is_clean());
    }

    #[test]
    fn violations_exceeding_actions() {
        let mut recs = fixture();
        recs[1].policy_violations = 5;
        recs[1].policy_critical_actions = 3;
        let report = validate_dataset(&recs, &suite());
        assert_eq!(report.rules(), vec![Rule::ViolationsExceedActions]);
        assert_eq!(report.violations[0].subject, "a:t2:0");
        assert_eq!(
            report.violations[0].rule.as_str(),
            "violations_exceed_actions"
        );
    }

    #[test]
    fn unknown_task() {
        let mut recs = fixture();
        recs.push(record("a", "t9", 0, true));
        let report = validate_dataset(&recs, &suite());
        assert_eq!(report.len(), 1);
        assert_eq!(report.violations[0].rule.as_str(), "unknown_task");
    }

    #[test]
    fn phase_mismatch_tolerance() {
        let mut recs = fixture();
        // 3.5 ± 5% => [3.325, 3.675]
        recs[0].latency_total_s = 3.6;
        assert!(validate_dataset(&recs, &suite()).is_clean());
        recs[0].latency_total_s = 4.0;
        let report = validate_dataset(&recs, &suite());
        assert_eq!(report.rules(), vec![Rule::LatencyPhaseMismatch]);
    }

    #[test]
    fn duplicates_reported_for_every_member() {
        let mut recs = fixture();
        let mut dup = recs[0].clone();
        dup.run_id = "other".into();
        recs.push(dup);
        let report = validate_dataset(&recs, &suite());
        assert_eq!(report.len(), 2);
        assert!(report.rules().iter().all(|r| *r == Rule::DuplicateTrial));
    }

    #[test]
    fn negative_and_nan_values() {
        let mut recs = fixture();
        recs[0].cost_usd = Some(-1.0);
        recs[1].latency_exec_s = f64::NAN;
        let report = validate_dataset(&recs, &suite());
        assert_eq!(
            report.rules(),
            vec![Rule::NegativeQuantity, Rule::NonFinite]
        );
    }

    #[test]
    fn suite_invariants() {
        let mut s = suite();
        s[0].step_count = 16;
        s[1].sla_seconds = 0.0;
        let report = validate_dataset(&[], &s);
        assert_eq!(
            report.rules(),
            vec![Rule::StepCountOutOfRange, Rule::NonPositiveSla]
        );
    }

    #[test]
    fn sla_profile_fallback() {
        let profiles = DomainProfile::enterprise_defaults();
        let sla = |d, s| resolve_sla("t", d, s, &profiles).unwrap();
        assert_eq!(sla(Domain::CustomerSupport, "*"), 3.0);
        assert_eq!(sla(Domain::CustomerSupport, "escalation"), 3.0);
        assert_eq!(sla(Domain::DataAnalysis, "report"), 45.0);
        assert_eq!(sla(Domain::SoftwareDevelopment, "generation"), 60.0);
        let bare = vec![DomainProfile::new(Domain::Compliance, [("audit", 20.0)])];
        assert!(matches!(
            resolve_sla("t", Domain::Compliance, "gdpr", &bare),
            Err(Error::MissingSla { .. })
        ));
        assert!(matches!(
            resolve_sla("t", Domain::DataAnalysis, "*", &bare),
            Err(Error::MissingProfile(_))
        ));
    }

    #[test]
    fn preset_weights_are_valid() {
        for (name, w) in &WeightSet::presets().profiles {
            w.validate(name).unwrap();
        }
        let bad = WeightProfile {
            cost: 0.5,
            ..WeightProfile::equal()
        };
        assert!(bad.validate("bad").is_err());
    }

    #[test]
    fn pricing_share_sum() {
        let mut p = PricingTable::default();
        p.models.insert(
            "m1".into(),
            ModelPrice {
                input_usd_per_1k: 0.01,
                output_usd_per_1k: 0.03,
            },
        );
        p.agent_model_map.insert(
            "a".into(),
            ModelAssignment::Mixed(vec![
                ModelShare {
                    model: "m1".into(),
                    share: 0.15,
                },
                ModelShare {
                    model: "m1".into(),
                    share: 0.8,
                },
            ]),
        );
        assert!(matches!(p.validate(), Err(Error::InvalidPricing(_))));
        p.agent_model_map
            .insert("a".into(), ModelAssignment::Single("m2".into()));
        assert!(matches!(p.validate(), Err(Error::UnknownModel { .. })));
    }
}
