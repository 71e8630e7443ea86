//! Seeded synthetic run logs with known ground truth, plus constructed
//! fixtures that reproduce published tables exactly.
//!
//! Draw order per record is fixed, so a seed fully determines the output:
//! success (two uniforms), input tokens (one normal), output tokens (one
//! normal), three phase latencies (one uniform each), one Bernoulli per
//! policy-critical action, then two uniforms for the security probe on
//! first trials.

mod fixtures;

pub use fixtures::{
    domain_fixture, headline_fixture, sla_fixture, DomainRow, HeadlineRow, DOMAIN_CELLS,
    DOMAIN_TASKS, HEADLINE, HEADLINE_PROBES, HEADLINE_TASKS, HEADLINE_TRIALS, PUBLISHED_FRONTIER,
};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{Domain, DomainProfile, RunRecord, SecurityProbe, TaskSpec};
use crate::rng::Stream;

fn default_jitter() -> f64 {
    0.1
}

fn default_actions() -> u64 {
    4
}

fn default_probe_rate() -> f64 {
    1.0
}

/// Generator parameters for one agent.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AgentProfileSpec {
    pub agent_id: String,
    pub success_rate: f64,
    /// Probability that trial `t > 0` repeats trial `t - 1`'s outcome.
    #[serde(default)]
    pub success_autocorrelation: f64,
    pub input_tokens_mean: f64,
    #[serde(default)]
    pub input_tokens_spread: f64,
    pub output_tokens_mean: f64,
    #[serde(default)]
    pub output_tokens_spread: f64,
    pub latency_plan_s: f64,
    pub latency_exec_s: f64,
    pub latency_reflect_s: f64,
    /// Each phase is drawn uniformly from `mean * (1 ± jitter)`.
    #[serde(default = "default_jitter")]
    pub latency_jitter: f64,
    #[serde(default = "default_actions")]
    pub critical_actions_per_run: u64,
    #[serde(default)]
    pub violation_rate: f64,
    #[serde(default)]
    pub attack_success_rate: f64,
    /// Share of first-trial runs that carry a security probe.
    #[serde(default = "default_probe_rate")]
    pub probe_rate: f64,
    /// Mean explicit cost. When absent, cost is left to the pricing table.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub cost_usd_mean: Option<f64>,
}

impl AgentProfileSpec {
    /// Deterministic profile: no spread, no jitter, no violations, no probes.
    pub fn fixed(agent_id: impl Into<String>, success_rate: f64) -> Self {
        AgentProfileSpec {
            agent_id: agent_id.into(),
            success_rate,
            success_autocorrelation: 0.0,
            input_tokens_mean: 1000.0,
            input_tokens_spread: 0.0,
            output_tokens_mean: 500.0,
            output_tokens_spread: 0.0,
            latency_plan_s: 1.0,
            latency_exec_s: 2.0,
            latency_reflect_s: 0.5,
            latency_jitter: 0.0,
            critical_actions_per_run: 4,
            violation_rate: 0.0,
            attack_success_rate: 0.0,
            probe_rate: 0.0,
            cost_usd_mean: Some(1.0),
        }
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |reason: String| {
            Err(Error::InvalidProfile {
                agent: self.agent_id.clone(),
                reason,
            })
        };
        let unit = [
            ("success_rate", self.success_rate),
            ("violation_rate", self.violation_rate),
            ("attack_success_rate", self.attack_success_rate),
            ("probe_rate", self.probe_rate),
            ("latency_jitter", self.latency_jitter),
        ];
        for (name, v) in unit {
            if !(0.0..=1.0).contains(&v) {
                return bad(format!("{name} = {v} is outside [0, 1]"));
            }
        }
        if !(0.0..1.0).contains(&self.success_autocorrelation) {
            return bad(format!(
                "success_autocorrelation = {} is outside [0, 1)",
                self.success_autocorrelation
            ));
        }
        let non_negative = [
            ("input_tokens_mean", self.input_tokens_mean),
            ("input_tokens_spread", self.input_tokens_spread),
            ("output_tokens_mean", self.output_tokens_mean),
            ("output_tokens_spread", self.output_tokens_spread),
            ("latency_plan_s", self.latency_plan_s),
            ("latency_exec_s", self.latency_exec_s),
            ("latency_reflect_s", self.latency_reflect_s),
            ("cost_usd_mean", self.cost_usd_mean.unwrap_or(0.0)),
        ];
        for (name, v) in non_negative {
            if !v.is_finite() || v < 0.0 {
                return bad(format!("{name} = {v} must be finite and >= 0"));
            }
        }
        if self.agent_id.is_empty() {
            return bad("agent_id is empty".into());
        }
        Ok(())
    }
}

/// `[[agents]]` tables in a profiles file.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProfileFile {
    pub agents: Vec<AgentProfileSpec>,
}

pub fn parse_profiles(text: &str) -> Result<Vec<AgentProfileSpec>> {
    let file: ProfileFile = toml::from_str(text).map_err(|e| Error::parse("profiles", e))?;
    Ok(file.agents)
}

fn tokens(s: &mut Stream, mean: f64, spread: f64) -> u64 {
    (mean + spread * s.normal()).round().max(0.0) as u64
}

fn phase(s: &mut Stream, mean: f64, jitter: f64) -> f64 {
    mean * (1.0 + jitter * (2.0 * s.uniform() - 1.0))
}

/// Sample `trials_per_task` runs of every suite task for every profile.
/// Records are emitted agent-major, then task, then trial.
pub fn generate(
    profiles: &[AgentProfileSpec],
    suite: &[TaskSpec],
    trials_per_task: u32,
    seed: u64,
) -> Result<Vec<RunRecord>> {
    if trials_per_task == 0 {
        return Err(Error::InvalidProfile {
            agent: "-".into(),
            reason: "trials_per_task must be >= 1".into(),
        });
    }
    let mut seen = std::collections::BTreeSet::new();
    for p in profiles {
        p.validate()?;
        if !seen.insert(p.agent_id.as_str()) {
            return Err(Error::InvalidProfile {
                agent: p.agent_id.clone(),
                reason: "duplicate agent_id".into(),
            });
        }
    }

    let mut s = Stream::new(seed);
    let mut out = Vec::with_capacity(profiles.len() * suite.len() * trials_per_task as usize);
    for p in profiles {
        let token_mean = p.input_tokens_mean + p.output_tokens_mean;
        for task in suite {
            let mut prev = false;
            for t in 0..trials_per_task {
                let fresh = s.uniform() < p.success_rate;
                let keep = s.uniform() < p.success_autocorrelation;
                let success = if t > 0 && keep { prev } else { fresh };
                prev = success;

                let input_tokens = tokens(&mut s, p.input_tokens_mean, p.input_tokens_spread);
                let output_tokens = tokens(&mut s, p.output_tokens_mean, p.output_tokens_spread);
                let plan = phase(&mut s, p.latency_plan_s, p.latency_jitter);
                let exec = phase(&mut s, p.latency_exec_s, p.latency_jitter);
                let reflect = phase(&mut s, p.latency_reflect_s, p.latency_jitter);
                let violations = (0..p.critical_actions_per_run)
                    .filter(|_| s.bernoulli(p.violation_rate))
                    .count() as u64;

                let security_probe = if t == 0 {
                    let probed = s.uniform() < p.probe_rate;
                    let attacked = s.uniform() < p.attack_success_rate;
                    probed.then(|| SecurityProbe {
                        attack_case_id: format!("atk:{}", task.task_id),
                        attack_succeeded: attacked,
                    })
                } else {
                    None
                };

                let cost_usd = p.cost_usd_mean.map(|c| {
                    if token_mean > 0.0 {
                        c * (input_tokens + output_tokens) as f64 / token_mean
                    } else {
                        c
                    }
                });

                out.push(RunRecord {
                    run_id: format!("{}:{}:{}", p.agent_id, task.task_id, t),
                    agent_id: p.agent_id.clone(),
                    task_id: task.task_id.clone(),
                    trial_index: t,
                    success,
                    input_tokens,
                    output_tokens,
                    cost_usd,
                    latency_plan_s: plan,
                    latency_exec_s: exec,
                    latency_reflect_s: reflect,
                    latency_total_s: plan + exec + reflect,
                    policy_critical_actions: p.critical_actions_per_run,
                    policy_violations: violations,
                    security_probe,
                });
            }
        }
    }
    Ok(out)
}

/// Per-domain task counts of the standard 300-task suite.
pub const STANDARD_COUNTS: [(Domain, usize); 6] = [
    (Domain::CustomerSupport, 60),
    (Domain::DataAnalysis, 50),
    (Domain::ProcessAutomation, 50),
    (Domain::SoftwareDevelopment, 60),
    (Domain::Compliance, 40),
    (Domain::MultiStakeholder, 40),
];

fn subtype(domain: Domain, i: usize) -> &'static str {
    match domain {
        Domain::DataAnalysis => ["query", "report"][i % 2],
        Domain::SoftwareDevelopment => ["analysis", "generation"][i % 2],
        _ => DomainProfile::FALLBACK,
    }
}

/// Build a suite with the given per-domain counts. Task ids are
/// `<domain>-<nnn>`; SLAs resolve through `profiles`.
pub fn build_suite(
    counts: &[(Domain, usize)],
    profiles: &[DomainProfile],
) -> Result<Vec<TaskSpec>> {
    let mut suite = Vec::new();
    for &(domain, n) in counts {
        for i in 0..n {
            let task_id = format!("{}-{:03}", domain.as_str(), i + 1);
            let subtype = subtype(domain, i).to_string();
            let sla_seconds = crate::model::resolve_sla(&task_id, domain, &subtype, profiles)?;
            let step_count = match domain {
                Domain::MultiStakeholder => 8 + (i % 8) as u32,
                _ => 5 + ((i * 7) % 11) as u32,
            };
            suite.push(TaskSpec {
                task_id,
                domain,
                subtype,
                step_count,
                sla_seconds,
            });
        }
    }
    Ok(suite)
}

/// 300 tasks over six domains under the enterprise SLA defaults.
pub fn standard_suite() -> Vec<TaskSpec> {
    build_suite(&STANDARD_COUNTS, &DomainProfile::enterprise_defaults())
        .expect("defaults cover every domain")
}
