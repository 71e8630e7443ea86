//! Cohort-level analysis: min-max normalization, the weighted composite
//! score, Pareto frontiers and per-domain breakdowns.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::metrics::{self, AgentRuns, TrialSelection};
use crate::model::{AgentSummary, Domain, RunRecord, TaskSpec, WeightProfile};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Direction {
    LowerBetter,
    HigherBetter,
}

/// Min-max scale onto [0, 1] with 1 always meaning "best". A zero span maps
/// every value to 1.
pub fn min_max_normalize(values: &[(String, f64)], direction: Direction) -> Vec<(String, f64)> {
    let min = values.iter().map(|(_, v)| *v).fold(f64::INFINITY, f64::min);
    let max = values
        .iter()
        .map(|(_, v)| *v)
        .fold(f64::NEG_INFINITY, f64::max);
    let span = max - min;
    values
        .iter()
        .map(|(agent, v)| {
            let scaled = if span > 0.0 {
                match direction {
                    Direction::LowerBetter => (max - v) / span,
                    Direction::HigherBetter => (v - min) / span,
                }
            } else {
                1.0
            };
            (agent.clone(), scaled)
        })
        .collect()
}

/// Inputs to the composite: normalized cost and latency plus raw efficacy,
/// assurance (PAS) and reliability (pass@k) fractions.
#[derive(Debug, Clone, PartialEq)]
pub struct NormalizedScores {
    pub agent_id: String,
    pub c_norm: f64,
    pub l_norm: f64,
    pub e: f64,
    pub a: f64,
    pub r: f64,
}

/// Normalize a cohort. Reliability is read from `pass_at[reliability_k]`.
pub fn normalize_cohort(
    summaries: &[AgentSummary],
    reliability_k: usize,
) -> Result<Vec<NormalizedScores>> {
    if summaries.is_empty() {
        return Err(Error::EmptyCohort);
    }
    let column = |f: fn(&AgentSummary) -> f64| -> Vec<(String, f64)> {
        summaries
            .iter()
            .map(|s| (s.agent_id.clone(), f(s)))
            .collect()
    };
    let cost = min_max_normalize(&column(|s| s.mean_cost_usd), Direction::LowerBetter);
    let latency = min_max_normalize(&column(|s| s.mean_latency_s), Direction::LowerBetter);
    summaries
        .iter()
        .zip(cost.iter().zip(&latency))
        .map(|(s, ((_, c), (_, l)))| {
            let missing = |dimension: &str| Error::MissingValue {
                agent: s.agent_id.clone(),
                dimension: dimension.to_string(),
            };
            Ok(NormalizedScores {
                agent_id: s.agent_id.clone(),
                c_norm: *c,
                l_norm: *l,
                e: s.efficacy,
                a: s.pas.ok_or_else(|| missing("pas"))?,
                r: *s
                    .pass_at
                    .get(&reliability_k)
                    .ok_or_else(|| missing(&format!("pass@{reliability_k}")))?,
            })
        })
        .collect()
}

pub fn composite(norm: &NormalizedScores, weights: &WeightProfile) -> Result<f64> {
    weights.validate("composite")?;
    Ok(weights.cost * norm.c_norm
        + weights.latency * norm.l_norm
        + weights.efficacy * norm.e
        + weights.assurance * norm.a
        + weights.reliability * norm.r)
}

/// Fill `composite` on every summary of the cohort.
pub fn score_cohort(
    summaries: &mut [AgentSummary],
    weights: &WeightProfile,
    reliability_k: usize,
) -> Result<()> {
    let norms = normalize_cohort(summaries, reliability_k)?;
    for (s, n) in summaries.iter_mut().zip(&norms) {
        s.composite = Some(composite(n, weights)?);
    }
    Ok(())
}

/// A dimension that can take part in Pareto dominance.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Dimension {
    Cost,
    Efficacy,
    Latency,
    Pas,
    Reliability(usize),
    Cna,
    Scr,
    InjectionResistance,
}

impl Dimension {
    /// cost, efficacy, latency, PAS and pass@8.
    pub const DEFAULT: [Dimension; 5] = [
        Dimension::Cost,
        Dimension::Efficacy,
        Dimension::Latency,
        Dimension::Pas,
        Dimension::Reliability(8),
    ];

    pub fn direction(self) -> Direction {
        match self {
            Dimension::Cost | Dimension::Latency => Direction::LowerBetter,
            _ => Direction::HigherBetter,
        }
    }

    pub fn value(self, s: &AgentSummary) -> Option<f64> {
        match self {
            Dimension::Cost => Some(s.mean_cost_usd),
            Dimension::Efficacy => Some(s.efficacy),
            Dimension::Latency => Some(s.mean_latency_s),
            Dimension::Pas => s.pas,
            Dimension::Reliability(k) => s.pass_at.get(&k).copied(),
            Dimension::Cna => s.cna,
            Dimension::Scr => Some(s.scr),
            Dimension::InjectionResistance => s.injection_resistance,
        }
    }

    /// Parse a comma-separated list such as `cost,efficacy,r@8`.
    pub fn parse_list(list: &str) -> Result<Vec<Dimension>> {
        list.split(',')
            .map(str::trim)
            .filter(|s| !s.is_empty())
            .map(str::parse)
            .collect()
    }
}

impl fmt::Display for Dimension {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Dimension::Cost => f.write_str("cost"),
            Dimension::Efficacy => f.write_str("efficacy"),
            Dimension::Latency => f.write_str("latency"),
            Dimension::Pas => f.write_str("pas"),
            Dimension::Reliability(k) => write!(f, "pass@{k}"),
            Dimension::Cna => f.write_str("cna"),
            Dimension::Scr => f.write_str("scr"),
            Dimension::InjectionResistance => f.write_str("injection"),
        }
    }
}

impl FromStr for Dimension {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let lower = s.to_ascii_lowercase();
        let dim = match lower.as_str() {
            "cost" => Dimension::Cost,
            "efficacy" | "eff" => Dimension::Efficacy,
            "latency" | "lat" => Dimension::Latency,
            "pas" | "assurance" => Dimension::Pas,
            "reliability" => Dimension::Reliability(8),
            "cna" => Dimension::Cna,
            "scr" => Dimension::Scr,
            "injection" | "injection_resistance" => Dimension::InjectionResistance,
            other => {
                let k = other
                    .strip_prefix("r@")
                    .or_else(|| other.strip_prefix("pass@"))
                    .and_then(|k| k.parse::<usize>().ok())
                    .filter(|k| *k > 0)
                    .ok_or_else(|| Error::UnknownDimension(s.to_string()))?;
                Dimension::Reliability(k)
            }
        };
        Ok(dim)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParetoEntry {
    pub agent_id: String,
    pub on_frontier: bool,
    pub dominated_by: Vec<String>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ParetoResult {
    pub dimensions: Vec<Dimension>,
    pub agents: Vec<ParetoEntry>,
}

/// How a computed frontier differs from a reference one.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FrontierDivergence {
    pub reference: Vec<String>,
    /// On the computed frontier but not in the reference.
    pub only_computed: Vec<String>,
    /// In the reference but dominated in the computed result.
    pub only_reference: Vec<String>,
}

impl ParetoResult {
    pub fn frontier(&self) -> Vec<&str> {
        self.agents
            .iter()
            .filter(|a| a.on_frontier)
            .map(|a| a.agent_id.as_str())
            .collect()
    }

    pub fn is_on_frontier(&self, agent: &str) -> bool {
        self.agents
            .iter()
            .any(|a| a.agent_id == agent && a.on_frontier)
    }

    /// `None` when the frontier matches `reference` exactly.
    pub fn divergence<S: AsRef<str>>(&self, reference: &[S]) -> Option<FrontierDivergence> {
        let computed: BTreeSet<&str> = self.frontier().into_iter().collect();
        let reference: BTreeSet<&str> = reference.iter().map(AsRef::as_ref).collect();
        if computed == reference {
            return None;
        }
        let owned = |it: std::collections::btree_set::Difference<'_, &str>| {
            it.map(|s| s.to_string()).collect::<Vec<_>>()
        };
        Some(FrontierDivergence {
            reference: reference.iter().map(|s| s.to_string()).collect(),
            only_computed: owned(computed.difference(&reference)),
            only_reference: owned(reference.difference(&computed)),
        })
    }
}

/// `x` dominates `y` when it is no worse on every dimension and strictly
/// better on at least one. Values are raw, not normalized.
fn dominates(x: &[f64], y: &[f64], dims: &[Dimension]) -> bool {
    let mut strictly = false;
    for ((a, b), d) in x.iter().zip(y).zip(dims) {
        let (better, worse) = match d.direction() {
            Direction::HigherBetter => (a > b, a < b),
            Direction::LowerBetter => (a < b, a > b),
        };
        if worse {
            return false;
        }
        strictly |= better;
    }
    strictly
}

pub fn pareto_frontier(
    summaries: &[AgentSummary],
    dimensions: &[Dimension],
) -> Result<ParetoResult> {
    if summaries.is_empty() {
        return Err(Error::EmptyCohort);
    }
    if dimensions.is_empty() {
        return Err(Error::NoDimensions);
    }
    let table: Vec<Vec<f64>> = summaries
        .iter()
        .map(|s| {
            dimensions
                .iter()
                .map(|d| {
                    d.value(s).ok_or_else(|| Error::MissingValue {
                        agent: s.agent_id.clone(),
                        dimension: d.to_string(),
                    })
                })
                .collect()
        })
        .collect::<Result<_>>()?;

    let agents = summaries
        .iter()
        .enumerate()
        .map(|(i, s)| {
            let dominated_by: Vec<String> = summaries
                .iter()
                .enumerate()
                .filter(|(j, _)| *j != i && dominates(&table[*j], &table[i], dimensions))
                .map(|(_, o)| o.agent_id.clone())
                .collect();
            ParetoEntry {
                agent_id: s.agent_id.clone(),
                on_frontier: dominated_by.is_empty(),
                dominated_by,
            }
        })
        .collect();
    Ok(ParetoResult {
        dimensions: dimensions.to_vec(),
        agents,
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct DomainCell {
    pub tasks: usize,
    pub efficacy: f64,
    pub pas: Option<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct AgentDomains {
    pub agent_id: String,
    pub domains: BTreeMap<Domain, DomainCell>,
    /// Efficacy is the task-weighted mean of the domain rows; PAS is pooled.
    pub overall: DomainCell,
}

#[derive(Debug, Clone, PartialEq)]
pub struct DomainBreakdown {
    pub agents: Vec<AgentDomains>,
    /// Domains with no tasks in the data; left out of every row.
    pub omitted: Vec<Domain>,
}

impl DomainBreakdown {
    pub fn present_domains(&self) -> Vec<Domain> {
        Domain::ALL
            .into_iter()
            .filter(|d| !self.omitted.contains(d))
            .collect()
    }
}

/// Efficacy and PAS per (agent, domain).
pub fn domain_breakdown(records: &[RunRecord], suite: &[TaskSpec]) -> Result<DomainBreakdown> {
    let domain_of: std::collections::HashMap<&str, Domain> = suite
        .iter()
        .map(|t| (t.task_id.as_str(), t.domain))
        .collect();

    let mut seen = BTreeSet::new();
    let mut agents = Vec::new();
    for runs in metrics::group_by_agent(records) {
        let mut split: BTreeMap<Domain, Vec<&RunRecord>> = BTreeMap::new();
        for r in &runs.records {
            let d = *domain_of
                .get(r.task_id.as_str())
                .ok_or_else(|| Error::UnknownTask {
                    run_id: r.run_id.clone(),
                    task_id: r.task_id.clone(),
                })?;
            split.entry(d).or_default().push(r);
        }
        let mut domains = BTreeMap::new();
        let mut weighted = 0.0;
        let mut total_tasks = 0usize;
        for (d, recs) in split {
            seen.insert(d);
            let sub = AgentRuns::new(runs.agent_id.clone(), recs);
            let tasks = sub.first_trials().count();
            let efficacy = metrics::efficacy(&sub, TrialSelection::FirstTrial)?;
            weighted += efficacy * tasks as f64;
            total_tasks += tasks;
            domains.insert(
                d,
                DomainCell {
                    tasks,
                    efficacy,
                    pas: metrics::pas(&sub).ok(),
                },
            );
        }
        let overall = DomainCell {
            tasks: total_tasks,
            efficacy: if total_tasks > 0 {
                weighted / total_tasks as f64
            } else {
                0.0
            },
            pas: metrics::pas(&runs).ok(),
        };
        agents.push(AgentDomains {
            agent_id: runs.agent_id,
            domains,
            overall,
        });
    }
    let omitted = Domain::ALL
        .into_iter()
        .filter(|d| !seen.contains(d))
        .collect();
    Ok(DomainBreakdown { agents, omitted })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::testutil::{record, task};

    fn named(values: &[f64]) -> Vec<(String, f64)> {
        values
            .iter()
            .enumerate()
            .map(|(i, v)| (format!("a{i}"), *v))
            .collect()
    }

    fn vals(out: &[(String, f64)]) -> Vec<f64> {
        out.iter().map(|(_, v)| *v).collect()
    }

    #[test]
    fn normalize_examples() {
        assert_eq!(
            vals(&min_max_normalize(
                &named(&[0.27, 5.12]),
                Direction::LowerBetter
            )),
            vec![1.0, 0.0]
        );
        assert_eq!(
            vals(&min_max_normalize(
                &named(&[3.0, 3.0, 3.0]),
                Direction::LowerBetter
            )),
            vec![1.0, 1.0, 1.0]
        );
        let lat = vals(&min_max_normalize(
            &named(&[3.8, 8.25, 12.7]),
            Direction::LowerBetter,
        ));
        assert_eq!(lat[0], 1.0);
        assert!((lat[1] - 0.5).abs() < 1e-12);
        assert_eq!(lat[2], 0.0);
        assert_eq!(
            vals(&min_max_normalize(
                &named(&[1.0, 3.0]),
                Direction::HigherBetter
            )),
            vec![0.0, 1.0]
        );
    }

    fn norm(c: f64, l: f64, e: f64, a: f64, r: f64) -> NormalizedScores {
        NormalizedScores {
            agent_id: "x".into(),
            c_norm: c,
            l_norm: l,
            e,
            a,
            r,
        }
    }

    #[test]
    fn composite_examples() {
        let w = WeightProfile::equal();
        let dt = composite(&norm(1.0, 1.0, 0.703, 0.93, 0.728), &w).unwrap();
        assert!((dt - 0.872).abs() < 0.001);
        let refl = composite(&norm(0.0, 0.0, 0.741, 0.91, 0.612), &w).unwrap();
        assert!((refl - 0.453).abs() < 0.001);
        let ones = norm(1.0, 1.0, 1.0, 1.0, 1.0);
        for w in crate::model::WeightSet::presets().profiles.values() {
            assert!((composite(&ones, w).unwrap() - 1.0).abs() < 1e-12);
        }
        let bad = WeightProfile { cost: 0.9, ..w };
        assert!(matches!(
            composite(&ones, &bad),
            Err(Error::InvalidWeights { .. })
        ));
    }

    fn summary(id: &str, cost: f64, eff: f64) -> AgentSummary {
        AgentSummary {
            agent_id: id.into(),
            efficacy: eff,
            mean_cost_usd: cost,
            cna: None,
            cps_usd: None,
            mean_latency_s: 1.0,
            scr: 1.0,
            pas: Some(0.9),
            pass_at: [(8, 0.5)].into_iter().collect(),
            injection_resistance: None,
            composite: None,
        }
    }

    #[test]
    fn pareto_small_cases() {
        let one = [summary("solo", 1.0, 0.5)];
        let r = pareto_frontier(&one, &[Dimension::Cost, Dimension::Efficacy]).unwrap();
        assert_eq!(r.frontier(), vec!["solo"]);

        let two = [summary("good", 1.0, 0.9), summary("bad", 2.0, 0.5)];
        let r = pareto_frontier(&two, &[Dimension::Cost, Dimension::Efficacy]).unwrap();
        assert_eq!(r.frontier(), vec!["good"]);
        assert_eq!(r.agents[1].dominated_by, vec!["good".to_string()]);

        let tradeoff = [summary("cheap", 1.0, 0.5), summary("strong", 2.0, 0.9)];
        let r = pareto_frontier(&tradeoff, &[Dimension::Cost, Dimension::Efficacy]).unwrap();
        assert_eq!(r.frontier().len(), 2);
        let r = pareto_frontier(&tradeoff, &[Dimension::Cost]).unwrap();
        assert_eq!(r.frontier(), vec!["cheap"]);
    }

    #[test]
    fn pareto_ties_do_not_dominate() {
        let same = [summary("a", 1.0, 0.5), summary("b", 1.0, 0.5)];
        let r = pareto_frontier(&same, &[Dimension::Cost, Dimension::Efficacy]).unwrap();
        assert_eq!(r.frontier(), vec!["a", "b"]);
    }

    #[test]
    fn pareto_errors() {
        let one = [summary("solo", 1.0, 0.5)];
        assert!(matches!(
            pareto_frontier(&[], &Dimension::DEFAULT),
            Err(Error::EmptyCohort)
        ));
        assert!(matches!(
            pareto_frontier(&one, &[]),
            Err(Error::NoDimensions)
        ));
        assert!(matches!(
            pareto_frontier(&one, &[Dimension::Cna]),
            Err(Error::MissingValue { .. })
        ));
        assert!(matches!(
            Dimension::parse_list("cost,speed"),
            Err(Error::UnknownDimension(d)) if d == "speed"
        ));
    }

    #[test]
    fn dimension_names() {
        let dims = Dimension::parse_list("cost, efficacy,latency,pas,r@8").unwrap();
        assert_eq!(dims, Dimension::DEFAULT.to_vec());
        assert_eq!(
            "pass@3".parse::<Dimension>().unwrap(),
            Dimension::Reliability(3)
        );
        assert!("r@0".parse::<Dimension>().is_err());
        assert_eq!(Dimension::Reliability(8).to_string(), "pass@8");
    }

    #[test]
    fn divergence_report() {
        let tradeoff = [summary("cheap", 1.0, 0.5), summary("strong", 2.0, 0.9)];
        let r = pareto_frontier(&tradeoff, &[Dimension::Cost, Dimension::Efficacy]).unwrap();
        assert!(r.divergence(&["strong", "cheap"]).is_none());
        let d = r.divergence(&["cheap", "ghost"]).unwrap();
        assert_eq!(d.only_computed, vec!["strong"]);
        assert_eq!(d.only_reference, vec!["ghost"]);
    }

    #[test]
    fn breakdown_weighted_overall() {
        // efficacies {78.3,69.0,71.0,73.3,65.0,61.3} over {60,50,50,60,40,40}
        // tasks give a weighted overall of 21148 / 300 = 70.49.
        let eff = [78.3, 69.0, 71.0, 73.3, 65.0, 61.3];
        let counts = [60usize, 50, 50, 60, 40, 40];
        let weighted: f64 = eff
            .iter()
            .zip(&counts)
            .map(|(e, n)| e * *n as f64)
            .sum::<f64>()
            / counts.iter().sum::<usize>() as f64;
        assert_eq!(format!("{weighted:.1}"), "70.5");

        // Construct integer success counts with the same weighting rule.
        let successes = [47usize, 35, 35, 44, 26, 25];
        let mut suite = Vec::new();
        let mut recs = Vec::new();
        for (di, d) in Domain::ALL.into_iter().enumerate() {
            for i in 0..counts[di] {
                let id = format!("{d}-{i}");
                suite.push(task(&id, d));
                recs.push(record("a", &id, 0, i < successes[di]));
            }
        }
        let b = domain_breakdown(&recs, &suite).unwrap();
        let a = &b.agents[0];
        let manual: f64 = successes.iter().sum::<usize>() as f64 / 300.0;
        assert!((a.overall.efficacy - manual).abs() < 1e-12);
        let cs = &a.domains[&Domain::CustomerSupport];
        assert_eq!(cs.tasks, 60);
        assert!((cs.efficacy - 47.0 / 60.0).abs() < 1e-12);
        assert!(b.omitted.is_empty());
    }

    #[test]
    fn breakdown_single_domain_equals_overall() {
        let suite = vec![
            task("t1", Domain::Compliance),
            task("t2", Domain::Compliance),
        ];
        let mut recs = vec![record("a", "t1", 0, true), record("a", "t2", 0, false)];
        recs[1].policy_violations = 1;
        let b = domain_breakdown(&recs, &suite).unwrap();
        let a = &b.agents[0];
        assert_eq!(a.domains[&Domain::Compliance], a.overall);
        assert_eq!(b.omitted.len(), 5);
    }
}
