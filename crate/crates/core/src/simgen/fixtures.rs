//! Constructed (not sampled) datasets whose aggregates land exactly on
//! published values.
//!
//! Successes and violations are spread with a Bresenham rule, so `count`
//! hits are placed as evenly as possible across `n` slots.

use crate::ingestion::Dataset;
use crate::model::{
    Domain, DomainProfile, PricingTable, RunRecord, SecurityProbe, TaskSpec, WeightSet,
};

use super::build_suite;

/// True for exactly `count` of the slots `0..n`.
fn spread(i: usize, count: usize, n: usize) -> bool {
    (i + 1) * count / n > i * count / n
}

/// One agent's published headline numbers and cost/latency breakdown.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HeadlineRow {
    pub agent: &'static str,
    /// Efficacy in tenths of a percent.
    pub efficacy_permille: usize,
    pub cost_usd: f64,
    pub cna: f64,
    pub latency_s: f64,
    /// PAS in hundredths.
    pub pas_percent: usize,
    /// pass@8 in tenths of a percent.
    pub pass8_permille: usize,
    pub input_tokens: u64,
    pub output_tokens: u64,
    pub plan_s: f64,
    pub exec_s: f64,
    pub reflect_s: f64,
    /// Successful attacks out of [`HEADLINE_PROBES`].
    pub attacks_succeeded: usize,
}

#[allow(clippy::too_many_arguments)]
const fn row(
    agent: &'static str,
    efficacy_permille: usize,
    cost_usd: f64,
    cna: f64,
    latency_s: f64,
    pas_percent: usize,
    pass8_permille: usize,
    tokens: (u64, u64),
    phases: (f64, f64, f64),
    attacks_succeeded: usize,
) -> HeadlineRow {
    HeadlineRow {
        agent,
        efficacy_permille,
        cost_usd,
        cna,
        latency_s,
        pas_percent,
        pass8_permille,
        input_tokens: tokens.0,
        output_tokens: tokens.1,
        plan_s: phases.0,
        exec_s: phases.1,
        reflect_s: phases.2,
        attacks_succeeded,
    }
}

/// Headline table. Attack counts for Domain-Tuned (8%) and ToolFormer (18%)
/// are published; the others are illustrative.
pub const HEADLINE: [HeadlineRow; 6] = [
    row(
        "ReAct-GPT4",
        723,
        2.87,
        25.2,
        8.4,
        89,
        583,
        (47_200, 8_300),
        (2.1, 4.8, 1.5),
        60,
    ),
    row(
        "ReAct-GPT-o3",
        687,
        0.31,
        221.6,
        4.2,
        85,
        521,
        (52_100, 9_700),
        (1.2, 2.4, 0.6),
        70,
    ),
    row(
        "Reflexion",
        741,
        5.12,
        14.5,
        12.7,
        91,
        612,
        (89_400, 15_200),
        (3.4, 6.1, 3.2),
        55,
    ),
    row(
        "Plan-Execute",
        719,
        1.24,
        58.0,
        6.8,
        88,
        645,
        (38_600, 7_100),
        (1.8, 4.2, 0.8),
        65,
    ),
    row(
        "ToolFormer",
        695,
        1.89,
        36.8,
        5.9,
        82,
        557,
        (44_300, 9_800),
        (1.5, 3.6, 0.8),
        90,
    ),
    row(
        "Domain-Tuned",
        703,
        0.27,
        260.4,
        3.8,
        93,
        728,
        (31_200, 5_400),
        (0.9, 2.3, 0.6),
        40,
    ),
];

/// Agents starred as Pareto-optimal in the published table.
pub const PUBLISHED_FRONTIER: [&str; 3] = ["ReAct-GPT-o3", "Plan-Execute", "Domain-Tuned"];

pub const HEADLINE_TASKS: usize = 1000;
pub const HEADLINE_TRIALS: u32 = 10;
pub const HEADLINE_PROBES: usize = 500;
const HEADLINE_ACTIONS: u64 = 4;

/// Trials 1..=9 for tasks that must not pass pass@8: the longest success
/// run, including a successful trial 0, is 4. Streak tasks succeed on
/// trials 1..=9 whatever trial 0 did.
const BROKEN_TAIL: [bool; 9] = [true, true, true, false, true, true, true, true, false];

fn headline_suite() -> Vec<TaskSpec> {
    let counts = [
        (Domain::CustomerSupport, 200),
        (Domain::DataAnalysis, 167),
        (Domain::ProcessAutomation, 167),
        (Domain::SoftwareDevelopment, 200),
        (Domain::Compliance, 133),
        (Domain::MultiStakeholder, 133),
    ];
    build_suite(&counts, &DomainProfile::enterprise_defaults())
        .expect("defaults cover every domain")
}

fn record(
    agent: &str,
    task: &TaskSpec,
    trial: u32,
    success: bool,
    row: &HeadlineRow,
    cost_usd: f64,
) -> RunRecord {
    RunRecord {
        run_id: format!("{agent}:{}:{trial}", task.task_id),
        agent_id: agent.to_string(),
        task_id: task.task_id.clone(),
        trial_index: trial,
        success,
        input_tokens: row.input_tokens,
        output_tokens: row.output_tokens,
        cost_usd: Some(cost_usd),
        latency_plan_s: row.plan_s,
        latency_exec_s: row.exec_s,
        latency_reflect_s: row.reflect_s,
        latency_total_s: row.plan_s + row.exec_s + row.reflect_s,
        policy_critical_actions: 0,
        policy_violations: 0,
        security_probe: None,
    }
}

/// Six agents, 1000 tasks, 10 trials each.
///
/// Trial 0 carries efficacy, cost, latency, PAS (4 actions per task) and
/// the security probes (first 500 tasks). Reruns carry no policy actions;
/// they only shape pass@8, which uses every task.
pub fn headline_fixture() -> Dataset {
    let suite = headline_suite();
    let mut records =
        Vec::with_capacity(HEADLINE.len() * HEADLINE_TASKS * HEADLINE_TRIALS as usize);
    for row in &HEADLINE {
        let successes = row.efficacy_permille;
        let reliable = row.pass8_permille;
        let violations = (100 - row.pas_percent) * HEADLINE_ACTIONS as usize * HEADLINE_TASKS / 100;
        for (i, task) in suite.iter().enumerate() {
            let first = spread(i, successes, HEADLINE_TASKS);
            // A bijection on 0..1000 decouples the streak set from trial 0.
            let streak = spread((7 * i + 3) % HEADLINE_TASKS, reliable, HEADLINE_TASKS);
            let mut r0 = record(row.agent, task, 0, first, row, row.cost_usd);
            r0.policy_critical_actions = HEADLINE_ACTIONS;
            r0.policy_violations = u64::from(spread(i, violations, HEADLINE_TASKS));
            if i < HEADLINE_PROBES {
                r0.security_probe = Some(SecurityProbe {
                    attack_case_id: format!("inj-{i:03}"),
                    attack_succeeded: spread(i, row.attacks_succeeded, HEADLINE_PROBES),
                });
            }
            records.push(r0);
            for t in 1..HEADLINE_TRIALS {
                let ok = streak || BROKEN_TAIL[t as usize - 1];
                records.push(record(row.agent, task, t, ok, row, row.cost_usd));
            }
        }
    }
    Dataset {
        records,
        suite,
        profiles: DomainProfile::enterprise_defaults(),
        pricing: PricingTable::default(),
        weights: WeightSet::presets(),
        reliability_tasks: Vec::new(),
    }
}

/// Per-domain efficacy (%) and PAS for three agents, in `Domain::ALL` order.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DomainRow {
    pub agent: &'static str,
    pub cells: [(f64, f64); 6],
}

pub const DOMAIN_CELLS: [DomainRow; 3] = [
    DomainRow {
        agent: "ReAct-GPT4",
        cells: [
            (78.3, 0.87),
            (69.0, 0.94),
            (71.0, 0.88),
            (73.3, 0.91),
            (65.0, 0.82),
            (61.3, 0.78),
        ],
    },
    DomainRow {
        agent: "Plan-Execute",
        cells: [
            (75.0, 0.85),
            (72.0, 0.93),
            (73.0, 0.89),
            (70.0, 0.87),
            (67.5, 0.84),
            (64.0, 0.81),
        ],
    },
    DomainRow {
        agent: "Domain-Tuned",
        cells: [
            (81.7, 0.95),
            (71.0, 0.96),
            (72.0, 0.92),
            (71.7, 0.94),
            (72.5, 0.93),
            (68.8, 0.89),
        ],
    },
];

/// Smallest per-domain task counts for which every cell above is reachable.
pub const DOMAIN_TASKS: [usize; 6] = [60, 100, 100, 60, 40, 186];
const DOMAIN_ACTIONS: usize = 100;

/// Single-trial runs of three agents; each domain has 100 policy-critical
/// actions so PAS cells are exact.
pub fn domain_fixture() -> Dataset {
    let counts: Vec<(Domain, usize)> = Domain::ALL.into_iter().zip(DOMAIN_TASKS).collect();
    let suite = build_suite(&counts, &DomainProfile::enterprise_defaults())
        .expect("defaults cover every domain");
    let mut records = Vec::new();
    for b in &DOMAIN_CELLS {
        let row = HEADLINE
            .iter()
            .find(|r| r.agent == b.agent)
            .expect("agent in the headline table");
        for (d, &(eff, pas)) in Domain::ALL.into_iter().zip(&b.cells) {
            let tasks: Vec<&TaskSpec> = suite.iter().filter(|t| t.domain == d).collect();
            let n = tasks.len();
            let successes = (eff * n as f64 / 100.0).round() as usize;
            let violations = ((1.0 - pas) * DOMAIN_ACTIONS as f64).round() as usize;
            let mut with_actions = 0;
            for (i, task) in tasks.into_iter().enumerate() {
                let mut r = record(b.agent, task, 0, spread(i, successes, n), row, row.cost_usd);
                let actions = DOMAIN_ACTIONS / n + usize::from(i < DOMAIN_ACTIONS % n);
                r.policy_critical_actions = actions as u64;
                if actions > 0 {
                    r.policy_violations = u64::from(with_actions < violations);
                    with_actions += 1;
                }
                records.push(r);
            }
        }
    }
    Dataset {
        records,
        suite,
        profiles: DomainProfile::enterprise_defaults(),
        pricing: PricingTable::default(),
        weights: WeightSet::presets(),
        reliability_tasks: Vec::new(),
    }
}

/// 100 software-development analysis tasks (SLA 30 s) for one agent;
/// 23 of them run over.
pub fn sla_fixture() -> Dataset {
    let suite: Vec<TaskSpec> = build_suite(
        &[(Domain::SoftwareDevelopment, 200)],
        &DomainProfile::enterprise_defaults(),
    )
    .expect("defaults cover every domain")
    .into_iter()
    .filter(|t| t.subtype == "analysis")
    .collect();
    let row = &HEADLINE[3];
    let records = suite
        .iter()
        .enumerate()
        .map(|(i, task)| {
            let mut r = record(row.agent, task, 0, true, row, row.cost_usd);
            if spread(i, 23, suite.len()) {
                r.latency_plan_s = 6.0;
                r.latency_exec_s = 20.0;
                r.latency_reflect_s = 8.0;
                r.latency_total_s = 34.0;
            }
            r
        })
        .collect();
    Dataset {
        records,
        suite,
        profiles: DomainProfile::enterprise_defaults(),
        pricing: PricingTable::default(),
        weights: WeightSet::presets(),
        reliability_tasks: Vec::new(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn spread_hits_count() {
        for n in [1, 7, 60, 1000] {
            for c in 0..=n {
                assert_eq!((0..n).filter(|&i| spread(i, c, n)).count(), c);
            }
        }
    }

    #[test]
    fn fixtures_validate() {
        for ds in [headline_fixture(), domain_fixture(), sla_fixture()] {
            assert!(
                ds.validate().is_clean(),
                "{:?}",
                ds.validate().violations.first()
            );
        }
        assert_eq!(sla_fixture().suite.len(), 100);
        assert_eq!(headline_fixture().suite.len(), HEADLINE_TASKS);
    }

    #[test]
    fn published_latency_is_phase_sum() {
        for r in &HEADLINE {
            assert!(
                (r.plan_s + r.exec_s + r.reflect_s - r.latency_s).abs() < 1e-9,
                "{}",
                r.agent
            );
        }
    }
}
