//! Cost-normalized accuracy (CNA) and cost per success (CPS), with costs
//! taken either from explicit `cost_usd` or from a per-1k-token price table.

use std::collections::BTreeMap;

use clear_eval::metrics::{self, cna, cps};
use clear_eval::model::{ModelAssignment, ModelPrice, ModelShare, PricingTable, RunRecord};

fn run(agent: &str, task: &str, success: bool, input: u64, output: u64) -> RunRecord {
    RunRecord {
        run_id: format!("{agent}:{task}:0"),
        agent_id: agent.into(),
        task_id: task.into(),
        trial_index: 0,
        success,
        input_tokens: input,
        output_tokens: output,
        cost_usd: None,
        latency_plan_s: 1.0,
        latency_exec_s: 2.0,
        latency_reflect_s: 0.5,
        latency_total_s: 3.5,
        policy_critical_actions: 0,
        policy_violations: 0,
        security_probe: None,
    }
}

fn main() -> clear_eval::Result<()> {
    println!("cna(0.723, 2.87)   = {:.1}", cna(0.723, 2.87)?);
    println!("cna(0.703, 0.27)   = {:.1}", cna(0.703, 0.27)?);
    println!("cna(0.8, 0.10)     = {:.1}", cna(0.8, 0.10)?);
    println!("cps(10.0, 4)       = {:?}", cps(10.0, 4));
    println!("cps(10.0, 0)       = {:?}  (no successes)", cps(10.0, 0));

    let pricing = PricingTable {
        models: BTreeMap::from([
            (
                "small".to_string(),
                ModelPrice {
                    input_usd_per_1k: 0.01,
                    output_usd_per_1k: 0.03,
                },
            ),
            (
                "large".to_string(),
                ModelPrice {
                    input_usd_per_1k: 0.03,
                    output_usd_per_1k: 0.06,
                },
            ),
        ]),
        agent_model_map: BTreeMap::from([
            ("solo".to_string(), ModelAssignment::Single("small".into())),
            (
                "hybrid".to_string(),
                ModelAssignment::Mixed(vec![
                    ModelShare {
                        model: "large".into(),
                        share: 0.15,
                    },
                    ModelShare {
                        model: "small".into(),
                        share: 0.85,
                    },
                ]),
            ),
        ]),
    };
    pricing.validate()?;

    let records = vec![
        run("solo", "t1", true, 1000, 500),
        run("solo", "t2", false, 2000, 500),
        run("hybrid", "t1", true, 1000, 500),
        run("hybrid", "t2", true, 1000, 500),
    ];
    println!();
    println!(
        "1000 in + 500 out on `small`: ${:.3}",
        metrics::cost_of_run(&records[0], &pricing)?
    );
    println!(
        "same tokens on 15/85 `hybrid`: ${:.5}",
        metrics::cost_of_run(&records[2], &pricing)?
    );

    println!();
    println!(
        "{:<8} {:>6} {:>10} {:>8} {:>8}",
        "agent", "eff", "mean cost", "CNA", "CPS"
    );
    for group in metrics::group_by_agent(&records) {
        let eff = metrics::efficacy(&group, metrics::TrialSelection::FirstTrial)?;
        let costs: Vec<f64> = group
            .first_trials()
            .map(|r| metrics::cost_of_run(r, &pricing))
            .collect::<Result<_, _>>()?;
        let total: f64 = costs.iter().sum();
        let mean = total / costs.len() as f64;
        let successes = group.first_trials().filter(|r| r.success).count() as u64;
        println!(
            "{:<8} {:>6.2} {:>10.4} {:>8.1} {:>8}",
            group.agent_id,
            eff,
            mean,
            cna(eff, mean)?,
            cps(total, successes).map_or("—".into(), |v| format!("{v:.4}"))
        );
    }
    Ok(())
}
