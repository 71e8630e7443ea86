//! Composite score under the built-in weight profiles and a custom one.

use clear_eval::analysis::{composite, normalize_cohort};
use clear_eval::model::{WeightProfile, WeightSet};
use clear_eval::{evaluate, simgen, EvalConfig};

fn main() -> clear_eval::Result<()> {
    let eval = evaluate(&simgen::headline_fixture(), &EvalConfig::default())?;
    let normalized = normalize_cohort(&eval.summaries, 8)?;

    println!(
        "{:<14} {:>6} {:>6} {:>6} {:>6} {:>6}",
        "agent", "C", "L", "E", "A", "R"
    );
    for n in &normalized {
        println!(
            "{:<14} {:>6.3} {:>6.3} {:>6.3} {:>6.3} {:>6.3}",
            n.agent_id, n.c_norm, n.l_norm, n.e, n.a, n.r
        );
    }

    let mut profiles: Vec<(String, WeightProfile)> =
        WeightSet::presets().profiles.into_iter().collect();
    profiles.push((
        "cost_first".into(),
        WeightProfile {
            cost: 0.5,
            latency: 0.1,
            efficacy: 0.2,
            assurance: 0.1,
            reliability: 0.1,
        },
    ));

    for (name, weights) in &profiles {
        let mut ranked: Vec<(&str, f64)> = normalized
            .iter()
            .map(|n| Ok((n.agent_id.as_str(), composite(n, weights)?)))
            .collect::<clear_eval::Result<_>>()?;
        ranked.sort_by(|a, b| b.1.total_cmp(&a.1).then(a.0.cmp(b.0)));
        println!("\n{name} {:?}", weights.as_array());
        for (i, (agent, score)) in ranked.iter().enumerate() {
            println!("  {}. {agent:<14} {score:.4}", i + 1);
        }
    }

    let bad = WeightProfile {
        cost: 0.5,
        latency: 0.5,
        efficacy: 0.5,
        assurance: 0.0,
        reliability: 0.0,
    };
    if let Err(e) = bad.validate("too_heavy") {
        println!("\nrejected: {e}");
    }
    Ok(())
}
