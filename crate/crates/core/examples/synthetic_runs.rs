//! Generate run logs from agent profiles and compare evaluated metrics
//! with the generator's parameters.

use std::path::Path;

use clear_eval::ingestion::{load_suite, parse_runs, write_runs};
use clear_eval::metrics::{efficacy, group_by_agent, TrialSelection};
use clear_eval::model::{validate_dataset, Domain, DomainProfile};
use clear_eval::simgen::{self, generate, parse_profiles, AgentProfileSpec};
use clear_eval::{evaluate, Dataset, EvalConfig};

fn main() -> clear_eval::Result<()> {
    let root = Path::new(env!("CARGO_MANIFEST_DIR")).join("data");
    let profiles = parse_profiles(&std::fs::read_to_string(root.join("profiles.toml")).unwrap())?;
    let (suite, domain_profiles) = load_suite(root.join("suite.toml"))?;
    let records = generate(&profiles, &suite, 10, 42)?;
    println!(
        "{} records, {} violations",
        records.len(),
        validate_dataset(&records, &suite).len()
    );

    // Round trip through the JSON-lines format.
    let mut buf = Vec::new();
    write_runs(&mut buf, &records).unwrap();
    let back = parse_runs(buf.as_slice()).unwrap();
    assert_eq!(back.records, records);

    let dataset = Dataset {
        records,
        suite,
        profiles: domain_profiles,
        pricing: Default::default(),
        weights: Default::default(),
        reliability_tasks: Vec::new(),
    };
    let eval = evaluate(&dataset, &EvalConfig::default())?;
    println!(
        "\n{:<14} {:>7} {:>7} {:>7} {:>7} {:>7} {:>7}",
        "agent", "p", "eff", "1-v", "PAS", "lat", "pass@8"
    );
    for (p, s) in profiles.iter().zip(&eval.summaries) {
        println!(
            "{:<14} {:>7.3} {:>7.3} {:>7.3} {:>7.3} {:>7.2} {:>7.3}",
            p.agent_id,
            p.success_rate,
            s.efficacy,
            1.0 - p.violation_rate,
            s.pas.unwrap_or(f64::NAN),
            s.mean_latency_s,
            s.pass_at[&8]
        );
    }

    // Convergence: 10,000 single-trial tasks without autocorrelation.
    let big = simgen::build_suite(
        &[(Domain::DataAnalysis, 10_000)],
        &DomainProfile::enterprise_defaults(),
    )?;
    println!("\nsuccess_rate 0.650 over 10,000 tasks:");
    for seed in [1, 2, 3] {
        let recs = generate(&[AgentProfileSpec::fixed("a", 0.65)], &big, 1, seed)?;
        let e = efficacy(&group_by_agent(&recs)[0], TrialSelection::FirstTrial)?;
        println!("  seed {seed}: {e:.4}");
    }
    Ok(())
}
