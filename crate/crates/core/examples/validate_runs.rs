//! Ingest a run log containing malformed lines and inconsistent records,
//! and list every finding.

use clear_eval::ingestion::{parse_runs, write_runs};
use clear_eval::model::validate_dataset;
use clear_eval::simgen::{generate, standard_suite, AgentProfileSpec};

fn main() -> clear_eval::Result<()> {
    let suite = standard_suite();
    let mut records = generate(&[AgentProfileSpec::fixed("demo", 0.8)], &suite[..5], 2, 7)?;

    records[0].policy_violations = 9; // more violations than actions
    records[1].latency_total_s = 99.0; // phases no longer sum to the total
    records[2].cost_usd = Some(-1.0);
    records[3].task_id = "not-in-suite".into();
    let dup = records[4].clone();
    records.push(dup);

    let mut log = Vec::new();
    write_runs(&mut log, &records).unwrap();
    log.extend_from_slice(b"{\"run_id\": \"truncated\"\n");
    log.extend_from_slice(b"not json at all\n");

    let parsed = parse_runs(log.as_slice()).unwrap();
    for w in &parsed.warnings {
        println!("warning: {w}");
    }
    for e in &parsed.errors {
        println!("line {}: {}", e.line, e.message);
    }
    let report = validate_dataset(&parsed.records, &suite);
    for v in &report.violations {
        println!("{v}");
    }
    println!("{} violations", parsed.errors.len() + report.len());

    let clean = generate(&[AgentProfileSpec::fixed("demo", 0.8)], &suite, 2, 7)?;
    println!(
        "clean log: {} violations",
        validate_dataset(&clean, &suite).len()
    );
    Ok(())
}
