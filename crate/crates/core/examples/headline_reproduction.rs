//! Evaluate the constructed six-agent fixture and print every table.
//!
//! ```bash
//! cargo run --example headline_reproduction
//! ```

use clear_eval::report::{self, Format, SummaryOptions};
use clear_eval::simgen::{self, PUBLISHED_FRONTIER};
use clear_eval::{evaluate, EvalConfig};

fn main() -> clear_eval::Result<()> {
    let dataset = simgen::headline_fixture();
    println!(
        "{} records, {} tasks, {} agents",
        dataset.records.len(),
        dataset.suite.len(),
        simgen::HEADLINE.len()
    );

    let eval = evaluate(&dataset, &EvalConfig::default())?;
    let options = SummaryOptions {
        reference_frontier: Some(PUBLISHED_FRONTIER.iter().map(|s| s.to_string()).collect()),
        ..SummaryOptions::default()
    };
    println!();
    print!(
        "{}",
        report::render_summary_table(
            &eval.summaries,
            eval.pareto.as_ref(),
            &options,
            Format::Markdown
        )
    );

    println!();
    print!(
        "{}",
        report::render_cost_latency_table(&dataset.records, &dataset.pricing, Format::Markdown)?
    );

    let mut ranked: Vec<_> = eval
        .summaries
        .iter()
        .map(|s| (s.agent_id.as_str(), s.composite.unwrap_or(f64::NAN)))
        .collect();
    ranked.sort_by(|a, b| b.1.total_cmp(&a.1));
    println!("\ncomposite ranking (equal weights):");
    for (agent, score) in ranked {
        println!("  {agent:<14} {score:.4}");
    }
    Ok(())
}
