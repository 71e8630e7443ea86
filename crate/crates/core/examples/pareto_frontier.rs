//! Pareto frontier over different dimension sets, with the agents that
//! dominate each excluded one.

use clear_eval::analysis::{pareto_frontier, Dimension};
use clear_eval::report::{render_pareto, Format};
use clear_eval::simgen::{self, PUBLISHED_FRONTIER};
use clear_eval::{evaluate, EvalConfig};

fn main() -> clear_eval::Result<()> {
    let eval = evaluate(&simgen::headline_fixture(), &EvalConfig::default())?;

    for dims in [
        "cost,efficacy,latency,pas,pass@8",
        "cost,efficacy",
        "cost,pass@8",
        "efficacy,pas",
        "cost",
    ] {
        let result = pareto_frontier(&eval.summaries, &Dimension::parse_list(dims)?)?;
        println!("[{dims}] frontier: {}", result.frontier().join(", "));
    }

    let full = pareto_frontier(&eval.summaries, &Dimension::DEFAULT)?;
    println!();
    print!("{}", render_pareto(&full, Format::Text));

    if let Some(d) = full.divergence(&PUBLISHED_FRONTIER) {
        println!("\nreference frontier: {}", d.reference.join(", "));
        println!("  only computed:  {}", d.only_computed.join(", "));
        println!("  only reference: {}", d.only_reference.join(", "));
    }
    Ok(())
}
