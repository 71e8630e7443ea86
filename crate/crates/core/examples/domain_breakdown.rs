//! Per-domain efficacy and PAS, rendered as Markdown and CSV.

use clear_eval::analysis::domain_breakdown;
use clear_eval::model::Domain;
use clear_eval::report::{render_domain_table, Format};
use clear_eval::simgen;

fn main() -> clear_eval::Result<()> {
    let dataset = simgen::domain_fixture();
    let breakdown = domain_breakdown(&dataset.records, &dataset.suite)?;
    print!("{}", render_domain_table(&breakdown, Format::Markdown));
    println!();
    print!("{}", render_domain_table(&breakdown, Format::Csv));

    // Drop compliance entirely: the column disappears and Overall is
    // recomputed from what remains.
    let keep: Vec<_> = dataset
        .suite
        .iter()
        .filter(|t| t.domain != Domain::Compliance)
        .cloned()
        .collect();
    let records: Vec<_> = dataset
        .records
        .iter()
        .filter(|r| keep.iter().any(|t| t.task_id == r.task_id))
        .cloned()
        .collect();
    let partial = domain_breakdown(&records, &keep)?;
    println!();
    print!("{}", render_domain_table(&partial, Format::Text));
    Ok(())
}
