//! Token, cost and phase-latency breakdown, SLA resolution per domain,
//! and SLA compliance on a fixture where 23% of tasks run over.

use clear_eval::metrics::{group_by_agent, scr};
use clear_eval::model::{resolve_sla, Domain, DomainProfile};
use clear_eval::report::{render_cost_latency_table, Format};
use clear_eval::simgen;

fn main() -> clear_eval::Result<()> {
    let table1 = simgen::headline_fixture();
    print!(
        "{}",
        render_cost_latency_table(&table1.records, &table1.pricing, Format::Markdown)?
    );

    let profiles = DomainProfile::enterprise_defaults();
    println!("\nSLA thresholds (s):");
    for (domain, subtype) in [
        (Domain::CustomerSupport, "*"),
        (Domain::DataAnalysis, "query"),
        (Domain::DataAnalysis, "report"),
        (Domain::ProcessAutomation, "*"),
        (Domain::SoftwareDevelopment, "analysis"),
        (Domain::SoftwareDevelopment, "generation"),
        (Domain::Compliance, "*"),
        (Domain::MultiStakeholder, "*"),
        (Domain::Compliance, "unlisted-subtype"),
    ] {
        let sla = resolve_sla("example", domain, subtype, &profiles)?;
        println!("  {:<18} {:<18} {sla:>5}", domain.label(), subtype);
    }

    let fixture = simgen::sla_fixture();
    let runs = group_by_agent(&fixture.records);
    let over = fixture
        .records
        .iter()
        .filter(|r| r.latency_total_s > 30.0)
        .count();
    println!(
        "\n{}: {over} of {} software-development tasks over 30 s, SCR = {:.2}",
        runs[0].agent_id,
        fixture.records.len(),
        scr(&runs[0], &fixture.suite)?
    );
    Ok(())
}
