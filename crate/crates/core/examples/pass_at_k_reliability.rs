//! pass@k under the three semantics, and the consistency drop from
//! single-run efficacy to pass@8.

use clear_eval::reliability::{consistency_drop, task_pass_at_k, PassSemantics};
use clear_eval::{evaluate, simgen, EvalConfig};

fn show(seq: &[bool]) -> String {
    seq.iter().map(|&s| if s { 'S' } else { 'F' }).collect()
}

fn main() -> clear_eval::Result<()> {
    let sequences: [&[bool]; 4] = [
        &[true, true, false, true, true, true],
        &[false, true, true, true, true, false],
        &[true, false, true, false, true, false],
        &[true; 6],
    ];
    println!(
        "{:<8} {:>3} {:>8} {:>8} {:>14}",
        "trials", "k", "window", "prefix", "combinatorial"
    );
    for seq in sequences {
        for k in [1, 3, 5] {
            let [w, p, c] = PassSemantics::ALL.map(|m| task_pass_at_k(seq, k, m).unwrap());
            println!("{:<8} {k:>3} {w:>8.3} {p:>8.3} {c:>14.3}", show(seq));
        }
    }

    let passing = (0u32..32)
        .filter(|bits| {
            let seq: Vec<bool> = (0..5).map(|i| bits >> i & 1 == 1).collect();
            task_pass_at_k(&seq, 3, PassSemantics::Window).unwrap() == 1.0
        })
        .count();
    println!("\nlength-5 sequences with a 3-run: {passing} of 32");

    match task_pass_at_k(&[true, true], 3, PassSemantics::Window) {
        Err(e) => println!("k beyond trials: {e}"),
        Ok(_) => unreachable!("two trials cannot support k = 3"),
    }

    println!(
        "\nconsistency drop 72.3% -> 58.3%: {:.1}%",
        100.0 * consistency_drop(0.723, 0.583)?
    );

    let dataset = simgen::headline_fixture();
    for semantics in PassSemantics::ALL {
        let eval = evaluate(
            &dataset,
            &EvalConfig {
                semantics,
                ..EvalConfig::default()
            },
        )?;
        println!("\n{semantics}:");
        for s in &eval.summaries {
            let p8 = s.pass_at[&8];
            println!(
                "  {:<14} eff {:>5.1}%  pass@8 {:>5.1}%  drop {:>6.1}%",
                s.agent_id,
                100.0 * s.efficacy,
                100.0 * p8,
                100.0 * consistency_drop(s.efficacy, p8)?
            );
        }
    }
    Ok(())
}
