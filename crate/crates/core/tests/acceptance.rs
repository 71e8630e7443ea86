//! Acceptance gate. Runs every criterion, prints one PASS/FAIL line each,
//! and exits non-zero if any fails.

use std::collections::{BTreeMap, BTreeSet};
use std::time::Instant;

use clear_eval::analysis::{self, Dimension, Direction};
use clear_eval::ingestion::{self, Dataset};
use clear_eval::metrics::{self, cna};
use clear_eval::model::{
    resolve_sla, AgentSummary, Domain, DomainProfile, ExpertRating, ModelAssignment, ModelPrice,
    PricingTable, RunRecord, WeightProfile,
};
use clear_eval::reliability::{consistency_drop, task_pass_at_k, PassSemantics};
use clear_eval::report::{self, Format, SummaryOptions};
use clear_eval::rng::Stream;
use clear_eval::simgen::{self, AgentProfileSpec, PUBLISHED_FRONTIER};
use clear_eval::stats::{self, AlphaMetric, PairedSample, Statistic};
use clear_eval::{evaluate, EvalConfig};

type Check = Result<String, String>;
type Criterion = (&'static str, fn() -> Check);

macro_rules! ensure {
    ($cond:expr, $($msg:tt)+) => {
        let ok: bool = $cond;
        if !ok {
            return Err(format!($($msg)+));
        }
    };
}

fn fail<E: std::fmt::Display>(e: E) -> String {
    e.to_string()
}

/// Published headline table, as printed.
const PUBLISHED: [(&str, &str, &str, &str, &str, &str, &str); 6] = [
    ("ReAct-GPT4", "72.3", "2.87", "25.2", "8.4", "0.89", "58.3"),
    (
        "ReAct-GPT-o3",
        "68.7",
        "0.31",
        "221.6",
        "4.2",
        "0.85",
        "52.1",
    ),
    ("Reflexion", "74.1", "5.12", "14.5", "12.7", "0.91", "61.2"),
    (
        "Plan-Execute",
        "71.9",
        "1.24",
        "58.0",
        "6.8",
        "0.88",
        "64.5",
    ),
    ("ToolFormer", "69.5", "1.89", "36.8", "5.9", "0.82", "55.7"),
    (
        "Domain-Tuned",
        "70.3",
        "0.27",
        "260.4",
        "3.8",
        "0.93",
        "72.8",
    ),
];

fn headline_summaries() -> Result<Vec<AgentSummary>, String> {
    Ok(
        evaluate(&simgen::headline_fixture(), &EvalConfig::default())
            .map_err(fail)?
            .summaries,
    )
}

fn criterion_1() -> Check {
    let start = Instant::now();
    let dataset = simgen::headline_fixture();
    let eval = evaluate(&dataset, &EvalConfig::default()).map_err(fail)?;
    let csv = report::render_summary_table(
        &eval.summaries,
        None,
        &SummaryOptions::default(),
        Format::Csv,
    );
    let elapsed = start.elapsed();

    let mut reader = csv::Reader::from_reader(csv.as_bytes());
    let headers = reader.headers().map_err(fail)?.clone();
    let col = |name: &str| {
        headers
            .iter()
            .position(|h| h == name)
            .ok_or(format!("no column {name}"))
    };
    let cols = [
        col("efficacy_pct")?,
        col("cost_usd")?,
        col("cna")?,
        col("latency_s")?,
        col("pas")?,
        col("pass@8_pct")?,
    ];
    let rows: Vec<csv::StringRecord> = reader.records().collect::<Result<_, _>>().map_err(fail)?;
    ensure!(
        rows.len() == PUBLISHED.len(),
        "expected 6 agents, got {}",
        rows.len()
    );
    let mut cells = 0;
    for (row, p) in rows.iter().zip(PUBLISHED) {
        ensure!(&row[0] == p.0, "agent order: {} vs {}", &row[0], p.0);
        let expected = [p.1, p.2, p.3, p.4, p.5, p.6];
        for (i, (&c, want)) in cols.iter().zip(expected).enumerate() {
            ensure!(
                &row[c] == want,
                "{} column {i}: got {} want {want}",
                p.0,
                &row[c]
            );
            cells += 1;
        }
    }
    for (s, p) in eval.summaries.iter().zip(PUBLISHED) {
        let want: f64 = p.3.parse().unwrap();
        let got = s.cna.ok_or("missing CNA")?;
        ensure!((got - want).abs() <= 0.05, "{} CNA {got} vs {want}", p.0);
    }
    ensure!(elapsed.as_secs_f64() < 5.0, "took {elapsed:?}");
    Ok(format!(
        "{cells} cells match, CNA within 0.05, {:.2}s",
        elapsed.as_secs_f64()
    ))
}

fn criterion_2() -> Check {
    let v = cna(0.723, 2.87).map_err(fail)?;
    ensure!((v - 25.2).abs() <= 0.05, "cna(0.723, 2.87) = {v}");
    let mut s = Stream::new(2024);
    let mut worst: f64 = 0.0;
    for _ in 0..1000 {
        let e = s.uniform();
        let c = 0.01 + 10.0 * s.uniform();
        let lambda = 0.01 + 100.0 * s.uniform();
        let lhs = cna(e, lambda * c).map_err(fail)?;
        let rhs = cna(e, c).map_err(fail)? / lambda;
        let rel = if rhs == 0.0 {
            lhs.abs()
        } else {
            ((lhs - rhs) / rhs).abs()
        };
        worst = worst.max(rel);
    }
    ensure!(worst < 1e-12, "homogeneity relative error {worst}");
    Ok(format!(
        "cna(0.723, 2.87) = {v:.4}; 1000 triples, max rel err {worst:.1e}"
    ))
}

/// Independent pass@k definitions over a bitmask of n trials.
fn oracle(bits: u32, n: usize, k: usize, semantics: PassSemantics) -> f64 {
    let ok = |i: usize| bits >> i & 1 == 1;
    match semantics {
        PassSemantics::Window => {
            let hit = (0..=n - k).any(|start| (start..start + k).all(ok));
            f64::from(u8::from(hit))
        }
        PassSemantics::Prefix => f64::from(u8::from((0..k).all(ok))),
        PassSemantics::Combinatorial => {
            let (mut all, mut good) = (0u64, 0u64);
            for subset in 0u32..(1 << n) {
                if subset.count_ones() as usize == k {
                    all += 1;
                    if subset & !bits == 0 {
                        good += 1;
                    }
                }
            }
            good as f64 / all as f64
        }
    }
}

fn criterion_3() -> Check {
    let mut checked = 0u64;
    for n in 1..=10usize {
        for bits in 0u32..(1 << n) {
            let seq: Vec<bool> = (0..n).map(|i| bits >> i & 1 == 1).collect();
            for k in 1..=n {
                for sem in PassSemantics::ALL {
                    let got = task_pass_at_k(&seq, k, sem).map_err(fail)?;
                    let want = oracle(bits, n, k, sem);
                    ensure!(
                        (got - want).abs() < 1e-12,
                        "{sem} n={n} bits={bits:b} k={k}: {got} vs {want}"
                    );
                    checked += 1;
                }
            }
        }
    }
    let eight = (0u32..32)
        .filter(|&b| {
            let seq: Vec<bool> = (0..5).map(|i| b >> i & 1 == 1).collect();
            task_pass_at_k(&seq, 3, PassSemantics::Window).unwrap() == 1.0
        })
        .count();
    ensure!(
        eight == 8,
        "{eight} of 32 length-5 sequences pass k=3 window"
    );
    Ok(format!(
        "{checked} (sequence, k, semantics) cases; 8 of 32 pass k=3 window"
    ))
}

fn criterion_4() -> Check {
    let d = consistency_drop(0.723, 0.583).map_err(fail)?;
    ensure!((d - 0.194).abs() <= 0.001, "drop = {d}");
    Ok(format!("consistency_drop(0.723, 0.583) = {d:.4}"))
}

/// Brute-force frontier from raw values with per-dimension direction.
fn oracle_frontier(values: &[(String, Vec<f64>)], higher: &[bool]) -> BTreeSet<String> {
    let dominates = |a: &[f64], b: &[f64]| {
        let no_worse = a
            .iter()
            .zip(b)
            .zip(higher)
            .all(|((x, y), &h)| if h { x >= y } else { x <= y });
        let better = a
            .iter()
            .zip(b)
            .zip(higher)
            .any(|((x, y), &h)| if h { x > y } else { x < y });
        no_worse && better
    };
    values
        .iter()
        .filter(|(_, v)| !values.iter().any(|(_, w)| dominates(w, v)))
        .map(|(id, _)| id.clone())
        .collect()
}

fn raw(s: &AgentSummary, d: Dimension) -> (f64, bool) {
    match d {
        Dimension::Cost => (s.mean_cost_usd, false),
        Dimension::Latency => (s.mean_latency_s, false),
        Dimension::Efficacy => (s.efficacy, true),
        Dimension::Pas => (s.pas.unwrap(), true),
        Dimension::Reliability(k) => (s.pass_at[&k], true),
        _ => unreachable!("only default dimensions"),
    }
}

fn criterion_5() -> Check {
    let dataset = simgen::headline_fixture();
    let eval = evaluate(&dataset, &EvalConfig::default()).map_err(fail)?;
    let dims = Dimension::DEFAULT;
    for mask in 1u32..32 {
        let subset: Vec<Dimension> = (0..5)
            .filter(|i| mask >> i & 1 == 1)
            .map(|i| dims[i])
            .collect();
        let higher: Vec<bool> = subset
            .iter()
            .map(|&d| raw(&eval.summaries[0], d).1)
            .collect();
        let values: Vec<(String, Vec<f64>)> = eval
            .summaries
            .iter()
            .map(|s| {
                (
                    s.agent_id.clone(),
                    subset.iter().map(|&d| raw(s, d).0).collect(),
                )
            })
            .collect();
        let got: BTreeSet<String> = analysis::pareto_frontier(&eval.summaries, &subset)
            .map_err(fail)?
            .frontier()
            .into_iter()
            .map(String::from)
            .collect();
        ensure!(
            got == oracle_frontier(&values, &higher),
            "subset {subset:?}: {got:?}"
        );
    }
    let full: BTreeSet<&str> = eval
        .pareto
        .as_ref()
        .ok_or("no frontier")?
        .frontier()
        .into_iter()
        .collect();
    let expected: BTreeSet<&str> =
        ["ReAct-GPT4", "Reflexion", "Plan-Execute", "Domain-Tuned"].into();
    ensure!(full == expected, "full frontier {full:?}");

    let options = SummaryOptions {
        reference_frontier: Some(PUBLISHED_FRONTIER.iter().map(|s| s.to_string()).collect()),
        ..SummaryOptions::default()
    };
    let md = report::render_summary_table(
        &eval.summaries,
        eval.pareto.as_ref(),
        &options,
        Format::Markdown,
    );
    ensure!(
        md.contains("differs from the reference frontier"),
        "no divergence note:\n{md}"
    );
    ensure!(
        md.contains("only reference: ReAct-GPT-o3"),
        "divergence note lacks ReAct-GPT-o3"
    );
    Ok("31 subsets match brute force; full frontier {GPT4, Reflexion, Plan-Execute, Domain-Tuned}; divergence flagged".into())
}

fn criterion_6() -> Check {
    let summaries = headline_summaries()?;
    // Oracle straight from the printed table.
    let cost = [2.87, 0.31, 5.12, 1.24, 1.89, 0.27];
    let lat = [8.4, 4.2, 12.7, 6.8, 5.9, 3.8];
    let eff = [0.723, 0.687, 0.741, 0.719, 0.695, 0.703];
    let pas = [0.89, 0.85, 0.91, 0.88, 0.82, 0.93];
    let r8 = [0.583, 0.521, 0.612, 0.645, 0.557, 0.728];
    let norm = |v: &[f64; 6], i: usize| {
        let (lo, hi) = v
            .iter()
            .fold((f64::MAX, f64::MIN), |(a, b), &x| (a.min(x), b.max(x)));
        (hi - v[i]) / (hi - lo)
    };
    let hand: Vec<f64> = (0..6)
        .map(|i| 0.2 * (norm(&cost, i) + norm(&lat, i) + eff[i] + pas[i] + r8[i]))
        .collect();
    for (s, h) in summaries.iter().zip(&hand) {
        let c = s.composite.ok_or("missing composite")?;
        ensure!((c - h).abs() <= 1e-3, "{}: {c} vs hand {h}", s.agent_id);
    }
    let dt = summaries[5].composite.unwrap();
    let refl = summaries[2].composite.unwrap();
    ensure!((dt - 0.872).abs() <= 0.001, "Domain-Tuned {dt}");
    ensure!((refl - 0.453).abs() <= 0.001, "Reflexion {refl}");

    let mut scaled = summaries.clone();
    for s in &mut scaled {
        s.mean_cost_usd *= 37.5;
    }
    analysis::score_cohort(&mut scaled, &WeightProfile::equal(), 8).map_err(fail)?;
    for (a, b) in summaries.iter().zip(&scaled) {
        let (x, y) = (a.composite.unwrap(), b.composite.unwrap());
        ensure!(
            (x - y).abs() < 1e-12,
            "{} changed under cost scaling: {x} vs {y}",
            a.agent_id
        );
    }

    let flat: Vec<(String, f64)> = (0..4).map(|i| (format!("a{i}"), 3.0)).collect();
    for dir in [Direction::LowerBetter, Direction::HigherBetter] {
        ensure!(
            analysis::min_max_normalize(&flat, dir)
                .iter()
                .all(|(_, v)| *v == 1.0),
            "zero span"
        );
    }
    Ok(format!(
        "Domain-Tuned {dt:.4}, Reflexion {refl:.4}; cost-scale invariant; zero span -> 1.0"
    ))
}

/// Ranks 1..n of tie-free data.
fn ranks(v: &[f64]) -> Vec<f64> {
    let mut idx: Vec<usize> = (0..v.len()).collect();
    idx.sort_by(|&a, &b| v[a].total_cmp(&v[b]));
    let mut r = vec![0.0; v.len()];
    for (rank, i) in idx.into_iter().enumerate() {
        r[i] = (rank + 1) as f64;
    }
    r
}

/// Krippendorff's alpha from the coincidence matrix, values 1..=5.
fn alpha_oracle(units: &[Vec<u8>], interval: bool) -> f64 {
    let mut o = [[0.0f64; 6]; 6];
    for u in units.iter().filter(|u| u.len() >= 2) {
        let m = u.len() as f64;
        for (i, &a) in u.iter().enumerate() {
            for (j, &b) in u.iter().enumerate() {
                if i != j {
                    o[a as usize][b as usize] += 1.0 / (m - 1.0);
                }
            }
        }
    }
    let n_c: Vec<f64> = (0..6).map(|c| o[c].iter().sum()).collect();
    let n: f64 = n_c.iter().sum();
    let delta = |c: usize, k: usize| -> f64 {
        if interval {
            ((c as f64) - (k as f64)).powi(2)
        } else {
            let (lo, hi) = (c.min(k), c.max(k));
            let span: f64 = n_c[lo..=hi].iter().sum();
            (span - (n_c[c] + n_c[k]) / 2.0).powi(2)
        }
    };
    let (mut num, mut den) = (0.0, 0.0);
    for c in 1..6 {
        for k in 1..6 {
            num += o[c][k] * delta(c, k);
            den += n_c[c] * n_c[k] * delta(c, k);
        }
    }
    1.0 - (n - 1.0) * num / den
}

fn criterion_7() -> Check {
    let mut s = Stream::new(77);
    for trial in 0..1000 {
        let n = 3 + s.index(20);
        let mut used = BTreeSet::new();
        let mut draw = |s: &mut Stream| loop {
            let v = (s.uniform() * 1e6).round();
            if used.insert(v.to_bits()) {
                return v;
            }
        };
        let x: Vec<f64> = (0..n).map(|_| draw(&mut s)).collect();
        let y: Vec<f64> = (0..n).map(|_| draw(&mut s)).collect();
        let sample = PairedSample::from_xy(&x, &y).map_err(fail)?;
        let rho = stats::spearman(&sample).map_err(fail)?;
        let on_ranks =
            stats::pearson(&PairedSample::from_xy(&ranks(&x), &ranks(&y)).map_err(fail)?)
                .map_err(fail)?;
        ensure!(
            rho == on_ranks,
            "sample {trial}: spearman {rho} != pearson on ranks {on_ranks}"
        );
    }

    let p = stats::pearson(&PairedSample::from_xy(&[1., 2., 3.], &[1., 3., 2.]).map_err(fail)?)
        .map_err(fail)?;
    ensure!(p == 0.5, "pearson = {p}");

    let rating = |rater: &str, task: &str, score: u8| ExpertRating {
        rater_id: rater.into(),
        agent_id: "agent".into(),
        task_id: task.into(),
        score,
    };
    let agree: Vec<ExpertRating> = ["e1", "e2", "e3"]
        .iter()
        .flat_map(|r| (1..=4).map(move |t| rating(r, &format!("u{t}"), t as u8)))
        .collect();
    for m in [AlphaMetric::Ordinal, AlphaMetric::Interval] {
        let a = stats::krippendorff_alpha(&agree, m).map_err(fail)?;
        ensure!(a == 1.0, "full agreement {m:?} gives {a}");
    }

    // Three raters, four subjects, rater 3 skips subject 3.
    let table: [[Option<u8>; 4]; 3] = [
        [Some(1), Some(3), Some(2), Some(4)],
        [Some(2), Some(3), Some(3), Some(4)],
        [Some(1), Some(3), None, Some(5)],
    ];
    let mut worked = Vec::new();
    let mut units = vec![Vec::new(); 4];
    for (r, row) in table.iter().enumerate() {
        for (u, v) in row.iter().enumerate() {
            if let Some(v) = v {
                worked.push(rating(&format!("e{r}"), &format!("u{u}"), *v));
                units[u].push(*v);
            }
        }
    }
    for (metric, interval, frozen) in [
        (AlphaMetric::Interval, true, 71.0 / 86.0),
        (AlphaMetric::Ordinal, false, 1972.0 / 2277.0),
    ] {
        let hand = alpha_oracle(&units, interval);
        ensure!(
            (hand - frozen).abs() < 1e-12,
            "oracle {hand} vs frozen {frozen}"
        );
        let got = stats::krippendorff_alpha(&worked, metric).map_err(fail)?;
        ensure!(
            (got - frozen).abs() < 1e-12,
            "{metric:?}: {got} vs {frozen}"
        );
    }

    let sample =
        PairedSample::from_xy(&[1., 2., 3., 4., 5., 6., 7.], &[2., 1., 4., 3., 7., 5., 6.])
            .map_err(fail)?;
    for stat in [Statistic::Pearson, Statistic::Spearman] {
        let a = stats::bootstrap_ci(&sample, stat, 1000, 99).map_err(fail)?;
        let b = stats::bootstrap_ci(&sample, stat, 1000, 99).map_err(fail)?;
        ensure!(a == b, "bootstrap not deterministic for {stat:?}");
    }
    Ok("1000 samples spearman == pearson(ranks); pearson 0.5; alpha 1.0 / 71/86 / 1972/2277; bootstrap deterministic".into())
}

fn eval_bytes(
    records: &[RunRecord],
    dataset: &Dataset,
    dir: &std::path::Path,
) -> Result<Vec<u8>, String> {
    let path = dir.join("runs.jsonl");
    ingestion::save_runs(&path, records).map_err(fail)?;
    let log = ingestion::load_runs(&path).map_err(fail)?;
    ensure!(log.errors.is_empty(), "ingestion errors: {:?}", log.errors);
    let ds = Dataset {
        records: log.records,
        ..dataset.clone()
    };
    let eval = evaluate(&ds, &EvalConfig::default()).map_err(fail)?;
    let mut out = std::fs::read(&path).map_err(fail)?;
    out.extend(
        report::render_report(
            &eval,
            &SummaryOptions::default(),
            &ds.pricing,
            &ds.records,
            None,
        )
        .map_err(fail)?
        .bytes(),
    );
    out.extend(
        report::render_summary_table(
            &eval.summaries,
            eval.pareto.as_ref(),
            &SummaryOptions::default(),
            Format::Csv,
        )
        .bytes(),
    );
    out.extend(report::render_domain_table(&eval.breakdown, Format::Csv).bytes());
    Ok(out)
}

fn criterion_8() -> Check {
    let suite = simgen::standard_suite();
    let profiles: Vec<AgentProfileSpec> = simgen::HEADLINE
        .iter()
        .map(|r| AgentProfileSpec {
            success_autocorrelation: 0.8,
            input_tokens_spread: 2000.0,
            output_tokens_spread: 500.0,
            violation_rate: 1.0 - r.pas_percent as f64 / 100.0,
            attack_success_rate: 0.1,
            probe_rate: 0.5,
            latency_jitter: 0.2,
            cost_usd_mean: Some(r.cost_usd),
            latency_plan_s: r.plan_s,
            latency_exec_s: r.exec_s,
            latency_reflect_s: r.reflect_s,
            ..AgentProfileSpec::fixed(r.agent, r.efficacy_permille as f64 / 1000.0)
        })
        .collect();
    let dataset = Dataset {
        records: Vec::new(),
        suite: suite.clone(),
        profiles: DomainProfile::enterprise_defaults(),
        pricing: PricingTable::default(),
        weights: Default::default(),
        reliability_tasks: Vec::new(),
    };
    let tmp = tempfile::tempdir().map_err(fail)?;
    let (a, b) = (tmp.path().join("a"), tmp.path().join("b"));
    std::fs::create_dir_all(&a).map_err(fail)?;
    std::fs::create_dir_all(&b).map_err(fail)?;
    let first = eval_bytes(
        &simgen::generate(&profiles, &suite, 10, 42).map_err(fail)?,
        &dataset,
        &a,
    )?;
    let second = eval_bytes(
        &simgen::generate(&profiles, &suite, 10, 42).map_err(fail)?,
        &dataset,
        &b,
    )?;
    ensure!(first == second, "outputs differ between runs");

    for seed in 0..8 {
        let recs = simgen::generate(&profiles, &suite, 3, seed).map_err(fail)?;
        let report = clear_eval::model::validate_dataset(&recs, &suite);
        ensure!(
            report.is_clean(),
            "seed {seed}: {:?}",
            report.violations.first()
        );
    }

    let big = simgen::build_suite(
        &[(Domain::ProcessAutomation, 10_000)],
        &DomainProfile::enterprise_defaults(),
    )
    .map_err(fail)?;
    let mut worst: f64 = 0.0;
    for (seed, rate) in [(1u64, 0.1), (2, 0.35), (3, 0.5), (4, 0.723), (5, 0.95)] {
        let recs =
            simgen::generate(&[AgentProfileSpec::fixed("a", rate)], &big, 1, seed).map_err(fail)?;
        let e = metrics::efficacy(
            &metrics::group_by_agent(&recs)[0],
            metrics::TrialSelection::FirstTrial,
        )
        .map_err(fail)?;
        worst = worst.max((e - rate).abs());
    }
    ensure!(worst <= 0.02, "convergence gap {worst}");
    Ok(format!(
        "{} identical bytes across runs; 8 seeds validate; 10k-task gap {worst:.4}",
        first.len()
    ))
}

fn criterion_9() -> Check {
    let pricing = PricingTable {
        models: BTreeMap::from([(
            "m".to_string(),
            ModelPrice {
                input_usd_per_1k: 0.01,
                output_usd_per_1k: 0.03,
            },
        )]),
        agent_model_map: BTreeMap::from([("a".to_string(), ModelAssignment::Single("m".into()))]),
    };
    let record = RunRecord {
        run_id: "r".into(),
        agent_id: "a".into(),
        task_id: "t".into(),
        trial_index: 0,
        success: true,
        input_tokens: 1000,
        output_tokens: 500,
        cost_usd: None,
        latency_plan_s: 1.0,
        latency_exec_s: 1.0,
        latency_reflect_s: 1.0,
        latency_total_s: 3.0,
        policy_critical_actions: 0,
        policy_violations: 0,
        security_probe: None,
    };
    let cost = metrics::cost_of_run(&record, &pricing).map_err(fail)?;
    ensure!(cost == 0.025, "cost = {cost:?}");

    // The published coefficients depend on unpublished ratings. What can be
    // checked: ratings whose per-agent mean tracks the composite give a
    // CLEAR row of 1.00.
    let summaries = headline_summaries()?;
    let mut ratings = Vec::new();
    for s in &summaries {
        let target = 1.0 + 4.0 * s.composite.unwrap();
        let low = target.floor();
        let high_count = ((target - low) * 100.0).round() as usize;
        for r in 0..100 {
            ratings.push(ExpertRating {
                rater_id: format!("e{r:03}"),
                agent_id: s.agent_id.clone(),
                task_id: "t".into(),
                score: (low as u8) + u8::from(r < high_count),
            });
        }
    }
    let rows = stats::correlate_approaches(
        &summaries,
        &ratings,
        &stats::Approach::ALL,
        &WeightProfile::equal(),
        8,
        None,
    )
    .map_err(fail)?;
    let csv = report::render_correlation_table(&rows, Format::Csv);
    let clear_row = csv.lines().last().unwrap_or_default();
    ensure!(clear_row.ends_with("1.00,1.00"), "CLEAR row: {clear_row}");
    Ok(format!(
        "1000 in @ $0.01/1k + 500 out @ $0.03/1k = ${cost}; correlation path property-checked"
    ))
}

fn criterion_10() -> Check {
    let profiles = DomainProfile::enterprise_defaults();
    let cases = [
        (Domain::CustomerSupport, "*", 3.0),
        (Domain::DataAnalysis, "query", 15.0),
        (Domain::DataAnalysis, "report", 45.0),
        (Domain::ProcessAutomation, "*", 10.0),
        (Domain::SoftwareDevelopment, "analysis", 30.0),
        (Domain::SoftwareDevelopment, "generation", 60.0),
        (Domain::Compliance, "*", 20.0),
        (Domain::MultiStakeholder, "*", 15.0),
    ];
    for (d, sub, want) in cases {
        let got = resolve_sla("t", d, sub, &profiles).map_err(fail)?;
        ensure!(got == want, "{d}/{sub}: {got} vs {want}");
    }
    let ds = simgen::sla_fixture();
    let runs = metrics::group_by_agent(&ds.records);
    let scr = metrics::scr(&runs[0], &ds.suite).map_err(fail)?;
    ensure!((scr - 0.77).abs() < 1e-12, "SCR {scr}");
    Ok(format!(
        "8 SLA lookups exact; 23% over SLA gives SCR {scr:.2}"
    ))
}

fn main() {
    let criteria: [Criterion; 10] = [
        ("headline table reproduction", criterion_1),
        ("CNA formula and homogeneity", criterion_2),
        ("pass@k brute-force equivalence", criterion_3),
        ("consistency drop", criterion_4),
        ("Pareto frontier correctness", criterion_5),
        ("composite score properties", criterion_6),
        ("statistics oracles", criterion_7),
        ("round trip and determinism", criterion_8),
        ("non-reproducible paths are property-checked", criterion_9),
        ("SLA resolution and compliance", criterion_10),
    ];
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        match std::panic::catch_unwind(check) {
            Ok(Ok(detail)) => println!("criterion {:>2} PASS  {name}: {detail}", i + 1),
            Ok(Err(why)) => {
                failed += 1;
                println!("criterion {:>2} FAIL  {name}: {why}", i + 1);
            }
            Err(_) => {
                failed += 1;
                println!("criterion {:>2} FAIL  {name}: panicked", i + 1);
            }
        }
    }
    println!(
        "acceptance: {} passed, {failed} failed",
        criteria.len() - failed
    );
    if failed > 0 {
        std::process::exit(1);
    }
}
