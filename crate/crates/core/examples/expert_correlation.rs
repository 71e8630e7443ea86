//! Agreement among raters and correlation of three scoring approaches
//! with their mean ratings.

use std::path::Path;

use clear_eval::ingestion::load_ratings;
use clear_eval::report::{render_correlation_table, Format};
use clear_eval::stats::{
    correlate_approaches, krippendorff_alpha, mean_rating_by_agent, pearson, spearman, AlphaMetric,
    Approach, BootstrapConfig, PairedSample,
};
use clear_eval::{evaluate, simgen, EvalConfig, WeightProfile};

fn main() -> clear_eval::Result<()> {
    let xy = PairedSample::from_xy(&[1.0, 2.0, 3.0], &[1.0, 3.0, 2.0])?;
    println!("pearson((1,2,3),(1,3,2))  = {}", pearson(&xy)?);
    println!("spearman((1,2,3),(1,3,2)) = {}", spearman(&xy)?);

    let path = Path::new(env!("CARGO_MANIFEST_DIR")).join("data/ratings.csv");
    let ratings = load_ratings(&path)?;
    println!("\n{} ratings from {}", ratings.len(), path.display());
    for metric in [AlphaMetric::Ordinal, AlphaMetric::Interval] {
        println!(
            "krippendorff alpha ({metric:?}) = {:.3}",
            krippendorff_alpha(&ratings, metric)?
        );
    }
    for (agent, mean) in mean_rating_by_agent(&ratings) {
        println!("  {agent:<14} {mean:.2}");
    }

    let eval = evaluate(&simgen::headline_fixture(), &EvalConfig::default())?;
    let results = correlate_approaches(
        &eval.summaries,
        &ratings,
        &Approach::ALL,
        &WeightProfile::equal(),
        8,
        Some(BootstrapConfig {
            resamples: 2000,
            seed: 17,
        }),
    )?;
    println!();
    print!("{}", render_correlation_table(&results, Format::Markdown));
    Ok(())
}
