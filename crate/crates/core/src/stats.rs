//! Validation statistics: Pearson and Spearman correlation, Krippendorff's
//! alpha for inter-rater agreement, and seeded percentile-bootstrap
//! confidence intervals.

use std::collections::{BTreeMap, HashSet};
use std::fmt;
use std::str::FromStr;

use crate::analysis::{self, Direction};
use crate::error::{Error, Result};
use crate::model::{AgentSummary, ExpertRating, WeightProfile};
use crate::rng::Stream;

pub const MIN_RESAMPLES: usize = 1000;

/// Redraw budget per bootstrap resample before giving up.
const MAX_REDRAWS: usize = 1000;

#[derive(Debug, Clone, PartialEq)]
pub struct PairedSample {
    points: Vec<(String, f64, f64)>,
}

impl PairedSample {
    pub fn new(points: Vec<(String, f64, f64)>) -> Result<Self> {
        let mut seen = HashSet::new();
        for (id, x, y) in &points {
            if !seen.insert(id.as_str()) {
                return Err(Error::DuplicateSubject(id.clone()));
            }
            if !x.is_finite() || !y.is_finite() {
                return Err(Error::DegenerateSample(format!(
                    "non-finite value for `{id}`"
                )));
            }
        }
        Ok(PairedSample { points })
    }

    /// Subjects named by position: `s0`, `s1`, ...
    pub fn from_xy(x: &[f64], y: &[f64]) -> Result<Self> {
        if x.len() != y.len() {
            return Err(Error::DegenerateSample("x and y differ in length".into()));
        }
        Self::new(
            x.iter()
                .zip(y)
                .enumerate()
                .map(|(i, (a, b))| (format!("s{i}"), *a, *b))
                .collect(),
        )
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn xs(&self) -> Vec<f64> {
        self.points.iter().map(|p| p.1).collect()
    }

    pub fn ys(&self) -> Vec<f64> {
        self.points.iter().map(|p| p.2).collect()
    }

    pub fn points(&self) -> &[(String, f64, f64)] {
        &self.points
    }
}

fn pearson_xy(x: &[f64], y: &[f64]) -> Result<f64> {
    let n = x.len();
    if n < 3 {
        return Err(Error::DegenerateSample(format!(
            "need at least 3 points, got {n}"
        )));
    }
    let mx = x.iter().sum::<f64>() / n as f64;
    let my = y.iter().sum::<f64>() / n as f64;
    let (mut sxy, mut sxx, mut syy) = (0.0, 0.0, 0.0);
    for (a, b) in x.iter().zip(y) {
        let (dx, dy) = (a - mx, b - my);
        sxy += dx * dy;
        sxx += dx * dx;
        syy += dy * dy;
    }
    if sxx == 0.0 || syy == 0.0 {
        return Err(Error::DegenerateSample("zero variance".into()));
    }
    Ok((sxy / (sxx * syy).sqrt()).clamp(-1.0, 1.0))
}

/// Product-moment correlation.
pub fn pearson(sample: &PairedSample) -> Result<f64> {
    pearson_xy(&sample.xs(), &sample.ys())
}

/// 1-based ranks; tied values share the mean of the ranks they span.
pub fn fractional_ranks(values: &[f64]) -> Vec<f64> {
    let mut order: Vec<usize> = (0..values.len()).collect();
    order.sort_by(|&a, &b| values[a].total_cmp(&values[b]));
    let mut ranks = vec![0.0; values.len()];
    let mut i = 0;
    while i < order.len() {
        let mut j = i;
        while j + 1 < order.len() && values[order[j + 1]] == values[order[i]] {
            j += 1;
        }
        let rank = (i + j) as f64 / 2.0 + 1.0;
        for &idx in &order[i..=j] {
            ranks[idx] = rank;
        }
        i = j + 1;
    }
    ranks
}

/// Pearson correlation of the fractional ranks.
pub fn spearman(sample: &PairedSample) -> Result<f64> {
    pearson_xy(
        &fractional_ranks(&sample.xs()),
        &fractional_ranks(&sample.ys()),
    )
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub enum AlphaMetric {
    #[default]
    Ordinal,
    Interval,
}

/// Krippendorff's alpha over ratings grouped into units by (agent, task).
/// Units rated only once are not pairable and are skipped.
pub fn krippendorff_alpha(ratings: &[ExpertRating], metric: AlphaMetric) -> Result<f64> {
    let mut units: BTreeMap<(&str, &str), Vec<u8>> = BTreeMap::new();
    for r in ratings {
        units
            .entry((r.agent_id.as_str(), r.task_id.as_str()))
            .or_default()
            .push(r.score);
    }
    let values: Vec<u8> = {
        let mut v: Vec<u8> = ratings.iter().map(|r| r.score).collect();
        v.sort_unstable();
        v.dedup();
        v
    };
    let pos = |v: u8| values.binary_search(&v).expect("value collected above");
    let m = values.len();

    // coincidence matrix
    let mut o = vec![vec![0.0f64; m]; m];
    let mut pairable = false;
    for scores in units.values().filter(|s| s.len() >= 2) {
        pairable = true;
        let w = 1.0 / (scores.len() - 1) as f64;
        for (i, a) in scores.iter().enumerate() {
            for (j, b) in scores.iter().enumerate() {
                if i != j {
                    o[pos(*a)][pos(*b)] += w;
                }
            }
        }
    }
    if !pairable {
        return Err(Error::NoOverlap);
    }
    let marginals: Vec<f64> = o.iter().map(|row| row.iter().sum()).collect();
    let n: f64 = marginals.iter().sum();

    let delta2 = |c: usize, k: usize| -> f64 {
        match metric {
            AlphaMetric::Interval => {
                let d = values[c] as f64 - values[k] as f64;
                d * d
            }
            AlphaMetric::Ordinal => {
                let (lo, hi) = (c.min(k), c.max(k));
                let between: f64 = marginals[lo..=hi].iter().sum();
                let d = between - (marginals[c] + marginals[k]) / 2.0;
                d * d
            }
        }
    };

    let mut observed = 0.0;
    let mut expected = 0.0;
    for c in 0..m {
        for k in 0..m {
            let d = delta2(c, k);
            observed += o[c][k] * d;
            expected += marginals[c] * marginals[k] * d;
        }
    }
    if observed == 0.0 {
        return Ok(1.0);
    }
    let observed = observed / n;
    let expected = expected / (n * (n - 1.0));
    Ok(1.0 - observed / expected)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Statistic {
    Pearson,
    Spearman,
}

impl Statistic {
    fn compute(self, x: &[f64], y: &[f64]) -> Result<f64> {
        match self {
            Statistic::Pearson => pearson_xy(x, y),
            Statistic::Spearman => pearson_xy(&fractional_ranks(x), &fractional_ranks(y)),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BootstrapInterval {
    pub low: f64,
    pub high: f64,
    pub resamples: usize,
    /// Degenerate resamples that were discarded and redrawn.
    pub redraws: usize,
}

/// Type-7 (linear interpolation) quantile of sorted data.
fn quantile(sorted: &[f64], q: f64) -> f64 {
    let h = (sorted.len() - 1) as f64 * q;
    let lo = h.floor() as usize;
    let hi = h.ceil() as usize;
    sorted[lo] + (h - lo as f64) * (sorted[hi] - sorted[lo])
}

/// 95% percentile-bootstrap interval. Resample `i` draws from substream `i`
/// of `seed`, so the result depends only on (sample, statistic, resamples,
/// seed).
pub fn bootstrap_ci(
    sample: &PairedSample,
    statistic: Statistic,
    resamples: usize,
    seed: u64,
) -> Result<BootstrapInterval> {
    if resamples < MIN_RESAMPLES {
        return Err(Error::TooFewResamples(resamples));
    }
    let (xs, ys) = (sample.xs(), sample.ys());
    statistic.compute(&xs, &ys)?;
    let n = xs.len();

    let mut stats = Vec::with_capacity(resamples);
    let mut redraws = 0;
    let (mut bx, mut by) = (vec![0.0; n], vec![0.0; n]);
    for i in 0..resamples {
        let mut stream = Stream::substream(seed, i as u64);
        let mut attempts = 0;
        loop {
            for j in 0..n {
                let pick = stream.index(n);
                bx[j] = xs[pick];
                by[j] = ys[pick];
            }
            match statistic.compute(&bx, &by) {
                Ok(v) => {
                    stats.push(v);
                    break;
                }
                Err(Error::DegenerateSample(_)) if attempts < MAX_REDRAWS => {
                    attempts += 1;
                    redraws += 1;
                }
                Err(e) => return Err(e),
            }
        }
    }
    stats.sort_by(f64::total_cmp);
    Ok(BootstrapInterval {
        low: quantile(&stats, 0.025).clamp(-1.0, 1.0),
        high: quantile(&stats, 0.975).clamp(-1.0, 1.0),
        resamples,
        redraws,
    })
}

/// Mean expert score per agent, over all raters and tasks.
pub fn mean_rating_by_agent(ratings: &[ExpertRating]) -> BTreeMap<String, f64> {
    let mut acc: BTreeMap<String, (f64, usize)> = BTreeMap::new();
    for r in ratings {
        let e = acc.entry(r.agent_id.clone()).or_default();
        e.0 += f64::from(r.score);
        e.1 += 1;
    }
    acc.into_iter()
        .map(|(k, (s, n))| (k, s / n as f64))
        .collect()
}

/// Ways of scoring agents that are compared against expert judgement.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Approach {
    /// Raw efficacy.
    EfficacyOnly,
    /// Mean of min-max normalized efficacy and normalized cost.
    EfficacyCost,
    /// The weighted five-dimension composite.
    Clear,
}

impl Approach {
    pub const ALL: [Approach; 3] = [
        Approach::EfficacyOnly,
        Approach::EfficacyCost,
        Approach::Clear,
    ];

    pub fn label(self) -> &'static str {
        match self {
            Approach::EfficacyOnly => "Efficacy Only",
            Approach::EfficacyCost => "Efficacy + Cost",
            Approach::Clear => "CLEAR (All 5 Dimensions)",
        }
    }

    pub fn key(self) -> &'static str {
        match self {
            Approach::EfficacyOnly => "efficacy",
            Approach::EfficacyCost => "efficacy_cost",
            Approach::Clear => "clear",
        }
    }

    pub fn parse_list(list: &str) -> std::result::Result<Vec<Approach>, String> {
        list.split(',')
            .map(str::trim)
            .filter(|s| !s.is_empty())
            .map(str::parse)
            .collect()
    }

    /// Score every agent of the cohort, in cohort order.
    pub fn scores(
        self,
        summaries: &[AgentSummary],
        weights: &WeightProfile,
        reliability_k: usize,
    ) -> Result<Vec<f64>> {
        match self {
            Approach::EfficacyOnly => Ok(summaries.iter().map(|s| s.efficacy).collect()),
            Approach::EfficacyCost => {
                let col = |f: fn(&AgentSummary) -> f64| -> Vec<(String, f64)> {
                    summaries
                        .iter()
                        .map(|s| (s.agent_id.clone(), f(s)))
                        .collect()
                };
                let e = analysis::min_max_normalize(&col(|s| s.efficacy), Direction::HigherBetter);
                let c =
                    analysis::min_max_normalize(&col(|s| s.mean_cost_usd), Direction::LowerBetter);
                Ok(e.iter()
                    .zip(&c)
                    .map(|((_, e), (_, c))| 0.5 * e + 0.5 * c)
                    .collect())
            }
            Approach::Clear => analysis::normalize_cohort(summaries, reliability_k)?
                .iter()
                .map(|n| analysis::composite(n, weights))
                .collect(),
        }
    }
}

impl fmt::Display for Approach {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

impl FromStr for Approach {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s {
            "efficacy" | "efficacy_only" => Ok(Approach::EfficacyOnly),
            "efficacy_cost" | "efficacy+cost" => Ok(Approach::EfficacyCost),
            "clear" => Ok(Approach::Clear),
            other => Err(format!(
                "unknown approach `{other}` (efficacy|efficacy_cost|clear)"
            )),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ApproachCorrelation {
    pub approach: Approach,
    pub agents: usize,
    pub pearson: f64,
    pub spearman: f64,
    pub pearson_ci: Option<BootstrapInterval>,
    pub spearman_ci: Option<BootstrapInterval>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BootstrapConfig {
    pub resamples: usize,
    pub seed: u64,
}

/// Correlate each approach's agent scores with the mean expert rating.
/// Agents without ratings are left out.
pub fn correlate_approaches(
    summaries: &[AgentSummary],
    ratings: &[ExpertRating],
    approaches: &[Approach],
    weights: &WeightProfile,
    reliability_k: usize,
    bootstrap: Option<BootstrapConfig>,
) -> Result<Vec<ApproachCorrelation>> {
    let expert = mean_rating_by_agent(ratings);
    let mut out = Vec::with_capacity(approaches.len());
    for &approach in approaches {
        let scores = approach.scores(summaries, weights, reliability_k)?;
        let points: Vec<(String, f64, f64)> = summaries
            .iter()
            .zip(scores)
            .filter_map(|(s, score)| {
                expert
                    .get(&s.agent_id)
                    .map(|y| (s.agent_id.clone(), score, *y))
            })
            .collect();
        let sample = PairedSample::new(points)?;
        let ci = |stat| {
            bootstrap
                .map(|b| bootstrap_ci(&sample, stat, b.resamples, b.seed))
                .transpose()
        };
        out.push(ApproachCorrelation {
            approach,
            agents: sample.len(),
            pearson: pearson(&sample)?,
            spearman: spearman(&sample)?,
            pearson_ci: ci(Statistic::Pearson)?,
            spearman_ci: ci(Statistic::Spearman)?,
        });
    }
    Ok(out)
}
