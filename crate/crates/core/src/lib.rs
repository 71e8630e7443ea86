//! Batch evaluation of agent run logs across five dimensions: cost,
//! latency, efficacy, assurance and reliability.
//!
//! The flow is `ingestion` (run logs, suite, pricing, weights, ratings) ->
//! `metrics` and `reliability` (per-agent scores) -> `analysis`
//! (normalization, composite, Pareto frontier, domain breakdown) -> `stats`
//! (correlation with expert ratings) -> `report` (Markdown / CSV / text).
//! [`pipeline::evaluate`] runs the whole chain; `simgen` produces synthetic
//! and constructed datasets with known answers.
//!
//! Each capability has a runnable program under `examples/`:
//!
//! | example | shows |
//! |---|---|
//! | `headline_reproduction` | full evaluation of the six-agent fixture |
//! | `cost_normalized_accuracy` | CNA, CPS and pricing-table costs |
//! | `pass_at_k_reliability` | pass@k semantics and consistency drop |
//! | `pareto_frontier` | dominance over chosen dimensions |
//! | `composite_weights` | weight profiles and ranking changes |
//! | `domain_breakdown` | per-domain efficacy and PAS |
//! | `expert_correlation` | Pearson/Spearman, bootstrap, Krippendorff's alpha |
//! | `synthetic_runs` | seeded generation and recovery of parameters |
//! | `validate_runs` | ingestion and validation findings |
//! | `cost_latency_breakdown` | tokens, cost and phase latencies; SLA compliance |

pub mod analysis;
pub mod cli;
pub mod error;
pub mod ingestion;
pub mod metrics;
pub mod model;
pub mod pipeline;
pub mod reliability;
pub mod report;
pub mod rng;
pub mod simgen;
pub mod stats;

pub use error::{Error, Result};
pub use ingestion::Dataset;
pub use model::{AgentSummary, Domain, RunRecord, TaskSpec, WeightProfile};
pub use pipeline::{evaluate, EvalConfig, Evaluation};
pub use reliability::PassSemantics;
