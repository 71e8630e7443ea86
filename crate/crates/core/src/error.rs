use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("{}: {source}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("{context}: {message}")]
    Parse { context: String, message: String },

    // suite / config
    #[error("task `{task_id}`: unknown domain `{domain}`")]
    UnknownDomain { task_id: String, domain: String },
    #[error("domain profile table has no entry for `{0}`")]
    MissingProfile(String),
    #[error("task `{task_id}`: no SLA for subtype `{subtype}` and no \"*\" fallback in domain `{domain}`")]
    MissingSla {
        task_id: String,
        domain: String,
        subtype: String,
    },
    #[error("task `{task_id}`: {reason}")]
    InvalidTask { task_id: String, reason: String },
    #[error("invalid pricing table: {0}")]
    InvalidPricing(String),
    #[error("invalid weight profile `{name}`: {reason}")]
    InvalidWeights { name: String, reason: String },
    #[error("unknown weight profile `{0}`")]
    UnknownWeightProfile(String),

    // ratings
    #[error("ratings row {row}: {reason}")]
    InvalidRating { row: usize, reason: String },
    #[error("ratings row {row}: duplicate rating for ({rater}, {agent}, {task})")]
    DuplicateRating {
        row: usize,
        rater: String,
        agent: String,
        task: String,
    },

    // metrics
    #[error("agent `{0}`: no data")]
    NoData(String),
    #[error("agent `{agent}`: task `{task}` has no trial 0")]
    MissingFirstTrial { agent: String, task: String },
    #[error("agent `{0}`: record has no cost_usd and agent has no pricing entry")]
    NoPrice(String),
    #[error("agent `{agent}`: pricing references unknown model `{model}`")]
    UnknownModel { agent: String, model: String },
    #[error("zero cost: cost-normalized accuracy is undefined")]
    ZeroCost,
    #[error("agent `{0}`: no policy-critical actions")]
    NoPolicyActions(String),
    #[error("record `{run_id}` references task `{task_id}` with no SLA")]
    UnknownTask { run_id: String, task_id: String },

    // reliability
    #[error("insufficient trials: k = {k} but task `{task}` has {available} trial(s)")]
    InsufficientTrials {
        task: String,
        k: usize,
        available: usize,
    },
    #[error("k must be positive")]
    ZeroK,
    #[error("agent `{agent}`: trials for task `{task}` are not contiguous from 0")]
    TrialGap { agent: String, task: String },
    #[error("empty trial matrix")]
    EmptyMatrix,
    #[error("pass@1 is zero; consistency drop is undefined")]
    ZeroBaseline,

    // analysis
    #[error("unknown dimension `{0}`")]
    UnknownDimension(String),
    #[error("agent `{agent}` has no value for dimension `{dimension}`")]
    MissingValue { agent: String, dimension: String },
    #[error("empty cohort")]
    EmptyCohort,
    #[error("no dimensions selected")]
    NoDimensions,

    // stats
    #[error("degenerate sample: {0}")]
    DegenerateSample(String),
    #[error("duplicate subject `{0}` in paired sample")]
    DuplicateSubject(String),
    #[error("no subject is rated by two or more raters")]
    NoOverlap,
    #[error("bootstrap needs at least 1000 resamples, got {0}")]
    TooFewResamples(usize),

    // simgen
    #[error("invalid profile `{agent}`: {reason}")]
    InvalidProfile { agent: String, reason: String },

    #[error("dataset has {0} validation finding(s)")]
    Validation(usize),
}

impl Error {
    pub fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }

    pub fn parse(context: impl Into<String>, message: impl ToString) -> Self {
        Error::Parse {
            context: context.into(),
            message: message.to_string(),
        }
    }

    pub fn is_io(&self) -> bool {
        matches!(self, Error::Io { .. })
    }
}
