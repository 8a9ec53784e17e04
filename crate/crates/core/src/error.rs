use thiserror::Error;

use crate::text::TokenMode;

/// Errors raised by the scoring and analysis routines.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("maximum n-gram order must be at least 1")]
    InvalidOrder,
    #[error("n-gram order {requested} exceeds profile maximum order {available}")]
    OrderTooLarge { requested: usize, available: usize },
    #[error("profiles disagree on maximum order ({0} vs {1})")]
    MaxOrderMismatch(usize, usize),
    #[error("profiles disagree on tokenization mode ({0} vs {1})")]
    ModeMismatch(TokenMode, TokenMode),
    #[error("cannot merge an empty list of profiles")]
    EmptyProfileList,
    #[error("at least one reference is required")]
    EmptyReferences,
    #[error("score list is empty")]
    EmptyScores,
    #[error("score {0} is outside [0, 1]")]
    ScoreOutOfRange(f64),
    #[error("temperature must be positive and finite, got {0}")]
    InvalidTemperature(f64),
    #[error("segment has no references")]
    NoReferences,
    #[error("no scored segments in corpus")]
    EmptyCorpus,
    #[error("corpus scores come from different corpora")]
    CorpusMismatch,
    #[error("score vectors differ in length ({0} vs {1})")]
    LengthMismatch(usize, usize),
    #[error("bootstrap needs at least two paired scores, got {0}")]
    TooFewSamples(usize),
    #[error("iteration count must be at least 1")]
    ZeroIterations,
    #[error("reference count limit must be at least 1")]
    InvalidReferenceLimit,
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
