use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("parameter error: {0}")]
    Parameter(String),

    #[error("empty set has no fattening")]
    EmptyFattening,

    #[error("point {0} is not in the space")]
    NotInSpace(String),

    #[error("invalid weights: {0}")]
    Weights(String),

    #[error("measures live on different spaces")]
    SpaceMismatch,

    #[error("support of size {size} exceeds the enumeration cap {cap}; use prohorov_fast")]
    EnumerationCap { size: usize, cap: usize },

    #[error("map image leaves the represented space at {0}")]
    GridClosure(String),

    #[error("not surjective at {0}")]
    NotSurjective(String),

    #[error("chain length {k} is below the minimal length {min}")]
    ChainTooShort { k: usize, min: usize },

    #[error("unknown zoo system `{0}`")]
    UnknownSystem(String),

    #[error("schedule construction failed: {0}")]
    Schedule(String),

    #[error("ball empty at this resolution")]
    EmptyBall,

    #[error("sample of size {size} exceeds the exact cap {cap}; use greedy mode")]
    ExactCap { size: usize, cap: usize },

    #[error("resource cap hit: {0}")]
    ResourceCap(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
