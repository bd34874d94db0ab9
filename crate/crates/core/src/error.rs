use thiserror::Error;

use crate::word::Word;

/// Errors shared across the library.
#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum CoreError {
    #[error("invalid binary word character {0:?} (expected '0' or '1')")]
    InvalidWordChar(char),

    #[error("invalid rational literal {0:?} (expected \"p/q\" or an integer)")]
    InvalidRational(String),

    #[error("rational out of range: {0}")]
    RationalOutOfRange(String),

    #[error("word set is not prefix-free: {first} is a prefix of {second}")]
    NotPrefixFree { first: Word, second: Word },

    #[error("words do not cover the whole space: Kraft sum is {kraft_sum} (expected 1)")]
    NotACover { kraft_sum: String },

    #[error("periodic source needs a non-empty word")]
    EmptyPeriod,

    #[error("stream source exhausted at bit index {index}")]
    StreamExhausted { index: usize },

    #[error("zero-probability cylinder reached at prefix {prefix} while sampling")]
    ZeroCylinder { prefix: Word },

    #[error("machine ran out of fuel: needed {needed} output bits after {steps} steps from a {budget}-bit input prefix")]
    FuelExhausted {
        steps: usize,
        needed: usize,
        budget: usize,
    },

    #[error("prefix of length {have} is too short to determine the value (need a piece of the cover)")]
    PrefixTooShort { have: usize },

    #[error("enumeration depth {depth} exceeds the feasible limit {limit}")]
    DepthInfeasible { depth: usize, limit: usize },

    #[error("measure kind does not support exact evaluation (use the bounds interface)")]
    NotExact,

    #[error("expected {expected} transformation, got an incompatible machine")]
    MachineMismatch { expected: &'static str },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("admissible sequence is already at the maximal length {len} (sigma = {sigma})")]
    AlreadyMaximal { len: usize, sigma: usize },

    #[error("sequence is not admissible: {0}")]
    NotAdmissible(String),

    #[error("no p with \u{2016}S_p^f\u{2016}\u{2081} \u{2264} {target} found up to cap {cap} (last norm {last})")]
    PFinderFailure {
        target: String,
        cap: usize,
        last: String,
    },

    #[error("could not separate the floor within the precision cap")]
    PrecisionFailure,

    #[error("stage budget exhausted: {0}")]
    StageBudget(String),

    #[error("staged measure bound violated at level {level}, stage {stage}: measure {measure} > {bound}")]
    StageBoundViolated {
        level: usize,
        stage: usize,
        measure: String,
        bound: String,
    },

    #[error("config error: {0}")]
    Config(String),
}

pub type Result<T> = std::result::Result<T, CoreError>;
