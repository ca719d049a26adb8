use thiserror::Error;

/// Errors raised by map construction, thermodynamic computations and experiments.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid partition: {0}")]
    InvalidPartition(String),

    #[error("branch {symbol} is not expanding: |slope| = {slope} <= 1")]
    NonExpanding { symbol: usize, slope: String },

    #[error("branch {symbol} does not have a Markov image: {reason}")]
    NonMarkovImage { symbol: usize, reason: String },

    #[error("admissibility matrix is not primitive, no power of it is positive")]
    NotCovering,

    #[error("generation {generation} has {count} cylinders, above the cap of {cap}")]
    GenerationTooLarge {
        generation: usize,
        count: u128,
        cap: u128,
    },

    #[error("inadmissible word: {0}")]
    InadmissibleWord(String),

    #[error("transfer matrix is not primitive or power iteration failed: {0}")]
    NotPrimitive(String),

    #[error("could not bracket the root of the pressure equation at q = {q}")]
    BracketFailure { q: f64 },

    #[error("horizon {horizon} exceeds the orbit cap {cap}")]
    HorizonOverflow { horizon: u64, cap: u64 },

    #[error("degenerate box-counting fit: {0}")]
    DegenerateFit(String),

    #[error("parameter order violated: {0}")]
    ParameterOrder(String),

    #[error("orbit denominator grew to {bits} bits, above the cap of {cap}")]
    DenominatorOverflow { bits: u64, cap: u64 },

    #[error("invalid potential: {0}")]
    InvalidPotential(String),

    #[error("config error at line {line}: {message}")]
    Config { line: usize, message: String },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

impl Error {
    /// True for failures of numerical procedures, as opposed to bad input.
    pub fn is_numerical(&self) -> bool {
        matches!(
            self,
            Error::NotPrimitive(_)
                | Error::BracketFailure { .. }
                | Error::HorizonOverflow { .. }
                | Error::DegenerateFit(_)
                | Error::DenominatorOverflow { .. }
        )
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
