use thiserror::Error;

/// Errors raised anywhere in the simulator.
///
/// Variants fall into two families that the CLI maps to different exit
/// codes: configuration problems (bad parameters, unknown presets, malformed
/// config files) and numerical-contract failures (a cutoff that loses too much
/// probability, a non-Hermitian generator, a state that is not positive).
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid dimension: {0}")]
    InvalidDimension(String),

    #[error("dimension mismatch: expected {expected}, got {actual}")]
    DimensionMismatch { expected: usize, actual: usize },

    #[error("factor slot {slot} out of range for a {factors}-factor space")]
    SlotOutOfRange { slot: usize, factors: usize },

    #[error("operator is not Hermitian (max |H - H^dagger| = {asymmetry:.3e})")]
    NotHermitian { asymmetry: f64 },

    #[error("eigensolver failed to converge on a block of size {0}")]
    EigenFailure(usize),

    #[error("domain error: {0}")]
    Domain(String),

    #[error("cutoff {cutoff} too small for {what}: discarded probability {loss:.3e} exceeds {limit:.0e}")]
    CutoffTooSmall {
        cutoff: usize,
        what: String,
        loss: f64,
        limit: f64,
    },

    #[error("population in the top Fock levels reached {leakage:.3e} at gt = {time:.4}; increase the cutoff (currently {cutoff})")]
    Leakage {
        leakage: f64,
        time: f64,
        cutoff: usize,
    },

    #[error("not a valid density matrix: {0}")]
    NotDensityMatrix(String),

    #[error("configuration error: {0}")]
    Config(String),

    #[error("unknown preset '{0}'")]
    UnknownPreset(String),

    #[error("sweep value {name} = {value}: {source}")]
    Sweep {
        name: String,
        value: f64,
        #[source]
        source: Box<Error>,
    },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    /// True for errors caused by the user's parameters or files rather than
    /// by a numerical contract violation.
    pub fn is_config(&self) -> bool {
        match self {
            Error::Domain(_) | Error::Config(_) | Error::UnknownPreset(_) => true,
            Error::Sweep { source, .. } => source.is_config(),
            _ => false,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
