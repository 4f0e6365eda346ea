use thiserror::Error;

/// Which coherence bound of an X state was violated.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CoherenceSlot {
    /// |w|^2 <= a*d failed.
    W,
    /// |z|^2 <= b*c failed.
    Z,
}

impl std::fmt::Display for CoherenceSlot {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CoherenceSlot::W => write!(f, "w"),
            CoherenceSlot::Z => write!(f, "z"),
        }
    }
}

/// Crate-wide error type. `Display` always starts with the stable reason
/// token returned by [`Error::token`], so CLI consumers can match on the
/// first `:`-delimited field of a stderr line.
#[derive(Debug, Error)]
pub enum Error {
    #[error("NotHermitian: max deviation {max_dev:.3e} exceeds 1e-10")]
    NotHermitian { max_dev: f64 },

    #[error("InvalidDensity: {0}")]
    InvalidDensity(String),

    #[error("BadSubsystemSpec: {0}")]
    BadSubsystemSpec(String),

    #[error("NonUnitaryCorrection: correction matrix deviates from unitarity by {max_dev:.3e}")]
    NonUnitaryCorrection { max_dev: f64 },

    #[error("NotXState: off-X entries up to {max_off:.3e} exceed 1e-12")]
    NotXState { max_off: f64 },

    #[error("NonUnitTrace: a+b+c+d = {trace} deviates from 1 by more than 1e-10")]
    NonUnitTrace { trace: f64 },

    #[error("NegativePopulation: diagonal element {name} = {value} below -1e-12")]
    NegativePopulation { name: char, value: f64 },

    #[error("CoherenceBoundViolated: |{which}|^2 = {lhs} exceeds bound {rhs}")]
    CoherenceBoundViolated {
        which: CoherenceSlot,
        lhs: f64,
        rhs: f64,
    },

    #[error("ParamOutOfRange: {name} = {value} outside [{lo}, {hi}]")]
    ParamOutOfRange {
        name: &'static str,
        value: f64,
        lo: f64,
        hi: f64,
    },

    #[error("ParseError: {0}")]
    Parse(String),

    #[error("IoError: {0}")]
    Io(#[from] std::io::Error),
}

impl Error {
    /// Stable machine-readable reason token (the text before the first `:`
    /// of the `Display` output).
    pub fn token(&self) -> &'static str {
        match self {
            Error::NotHermitian { .. } => "NotHermitian",
            Error::InvalidDensity(_) => "InvalidDensity",
            Error::BadSubsystemSpec(_) => "BadSubsystemSpec",
            Error::NonUnitaryCorrection { .. } => "NonUnitaryCorrection",
            Error::NotXState { .. } => "NotXState",
            Error::NonUnitTrace { .. } => "NonUnitTrace",
            Error::NegativePopulation { .. } => "NegativePopulation",
            Error::CoherenceBoundViolated { .. } => "CoherenceBoundViolated",
            Error::ParamOutOfRange { .. } => "ParamOutOfRange",
            Error::Parse(_) => "ParseError",
            Error::Io(_) => "IoError",
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
