use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("parse error: {0}")]
    Parse(String),
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("division by an interval containing zero")]
    DivisionByZero,
    #[error("polynomial is not squarefree")]
    NonSquarefree,
    #[error("monodromy entry A is not squarefree")]
    NonSquarefreeA,
    #[error("enclosure endpoints have the same sign")]
    NoSignChange,
    #[error("precision exhausted: {0}")]
    PrecisionExhausted(String),
    #[error("measure has fewer than two atoms")]
    TooFewAtoms,
    #[error("measure has a nonpositive atom position")]
    NeedsPositiveSupport,
    #[error("measure is not normalized to unit mass")]
    NotNormalized,
    #[error("denominator has degree one; the remaining atom is terminal")]
    DegreeTooSmall,
    #[error("consecutive directions are parallel")]
    ParallelDirections,
    #[error("degenerate direction ratio: {0}")]
    DegenerateRatio(String),
    #[error("monodromy has no spectrum (deg A = 0)")]
    NoSpectrum,
    #[error("parameter window is empty: {0}")]
    EmptyParameterWindow(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    /// Failures that more working precision may cure.
    pub fn is_precision(&self) -> bool {
        matches!(self, Error::PrecisionExhausted(_) | Error::DivisionByZero)
    }
}
