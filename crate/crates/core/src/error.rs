use alloc::string::String;

/// Errors raised by the core library.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),

    /// The declared truncation leaves more probability mass outside the
    /// retained basis than the requested tolerance allows.
    #[error("truncation insufficient: tail mass {tail:e} exceeds tolerance {tolerance:e}")]
    TruncationInsufficient { tail: f64, tolerance: f64 },

    #[error("truncation infeasible: {entries} stored entries exceed the memory budget of {budget}")]
    TruncationInfeasible { entries: usize, budget: usize },

    #[error("invalid density matrix: {0}")]
    InvalidDensity(String),

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("pump profile is singular or undefined at t = {0}")]
    SingularPump(f64),

    #[error("step size underflow at t = {t} (h = {h:e})")]
    StepUnderflow { t: f64, h: f64 },

    #[error("integration exceeded {0} steps")]
    TooManySteps(usize),

    #[error("non-finite value encountered at t = {0}")]
    NonFinite(f64),
}

pub type Result<T, E = Error> = core::result::Result<T, E>;

pub(crate) fn domain(msg: impl Into<String>) -> Error {
    Error::Domain(msg.into())
}
