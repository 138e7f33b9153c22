use thiserror::Error;

/// Errors raised across the toolkit.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("frame must contain between 1 and {max} labels, got {got}")]
    FrameSize { got: usize, max: usize },
    #[error("duplicate frame label `{0}`")]
    DuplicateLabel(String),
    #[error("unknown frame label `{0}`")]
    UnknownLabel(String),
    #[error("element index {index} out of range for a frame of size {size}")]
    BadFrame { index: usize, size: usize },
    #[error("operands are defined on different frames")]
    FrameMismatch,
    #[error("masses sum to {0}, expected 1")]
    SumNotOne(f64),
    #[error("positive mass {0} assigned to the empty set")]
    EmptyFocal(f64),
    #[error("mass assignment needs at least one entry")]
    NoEntries,
    #[error("invalid mass value {0}")]
    InvalidMass(f64),
    #[error("total conflict between the combined mass functions (kappa = {0})")]
    TotalConflict(f64),
    #[error("{name} = {value} is outside its admissible range {range}")]
    OutOfRange {
        name: &'static str,
        value: f64,
        range: &'static str,
    },
    #[error("all likelihoods are zero")]
    AllZeroLikelihood,
    #[error("mass function cannot be normalized: {0}")]
    NonNormalizable(String),
    #[error("all mass of object {0} is on the empty set")]
    AllMassEmpty(usize),
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("empty input: {0}")]
    EmptyInput(&'static str),
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),
    #[error("zero denominator while normalizing {0}")]
    ZeroDenominator(&'static str),
    #[error("non-finite loss {loss} at epoch {epoch}")]
    NonFiniteLoss { epoch: usize, loss: f64 },
    #[error("linear system for prototypes is singular")]
    SingularSystem,
    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn check_range(
    name: &'static str,
    value: f64,
    lo: f64,
    hi: f64,
    range: &'static str,
) -> Result<()> {
    if value.is_finite() && value >= lo && value <= hi {
        Ok(())
    } else {
        Err(Error::OutOfRange { name, value, range })
    }
}
