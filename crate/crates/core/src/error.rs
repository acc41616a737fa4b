use thiserror::Error;

/// Errors raised by the library.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("state vector is zero (all amplitudes below 1e-300)")]
    ZeroVector,
    #[error("non-finite amplitude at index {0}")]
    NonFinite(usize),
    #[error("expected {expected} amplitudes, found {found}")]
    WrongLength { expected: usize, found: usize },
    #[error("matrix factor {0} is not unitary")]
    NotUnitary(usize),
    #[error("invalid permutation: {0}")]
    InvalidPermutation(String),

    #[error("invariant degree must be between 1 and 6, got {0}")]
    DegreeTooLarge(usize),
    #[error("permutation size mismatch: expected {expected}, found {found}")]
    PermutationSize { expected: usize, found: usize },
    #[error("I5 = {0:e} is negative beyond tolerance")]
    NegativeI5(f64),
    #[error("standard state is not normalized (norm² = {0})")]
    NotNormalized(f64),

    #[error("beta1*beta2*beta3 = {0:e} is negative beyond tolerance")]
    NegativeProduct(f64),
    #[error("invariant vector is not in the orbit space; violated: {}", .violated.join(", "))]
    NotInOrbitSpace { violated: Vec<String> },
    #[error("no cell matches {0:?} within tolerance")]
    Unclassifiable([f64; 6]),
    #[error("value {value} out of range: {what}")]
    OutOfRange { what: &'static str, value: f64 },
    #[error("synthesized state reproduces the invariants only to {0:e}")]
    SynthesisMismatch(f64),

    #[error("fiber is degenerate (feasible beta5 interval length {0:e})")]
    DegenerateFiber(f64),
    #[error("geometry is empty")]
    EmptyGeometry,
    #[error("parse error: {0}")]
    Parse(String),

    #[error("number of trials must be at least 1")]
    ZeroTrials,
}

pub type Result<T> = std::result::Result<T, Error>;
