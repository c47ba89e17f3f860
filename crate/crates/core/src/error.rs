use thiserror::Error;

use crate::scalar::ScalarError;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error(transparent)]
    Scalar(#[from] ScalarError),
    #[error("kernel pole: spectral arguments coincide (difference {difference})")]
    PoleAtCoincidentArguments { difference: String },
    #[error("degenerate trigonometric kernel: sinh(eta) vanishes")]
    DegenerateKernel,
    #[error("invalid chain specification: {0}")]
    InvalidChain(String),
    #[error("chain length {n} exceeds the dense dimension cap of {cap} sites")]
    DimensionCap { n: usize, cap: usize },
    #[error("site index {index} out of range 1..={n}")]
    IndexOutOfRange { index: usize, n: usize },
    #[error("invalid site range [{first}, {last}] for a chain of {n} sites")]
    InvalidRange { first: usize, last: usize, n: usize },
    #[error(
        "blocks [{left_first}, {left_last}] and [{right_first}, {right_last}] are not adjacent"
    )]
    NonAdjacentRanges {
        left_first: usize,
        left_last: usize,
        right_first: usize,
        right_last: usize,
    },
    #[error("spectral parameters {0} and {1} coincide")]
    CoincidentParameters(usize, usize),
    #[error("{m} excitations exceed chain length {n}")]
    TooManyExcitations { m: usize, n: usize },
    #[error("probe coincides with spectral parameter {0}")]
    ProbeCoincidesWithRoot(usize),
    #[error("Bethe vector vanishes")]
    ZeroVector,
    #[error("local vacuum eigenvalue vanishes at spectral parameter {0}")]
    VanishingLocalEigenvalue(usize),
    #[error("closed-form coordinate vector requires a homogeneous chain (homogeneous only)")]
    HomogeneousOnly,
    #[error("invalid split: {0}")]
    InvalidSplit(String),
    #[error(
        "Newton iteration did not converge after {iterations} iterations (residual {residual:e})"
    )]
    NoConvergence { iterations: usize, residual: f64 },
    #[error("roots {0} and {1} collapsed onto each other")]
    CollapsedRoots(usize, usize),
    #[error("degenerate Bethe solution: local vacuum eigenvalue vanishes at root {0}")]
    DegenerateSolution(usize),
    #[error("certified eigenvalue {tau} has no spectrum neighbour within {tolerance:e}")]
    UnmatchedCertificate { tau: String, tolerance: f64 },
    #[error("operation requires {0} mode")]
    WrongMode(&'static str),
    #[error("invalid configuration: {0}")]
    ConfigInvalid(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
