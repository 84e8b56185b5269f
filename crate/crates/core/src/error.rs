use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("matrix is not Hermitian (max |M - M^dagger| = {residual:.3e})")]
    NonHermitianInput { residual: f64 },

    #[error("matrix is not positive semidefinite (min eigenvalue {min_eigenvalue:.3e})")]
    NotPsd { min_eigenvalue: f64 },

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("invalid subsystem selection: {0}")]
    BadSubsystem(String),

    #[error("trace is {trace}, expected 1")]
    Trace { trace: f64 },

    #[error("diagonal entry {index} is negative ({value:.3e})")]
    NegativeDiagonal { index: usize, value: f64 },

    #[error("coherence of block {block} violates |c|^2 <= product of its diagonals")]
    CoherenceTooLarge { block: usize },

    #[error("matrix has weight outside the X pattern (max |entry| = {residual:.3e})")]
    NotXShaped { residual: f64 },

    #[error("parameter {name} = {value} outside its domain {domain}")]
    Domain { name: &'static str, value: f64, domain: &'static str },

    #[error("state vector is not normalized (norm {norm})")]
    NotNormalized { norm: f64 },

    #[error("state is outside the class covered by the closed form: {0}")]
    OutOfClass(String),

    #[error("state is not invariant under qubit permutations (residual {residual:.3e})")]
    NotSymmetric { residual: f64 },

    #[error("closed form is undefined at this point: {0}")]
    NumericalDomain(String),

    #[error("could not parse state record: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
