use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("weight {0} is not in [0, 1]")]
    InvalidWeight(f64),

    #[error("expected a finite positive value, got {0}")]
    NotPositive(f64),

    #[error("integrand is not finite at node {node} (value {value})")]
    NonFiniteIntegrand { node: f64, value: f64 },

    #[error("quadrature order {0} outside [2, 256]")]
    InvalidOrder(usize),

    #[error("invalid interval [{lo}, {hi}]")]
    InvalidInterval { lo: f64, hi: f64 },

    #[error("function is not finite at eigenvalue {eigenvalue} (value {value})")]
    NonFiniteSpectral { eigenvalue: f64, value: f64 },

    #[error("non-finite value {value} in {context}")]
    NonFinite { context: &'static str, value: f64 },

    #[error("dimension mismatch: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },

    #[error("matrix data has length {len}, expected {expected} for dim {dim}")]
    BadShape { dim: usize, len: usize, expected: usize },

    #[error("matrix is not symmetric: |a_ij - a_ji| = {asymmetry:e} exceeds {limit:e}")]
    NotSymmetric { asymmetry: f64, limit: f64 },

    #[error("matrix is not positive definite: lambda_min = {min:e}, lambda_max = {max:e}")]
    NotPositiveDefinite { min: f64, max: f64 },

    #[error("condition number {cond:e} exceeds 1e12; rescale the input")]
    IllConditioned { cond: f64 },

    #[error("congruence matrix is singular or nearly so (condition number {cond:e})")]
    SingularCongruence { cond: f64 },

    #[error("Jacobi eigensolver did not converge after {sweeps} sweeps (off-diagonal norm {off:e})")]
    NoConvergence { sweeps: usize, off: f64 },

    #[error("sample points must be distinct and positive (offending point {0})")]
    BadPoints(f64),

    #[error("representing function is not normalized: f(1) = {0}")]
    NotNormalized(f64),

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error("matrix parse error: {0}")]
    Parse(String),
}
