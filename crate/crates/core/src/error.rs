use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("deformation parameter q = {0} is outside (0, 1]")]
    InvalidQ(f64),
    #[error("q = {0} is too close to the classical limit; use q = 1 exactly or q <= 1 - 1e-9")]
    ClassicalLimitTooClose(f64),
    #[error("q-factorial of {n} overflows")]
    Overflow { n: u32 },
    #[error("domain error: {0}")]
    Domain(String),
    #[error("quadrature did not converge: value {value}, error estimate {error:e} after {evaluations} evaluations")]
    NoConvergence { value: f64, error: f64, evaluations: usize },
    #[error("integrand is not finite at x = {x}")]
    NonFiniteIntegrand { x: f64 },
    #[error("no effective support found within |x| <= 1e6")]
    SupportNotFound,
    #[error("no bound states: lambda*q = {lambda_q} < 1/2")]
    NoBoundStates { lambda_q: f64 },
    #[error("quantum number {n} exceeds n_max = {n_max}")]
    StateOutOfRange { n: u32, n_max: u32 },
    #[error("density is not normalized: integral = {norm}")]
    NotNormalized { norm: f64 },
    #[error("complexity {c} is below the lower bound 1")]
    ComplexityBound { c: f64 },
    #[error("invalid molecule {name}: {reason}")]
    InvalidMolecule { name: String, reason: String },
    #[error("invalid distribution: {0}")]
    InvalidDistribution(String),
}

pub type Result<T> = std::result::Result<T, Error>;
