use thiserror::Error;

/// Everything that can go wrong in the exact engines and the numeric oracle.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("singular series division: constant term `{0}` is not invertible")]
    SingularDivision(String),

    #[error("C applied to a constant term (log-divergent at the origin): {0}")]
    DivergentInput(String),

    #[error("Green operator argument is not mean-zero (mean = {0})")]
    MeanNotSubtracted(String),

    #[error("input already carries the divergent D̄·1 channel")]
    OmegaInInput,

    #[error("negative r-power from r^{n} ξ^{m}")]
    NegativePower { n: u32, m: u32 },

    #[error("divergent D̄·1 channel did not cancel, residue: {0}")]
    CancellationFailure(String),

    #[error("quadrature failed to converge after {subdivisions} subdivisions (error estimate {estimate:e})")]
    Quadrature { subdivisions: usize, estimate: f64 },

    #[error("eigenvalue bisection failed to converge")]
    Bisection,

    #[error("invalid configuration: {0}")]
    Config(String),
}

pub type Result<T> = std::result::Result<T, Error>;
