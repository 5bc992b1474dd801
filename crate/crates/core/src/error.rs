use thiserror::Error;

/// Errors produced while building problems or computing collocation solutions.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    #[error("adaptive quadrature on [{a}, {b}] did not converge (error estimate {estimate:e})")]
    QuadratureFailure { a: f64, b: f64, estimate: f64 },

    #[error("{what} produced a non-finite value at {point}")]
    NonFinite { what: &'static str, point: f64 },

    #[error("evaluation failed at interval {interval}: {detail}")]
    Step { interval: usize, detail: String },

    #[error("no intersection on the common grid (closest approach |d| = {min_gap:e} at c = {at})")]
    NoIntersection { min_gap: f64, at: f64 },

    #[error("curves coincide on the whole grid")]
    CurvesCoincide,
}

pub type Result<T> = std::result::Result<T, Error>;
