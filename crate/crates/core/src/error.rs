use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("trace is within tolerance of ±2 (|tr| - 2 = {excess:e}); raise the precision")]
    IndeterminateClass { excess: f64 },

    #[error("element is not hyperbolic")]
    NotHyperbolic,

    #[error("determinant deviates from 1 by {deviation:e}")]
    NotUnimodular { deviation: f64 },

    #[error("distinct words {first:?} and {second:?} agree to the working tolerance but differ at escalated precision")]
    PrecisionExhausted { first: Vec<i32>, second: Vec<i32> },

    #[error("primitivity of the element is not certified at search radius {radius}")]
    InconclusivePrimitivity { radius: usize },

    #[error("ball enumeration is incomplete: {0}")]
    IncompleteBall(String),

    #[error("fundamental domain could not be certified: {0}")]
    FundamentalDomain(String),

    #[error("truncated product tail bound {bound:e} exceeds 1e-3")]
    DivergentTail { bound: f64 },

    #[error("Re(lambda) = {re} is outside the convergence region Re(lambda) > 1/2 + {margin}")]
    OutsideConvergence { re: f64, margin: f64 },

    #[error("lambda = 0 is excluded")]
    UnsupportedLambda,

    #[error("mu(lambda) = {mu} is at or above the spectrum completeness bound {complete_below}")]
    UnknownSpectralRegion { mu: f64, complete_below: f64 },

    #[error("lambda = {0} is a pole")]
    PoleHit(String),

    #[error("calibration needs at least two sample points, got {0}")]
    InsufficientSamples(usize),

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("parse error at line {line}: {message}")]
    Parse { line: usize, message: String },
}

pub type Result<T> = std::result::Result<T, Error>;
