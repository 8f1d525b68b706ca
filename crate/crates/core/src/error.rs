use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("covariance matrix is not a physical state: {0}")]
    NonPhysical(String),

    #[error("matrix is singular (|det| = {0:e})")]
    Singular(f64),

    #[error("standard-form reduction is degenerate: {0}")]
    Degenerate(String),

    #[error("argument {arg} = {value} outside the domain of {func}")]
    Domain {
        func: &'static str,
        arg: &'static str,
        value: f64,
    },

    #[error("parameter out of range: {0}")]
    OutOfRange(String),

    #[error("photon-number cutoff exceeded the cap of {cap} with tail mass {tail_mass:e} (target {tail_tol:e})")]
    Convergence {
        cap: usize,
        tail_mass: f64,
        tail_tol: f64,
    },

    #[error("photon probability p({m},{n}) = {value:e} is negative beyond round-off")]
    Precision { m: usize, n: usize, value: f64 },

    #[error("optimizer disagreement in {context}: closed form {closed:.12} vs numeric {numeric:.12}")]
    OptimizerDisagreement {
        context: &'static str,
        closed: f64,
        numeric: f64,
    },

    #[error("sampler rejected {0} consecutive candidates")]
    SamplingExhausted(usize),

    #[error("no sign change of MID - Gaussian AMID for a = {a}")]
    NoCrossing { a: f64 },

    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
