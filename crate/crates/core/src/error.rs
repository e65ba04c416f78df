use thiserror::Error;

/// Errors raised across the library.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("gamma function pole at {re}{im:+}i")]
    Pole { re: f64, im: f64 },

    #[error("non-finite input: {0}")]
    NonFinite(&'static str),

    #[error("overflow in linear-domain evaluation of {0}")]
    Overflow(&'static str),

    #[error("invalid parameters: {0}")]
    Param(String),

    #[error("parameter constraint violated: {0}")]
    Constraint(String),

    #[error("wrong regime: {0}")]
    Regime(String),

    #[error("outside domain: {0}")]
    Domain(String),

    #[error("degenerate recursion at n = {n}: denominator {denominator:e} vanishes")]
    DegenerateRecursion { n: usize, denominator: f64 },

    #[error("quadrature did not reach tolerance {tol:e} (last delta {delta:e})")]
    Quadrature { tol: f64, delta: f64 },

    #[error("series did not converge after {terms} terms")]
    Convergence { terms: usize },

    #[error("least-squares fit is rank deficient (det = {det:e})")]
    FitDegenerate { det: f64 },
}

pub type Result<T> = std::result::Result<T, Error>;
