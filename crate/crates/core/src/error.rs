use thiserror::Error;

/// Errors produced by the numerical engine.
#[derive(Debug, Error)]
pub enum Error {
    /// A quantity was requested outside the domain where it is defined.
    #[error("domain error: {0}")]
    Domain(String),

    /// A permittivity model diverges at the requested frequency.
    #[error("{model} permittivity diverges at xi = {xi} rad/s")]
    Divergent { model: &'static str, xi: f64 },

    /// Invalid input data or parameters.
    #[error("invalid input: {0}")]
    Invalid(String),

    /// Optical data file could not be read or parsed.
    #[error("optical data {path}: line {line}: {message}")]
    Data {
        path: String,
        line: u64,
        message: String,
    },

    #[error("io error: {0}")]
    Io(#[from] std::io::Error),

    /// Adaptive quadrature ran out of panels before meeting tolerance.
    #[error(
        "quadrature did not converge after {panels} panels (last estimates {previous:e}, {last:e}; error {error:e})"
    )]
    Quadrature {
        panels: usize,
        previous: f64,
        last: f64,
        error: f64,
    },

    /// Failure inside a single Matsubara term.
    #[error("Matsubara term n = {n}: {source}")]
    Matsubara {
        n: usize,
        #[source]
        source: Box<Error>,
    },

    /// A stack violates a symmetry required by the requested quantity.
    #[error("stack symmetry violated: {0}")]
    Symmetry(String),
}

impl Error {
    /// True when the root cause is numerical non-convergence.
    pub fn is_convergence(&self) -> bool {
        match self {
            Error::Quadrature { .. } => true,
            Error::Matsubara { source, .. } => source.is_convergence(),
            _ => false,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
