use thiserror::Error;

/// Errors raised by the solver layers.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("Kummer parameter b = {b} is a non-positive integer (pole)")]
    Pole { b: f64 },

    #[error("series did not converge after {terms} terms")]
    NonConvergence { terms: usize },

    #[error("domain error: {0}")]
    Domain(String),

    #[error("branch error: {0}")]
    Branch(String),

    #[error("no root found for {what} on [{lo}, {hi}]")]
    NoRootFound { what: String, lo: f64, hi: f64 },

    #[error("grid error: {0}")]
    Grid(String),

    #[error("inverse iteration did not converge after {sweeps} sweeps")]
    Convergence { sweeps: usize },

    #[error("node mismatch: expected {expected} nodes, found {found}")]
    NodeMismatch { expected: usize, found: usize },

    #[error("integration error: {0}")]
    Integration(String),
}

pub type Result<T> = std::result::Result<T, Error>;
