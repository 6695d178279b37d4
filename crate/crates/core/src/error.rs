use std::path::PathBuf;

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    /// Argument outside the domain an evaluator supports.
    #[error("{function}: {detail}")]
    Domain {
        function: &'static str,
        detail: String,
    },

    #[error("invalid parameter `{field}`: {reason}")]
    InvalidParams { field: &'static str, reason: String },

    /// The combination w(z) vanishes, so ln u and everything built on it is singular.
    #[error("transformation function has a node near z = {z}")]
    Node { z: f64 },

    #[error(
        "erf special form is singular: need 2k_a > sqrt(pi)|k_b|, got k_a = {k_a}, k_b = {k_b}"
    )]
    Singular { k_a: f64, k_b: f64 },

    #[error("{what} did not converge within {terms} terms")]
    NonConvergence { what: &'static str, terms: usize },

    /// The two finite-difference resolutions disagree far more than truncation allows.
    #[error("finite-difference levels disagree by {disagreement:.3e} (limit {limit:.3e}); sampler not smooth at x = {x}, t = {t}")]
    StepSize {
        x: f64,
        t: f64,
        disagreement: f64,
        limit: f64,
    },

    #[error("grid mismatch: {0}")]
    GridMismatch(String),

    #[error("degenerate grid: {0}")]
    DegenerateGrid(String),

    #[error("field leaks to the box edge: edge/max = {ratio:.3e} at t = {t}")]
    BoundaryLeak { ratio: f64, t: f64 },

    #[error("configuration error in `{field}`: {reason}")]
    Config { field: String, reason: String },

    #[error("i/o error on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

impl Error {
    pub(crate) fn domain(function: &'static str, detail: impl Into<String>) -> Self {
        Error::Domain {
            function,
            detail: detail.into(),
        }
    }

    pub(crate) fn invalid(field: &'static str, reason: impl Into<String>) -> Self {
        Error::InvalidParams {
            field,
            reason: reason.into(),
        }
    }
}
