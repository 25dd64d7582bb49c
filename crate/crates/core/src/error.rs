use thiserror::Error;

/// Errors raised across the library.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("syntax error at position {pos}: {msg}")]
    Syntax { pos: usize, msg: String },

    #[error("polynomial is identically zero")]
    ZeroPolynomial,

    #[error("non-integer coefficient `{0}`")]
    NonInteger(String),

    #[error("root finder did not converge after {iterations} sweeps (max residual {max_residual:e})")]
    NoConvergence {
        iterations: usize,
        max_residual: f64,
        best: Vec<(f64, f64)>,
    },

    #[error("invalid input: {0}")]
    Invalid(String),

    #[error("argument {0} lies on the branch cut [1, inf)")]
    BranchCut(f64),

    #[error("{0} is not a fundamental discriminant")]
    NotFundamental(i64),

    #[error("unsupported field: {0}")]
    UnsupportedField(String),

    #[error("polynomial is reducible over C: {0}")]
    Reducible(String),

    #[error("the curve meets the torus in a continuum")]
    ToricContinuum,

    #[error("branch tracking failed near phi = {phi}: {msg}")]
    Tracking { phi: f64, msg: String },

    #[error("arc endpoint ({x_re}, {x_im}), ({y_re}, {y_im}) matches no toric point")]
    UnmatchedEndpoint {
        x_re: f64,
        x_im: f64,
        y_re: f64,
        y_im: f64,
    },

    #[error("pullback failed at arc node {node} (phi = {phi}): {msg}")]
    Pullback { node: usize, phi: f64, msg: String },

    #[error("several edges face the origin at the toric point ({0} edges)")]
    MultipleFacingEdges(usize),

    #[error("inconsistent measure: evaluation gives {theorem}, quadrature gives {quadrature} (bound {bound:e})")]
    Inconsistent {
        theorem: f64,
        quadrature: f64,
        bound: f64,
    },

    #[error("conjugate parametrizations disagree: {0:?}")]
    GaloisMismatch(Vec<f64>),

    #[error("parse error: {0}")]
    Format(String),
}

pub type Result<T> = std::result::Result<T, Error>;
