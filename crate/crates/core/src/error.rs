use thiserror::Error;

/// Errors raised by constructions, solvers and checks in this crate.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("dimension mismatch in {op}: {left_rows}x{left_cols} vs {right_rows}x{right_cols}")]
    DimensionMismatch {
        op: &'static str,
        left_rows: usize,
        left_cols: usize,
        right_rows: usize,
        right_cols: usize,
    },

    #[error("matrix must be square, got {rows}x{cols}")]
    NotSquare { rows: usize, cols: usize },

    #[error("{what} is not symmetric: entries ({i}, {j}) and ({j}, {i}) differ by {gap:e}")]
    NotSymmetric {
        what: &'static str,
        i: usize,
        j: usize,
        gap: f64,
    },

    #[error("non-finite value at ({row}, {col})")]
    NonFinite { row: usize, col: usize },

    #[error("empty input: {0}")]
    Empty(&'static str),

    #[error("{method} did not converge after {iterations} iterations")]
    NoConvergence {
        method: &'static str,
        iterations: usize,
    },

    #[error("dimension {dim} exceeds the limit {limit} of {op}")]
    TooLarge {
        op: &'static str,
        dim: usize,
        limit: usize,
    },

    #[error("eigenpair residual {residual:e} exceeds {bound:e} ({context})")]
    EigenpairResidual {
        context: String,
        residual: f64,
        bound: f64,
    },

    #[error("eigenvalue {value} of block {block} has no match within {tol:e} in the supplied spectrum")]
    EigenvalueNotInSpectrum { block: usize, value: f64, tol: f64 },

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("infeasible construction: {0}")]
    Infeasible(String),

    #[error("graph error: {0}")]
    Graph(String),

    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
}

pub type Result<T> = std::result::Result<T, Error>;
