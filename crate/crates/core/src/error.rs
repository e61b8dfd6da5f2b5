//! Error type shared by every module of the crate.

use thiserror::Error;

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    /// Input data cannot be scored (constant column, too few rows, ...).
    #[error("degenerate input: {0}")]
    DegenerateInput(String),

    /// A parameter left its valid domain (e.g. non-positive scale).
    #[error("domain error: {0}")]
    Domain(String),

    /// Shapes of operands do not line up.
    #[error("dimension error: {0}")]
    Dimension(String),

    /// Cholesky factorization hit a non-positive pivot.
    #[error("matrix is not positive definite: pivot {pivot} is non-positive")]
    NotPositiveDefinite { pivot: usize },

    /// The ELBO became non-finite during optimization.
    #[error("optimization diverged: non-finite ELBO at step {step}")]
    Divergence { step: usize },

    /// Both code lengths are non-positive; the confidence quotient is undefined.
    #[error("degenerate score: max code length {max} is not positive")]
    DegenerateScore { max: f64 },

    /// A text input failed to parse. `line` and `column` are 1-based.
    #[error("parse error in {path} at line {line}, column {column}: {message}")]
    Parse {
        path: String,
        line: usize,
        column: usize,
        message: String,
    },

    #[error("I/O error on {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },

    /// An error that occurred while processing a named dataset.
    #[error("dataset '{name}': {source}")]
    InDataset {
        name: String,
        #[source]
        source: Box<Error>,
    },

    /// An error that occurred inside a sweep cell.
    #[error("cell (dim_x={dim_x}, dim_z={dim_z}): {source}")]
    InCell {
        dim_x: usize,
        dim_z: usize,
        #[source]
        source: Box<Error>,
    },
}

impl Error {
    /// Attach a dataset name to an error bubbling out of inference.
    pub fn in_dataset(self, name: &str) -> Error {
        Error::InDataset {
            name: name.to_string(),
            source: Box::new(self),
        }
    }

    /// Attach sweep-cell coordinates.
    pub fn in_cell(self, dim_x: usize, dim_z: usize) -> Error {
        Error::InCell {
            dim_x,
            dim_z,
            source: Box::new(self),
        }
    }

    /// Walk through the context wrappers to the underlying cause.
    pub fn root(&self) -> &Error {
        match self {
            Error::InDataset { source, .. } => source.root(),
            Error::InCell { source, .. } => source.root(),
            other => other,
        }
    }
}
