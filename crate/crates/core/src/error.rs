use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = DpgError> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum DpgError {
    #[error("matrix is not positive definite: pivot {index} is {pivot:e}")]
    NotPositiveDefinite { index: usize, pivot: f64 },

    #[error("local Gram system on coarse cell {cell} failed")]
    LocalGram {
        cell: usize,
        #[source]
        source: Box<DpgError>,
    },

    #[error("singular affine map (det = {det:e})")]
    SingularJacobian { det: f64 },

    #[error("point ({0}, {1}) lies outside the reference triangle")]
    OutsideReference(f64, f64),

    #[error("no quadrature rule of exactness {degree} (max {max})")]
    QuadratureDegree { degree: usize, max: usize },

    #[error("invalid integral term: {0}")]
    InvalidTerm(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("cell {cell} is not adjacent to face {face}")]
    NotAdjacent { face: usize, cell: usize },

    #[error("NaN encountered in iteration {iteration}")]
    NanEncountered { iteration: usize },

    #[error("unknown {kind} strategy `{name}` (available: {available})")]
    UnknownStrategy {
        kind: &'static str,
        name: String,
        available: String,
    },

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

impl DpgError {
    pub fn on_cell(self, cell: usize) -> Self {
        DpgError::LocalGram {
            cell,
            source: Box::new(self),
        }
    }
}
