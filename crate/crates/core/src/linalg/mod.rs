//! Dense complex linear algebra and superoperators.

mod complex;
pub mod eigen;
mod matrix;
mod superop;

use thiserror::Error;

pub use complex::Complex;
pub use matrix::ComplexMatrix;
pub use superop::{Discrepancy, Superoperator};

/// Default tolerance for semantic comparisons.
pub const DEFAULT_TOL: f64 = 1e-9;
/// Tolerance for positive-semidefiniteness checks.
pub const PSD_TOL: f64 = 1e-7;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum LinalgError {
    #[error("shape mismatch: {0}")]
    Shape(String),
    #[error("matrix is {0}x{1}, expected square")]
    NotSquare(usize, usize),
    #[error("{rows}x{cols} matrix needs {} entries, got {len}", rows * cols)]
    BadLength { rows: usize, cols: usize, len: usize },
    #[error("matrix is not unitary")]
    NotUnitary,
    #[error("malformed matrix json: {0}")]
    Json(String),
}
