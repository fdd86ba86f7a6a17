//! Error type shared by all modules.

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: {context} (expected {expected}, got {got})")]
    DimensionMismatch {
        context: &'static str,
        expected: String,
        got: String,
    },

    #[error("matrix is not square: {rows}x{cols}")]
    NotSquare { rows: usize, cols: usize },

    #[error("index out of range: {context} (index {index}, limit {limit})")]
    IndexOutOfRange {
        context: &'static str,
        index: usize,
        limit: usize,
    },

    #[error("non-finite value at {context}")]
    NonFinite { context: &'static str },

    #[error("empty dimension: {context}")]
    EmptyDimension { context: &'static str },

    #[error("QZ iteration failed to converge after {iterations} iterations (n = {n})")]
    QzIterationFailure { iterations: usize, n: usize },

    #[error("blocks cannot be swapped: {reason}")]
    SwapNotPossible { reason: String },

    #[error("pencil is identically singular")]
    IdenticallySingularPencil,

    #[error("pencil is not identically singular (max scaled |det| = {max_scaled_det:.3e})")]
    NotSingularPencil { max_scaled_det: f64 },

    #[error(
        "no common zero found on the diagonals (smallest |F| diagonal = {min_f_diag:.3e}, \
         smallest |G| diagonal = {min_g_diag:.3e})"
    )]
    NumericalBreakdown { min_f_diag: f64, min_g_diag: f64 },

    #[error("array is not an interior point: {reason}")]
    NotInterior { reason: String },

    #[error("matrix is not column-orthonormal: {context} (residual {residual:.3e})")]
    NotOrthonormal { context: &'static str, residual: f64 },

    #[error("invalid rank R = {rank}: must satisfy 1 <= R <= min(I, J) = {limit}")]
    InvalidRank { rank: usize, limit: usize },

    #[error("matrix is not upper triangular: {context}")]
    NotUpperTriangular { context: &'static str },

    #[error("invalid input: {0}")]
    InvalidInput(String),
}
