//! Crate-wide error type.

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, Error, PartialEq)]
pub enum Error {
    #[error("entry {index} is not finite")]
    NonFiniteEntry { index: usize },

    #[error("matrix shape {rows}x{cols} does not match {len} entries")]
    ShapeMismatch { rows: usize, cols: usize, len: usize },

    #[error("dimension mismatch: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },

    #[error("matrix must be nonzero")]
    ZeroMatrix,

    #[error("matrix must be square, got {rows}x{cols}")]
    NotSquare { rows: usize, cols: usize },

    #[error("matrix is not Hermitian: entries ({row},{col}) and ({col},{row}) differ by {deviation:.3e}")]
    NotHermitian {
        row: usize,
        col: usize,
        deviation: f64,
    },

    #[error("dense dimension {dim} exceeds the supported maximum {max}")]
    DenseDimensionTooLarge { dim: usize, max: usize },

    #[error("power iteration did not converge after {iterations} iterations (estimate {estimate:.12e}, residual {residual:.3e})")]
    NonConvergence {
        iterations: usize,
        estimate: f64,
        residual: f64,
    },

    #[error("qubit count {n} outside supported range {min}..={max}")]
    QubitCountOutOfRange { n: usize, min: usize, max: usize },

    #[error("state is not normalized: squared norm {norm_sq} deviates from 1 beyond {tol:.1e}")]
    NotNormalized { norm_sq: f64, tol: f64 },

    #[error("ensemble weights sum to {sum}, expected 1")]
    WeightsNotNormalized { sum: f64 },

    #[error("ensemble weight {weight} outside (0, 1]")]
    InvalidWeight { weight: f64 },

    #[error("density matrix trace {trace} deviates from 1")]
    InvalidTrace { trace: f64 },

    #[error("density matrix is not positive semidefinite: smallest eigenvalue {min_eigenvalue:.3e}")]
    NotPositive { min_eigenvalue: f64 },

    #[error("invalid permutation: {reason}")]
    InvalidPermutation { reason: String },

    #[error("invalid bipartition subset: {reason}")]
    InvalidSubset { reason: String },

    #[error("witness coefficient {alpha} outside (0, 1)")]
    AlphaOutOfRange { alpha: f64 },

    #[error("trace value {trace} outside the global witness bounds [{min:.6}, {max:.6}] beyond tolerance")]
    TraceOutOfBounds { trace: f64, min: f64, max: f64 },

    #[error("bipartition size {k} outside 1..={max}")]
    SubsetSizeOutOfRange { k: usize, max: usize },

    #[error("grid of {points} product states exceeds the maximum {max}")]
    GridTooLarge { points: u128, max: u128 },

    #[error("full-grid oracle supports at most {max} qubits, got {n}")]
    GridQubitsOutOfRange { n: usize, max: usize },

    #[error("invalid parameter range: {reason}")]
    InvalidRange { reason: String },

    #[error("invalid {field}: {message}")]
    InvalidField { field: String, message: String },

    #[error("unknown family {name:?}")]
    UnknownFamily { name: String },

    #[error("{0}")]
    InvalidInput(String),
}
