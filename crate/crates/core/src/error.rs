use thiserror::Error;

use crate::taylor::GateVerdict;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("matrix has zero dimension")]
    Empty,

    #[error("matrix is not square: {rows}x{cols}")]
    NotSquare { rows: usize, cols: usize },

    #[error("dimension mismatch: expected {expected}, got {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("matrix is not symmetric: max asymmetry {asymmetry:e} exceeds {tolerance:e}")]
    NotSymmetric { asymmetry: f64, tolerance: f64 },

    #[error("matrix contains a non-finite entry")]
    NonFinite,

    #[error("eigensolver did not converge after {sweeps} sweeps (off-diagonal mass {off_diagonal:e}, target {target:e})")]
    NoConvergence {
        sweeps: usize,
        off_diagonal: f64,
        target: f64,
    },

    #[error("matrix is not positive definite: lambda_min = {lambda_min:e}")]
    NotPositiveDefinite { lambda_min: f64 },

    #[error("order {order} exceeds the supported maximum {max}")]
    OrderTooLarge { order: usize, max: usize },

    #[error("derivative order must be at least 1")]
    ZeroOrder,

    #[error("perturbation gate failed ({verdict}): the segment A + eps*H leaves the SPD cone")]
    GateFailed { verdict: GateVerdict },

    #[error("invalid quadrature: {0}")]
    InvalidQuadrature(String),
}

pub type Result<T> = std::result::Result<T, Error>;
