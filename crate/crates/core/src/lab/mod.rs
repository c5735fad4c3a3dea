//! Jacobi/Laplace mini-application: reference solver, corpus generator and
//! theoretical peak performance.

pub mod jacobi;
pub mod peak;
pub mod scalar;
pub mod variant;

use thiserror::Error;

pub use jacobi::{jacobi_solve, Boundary, JacobiField, JacobiParams};
pub use peak::{peak_flops, PeakSpec};
pub use scalar::Scalar;
pub use variant::{generate_variant, Variant, HEADER_LINES};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LabError {
    #[error("grid must be at least 3x3, got {nx}x{ny}")]
    GridTooSmall { nx: usize, ny: usize },
    #[error("tolerance must be positive and finite")]
    BadTolerance,
    #[error("max_iter must be at least 1")]
    BadMaxIter,
    #[error("{0} must be positive and finite")]
    NonPositive(&'static str),
}
