//! Fourier-space operator kernel on the unit torus.
//!
//! Real scalar fields are stored on the collocation grid; their Fourier
//! coefficients follow the convention `f(x) = sum_k fhat_k e^{2 pi i k.x}`
//! so that Plancherel reads `int |f|^2 = sum_k |fhat_k|^2` on the
//! unit-volume torus.

mod fft;
mod field;
mod grid;
mod ops;

pub use field::{Field, Spectrum, VectorField};
pub use grid::Grid;
pub use ops::{
    dealias, derivative, divergence, fractional_laplacian, gradient, homogeneous_sobolev_norm,
    inverse_laplacian, l2_norm, laplacian, multiply_dealiased, project_q, sobolev_norm, Axis2,
};

use thiserror::Error;

#[derive(Debug, Error)]
pub enum SpectralError {
    #[error("grid size must be even and at least 8, got {0}")]
    BadGridSize(usize),
    #[error("grids do not match: {0} vs {1}")]
    GridMismatch(usize, usize),
    #[error("Sobolev exponent must be nonnegative, got {0}")]
    NegativeExponent(f64),
}
