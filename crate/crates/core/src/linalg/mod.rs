//! Dense complex linear algebra for the small dimensions this crate needs:
//! Hilbert spaces of at most 8 states and superoperators of at most 64×64.
//!
//! Everything here is a pure function of its inputs.

mod decomp;
mod eigen;
mod expm;
mod matrix;

pub use decomp::{inverse, null_space, singular_values, solve, svd, Svd};
pub use eigen::{eig_general, eig_hermitian, EigenDecomposition};
pub use expm::expm;
pub use matrix::{inner, vec_norm, ComplexMatrix};

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum LinalgError {
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("{routine} did not converge after {iterations} iterations")]
    NoConvergence { routine: &'static str, iterations: usize },
    #[error("matrix is singular to working precision")]
    Singular,
}

pub type Result<T> = std::result::Result<T, LinalgError>;

/// Eigenvalues in [-`PSD_CLAMP`, 0) are treated as round-off and clamped to zero.
pub const PSD_CLAMP: f64 = 1e-9;

/// Hermitian tolerance accepted by [`eig_hermitian`] and [`sqrtm_psd`].
pub const HERMITIAN_TOL: f64 = 1e-9;

/// Principal square root of a Hermitian positive semidefinite matrix.
///
/// Eigenvalues above `-PSD_CLAMP` but below zero are clamped to zero, as are
/// positive eigenvalues indistinguishable from zero at working precision
/// (below `dim * eps * λ_max`).
pub fn sqrtm_psd(m: &ComplexMatrix) -> Result<ComplexMatrix> {
    let eig = eig_hermitian(m)?;
    let values: Vec<f64> = eig.values.iter().map(|z| z.re).collect();
    let lambda_max = values.iter().copied().fold(0.0_f64, f64::max);
    let noise = m.dim() as f64 * f64::EPSILON * lambda_max;
    let mut roots = Vec::with_capacity(values.len());
    for &v in &values {
        if v < -PSD_CLAMP {
            return Err(LinalgError::InvalidInput(format!("matrix is not positive semidefinite (eigenvalue {v:e})")));
        }
        roots.push(if v <= noise { 0.0 } else { v.sqrt() });
    }
    let n = m.dim();
    let vecs = &eig.vectors;
    Ok(ComplexMatrix::from_fn(n, |i, j| (0..n).map(|k| vecs[(i, k)] * roots[k] * vecs[(j, k)].conj()).sum()))
}
