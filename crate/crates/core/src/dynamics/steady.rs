use num_complex::Complex64 as C64;

use crate::error::{Error, Result};
use crate::linalg::{inner, null_space, solve, ComplexMatrix};
use crate::state::{BasisTag, DensityMatrix};

use super::integrate::product_matrix;
use super::Model;

/// Relative singular-value threshold separating the stationary subspace.
const NULL_TOL: f64 = 1e-9;
/// Largest acceptable ‖L vec(ρ_s)‖ for a reported steady state.
const RESIDUAL_TOL: f64 = 1e-8;

/// Right and left null vectors of the Liouvillian.
#[derive(Debug, Clone)]
pub struct StationarySubspace {
    /// Column-stacked stationary operators, L r = 0.
    pub right: Vec<Vec<C64>>,
    /// Conserved quantities, L† l = 0.
    pub left: Vec<Vec<C64>>,
}

impl StationarySubspace {
    pub fn dim(&self) -> usize {
        self.right.len()
    }
}

pub fn stationary_subspace(model: &Model) -> Result<StationarySubspace> {
    let l = model.liouvillian().matrix;
    let right = null_space(&l, NULL_TOL)?;
    let left = null_space(&l.adjoint(), NULL_TOL)?;
    if right.len() != left.len() || right.is_empty() {
        return Err(Error::NumericalFailure(format!(
            "stationary subspace is ill-resolved ({} right vs {} left null vectors)",
            right.len(),
            left.len()
        )));
    }
    Ok(StationarySubspace { right, left })
}

/// ρ(∞) reached from ρ(0): the projection R (Λ†R)⁻¹ Λ† vec(ρ(0)) onto the
/// stationary subspace along the conserved quantities.
pub fn steady_state(model: &Model, rho0: &DensityMatrix) -> Result<DensityMatrix> {
    let v0 = product_matrix(model, rho0)?.vectorize();
    let sub = stationary_subspace(model)?;
    let k = sub.dim();
    let gram = ComplexMatrix::from_fn(k, |i, j| inner(&sub.left[i], &sub.right[j]));
    let overlaps: Vec<C64> = sub.left.iter().map(|l| inner(l, &v0)).collect();
    let coeffs = solve(&gram, &overlaps).map_err(|e| Error::NumericalFailure(format!("stationary projection failed: {e}")))?;

    let mut vs = vec![C64::new(0.0, 0.0); v0.len()];
    for (c, r) in coeffs.iter().zip(&sub.right) {
        for (x, y) in vs.iter_mut().zip(r) {
            *x += c * y;
        }
    }
    let rho = ComplexMatrix::unvectorize(&vs).hermitian_part();
    let tr = rho.trace().re;
    if !(tr.abs() > 1e-12) {
        return Err(Error::NumericalFailure("steady state has vanishing trace".into()));
    }
    let rho = rho.scale_real(1.0 / tr);
    let residual = model.liouvillian().apply(&rho).max_abs();
    if residual > RESIDUAL_TOL {
        return Err(Error::NumericalFailure(format!("steady-state residual {residual:e} too large")));
    }
    Ok(DensityMatrix::from_trusted(rho, BasisTag::Product))
}
