use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::linalg::{expm, ComplexMatrix};
use crate::state::{BasisTag, DensityMatrix};

use super::Model;

/// Default fixed integration step (dimensionless time).
pub const DEFAULT_DT: f64 = 1e-3;

/// Largest allowed dt·(γN² + gN²) for the direct RK4 integrator.
const RK4_STABILITY_MARGIN: f64 = 0.1;

/// Checks that a time grid is non-empty, starts at 0 and strictly increases.
pub fn validate_grid(t_grid: &[f64]) -> Result<()> {
    let Some(&first) = t_grid.first() else {
        return Err(Error::invalid("time grid is empty"));
    };
    if first != 0.0 {
        return Err(Error::invalid(format!("time grid must start at 0, starts at {first}")));
    }
    if t_grid.iter().any(|t| !t.is_finite()) {
        return Err(Error::invalid("time grid contains non-finite values"));
    }
    if let Some(w) = t_grid.windows(2).find(|w| w[1] <= w[0]) {
        return Err(Error::invalid(format!("time grid is not strictly increasing ({} then {})", w[0], w[1])));
    }
    Ok(())
}

/// Splits [a, b] into the fewest equal steps no longer than `dt`.
pub(crate) fn substeps(span: f64, dt: f64) -> (usize, f64) {
    let steps = ((span / dt) * (1.0 - 1e-12)).ceil().max(1.0) as usize;
    (steps, span / steps as f64)
}

pub(crate) fn product_matrix(model: &Model, rho0: &DensityMatrix) -> Result<ComplexMatrix> {
    let n = model.params().n_qubits;
    let m = match rho0.basis() {
        BasisTag::Product => rho0.matrix().clone(),
        BasisTag::Collective => crate::hilbert::collective_basis(n)?.to_product(rho0.matrix()),
    };
    if m.dim() != model.dim() {
        return Err(Error::invalid(format!("initial state has dimension {}, model expects {}", m.dim(), model.dim())));
    }
    Ok(m)
}

/// Integrates the master equation directly with classical fourth-order
/// Runge-Kutta at fixed step `dt` (shortened per interval to land on the grid).
pub fn rk4_solve(model: &Model, rho0: &DensityMatrix, t_grid: &[f64], dt: f64) -> Result<Vec<DensityMatrix>> {
    validate_grid(t_grid)?;
    let p = model.params();
    let n2 = (p.n_qubits * p.n_qubits) as f64;
    if !(dt > 0.0) || !dt.is_finite() {
        return Err(Error::invalid(format!("step dt must be positive, got {dt}")));
    }
    if dt * (p.gamma * n2 + p.g * n2) > RK4_STABILITY_MARGIN {
        return Err(Error::invalid(format!(
            "step dt = {dt} violates the stability bound dt·(γ+g)N² ≤ {RK4_STABILITY_MARGIN}"
        )));
    }
    let mut rho = product_matrix(model, rho0)?;
    let mut out = Vec::with_capacity(t_grid.len());
    out.push(DensityMatrix::from_trusted(rho.clone(), BasisTag::Product));
    for w in t_grid.windows(2) {
        let (steps, h) = substeps(w[1] - w[0], dt);
        for _ in 0..steps {
            let k1 = model.lindblad_generator(&rho)?;
            let mut y = rho.clone();
            y.axpy(h / 2.0, &k1);
            let k2 = model.lindblad_generator(&y)?;
            let mut y = rho.clone();
            y.axpy(h / 2.0, &k2);
            let k3 = model.lindblad_generator(&y)?;
            let mut y = rho.clone();
            y.axpy(h, &k3);
            let k4 = model.lindblad_generator(&y)?;
            rho.axpy(h / 6.0, &k1);
            rho.axpy(h / 3.0, &k2);
            rho.axpy(h / 3.0, &k3);
            rho.axpy(h / 6.0, &k4);
        }
        out.push(DensityMatrix::from_trusted(rho.clone(), BasisTag::Product));
    }
    Ok(out)
}

/// Propagates vec(ρ) with exp(L Δt) between consecutive grid points.
pub fn liouvillian_solve(model: &Model, rho0: &DensityMatrix, t_grid: &[f64]) -> Result<Vec<DensityMatrix>> {
    validate_grid(t_grid)?;
    let l = model.liouvillian();
    let mut v = product_matrix(model, rho0)?.vectorize();
    let mut propagators: HashMap<u64, ComplexMatrix> = HashMap::new();
    let mut out = Vec::with_capacity(t_grid.len());
    out.push(DensityMatrix::from_trusted(ComplexMatrix::unvectorize(&v), BasisTag::Product));
    for w in t_grid.windows(2) {
        let span = w[1] - w[0];
        let prop = match propagators.get(&span.to_bits()) {
            Some(p) => p,
            None => {
                let p = expm(&l.matrix.scale_real(span))?;
                propagators.entry(span.to_bits()).or_insert(p)
            }
        };
        v = prop.mul_vec(&v);
        out.push(DensityMatrix::from_trusted(ComplexMatrix::unvectorize(&v), BasisTag::Product));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hilbert::{product_state, ModelParams};

    fn model(n: usize, g: f64, gamma: f64) -> Model {
        Model::new(ModelParams::new(n, g, gamma).unwrap()).unwrap()
    }

    #[test]
    fn grid_validation() {
        assert!(validate_grid(&[]).is_err());
        assert!(validate_grid(&[0.1, 0.2]).is_err());
        assert!(validate_grid(&[0.0, 0.2, 0.2]).is_err());
        assert!(validate_grid(&[0.0, 0.3, 0.2]).is_err());
        assert!(validate_grid(&[0.0]).is_ok());
        assert!(validate_grid(&[0.0, 0.5, 2.0]).is_ok());
    }

    #[test]
    fn substeps_land_on_the_grid() {
        assert_eq!(substeps(0.1, 1e-3).0, 100);
        assert_eq!(substeps(0.1005, 1e-3).0, 101);
        assert_eq!(substeps(1e-5, 1e-3).0, 1);
    }

    #[test]
    fn unitary_limit_preserves_purity() {
        let m = model(2, 1.0, 0.0);
        let grid: Vec<f64> = (0..=20).map(|k| k as f64 * 0.5).collect();
        let states = rk4_solve(&m, &product_state("+-").unwrap(), &grid, DEFAULT_DT).unwrap();
        for s in &states {
            assert!((s.purity() - 1.0).abs() < 1e-7);
        }
    }

    #[test]
    fn no_coupling_no_decay_is_constant() {
        let m = model(2, 0.0, 0.0);
        let rho0 = product_state("+-").unwrap();
        let states = rk4_solve(&m, &rho0, &[0.0, 1.0, 5.0], DEFAULT_DT).unwrap();
        for s in &states {
            assert!(s.matrix().approx_eq(rho0.matrix(), 0.0));
        }
    }

    #[test]
    fn stability_bound_enforced() {
        let m = model(3, 1.0, 0.1);
        assert!(rk4_solve(&m, &product_state("+-+").unwrap(), &[0.0, 1.0], 0.05).is_err());
        assert!(rk4_solve(&m, &product_state("+-+").unwrap(), &[0.0, 1.0], 0.0).is_err());
    }

    #[test]
    fn liouvillian_route_matches_rk4() {
        let m = model(2, 1.0, 0.1);
        let rho0 = product_state("+-").unwrap();
        let grid: Vec<f64> = (0..=10).map(|k| k as f64).collect();
        let a = rk4_solve(&m, &rho0, &grid, DEFAULT_DT).unwrap();
        let b = liouvillian_solve(&m, &rho0, &grid).unwrap();
        for (x, y) in a.iter().zip(&b) {
            assert!(x.matrix().approx_eq(y.matrix(), 1e-7));
        }
    }
}
