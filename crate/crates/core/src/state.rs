use crate::error::{Error, Result};
use crate::hilbert::CollectiveBasis;
use crate::linalg::{eig_hermitian, ComplexMatrix};

/// Trace-1 tolerance for a physical state.
pub const TRACE_TOL: f64 = 1e-8;
/// Hermiticity tolerance for a physical state.
pub const HERMITIAN_TOL: f64 = 1e-8;
/// Most negative eigenvalue tolerated in a physical state.
pub const POSITIVITY_TOL: f64 = 1e-7;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BasisTag {
    Product,
    Collective,
}

/// A system state ρ: trace one, Hermitian, positive semidefinite.
#[derive(Debug, Clone)]
pub struct DensityMatrix {
    matrix: ComplexMatrix,
    basis: BasisTag,
}

impl DensityMatrix {
    /// Validates the density-matrix contract.
    pub fn new(matrix: ComplexMatrix, basis: BasisTag) -> Result<Self> {
        let d = matrix.dim();
        if d == 0 || !d.is_power_of_two() || d == 1 {
            return Err(Error::invalid(format!("density matrix dimension must be 2^N with N >= 1, got {d}")));
        }
        let tr = matrix.trace();
        if (tr.re - 1.0).abs() > TRACE_TOL || tr.im.abs() > TRACE_TOL {
            return Err(Error::invalid(format!("density matrix trace is {tr}, expected 1")));
        }
        let defect = matrix.hermiticity_defect();
        if defect > HERMITIAN_TOL {
            return Err(Error::invalid(format!("density matrix is not Hermitian (defect {defect:e})")));
        }
        let min_eig = eig_hermitian(&matrix)?.values.last().map(|z| z.re).unwrap_or(0.0);
        if min_eig < -POSITIVITY_TOL {
            return Err(Error::invalid(format!("density matrix has negative eigenvalue {min_eig:e}")));
        }
        Ok(Self { matrix, basis })
    }

    /// Wraps a matrix known to satisfy the contract by construction.
    pub(crate) fn from_trusted(matrix: ComplexMatrix, basis: BasisTag) -> Self {
        Self { matrix, basis }
    }

    /// Pure state |ψ⟩⟨ψ|; the ket is normalized first.
    pub fn pure(ket: &[num_complex::Complex64], basis: BasisTag) -> Result<Self> {
        let norm = crate::linalg::vec_norm(ket);
        if !(norm > 0.0) || !norm.is_finite() {
            return Err(Error::invalid("cannot build a pure state from a zero or non-finite vector"));
        }
        let unit: Vec<_> = ket.iter().map(|z| z / norm).collect();
        Self::new(ComplexMatrix::projector(&unit), basis)
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    pub fn into_matrix(self) -> ComplexMatrix {
        self.matrix
    }

    pub fn basis(&self) -> BasisTag {
        self.basis
    }

    pub fn dim(&self) -> usize {
        self.matrix.dim()
    }

    pub fn n_qubits(&self) -> usize {
        self.matrix.dim().trailing_zeros() as usize
    }

    pub fn trace(&self) -> f64 {
        self.matrix.trace().re
    }

    /// tr(ρ²)
    pub fn purity(&self) -> f64 {
        (&self.matrix * &self.matrix).trace().re
    }

    pub fn min_eigenvalue(&self) -> Result<f64> {
        Ok(eig_hermitian(&self.matrix.hermitian_part())?.values.last().map(|z| z.re).unwrap_or(0.0))
    }

    /// The same state expressed in the product basis.
    pub fn to_product(&self, basis: &CollectiveBasis) -> Self {
        match self.basis {
            BasisTag::Product => self.clone(),
            BasisTag::Collective => Self { matrix: basis.to_product(&self.matrix), basis: BasisTag::Product },
        }
    }

    /// The same state expressed in the collective basis.
    pub fn to_collective(&self, basis: &CollectiveBasis) -> Self {
        match self.basis {
            BasisTag::Collective => self.clone(),
            BasisTag::Product => Self { matrix: basis.to_collective(&self.matrix), basis: BasisTag::Collective },
        }
    }

    pub(crate) fn require_product(&self, what: &str) -> Result<()> {
        if self.basis != BasisTag::Product {
            return Err(Error::invalid(format!("{what} requires a product-basis density matrix")));
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_complex::Complex64 as C64;

    #[test]
    fn contract_is_enforced() {
        let half = ComplexMatrix::identity(2).scale_real(0.5);
        assert!(DensityMatrix::new(half.clone(), BasisTag::Product).is_ok());
        assert!(DensityMatrix::new(ComplexMatrix::identity(2), BasisTag::Product).is_err());
        let indefinite = ComplexMatrix::from_real_rows(&[&[1.5, 0.0], &[0.0, -0.5]]);
        assert!(DensityMatrix::new(indefinite, BasisTag::Product).is_err());
        let mut skew = half;
        skew[(0, 1)] = C64::new(0.1, 0.0);
        assert!(DensityMatrix::new(skew, BasisTag::Product).is_err());
        assert!(DensityMatrix::new(ComplexMatrix::identity(3).scale_real(1.0 / 3.0), BasisTag::Product).is_err());
    }

    #[test]
    fn pure_state_normalizes() {
        let rho = DensityMatrix::pure(&[C64::new(3.0, 0.0), C64::new(0.0, 4.0)], BasisTag::Product).unwrap();
        assert!((rho.trace() - 1.0).abs() < 1e-15);
        assert!((rho.purity() - 1.0).abs() < 1e-15);
        assert_eq!(rho.n_qubits(), 1);
    }
}
