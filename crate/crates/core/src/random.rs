//! Seeded random states and unitaries for sweeps and property tests.

use num_complex::Complex64 as C64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::linalg::{inner, vec_norm, ComplexMatrix};
use crate::state::{BasisTag, DensityMatrix};

pub type SeededRng = ChaCha8Rng;

pub fn seeded_rng(seed: u64) -> SeededRng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn gaussian<R: Rng + ?Sized>(rng: &mut R) -> C64 {
    C64::new(rng.sample(StandardNormal), rng.sample(StandardNormal))
}

fn ginibre<R: Rng + ?Sized>(rng: &mut R, dim: usize) -> ComplexMatrix {
    ComplexMatrix::from_fn(dim, |_, _| gaussian(rng))
}

/// G G† / tr(G G†) with G a complex Gaussian matrix (full rank almost surely).
pub fn random_density_matrix<R: Rng + ?Sized>(rng: &mut R, n_qubits: usize) -> DensityMatrix {
    let g = ginibre(rng, 1 << n_qubits);
    let w = &g * &g.adjoint();
    let tr = w.trace().re;
    DensityMatrix::from_trusted(w.scale_real(1.0 / tr).hermitian_part(), BasisTag::Product)
}

/// Normalized complex Gaussian vector.
pub fn random_ket<R: Rng + ?Sized>(rng: &mut R, dim: usize) -> Vec<C64> {
    let v: Vec<C64> = (0..dim).map(|_| gaussian(rng)).collect();
    let norm = vec_norm(&v);
    v.into_iter().map(|z| z / norm).collect()
}

pub fn random_pure_state<R: Rng + ?Sized>(rng: &mut R, n_qubits: usize) -> DensityMatrix {
    DensityMatrix::from_trusted(ComplexMatrix::projector(&random_ket(rng, 1 << n_qubits)), BasisTag::Product)
}

/// Haar-distributed unitary from Gram-Schmidt on a Gaussian matrix.
pub fn random_unitary<R: Rng + ?Sized>(rng: &mut R, dim: usize) -> ComplexMatrix {
    let g = ginibre(rng, dim);
    let mut q = ComplexMatrix::zeros(dim);
    let mut basis: Vec<Vec<C64>> = Vec::with_capacity(dim);
    for j in 0..dim {
        let mut v = g.column(j);
        for b in &basis {
            let proj = inner(b, &v);
            for (x, y) in v.iter_mut().zip(b) {
                *x -= proj * y;
            }
        }
        let norm = vec_norm(&v);
        v.iter_mut().for_each(|x| *x /= norm);
        q.set_column(j, &v);
        basis.push(v);
    }
    q
}

/// u₁ ⊗ u₂ ⊗ … with independent single-qubit unitaries.
pub fn random_local_unitary<R: Rng + ?Sized>(rng: &mut R, n_qubits: usize) -> ComplexMatrix {
    let mut u = random_unitary(rng, 2);
    for _ in 1..n_qubits {
        u = u.kron(&random_unitary(rng, 2));
    }
    u
}

/// Convex mixture of `terms` random product states.
pub fn random_separable_state<R: Rng + ?Sized>(rng: &mut R, n_qubits: usize, terms: usize) -> DensityMatrix {
    let d = 1 << n_qubits;
    let weights: Vec<f64> = (0..terms.max(1)).map(|_| rng.random::<f64>() + 1e-3).collect();
    let total: f64 = weights.iter().sum();
    let mut rho = ComplexMatrix::zeros(d);
    for w in weights {
        let mut term = random_density_matrix(rng, 1).into_matrix();
        for _ in 1..n_qubits {
            term = term.kron(random_density_matrix(rng, 1).matrix());
        }
        rho.axpy(w / total, &term);
    }
    DensityMatrix::from_trusted(rho.hermitian_part(), BasisTag::Product)
}
