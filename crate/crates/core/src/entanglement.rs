//! Concurrence, negativity and the partial operations they are built from.

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::hilbert::{pauli, Pauli};
use crate::linalg::{eig_general, eig_hermitian, singular_values, sqrtm_psd, ComplexMatrix, LinalgError, PSD_CLAMP};
use crate::state::DensityMatrix;

/// Partial-transpose eigenvalues above this (and below zero) count as zero.
pub const NEGATIVE_EIGEN_TOL: f64 = 1e-9;

/// Tolerance on the concurrence-negativity inequality.
pub const CN_BOUND_TOL: f64 = 1e-9;

fn check_site(site: usize, n_qubits: usize) -> Result<()> {
    if site == 0 || site > n_qubits {
        return Err(Error::invalid(format!("site {site} out of range 1..={n_qubits}")));
    }
    Ok(())
}

fn qubit_count(m: &ComplexMatrix) -> Result<usize> {
    let d = m.dim();
    if d < 2 || !d.is_power_of_two() {
        return Err(Error::invalid(format!("dimension {d} is not a qubit register")));
    }
    Ok(d.trailing_zeros() as usize)
}

/// Which qubit a partial transpose acts on.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub struct BipartitionSpec {
    /// 1-based.
    pub transposed_site: usize,
}

impl BipartitionSpec {
    pub fn new(transposed_site: usize, n_qubits: usize) -> Result<Self> {
        check_site(transposed_site, n_qubits)?;
        Ok(Self { transposed_site })
    }
}

/// ρ^{T_site}: transposes the index pair of one qubit (1-based) in the product basis.
pub fn partial_transpose_matrix(m: &ComplexMatrix, site: usize) -> Result<ComplexMatrix> {
    let n = qubit_count(m)?;
    check_site(site, n)?;
    let bit = 1usize << (n - site);
    Ok(ComplexMatrix::from_fn(m.dim(), |i, j| {
        let (ib, jb) = (i & bit, j & bit);
        m[((i & !bit) | jb, (j & !bit) | ib)]
    }))
}

pub fn partial_transpose(rho: &DensityMatrix, site: usize) -> Result<ComplexMatrix> {
    rho.require_product("partial transpose")?;
    partial_transpose_matrix(rho.matrix(), site)
}

/// Traces out one qubit (1-based) of a product-basis operator.
pub fn partial_trace(m: &ComplexMatrix, site: usize) -> Result<ComplexMatrix> {
    let n = qubit_count(m)?;
    check_site(site, n)?;
    if n == 1 {
        return Err(Error::invalid("cannot trace out the only qubit"));
    }
    let low = n - site;
    let squeeze = |k: usize, b: usize| ((k >> low) << (low + 1)) | (b << low) | (k & ((1 << low) - 1));
    Ok(ComplexMatrix::from_fn(m.dim() / 2, |i, j| m[(squeeze(i, 0), squeeze(j, 0))] + m[(squeeze(i, 1), squeeze(j, 1))]))
}

/// (σ_y ⊗ σ_y) X* (σ_y ⊗ σ_y), with the conjugate taken in the product basis.
fn spin_flip(m: &ComplexMatrix) -> ComplexMatrix {
    let y = pauli(Pauli::Y);
    let yy = y.kron(&y);
    yy.sandwich(&m.conj())
}

fn two_qubit_matrix<'a>(rho: &'a DensityMatrix, what: &str) -> Result<&'a ComplexMatrix> {
    rho.require_product(what)?;
    if rho.dim() != 4 {
        return Err(Error::invalid(format!("{what} needs a two-qubit (4x4) state, got {0}x{0}", rho.dim())));
    }
    Ok(rho.matrix())
}

fn psd_sqrt(m: &ComplexMatrix) -> Result<ComplexMatrix> {
    sqrtm_psd(&m.hermitian_part()).map_err(|e| match e {
        LinalgError::InvalidInput(msg) => Error::InvalidInput(msg),
        other => other.into(),
    })
}

fn from_lambdas(l: &[f64]) -> f64 {
    (l[0] - l[1] - l[2] - l[3]).clamp(0.0, 1.0)
}

/// Wootters concurrence max(0, λ₁ − λ₂ − λ₃ − λ₄).
///
/// The λᵢ are the eigenvalues of √(√ρ ρ̃ √ρ), obtained as the singular values
/// of √ρ √ρ̃ with √ρ̃ = (σ_y⊗σ_y)(√ρ)*(σ_y⊗σ_y). This keeps full accuracy on
/// rank-deficient states, where the eigenvalues of ρρ̃ are defective.
pub fn concurrence(rho: &DensityMatrix) -> Result<f64> {
    let m = two_qubit_matrix(rho, "concurrence")?;
    let root = psd_sqrt(m)?;
    let flipped = spin_flip(&root);
    let lambdas = singular_values(&(&root * &flipped))?;
    Ok(from_lambdas(&lambdas))
}

/// Concurrence from the square roots of the eigenvalues of ρ ρ̃. Kept as an
/// independent cross-check of [`concurrence`]; loses accuracy on rank-deficient states.
pub fn concurrence_product_route(rho: &DensityMatrix) -> Result<f64> {
    let m = two_qubit_matrix(rho, "concurrence")?;
    let min = rho.min_eigenvalue()?;
    if min < -PSD_CLAMP {
        return Err(Error::invalid(format!("state is not positive semidefinite (eigenvalue {min:e})")));
    }
    let product = m * &spin_flip(m);
    let mut lambdas = Vec::with_capacity(4);
    for z in eig_general(&product)?.values {
        if z.re < -PSD_CLAMP {
            return Err(Error::NumericalFailure(format!("ρρ̃ has negative eigenvalue {}", z.re)));
        }
        lambdas.push(z.re.max(0.0).sqrt());
    }
    lambdas.sort_by(|a, b| b.total_cmp(a));
    Ok(from_lambdas(&lambdas))
}

/// −2 Σ μᵢ⁻ over the negative eigenvalues of ρ^{T_site}.
pub fn negativity(rho: &DensityMatrix, site: usize) -> Result<f64> {
    let pt = partial_transpose(rho, site)?;
    let values = eig_hermitian(&pt.hermitian_part())?.values;
    let negative: f64 = values.iter().map(|z| z.re).filter(|&v| v < -NEGATIVE_EIGEN_TOL).sum();
    Ok(-2.0 * negative)
}

/// Both sides of N ≥ √((1−C)² + C²) − (1−C).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CnBound {
    pub concurrence: f64,
    pub negativity: f64,
    pub bound: f64,
    pub satisfied: bool,
}

pub fn cn_bound_check(rho: &DensityMatrix) -> Result<CnBound> {
    let c = concurrence(rho)?;
    let n = negativity(rho, 1)?;
    let bound = ((1.0 - c).powi(2) + c * c).sqrt() - (1.0 - c);
    Ok(CnBound { concurrence: c, negativity: n, bound, satisfied: n >= bound - CN_BOUND_TOL })
}

/// Concurrence between two qubits of a three-qubit state after tracing out the third.
pub fn pairwise_concurrence(rho: &DensityMatrix, a: usize, b: usize) -> Result<f64> {
    rho.require_product("pairwise concurrence")?;
    if rho.dim() != 8 {
        return Err(Error::invalid("pairwise concurrence needs a three-qubit state"));
    }
    check_site(a, 3)?;
    check_site(b, 3)?;
    if a == b {
        return Err(Error::invalid("pairwise concurrence needs two distinct qubits"));
    }
    let traced = 6 - a - b;
    let reduced = partial_trace(rho.matrix(), traced)?;
    concurrence(&DensityMatrix::from_trusted(reduced, crate::state::BasisTag::Product))
}

/// Entanglement measures of one state along a trajectory.
#[derive(Debug, Clone, PartialEq)]
pub struct EntanglementSample {
    pub time: f64,
    /// Present for two-qubit states only.
    pub concurrence: Option<f64>,
    /// One-versus-rest negativity keyed by transposed site.
    pub negativity_by_site: BTreeMap<usize, f64>,
}

impl EntanglementSample {
    pub fn measure(time: f64, rho: &DensityMatrix) -> Result<Self> {
        let n = rho.n_qubits();
        let concurrence = if n == 2 { Some(concurrence(rho)?) } else { None };
        let mut negativity_by_site = BTreeMap::new();
        for site in 1..=n {
            negativity_by_site.insert(site, negativity(rho, site)?);
        }
        Ok(Self { time, concurrence, negativity_by_site })
    }
}
