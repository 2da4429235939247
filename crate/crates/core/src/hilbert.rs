//! Qubit operators, collective angular-momentum operators and the labelled
//! collective (Dicke) bases for two and three qubits.
//!
//! Product-basis states are ordered lexicographically with `+` before `-`:
//! |++⟩, |+−⟩, |−+⟩, |−−⟩ for two qubits. The first qubit is the most
//! significant index bit, and a set bit means the qubit is in |−⟩.

use std::fmt;

use num_complex::Complex64 as C64;

use crate::error::{Error, Result};
use crate::linalg::ComplexMatrix;
use crate::state::{BasisTag, DensityMatrix};

const ZERO: C64 = C64::new(0.0, 0.0);
const ONE: C64 = C64::new(1.0, 0.0);

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Pauli {
    X,
    Y,
    Z,
    /// σ₊ = |+⟩⟨−|
    Plus,
    /// σ₋ = |−⟩⟨+|
    Minus,
}

/// Single-qubit operator in the {|+⟩, |−⟩} ordering.
pub fn pauli(which: Pauli) -> ComplexMatrix {
    let i = C64::new(0.0, 1.0);
    let rows = match which {
        Pauli::X => [[ZERO, ONE], [ONE, ZERO]],
        Pauli::Y => [[ZERO, -i], [i, ZERO]],
        Pauli::Z => [[ONE, ZERO], [ZERO, -ONE]],
        Pauli::Plus => [[ZERO, ONE], [ZERO, ZERO]],
        Pauli::Minus => [[ZERO, ZERO], [ONE, ZERO]],
    };
    ComplexMatrix::from_rows(&[rows[0].to_vec(), rows[1].to_vec()])
}

/// I ⊗ … ⊗ op ⊗ … ⊗ I with `op` acting on qubit `site` (1-based).
pub fn embed(op: &ComplexMatrix, site: usize, n_qubits: usize) -> Result<ComplexMatrix> {
    if op.dim() != 2 {
        return Err(Error::invalid(format!("embedded operator must be 2x2, got {0}x{0}", op.dim())));
    }
    if site == 0 || site > n_qubits {
        return Err(Error::invalid(format!("site {site} out of range 1..={n_qubits}")));
    }
    let left = ComplexMatrix::identity(1 << (site - 1));
    let right = ComplexMatrix::identity(1 << (n_qubits - site));
    Ok(left.kron(op).kron(&right))
}

/// J₊, J₋ and J_z in the product basis.
#[derive(Debug, Clone)]
pub struct CollectiveOps {
    pub plus: ComplexMatrix,
    pub minus: ComplexMatrix,
    pub z: ComplexMatrix,
}

/// J± = Σᵢ σ±ⁱ and J_z = Σᵢ σ_zⁱ / 2.
pub fn collective_ops(n_qubits: usize) -> Result<CollectiveOps> {
    if n_qubits == 0 {
        return Err(Error::invalid("at least one qubit is required"));
    }
    let d = 1 << n_qubits;
    let mut ops = CollectiveOps { plus: ComplexMatrix::zeros(d), minus: ComplexMatrix::zeros(d), z: ComplexMatrix::zeros(d) };
    for site in 1..=n_qubits {
        ops.plus += &embed(&pauli(Pauli::Plus), site, n_qubits)?;
        ops.minus += &embed(&pauli(Pauli::Minus), site, n_qubits)?;
        ops.z += &embed(&pauli(Pauli::Z), site, n_qubits)?.scale_real(0.5);
    }
    Ok(ops)
}

/// Qubit count and rates of the model. Time is dimensionless; `g` and `gamma`
/// are rates in the same units.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModelParams {
    pub n_qubits: usize,
    /// Dipole-dipole coupling strength.
    pub g: f64,
    /// Decay constant of the collective mode.
    pub gamma: f64,
}

impl ModelParams {
    pub fn new(n_qubits: usize, g: f64, gamma: f64) -> Result<Self> {
        if n_qubits == 0 {
            return Err(Error::invalid("at least one qubit is required"));
        }
        if !g.is_finite() || g < 0.0 {
            return Err(Error::invalid(format!("coupling g must be finite and non-negative, got {g}")));
        }
        if !gamma.is_finite() || gamma < 0.0 {
            return Err(Error::invalid(format!("decay constant gamma must be finite and non-negative, got {gamma}")));
        }
        Ok(Self { n_qubits, g, gamma })
    }

    pub fn dim(&self) -> usize {
        1 << self.n_qubits
    }
}

/// H_I = g (J₊J₋ − J_z − N/2), the all-to-all exchange coupling.
pub fn interaction_hamiltonian(params: &ModelParams) -> Result<ComplexMatrix> {
    let ops = collective_ops(params.n_qubits)?;
    let d = params.dim();
    let h = &(&(&ops.plus * &ops.minus) - &ops.z) - &ComplexMatrix::identity(d).scale_real(params.n_qubits as f64 / 2.0);
    Ok(h.scale_real(params.g))
}

/// H_I = g Σ_{i>j} (σ₊ⁱσ₋ʲ + σ₊ʲσ₋ⁱ), built pair by pair.
pub fn interaction_hamiltonian_pairwise(params: &ModelParams) -> Result<ComplexMatrix> {
    let n = params.n_qubits;
    let mut h = ComplexMatrix::zeros(params.dim());
    for i in 1..=n {
        for j in 1..i {
            let hop = &embed(&pauli(Pauli::Plus), i, n)? * &embed(&pauli(Pauli::Minus), j, n)?;
            h += &hop;
            h += &hop.adjoint();
        }
    }
    Ok(h.scale_real(params.g))
}

/// Quantum numbers of a collective state. `j12` is the coupled spin of
/// qubits 1 and 2 and is only present for three qubits.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CollectiveLabel {
    pub j12: Option<f64>,
    pub j: f64,
    pub m: f64,
}

impl CollectiveLabel {
    pub const fn two(j: f64, m: f64) -> Self {
        Self { j12: None, j, m }
    }

    pub const fn three(j12: f64, j: f64, m: f64) -> Self {
        Self { j12: Some(j12), j, m }
    }

    /// Extremal state |j, −j⟩, annihilated by J₋.
    pub fn is_decoherence_free(&self) -> bool {
        self.m == -self.j
    }
}

fn half_integer(x: f64) -> String {
    if x.fract() == 0.0 {
        format!("{}", x as i64)
    } else {
        format!("{}/2", (2.0 * x) as i64)
    }
}

impl fmt::Display for CollectiveLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.j12 {
            Some(j12) => write!(f, "|{},{},{}⟩", half_integer(j12), half_integer(self.j), half_integer(self.m)),
            None => write!(f, "|{},{}⟩", half_integer(self.j), half_integer(self.m)),
        }
    }
}

/// Labelled collective basis with its change-of-basis unitary.
#[derive(Debug, Clone)]
pub struct CollectiveBasis {
    pub n_qubits: usize,
    pub labels: Vec<CollectiveLabel>,
    /// Column k is the collective state `labels[k]` written in the product basis.
    pub transform: ComplexMatrix,
}

impl CollectiveBasis {
    pub fn dim(&self) -> usize {
        self.labels.len()
    }

    pub fn index_of(&self, label: CollectiveLabel) -> Option<usize> {
        self.labels.iter().position(|l| *l == label)
    }

    /// Index of a label; panics if the label is not part of this basis.
    pub fn idx(&self, label: CollectiveLabel) -> usize {
        self.index_of(label).unwrap_or_else(|| panic!("{label} is not a state of the {}-qubit basis", self.n_qubits))
    }

    /// Product-basis amplitudes of the collective state `label`.
    pub fn ket(&self, label: CollectiveLabel) -> Vec<C64> {
        self.transform.column(self.idx(label))
    }

    /// U† X U: product-basis operator expressed in the collective basis.
    pub fn to_collective(&self, op: &ComplexMatrix) -> ComplexMatrix {
        self.transform.adjoint().sandwich(op)
    }

    /// U X U†: collective-basis operator expressed in the product basis.
    pub fn to_product(&self, op: &ComplexMatrix) -> ComplexMatrix {
        self.transform.sandwich(op)
    }
}

/// Collective basis for two or three qubits with the sign conventions of the
/// standard Clebsch-Gordan construction (qubits 1 and 2 coupled first).
pub fn collective_basis(n_qubits: usize) -> Result<CollectiveBasis> {
    let s2 = 1.0 / 2f64.sqrt();
    let s3 = 1.0 / 3f64.sqrt();
    let s6 = 1.0 / 6f64.sqrt();
    let table: Vec<(CollectiveLabel, Vec<(&str, f64)>)> = match n_qubits {
        2 => vec![
            (CollectiveLabel::two(1.0, 1.0), vec![("++", 1.0)]),
            (CollectiveLabel::two(1.0, 0.0), vec![("+-", s2), ("-+", s2)]),
            (CollectiveLabel::two(1.0, -1.0), vec![("--", 1.0)]),
            (CollectiveLabel::two(0.0, 0.0), vec![("+-", s2), ("-+", -s2)]),
        ],
        3 => vec![
            (CollectiveLabel::three(1.0, 1.5, 1.5), vec![("+++", 1.0)]),
            (CollectiveLabel::three(1.0, 1.5, 0.5), vec![("++-", s3), ("+-+", s3), ("-++", s3)]),
            (CollectiveLabel::three(1.0, 1.5, -0.5), vec![("+--", s3), ("-+-", s3), ("--+", s3)]),
            (CollectiveLabel::three(1.0, 1.5, -1.5), vec![("---", 1.0)]),
            (CollectiveLabel::three(1.0, 0.5, 0.5), vec![("++-", 2.0 * s6), ("+-+", -s6), ("-++", -s6)]),
            (CollectiveLabel::three(1.0, 0.5, -0.5), vec![("+--", s6), ("-+-", s6), ("--+", -2.0 * s6)]),
            (CollectiveLabel::three(0.0, 0.5, 0.5), vec![("+-+", s2), ("-++", -s2)]),
            (CollectiveLabel::three(0.0, 0.5, -0.5), vec![("+--", s2), ("-+-", -s2)]),
        ],
        _ => return Err(Error::invalid(format!("labelled collective bases exist for 2 or 3 qubits, not {n_qubits}"))),
    };
    let d = 1 << n_qubits;
    let mut transform = ComplexMatrix::zeros(d);
    let mut labels = Vec::with_capacity(d);
    for (col, (label, terms)) in table.into_iter().enumerate() {
        for (bits, amp) in terms {
            transform[(product_index(bits)?, col)] = C64::new(amp, 0.0);
        }
        labels.push(label);
    }
    Ok(CollectiveBasis { n_qubits, labels, transform })
}

/// Labels of the decoherence-free states (annihilated by J₋).
pub fn decoherence_free_labels(n_qubits: usize) -> Result<Vec<CollectiveLabel>> {
    Ok(collective_basis(n_qubits)?.labels.into_iter().filter(CollectiveLabel::is_decoherence_free).collect())
}

/// Product-basis index of a ±-string such as "+-+". Accepts ASCII '-' and
/// the Unicode minus sign.
pub fn product_index(label: &str) -> Result<usize> {
    let mut index = 0usize;
    let mut count = 0usize;
    for ch in label.chars() {
        let bit = match ch {
            '+' => 0,
            '-' | '−' => 1,
            _ => return Err(Error::invalid(format!("product-state label {label:?} may only contain '+' and '-'"))),
        };
        index = (index << 1) | bit;
        count += 1;
    }
    if count == 0 || count > 16 {
        return Err(Error::invalid(format!("product-state label {label:?} must name between 1 and 16 qubits")));
    }
    Ok(index)
}

/// Number of qubits named by a ±-string.
pub fn label_qubits(label: &str) -> usize {
    label.chars().count()
}

/// Number of excited (|+⟩) qubits in product-basis state `index`.
pub fn excitations(index: usize, n_qubits: usize) -> usize {
    n_qubits - (index & ((1 << n_qubits) - 1)).count_ones() as usize
}

pub fn product_ket(label: &str) -> Result<Vec<C64>> {
    let index = product_index(label)?;
    let mut v = vec![ZERO; 1 << label_qubits(label)];
    v[index] = ONE;
    Ok(v)
}

/// Rank-1 projector onto a product basis state.
pub fn product_state(label: &str) -> Result<DensityMatrix> {
    let ket = product_ket(label)?;
    Ok(DensityMatrix::from_trusted(ComplexMatrix::projector(&ket), BasisTag::Product))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum WernerSign {
    /// Mixed towards |Ψ₊⟩ = |1,0⟩.
    Plus,
    /// Mixed towards |Ψ₋⟩ = |0,0⟩.
    Minus,
}

impl WernerSign {
    pub fn symbol(self) -> char {
        match self {
            WernerSign::Plus => '+',
            WernerSign::Minus => '-',
        }
    }
}

/// W± = (1 − p) I/4 + p |Ψ±⟩⟨Ψ±| in the product basis, p ∈ [−1/3, 1].
pub fn werner_state(p: f64, sign: WernerSign) -> Result<DensityMatrix> {
    if !(-1.0 / 3.0 - 1e-12..=1.0 + 1e-12).contains(&p) {
        return Err(Error::invalid(format!("Werner fidelity p must lie in [-1/3, 1], got {p}")));
    }
    let basis = collective_basis(2)?;
    let psi = match sign {
        WernerSign::Plus => basis.ket(CollectiveLabel::two(1.0, 0.0)),
        WernerSign::Minus => basis.ket(CollectiveLabel::two(0.0, 0.0)),
    };
    let rho = &ComplexMatrix::identity(4).scale_real((1.0 - p) / 4.0) + &ComplexMatrix::projector(&psi).scale_real(p);
    Ok(DensityMatrix::from_trusted(rho, BasisTag::Product))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64) -> C64 {
        C64::new(re, 0.0)
    }

    fn assert_vec_close(a: &[C64], b: &[C64], eps: f64) {
        assert_eq!(a.len(), b.len());
        for (x, y) in a.iter().zip(b) {
            assert!((x - y).norm() <= eps, "{a:?} vs {b:?}");
        }
    }

    #[test]
    fn pauli_actions() {
        let plus = vec![ONE, ZERO];
        let minus = vec![ZERO, ONE];
        assert_vec_close(&pauli(Pauli::Z).mul_vec(&plus), &plus, 0.0);
        assert_vec_close(&pauli(Pauli::Plus).mul_vec(&minus), &plus, 0.0);
        assert_vec_close(&pauli(Pauli::Plus).mul_vec(&plus), &[ZERO, ZERO], 0.0);
        let proj = &pauli(Pauli::Plus) * &pauli(Pauli::Minus);
        assert!(proj.approx_eq(&ComplexMatrix::from_diagonal(&[ONE, ZERO]), 0.0));
    }

    #[test]
    fn embed_places_operator_on_site() {
        let z1 = embed(&pauli(Pauli::Z), 1, 2).unwrap();
        assert!(z1.approx_eq(&ComplexMatrix::from_diagonal(&[c(1.0), c(1.0), c(-1.0), c(-1.0)]), 0.0));

        let m2 = embed(&pauli(Pauli::Minus), 2, 2).unwrap();
        assert_vec_close(&m2.mul_vec(&product_ket("+-").unwrap()), &[ZERO; 4], 0.0);
        assert_vec_close(&m2.mul_vec(&product_ket("++").unwrap()), &product_ket("+-").unwrap(), 0.0);
    }

    #[test]
    fn embed_rejects_bad_site() {
        assert!(embed(&pauli(Pauli::Z), 0, 2).is_err());
        assert!(embed(&pauli(Pauli::Z), 3, 2).is_err());
        assert!(embed(&ComplexMatrix::identity(4), 1, 2).is_err());
    }

    #[test]
    fn excitation_counting_operator() {
        let mut n_op = ComplexMatrix::zeros(8);
        for i in 1..=3 {
            n_op += &(&embed(&pauli(Pauli::Plus), i, 3).unwrap() * &embed(&pauli(Pauli::Minus), i, 3).unwrap());
        }
        let ket = product_ket("+-+").unwrap();
        let twice: Vec<C64> = ket.iter().map(|z| z * 2.0).collect();
        assert_vec_close(&n_op.mul_vec(&ket), &twice, 0.0);
    }

    #[test]
    fn su2_algebra() {
        for n in 1..=4 {
            let ops = collective_ops(n).unwrap();
            assert!(ops.plus.commutator(&ops.minus).approx_eq(&ops.z.scale_real(2.0), 0.0));
            assert!(ops.z.commutator(&ops.plus).approx_eq(&ops.plus, 0.0));
            assert!(ops.z.commutator(&ops.minus).approx_eq(&-&ops.minus, 0.0));
        }
    }

    #[test]
    fn ladder_on_two_qubit_triplet() {
        let basis = collective_basis(2).unwrap();
        let ops = collective_ops(2).unwrap();
        let lowered = ops.minus.mul_vec(&basis.ket(CollectiveLabel::two(1.0, 1.0)));
        let expected: Vec<C64> = basis.ket(CollectiveLabel::two(1.0, 0.0)).iter().map(|z| z * 2f64.sqrt()).collect();
        assert_vec_close(&lowered, &expected, 1e-15);
        assert_vec_close(&ops.minus.mul_vec(&basis.ket(CollectiveLabel::two(0.0, 0.0))), &[ZERO; 4], 1e-15);
    }

    #[test]
    fn collective_columns_match_tables() {
        let b2 = collective_basis(2).unwrap();
        let s = 1.0 / 2f64.sqrt();
        assert_vec_close(&b2.ket(CollectiveLabel::two(1.0, 0.0)), &[c(0.0), c(s), c(s), c(0.0)], 1e-15);
        assert_vec_close(&b2.ket(CollectiveLabel::two(0.0, 0.0)), &[c(0.0), c(s), c(-s), c(0.0)], 1e-15);

        let b3 = collective_basis(3).unwrap();
        let s6 = 1.0 / 6f64.sqrt();
        let want: Vec<C64> = [0.0, 2.0, -1.0, 0.0, -1.0, 0.0, 0.0, 0.0].iter().map(|&x| c(x * s6)).collect();
        assert_vec_close(&b3.ket(CollectiveLabel::three(1.0, 0.5, 0.5)), &want, 1e-15);
        let s3 = 1.0 / 3f64.sqrt();
        let want: Vec<C64> = [0.0, 1.0, 1.0, 0.0, 1.0, 0.0, 0.0, 0.0].iter().map(|&x| c(x * s3)).collect();
        assert_vec_close(&b3.ket(CollectiveLabel::three(1.0, 1.5, 0.5)), &want, 1e-15);
    }

    #[test]
    fn transforms_are_unitary() {
        for n in [2, 3] {
            let b = collective_basis(n).unwrap();
            let gram = &b.transform.adjoint() * &b.transform;
            assert!(gram.approx_eq(&ComplexMatrix::identity(1 << n), 1e-12));
        }
        assert!(collective_basis(4).is_err());
    }

    #[test]
    fn interaction_hamiltonian_forms_agree() {
        for n in [2, 3] {
            let p = ModelParams::new(n, 0.7, 0.1).unwrap();
            let a = interaction_hamiltonian(&p).unwrap();
            let b = interaction_hamiltonian_pairwise(&p).unwrap();
            assert!(a.approx_eq(&b, 1e-12));
            assert!(a.hermiticity_defect() == 0.0);
        }
        let zero = interaction_hamiltonian(&ModelParams::new(2, 0.0, 0.1).unwrap()).unwrap();
        assert_eq!(zero.max_abs(), 0.0);
    }

    #[test]
    fn singlet_picks_up_global_phase_only() {
        let g = 1.3;
        let p = ModelParams::new(2, g, 0.1).unwrap();
        let h = interaction_hamiltonian(&p).unwrap();
        let singlet = collective_basis(2).unwrap().ket(CollectiveLabel::two(0.0, 0.0));
        let expected: Vec<C64> = singlet.iter().map(|z| z * (-g)).collect();
        assert_vec_close(&h.mul_vec(&singlet), &expected, 1e-14);
    }

    #[test]
    fn product_states() {
        let rho = product_state("+-").unwrap();
        assert!(rho.matrix().approx_eq(&ComplexMatrix::from_diagonal(&[c(0.0), c(1.0), c(0.0), c(0.0)]), 0.0));
        assert!((rho.purity() - 1.0).abs() < 1e-15);
        assert_eq!(product_index("+−+").unwrap(), 2);
        assert!(product_state("+x").is_err());
        assert!(product_state("").is_err());
    }

    #[test]
    fn plus_minus_plus_expansion() {
        let b = collective_basis(3).unwrap();
        let coeffs = b.transform.adjoint().mul_vec(&product_ket("+-+").unwrap());
        let amp = |l| coeffs[b.idx(l)].re;
        assert!((amp(CollectiveLabel::three(1.0, 1.5, 0.5)) - 1.0 / 3f64.sqrt()).abs() < 1e-15);
        let w = (2.0f64 / 3.0).sqrt();
        assert!((amp(CollectiveLabel::three(0.0, 0.5, 0.5)) - w * 3f64.sqrt() / 2.0).abs() < 1e-15);
        assert!((amp(CollectiveLabel::three(1.0, 0.5, 0.5)) + w * 0.5).abs() < 1e-15);
    }

    #[test]
    fn werner_states() {
        let w0 = werner_state(0.0, WernerSign::Plus).unwrap();
        assert!(w0.matrix().approx_eq(&ComplexMatrix::identity(4).scale_real(0.25), 1e-15));
        let singlet = collective_basis(2).unwrap().ket(CollectiveLabel::two(0.0, 0.0));
        let w1 = werner_state(1.0, WernerSign::Minus).unwrap();
        assert!(w1.matrix().approx_eq(&ComplexMatrix::projector(&singlet), 1e-15));
        assert!(werner_state(-0.5, WernerSign::Plus).is_err());
        assert!(werner_state(1.01, WernerSign::Minus).is_err());

        let p = 0.6;
        let b = collective_basis(2).unwrap();
        for (sign, target) in [(WernerSign::Plus, CollectiveLabel::two(1.0, 0.0)), (WernerSign::Minus, CollectiveLabel::two(0.0, 0.0))] {
            let coll = b.to_collective(werner_state(p, sign).unwrap().matrix());
            for (k, label) in b.labels.iter().enumerate() {
                let want = if *label == target { (1.0 + 3.0 * p) / 4.0 } else { (1.0 - p) / 4.0 };
                assert!((coll[(k, k)].re - want).abs() < 1e-15);
            }
        }
    }

    #[test]
    fn labels_display() {
        assert_eq!(CollectiveLabel::three(1.0, 1.5, -0.5).to_string(), "|1,3/2,-1/2⟩");
        assert_eq!(CollectiveLabel::two(1.0, -1.0).to_string(), "|1,-1⟩");
    }
}
