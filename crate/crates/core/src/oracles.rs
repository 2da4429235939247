//! Closed-form solutions for the benchmark initial states, used as ground
//! truth for the numerical solvers.

use num_complex::Complex64 as C64;

use crate::error::{Error, Result};
use crate::hilbert::{collective_basis, product_state, werner_state, CollectiveLabel, ModelParams, WernerSign};
use crate::linalg::ComplexMatrix;
use crate::state::{BasisTag, DensityMatrix};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Scenario {
    /// Two qubits starting in |+−⟩.
    TwoQubitPlusMinus,
    WernerPlus,
    WernerMinus,
    /// Three qubits starting in |+−+⟩.
    ThreeQubitPMP,
}

impl Scenario {
    pub fn n_qubits(self) -> usize {
        match self {
            Scenario::ThreeQubitPMP => 3,
            _ => 2,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ClosedFormSolution {
    pub scenario: Scenario,
    pub params: ModelParams,
    /// Werner fidelity; unused by the other scenarios.
    pub p: f64,
}

type Entry = (CollectiveLabel, CollectiveLabel, C64);

const P10: CollectiveLabel = CollectiveLabel::two(1.0, 0.0);
const P1M: CollectiveLabel = CollectiveLabel::two(1.0, -1.0);
const P11: CollectiveLabel = CollectiveLabel::two(1.0, 1.0);
const S00: CollectiveLabel = CollectiveLabel::two(0.0, 0.0);

const Q_UP: CollectiveLabel = CollectiveLabel::three(1.0, 1.5, 0.5);
const Q_DN: CollectiveLabel = CollectiveLabel::three(1.0, 1.5, -0.5);
const Q_GND: CollectiveLabel = CollectiveLabel::three(1.0, 1.5, -1.5);
const D1_UP: CollectiveLabel = CollectiveLabel::three(1.0, 0.5, 0.5);
const D1_DN: CollectiveLabel = CollectiveLabel::three(1.0, 0.5, -0.5);
const D0_UP: CollectiveLabel = CollectiveLabel::three(0.0, 0.5, 0.5);
const D0_DN: CollectiveLabel = CollectiveLabel::three(0.0, 0.5, -0.5);

fn re(x: f64) -> C64 {
    C64::new(x, 0.0)
}

impl ClosedFormSolution {
    pub fn new(scenario: Scenario, params: ModelParams, p: f64) -> Result<Self> {
        let params = ModelParams::new(params.n_qubits, params.g, params.gamma)?;
        if params.n_qubits != scenario.n_qubits() {
            return Err(Error::invalid(format!("{scenario:?} needs {} qubits, got {}", scenario.n_qubits(), params.n_qubits)));
        }
        if matches!(scenario, Scenario::WernerPlus | Scenario::WernerMinus) {
            werner_state(p, WernerSign::Plus)?;
        }
        Ok(Self { scenario, params, p })
    }

    pub fn two_qubit_plus_minus(g: f64, gamma: f64) -> Result<Self> {
        Self::new(Scenario::TwoQubitPlusMinus, ModelParams::new(2, g, gamma)?, 0.0)
    }

    /// The coherent coupling has no effect on Werner states, so there is no g here.
    pub fn werner(p: f64, sign: WernerSign, gamma: f64) -> Result<Self> {
        let scenario = match sign {
            WernerSign::Plus => Scenario::WernerPlus,
            WernerSign::Minus => Scenario::WernerMinus,
        };
        Self::new(scenario, ModelParams::new(2, 0.0, gamma)?, p)
    }

    pub fn three_qubit_pmp(g: f64, gamma: f64) -> Result<Self> {
        Self::new(Scenario::ThreeQubitPMP, ModelParams::new(3, g, gamma)?, 0.0)
    }

    pub fn initial_state(&self) -> DensityMatrix {
        match self.scenario {
            Scenario::TwoQubitPlusMinus => product_state("+-").expect("valid label"),
            Scenario::WernerPlus => werner_state(self.p, WernerSign::Plus).expect("validated p"),
            Scenario::WernerMinus => werner_state(self.p, WernerSign::Minus).expect("validated p"),
            Scenario::ThreeQubitPMP => product_state("+-+").expect("valid label"),
        }
    }

    /// Nonzero collective-basis entries (a, b, ρ_ab) on and above the
    /// diagonal; the rest follow by Hermiticity.
    fn entries(&self, t: f64) -> Vec<Entry> {
        let (g, gm, p) = (self.params.g, self.params.gamma, self.p);
        let e2 = (-2.0 * gm * t).exp();
        match self.scenario {
            Scenario::TwoQubitPlusMinus => vec![
                (P10, P10, re(e2 / 2.0)),
                (P1M, P1M, re((1.0 - e2) / 2.0)),
                (S00, S00, re(0.5)),
                (P10, S00, C64::new(-gm * t, -2.0 * g * t).exp() / 2.0),
            ],
            Scenario::WernerPlus => vec![
                (P11, P11, re((1.0 - p) * e2 / 4.0)),
                (P10, P10, re((1.0 + 3.0 * p) * e2 / 4.0 + (1.0 - p) * gm * t * e2 / 2.0)),
                (S00, S00, re((1.0 - p) / 4.0)),
                (
                    P1M,
                    P1M,
                    re(((1.0 + 3.0 * p) * (1.0 - e2) + (1.0 - p) * (2.0 - e2 * (1.0 + 2.0 * gm * t))) / 4.0),
                ),
            ],
            Scenario::WernerMinus => vec![
                (P11, P11, re((1.0 - p) * e2 / 4.0)),
                (P10, P10, re((1.0 - p) * e2 * (1.0 + 2.0 * gm * t) / 4.0)),
                (P1M, P1M, re((1.0 - p) * (3.0 - 2.0 * e2 * (1.0 + gm * t)) / 4.0)),
                (S00, S00, re((1.0 + 3.0 * p) / 4.0)),
            ],
            Scenario::ThreeQubitPMP => three_qubit_entries(g, gm, t),
        }
    }

    /// ρ(t) in the collective basis.
    pub fn rho_exact_collective(&self, t: f64) -> Result<ComplexMatrix> {
        if !(t >= 0.0) || !t.is_finite() {
            return Err(Error::invalid(format!("time must be finite and non-negative, got {t}")));
        }
        Ok(assemble(self.scenario.n_qubits(), &self.entries(t)))
    }

    /// ρ(t) in the product basis.
    pub fn rho_exact(&self, t: f64) -> Result<DensityMatrix> {
        let basis = collective_basis(self.scenario.n_qubits())?;
        Ok(DensityMatrix::from_trusted(basis.to_product(&self.rho_exact_collective(t)?), BasisTag::Product))
    }

    /// The t → ∞ limit, in the product basis.
    pub fn steady_state(&self) -> DensityMatrix {
        let p = self.p;
        let entries = match self.scenario {
            Scenario::TwoQubitPlusMinus => vec![(P1M, P1M, re(0.5)), (S00, S00, re(0.5))],
            Scenario::WernerPlus => vec![(S00, S00, re((1.0 - p) / 4.0)), (P1M, P1M, re((3.0 + p) / 4.0))],
            Scenario::WernerMinus => vec![(S00, S00, re((1.0 + 3.0 * p) / 4.0)), (P1M, P1M, re((3.0 - 3.0 * p) / 4.0))],
            Scenario::ThreeQubitPMP => {
                // ⅓|1,3/2,−3/2⟩⟨·| + ⅔|ψ⟩⟨ψ|, ψ = (√3/2)|0,½,−½⟩ − ½|1,½,−½⟩
                let (a, b) = (3f64.sqrt() / 2.0, -0.5);
                vec![
                    (Q_GND, Q_GND, re(1.0 / 3.0)),
                    (D0_DN, D0_DN, re(2.0 / 3.0 * a * a)),
                    (D1_DN, D1_DN, re(2.0 / 3.0 * b * b)),
                    (D1_DN, D0_DN, re(2.0 / 3.0 * a * b)),
                ]
            }
        };
        let n = self.scenario.n_qubits();
        let basis = collective_basis(n).expect("two or three qubits");
        DensityMatrix::from_trusted(basis.to_product(&assemble(n, &entries)), BasisTag::Product)
    }

    /// C(t) = ½√((e^{−2γt} − 1)² + 4e^{−2γt} sin²(2gt)); |+−⟩ scenario only.
    pub fn concurrence_exact(&self, t: f64) -> Result<f64> {
        if self.scenario != Scenario::TwoQubitPlusMinus {
            return Err(Error::invalid(format!("no closed-form concurrence for {:?}", self.scenario)));
        }
        Ok(plus_minus_concurrence(self.params.g, self.params.gamma, t))
    }
}

fn three_qubit_entries(g: f64, gm: f64, t: f64) -> Vec<Entry> {
    let e1 = (-gm * t).exp();
    let e3 = (-3.0 * gm * t).exp();
    let e4 = (-4.0 * gm * t).exp();
    let e52 = (-2.5 * gm * t).exp();
    // e^{γt} − 1 written to stay accurate for small γt
    let grow = (gm * t).exp_m1();
    let phase = C64::new(0.0, -3.0 * g * t).exp();
    let (r6, r12, r18) = (6f64.sqrt(), 12f64.sqrt(), 18f64.sqrt());
    vec![
        (Q_UP, Q_UP, re(e4 / 3.0)),
        (D1_UP, D1_UP, re(e1 / 6.0)),
        (D0_UP, D0_UP, re(e1 / 2.0)),
        (Q_UP, D1_UP, phase * (-e52 / r18)),
        (Q_UP, D0_UP, phase * (e52 / r6)),
        (D1_UP, D0_UP, re(-e1 / r12)),
        (D0_DN, D0_DN, re((1.0 - e1) / 2.0)),
        (Q_DN, Q_DN, re(4.0 * grow * e4 / 3.0)),
        (D1_DN, D1_DN, re((1.0 - e1) / 6.0)),
        (Q_DN, D1_DN, phase * (-2.0 * e52 * grow / r18)),
        (Q_DN, D0_DN, phase * (2.0 * e52 * grow / r6)),
        (D1_DN, D0_DN, re(-(1.0 - e1) / r12)),
        (Q_GND, Q_GND, re((1.0 + 3.0 * e4 - 4.0 * e3) / 3.0)),
    ]
}

fn assemble(n_qubits: usize, entries: &[Entry]) -> ComplexMatrix {
    let basis = collective_basis(n_qubits).expect("two or three qubits");
    let mut m = ComplexMatrix::zeros(basis.dim());
    for &(a, b, v) in entries {
        let (i, j) = (basis.idx(a), basis.idx(b));
        m[(i, j)] = v;
        if i != j {
            m[(j, i)] = v.conj();
        }
    }
    m
}

fn plus_minus_concurrence(g: f64, gamma: f64, t: f64) -> f64 {
    let e2 = (-2.0 * gamma * t).exp();
    let s = (2.0 * g * t).sin();
    0.5 * ((e2 - 1.0).powi(2) + 4.0 * e2 * s * s).sqrt()
}

pub fn rho_exact(sol: &ClosedFormSolution, t: f64) -> Result<DensityMatrix> {
    sol.rho_exact(t)
}

pub fn concurrence_exact(sol: &ClosedFormSolution, t: f64) -> Result<f64> {
    sol.concurrence_exact(t)
}

/// Steady concurrence reached from W±: (1 − p)/4 and (1 + 3p)/4.
pub fn steady_concurrence_werner(p: f64, sign: WernerSign) -> f64 {
    match sign {
        WernerSign::Plus => (1.0 - p) / 4.0,
        WernerSign::Minus => (1.0 + 3.0 * p) / 4.0,
    }
}

/// ΔC(t) = C(t; g) − C(t; 0) for the |+−⟩ initial state.
pub fn delta_concurrence(params: &ModelParams, t: f64) -> Result<f64> {
    if params.n_qubits != 2 {
        return Err(Error::invalid("ΔC is defined for two qubits"));
    }
    Ok(plus_minus_concurrence(params.g, params.gamma, t) - plus_minus_concurrence(0.0, params.gamma, t))
}
