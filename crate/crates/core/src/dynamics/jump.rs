use num_complex::Complex64 as C64;

use crate::error::{Error, Result};
use crate::hilbert::{collective_basis, excitations, CollectiveBasis};
use crate::linalg::{expm, ComplexMatrix};
use crate::state::{BasisTag, DensityMatrix};

use super::integrate::{product_matrix, substeps, validate_grid, DEFAULT_DT};
use super::Model;

/// Trace leak that aborts a jump solve.
const TRACE_LEAK_TOL: f64 = 1e-6;
/// Diagonal weight below which a product state counts as unpopulated.
const POPULATION_FLOOR: f64 = 1e-14;

#[derive(Debug, Clone, Copy)]
pub struct JumpOptions {
    /// Integration step for the levels with at least one jump.
    pub dt: f64,
}

impl Default for JumpOptions {
    fn default() -> Self {
        Self { dt: DEFAULT_DT }
    }
}

/// Conditional density matrices ρ⁽ⁿ⁾(t), n = 0..=k_max, in the product basis.
/// ρ⁽ⁿ⁾ collects the histories with exactly n emitted photons.
#[derive(Debug, Clone)]
pub struct JumpHierarchy {
    pub conditionals: Vec<ComplexMatrix>,
}

impl JumpHierarchy {
    pub fn k_max(&self) -> usize {
        self.conditionals.len() - 1
    }

    /// Σₙ ρ⁽ⁿ⁾
    pub fn total(&self) -> ComplexMatrix {
        let mut sum = self.conditionals[0].clone();
        for c in &self.conditionals[1..] {
            sum += c;
        }
        sum
    }

    /// Probability of each photon count, tr ρ⁽ⁿ⁾.
    pub fn weights(&self) -> Vec<f64> {
        self.conditionals.iter().map(|c| c.trace().re).collect()
    }
}

#[derive(Debug, Clone)]
pub struct JumpSample {
    pub time: f64,
    pub hierarchy: JumpHierarchy,
    pub rho: DensityMatrix,
}

/// Highest excitation number populated in ρ(0); no more photons than that can be emitted.
fn max_jumps(rho: &ComplexMatrix, n_qubits: usize) -> usize {
    let diag = rho.diagonal();
    (0..rho.dim()).filter(|&i| diag[i].re > POPULATION_FLOOR).map(|i| excitations(i, n_qubits)).max().unwrap_or(0)
}

/// Change of frame used internally. For N = 2, 3 the collective basis makes
/// H_eff diagonal up to the j₁₂ degeneracy, which keeps the propagator exact.
struct Frame(Option<CollectiveBasis>);

impl Frame {
    fn into_frame(&self, m: &ComplexMatrix) -> ComplexMatrix {
        match &self.0 {
            Some(b) => b.to_collective(m),
            None => m.clone(),
        }
    }

    fn out_of_frame(&self, m: &ComplexMatrix) -> ComplexMatrix {
        match &self.0 {
            Some(b) => b.to_product(m),
            None => m.clone(),
        }
    }
}

struct Drift {
    /// A = −iH_eff, so the no-jump flow is AX + XA†.
    a: ComplexMatrix,
    a_dag: ComplexMatrix,
    /// √γ J₋ and its adjoint.
    lower: ComplexMatrix,
    raise: ComplexMatrix,
}

impl Drift {
    /// d ρ⁽ⁿ⁾/dt given ρ⁽ⁿ⁾ = x and the level below, ρ⁽ⁿ⁻¹⁾ = source.
    fn rate(&self, x: &ComplexMatrix, source: &ComplexMatrix) -> ComplexMatrix {
        let mut r = &self.a * x;
        r += &(x * &self.a_dag);
        r += &(&(&self.lower * source) * &self.raise);
        r
    }
}

/// Solves the jump hierarchy
///
/// dρ⁽ⁿ⁾/dt = −i(H_eff ρ⁽ⁿ⁾ − ρ⁽ⁿ⁾H_eff†) + γ J₋ρ⁽ⁿ⁻¹⁾J₊,
///
/// with ρ⁽⁰⁾(0) = ρ(0). The no-jump level is propagated with exp(−iH_eff h/2)
/// and the remaining levels are integrated together with RK4 at step ≤ dt.
pub fn jump_solve(model: &Model, rho0: &DensityMatrix, t_grid: &[f64], opts: &JumpOptions) -> Result<Vec<JumpSample>> {
    validate_grid(t_grid)?;
    if !(opts.dt > 0.0) || !opts.dt.is_finite() {
        return Err(Error::invalid(format!("step dt must be positive, got {}", opts.dt)));
    }
    let n = model.params().n_qubits;
    let start = product_matrix(model, rho0)?;
    let k_max = max_jumps(&start, n);

    let frame = Frame(if n == 2 || n == 3 { Some(collective_basis(n)?) } else { None });
    let heff = frame.into_frame(&model.effective_hamiltonian().matrix);
    let a = heff.scale(C64::new(0.0, -1.0));
    let lower = frame.into_frame(&model.ops().minus).scale_real(model.params().gamma.sqrt());
    let drift = Drift { a_dag: a.adjoint(), raise: lower.adjoint(), a, lower };

    let mut head = frame.into_frame(&start);
    let mut levels = vec![ComplexMatrix::zeros(start.dim()); k_max];
    let mut out = Vec::with_capacity(t_grid.len());
    out.push(sample(&frame, 0.0, &head, &levels)?);

    let mut cached: Option<(f64, ComplexMatrix)> = None;
    for w in t_grid.windows(2) {
        let (steps, h) = substeps(w[1] - w[0], opts.dt);
        let half = match &cached {
            Some((ch, u)) if *ch == h => u.clone(),
            _ => {
                let u = expm(&drift.a.scale_real(h / 2.0))?;
                cached = Some((h, u.clone()));
                u
            }
        };
        for _ in 0..steps {
            step(&drift, &half, h, &mut head, &mut levels);
        }
        out.push(sample(&frame, w[1], &head, &levels)?);
    }
    Ok(out)
}

fn sample(frame: &Frame, time: f64, head: &ComplexMatrix, levels: &[ComplexMatrix]) -> Result<JumpSample> {
    let conditionals: Vec<ComplexMatrix> =
        std::iter::once(head).chain(levels.iter()).map(|m| frame.out_of_frame(m)).collect();
    let hierarchy = JumpHierarchy { conditionals };
    let total = hierarchy.total();
    let tr = total.trace();
    if (tr.re - 1.0).abs() > TRACE_LEAK_TOL || !tr.re.is_finite() {
        return Err(Error::NumericalFailure(format!("jump hierarchy lost trace: tr ρ = {} at t = {time}", tr.re)));
    }
    Ok(JumpSample { time, hierarchy, rho: DensityMatrix::from_trusted(total, BasisTag::Product) })
}

/// One RK4 step for levels 1..=k_max; the head level enters as an exact source.
fn step(drift: &Drift, half: &ComplexMatrix, h: f64, head: &mut ComplexMatrix, levels: &mut [ComplexMatrix]) {
    let head_mid = half.sandwich(head);
    let head_end = half.sandwich(&head_mid);
    let k = levels.len();
    if k > 0 {
        let stage = |y: &[ComplexMatrix], src0: &ComplexMatrix| -> Vec<ComplexMatrix> {
            (0..k).map(|i| drift.rate(&y[i], if i == 0 { src0 } else { &y[i - 1] })).collect()
        };
        let shifted = |base: &[ComplexMatrix], by: &[ComplexMatrix], s: f64| -> Vec<ComplexMatrix> {
            base.iter()
                .zip(by)
                .map(|(b, d)| {
                    let mut y = b.clone();
                    y.axpy(s, d);
                    y
                })
                .collect()
        };
        let k1 = stage(levels, head);
        let k2 = stage(&shifted(levels, &k1, h / 2.0), &head_mid);
        let k3 = stage(&shifted(levels, &k2, h / 2.0), &head_mid);
        let k4 = stage(&shifted(levels, &k3, h), &head_end);
        for i in 0..k {
            levels[i].axpy(h / 6.0, &k1[i]);
            levels[i].axpy(h / 3.0, &k2[i]);
            levels[i].axpy(h / 3.0, &k3[i]);
            levels[i].axpy(h / 6.0, &k4[i]);
        }
    }
    *head = head_end;
}
