//! Dissipative dynamics of N qubits coupled to a common vacuum bath.
//!
//! The master equation is
//!
//! dρ/dt = −i[H_I, ρ] + (γ/2)(2J₋ρJ₊ − J₊J₋ρ − ρJ₊J₋),
//!
//! and it is solved three independent ways: the conditional-density-matrix
//! (quantum jump) hierarchy in [`jump_solve`], direct Runge-Kutta integration
//! in [`rk4_solve`], and exponentiation of the Liouvillian superoperator in
//! [`liouvillian_solve`]. [`steady_state`] projects an initial state onto the
//! stationary subspace.

mod integrate;
mod jump;
mod steady;

pub use integrate::{liouvillian_solve, rk4_solve, validate_grid, DEFAULT_DT};
pub use jump::{jump_solve, JumpHierarchy, JumpOptions, JumpSample};
pub use steady::{stationary_subspace, steady_state, StationarySubspace};

use num_complex::Complex64 as C64;

use crate::error::{Error, Result};
use crate::hilbert::{collective_ops, embed, interaction_hamiltonian, pauli, CollectiveOps, ModelParams, Pauli};
use crate::linalg::{expm, ComplexMatrix};

/// Model operators built once per parameter set.
#[derive(Debug, Clone)]
pub struct Model {
    params: ModelParams,
    ops: CollectiveOps,
    h_int: ComplexMatrix,
    /// J₊J₋
    jpjm: ComplexMatrix,
}

impl Model {
    pub fn new(params: ModelParams) -> Result<Self> {
        let params = ModelParams::new(params.n_qubits, params.g, params.gamma)?;
        let ops = collective_ops(params.n_qubits)?;
        let h_int = interaction_hamiltonian(&params)?;
        let jpjm = &ops.plus * &ops.minus;
        Ok(Self { params, ops, h_int, jpjm })
    }

    pub fn params(&self) -> &ModelParams {
        &self.params
    }

    pub fn ops(&self) -> &CollectiveOps {
        &self.ops
    }

    pub fn dim(&self) -> usize {
        self.params.dim()
    }

    pub fn interaction_hamiltonian(&self) -> &ComplexMatrix {
        &self.h_int
    }

    /// H_eff = H_I − (iγ/2) J₊J₋, the generator of the no-jump evolution.
    pub fn effective_hamiltonian(&self) -> EffectiveHamiltonian {
        let damping = self.jpjm.scale(C64::new(0.0, -self.params.gamma / 2.0));
        EffectiveHamiltonian { matrix: &self.h_int + &damping }
    }

    fn check_dim(&self, rho: &ComplexMatrix) -> Result<()> {
        if rho.dim() != self.dim() {
            return Err(Error::invalid(format!("state has dimension {}, model expects {}", rho.dim(), self.dim())));
        }
        Ok(())
    }

    /// dρ/dt from the collective form of the master equation.
    pub fn lindblad_generator(&self, rho: &ComplexMatrix) -> Result<ComplexMatrix> {
        self.check_dim(rho)?;
        let gamma = self.params.gamma;
        let unitary = self.h_int.commutator(rho).scale(C64::new(0.0, -1.0));
        let jump = &(&self.ops.minus * rho) * &self.ops.plus;
        let anti = &(&self.jpjm * rho) + &(rho * &self.jpjm);
        let dissipator = (&jump.scale_real(2.0) - &anti).scale_real(gamma / 2.0);
        Ok(&unitary + &dissipator)
    }

    /// dρ/dt from the individual-mode form, summing σ₋ⁱ ρ σ₊ʲ over all
    /// pairs (i, j). The i ≠ j terms are the bath-mediated couplings.
    pub fn lindblad_generator_individual(&self, rho: &ComplexMatrix) -> Result<ComplexMatrix> {
        self.individual_generator(rho, true)
    }

    /// Individual-mode generator with the cross terms i ≠ j dropped, i.e.
    /// each qubit decaying into its own independent bath.
    pub fn lindblad_generator_independent_baths(&self, rho: &ComplexMatrix) -> Result<ComplexMatrix> {
        self.individual_generator(rho, false)
    }

    fn individual_generator(&self, rho: &ComplexMatrix, cross_terms: bool) -> Result<ComplexMatrix> {
        self.check_dim(rho)?;
        let n = self.params.n_qubits;
        let lower: Vec<ComplexMatrix> = (1..=n).map(|i| embed(&pauli(Pauli::Minus), i, n)).collect::<Result<_>>()?;
        let raise: Vec<ComplexMatrix> = lower.iter().map(ComplexMatrix::adjoint).collect();
        let mut dissipator = ComplexMatrix::zeros(self.dim());
        for i in 0..n {
            for j in 0..n {
                if i != j && !cross_terms {
                    continue;
                }
                let pair = &raise[j] * &lower[i];
                dissipator += &(&(&lower[i] * rho) * &raise[j]).scale_real(2.0);
                dissipator -= &(&pair * rho);
                dissipator -= &(rho * &pair);
            }
        }
        let unitary = self.h_int.commutator(rho).scale(C64::new(0.0, -1.0));
        Ok(&unitary + &dissipator.scale_real(self.params.gamma / 2.0))
    }

    /// Liouvillian superoperator acting on column-stacked density matrices,
    /// vec(AρB) = (Bᵀ ⊗ A) vec(ρ).
    pub fn liouvillian(&self) -> Liouvillian {
        let d = self.dim();
        let id = ComplexMatrix::identity(d);
        let minus_i = C64::new(0.0, -1.0);
        let gamma = self.params.gamma;
        let unitary = (&id.kron(&self.h_int) - &self.h_int.transpose().kron(&id)).scale(minus_i);
        let jump = self.ops.plus.transpose().kron(&self.ops.minus).scale_real(gamma);
        let anti = (&id.kron(&self.jpjm) + &self.jpjm.transpose().kron(&id)).scale_real(gamma / 2.0);
        Liouvillian { matrix: &(&unitary + &jump) - &anti }
    }
}

/// Non-Hermitian H_eff = H_I − (iγ/2) J₊J₋.
#[derive(Debug, Clone)]
pub struct EffectiveHamiltonian {
    pub matrix: ComplexMatrix,
}

impl EffectiveHamiltonian {
    /// e^{−i H_eff t}
    pub fn propagator(&self, t: f64) -> Result<ComplexMatrix> {
        Ok(expm(&self.matrix.scale(C64::new(0.0, -t)))?)
    }

    /// ρ⁽⁰⁾(t) = e^{−iH_eff t} ρ(0) e^{iH_eff† t}, the no-jump conditional state.
    pub fn no_jump_state(&self, rho0: &ComplexMatrix, t: f64) -> Result<ComplexMatrix> {
        Ok(self.propagator(t)?.sandwich(rho0))
    }
}

/// Column-stacking superoperator L with d vec(ρ)/dt = L vec(ρ).
#[derive(Debug, Clone)]
pub struct Liouvillian {
    pub matrix: ComplexMatrix,
}

impl Liouvillian {
    pub fn apply(&self, rho: &ComplexMatrix) -> ComplexMatrix {
        ComplexMatrix::unvectorize(&self.matrix.mul_vec(&rho.vectorize()))
    }
}

/// Free-function form of [`Model::lindblad_generator`].
pub fn lindblad_generator(params: &ModelParams, rho: &ComplexMatrix) -> Result<ComplexMatrix> {
    Model::new(*params)?.lindblad_generator(rho)
}

/// Free-function form of [`Model::lindblad_generator_individual`].
pub fn lindblad_generator_individual(params: &ModelParams, rho: &ComplexMatrix) -> Result<ComplexMatrix> {
    Model::new(*params)?.lindblad_generator_individual(rho)
}

pub fn effective_hamiltonian(params: &ModelParams) -> Result<EffectiveHamiltonian> {
    Ok(Model::new(*params)?.effective_hamiltonian())
}

pub fn liouvillian(params: &ModelParams) -> Result<Liouvillian> {
    Ok(Model::new(*params)?.liouvillian())
}
