use num_complex::Complex64 as C64;

use commonbath::dynamics::{jump_solve, liouvillian_solve, rk4_solve, stationary_subspace, steady_state, JumpOptions, Model};
use commonbath::hilbert::{collective_basis, product_state, werner_state, CollectiveLabel, ModelParams, WernerSign};
use commonbath::linalg::eig_general;
use commonbath::oracles::ClosedFormSolution;
use commonbath::random::{random_density_matrix, seeded_rng};
use commonbath::scenario::linspace;
use commonbath::{BasisTag, DensityMatrix};

fn model(n: usize, g: f64, gamma: f64) -> Model {
    Model::new(ModelParams::new(n, g, gamma).unwrap()).unwrap()
}

fn pure(n: usize, amps: &[(CollectiveLabel, C64)]) -> DensityMatrix {
    let basis = collective_basis(n).unwrap();
    let mut ket = vec![C64::new(0.0, 0.0); basis.dim()];
    for (label, a) in amps {
        for (x, y) in ket.iter_mut().zip(basis.ket(*label)) {
            *x += a * y;
        }
    }
    DensityMatrix::pure(&ket, BasisTag::Product).unwrap()
}

#[test]
fn plus_minus_matches_closed_form_on_a_shorter_window() {
    let sol = ClosedFormSolution::two_qubit_plus_minus(1.0, 0.1).unwrap();
    let grid = linspace(0.0, 40.0, 81);
    for s in jump_solve(&model(2, 1.0, 0.1), &product_state("+-").unwrap(), &grid, &JumpOptions::default()).unwrap() {
        assert!(s.rho.matrix().approx_eq(sol.rho_exact(s.time).unwrap().matrix(), 1e-6));
    }
}

#[test]
fn werner_secular_term_is_reproduced() {
    // The |1,0⟩ population of ρ₊ carries a γt·e^{−2γt} term from the
    // degenerate decay |1,1⟩ → |1,0⟩.
    for p in [-1.0 / 3.0, 0.2, 0.8] {
        let sol = ClosedFormSolution::werner(p, WernerSign::Plus, 0.1).unwrap();
        let grid = linspace(0.0, 60.0, 61);
        let rho0 = werner_state(p, WernerSign::Plus).unwrap();
        for solver_out in [
            jump_solve(&model(2, 0.0, 0.1), &rho0, &grid, &JumpOptions::default()).unwrap().into_iter().map(|s| s.rho).collect::<Vec<_>>(),
            rk4_solve(&model(2, 0.0, 0.1), &rho0, &grid, 1e-3).unwrap(),
        ] {
            for (t, rho) in grid.iter().zip(&solver_out) {
                assert!(rho.matrix().approx_eq(sol.rho_exact(*t).unwrap().matrix(), 1e-7), "p={p} t={t}");
            }
        }
    }
}

#[test]
fn werner_evolution_ignores_the_coupling() {
    let rho0 = werner_state(0.6, WernerSign::Minus).unwrap();
    let grid = linspace(0.0, 30.0, 31);
    let base = liouvillian_solve(&model(2, 0.0, 0.1), &rho0, &grid).unwrap();
    for g in [0.2, 1.0, 3.0] {
        let other = liouvillian_solve(&model(2, g, 0.1), &rho0, &grid).unwrap();
        for (a, b) in base.iter().zip(&other) {
            assert!(a.matrix().approx_eq(b.matrix(), 1e-7));
        }
    }
}

#[test]
fn steady_states_from_closed_forms() {
    let cases = [
        (ClosedFormSolution::two_qubit_plus_minus(1.0, 0.1).unwrap(), 2),
        (ClosedFormSolution::werner(0.6, WernerSign::Plus, 0.1).unwrap(), 2),
        (ClosedFormSolution::werner(-0.2, WernerSign::Minus, 0.1).unwrap(), 2),
        (ClosedFormSolution::three_qubit_pmp(1.0, 0.1).unwrap(), 3),
        (ClosedFormSolution::three_qubit_pmp(0.0, 0.1).unwrap(), 3),
    ];
    for (sol, n) in cases {
        let m = model(n, sol.params.g, 0.1);
        let s = steady_state(&m, &sol.initial_state()).unwrap();
        assert!(s.matrix().approx_eq(sol.steady_state().matrix(), 1e-9), "{:?}", sol.scenario);
        assert!(m.liouvillian().apply(s.matrix()).max_abs() <= 1e-8);
        assert!(s.min_eigenvalue().unwrap() > -1e-9);
    }
}

#[test]
fn stationary_subspace_dimension_depends_on_coupling() {
    // At g = 0 the |1,−1⟩⟨0,0| coherences are stationary as well; any g ≠ 0
    // makes them rotate at frequency g.
    assert_eq!(stationary_subspace(&model(2, 0.0, 0.1)).unwrap().dim(), 4);
    assert_eq!(stationary_subspace(&model(2, 0.5, 0.1)).unwrap().dim(), 2);
    assert_eq!(stationary_subspace(&model(3, 0.0, 0.1)).unwrap().dim(), 9);
    assert_eq!(stationary_subspace(&model(3, 0.5, 0.1)).unwrap().dim(), 5);
}

#[test]
fn liouvillian_spectrum_is_dissipative() {
    for (n, g) in [(2, 0.0), (2, 1.0), (3, 0.4)] {
        let l = model(n, g, 0.1).liouvillian();
        let values = eig_general(&l.matrix).unwrap().values;
        let top = values.iter().map(|z| z.re).fold(f64::NEG_INFINITY, f64::max);
        assert!(top <= 1e-10, "N={n} g={g}: max Re λ = {top}");
        let zeros = values.iter().filter(|z| z.norm() < 1e-9).count();
        assert_eq!(zeros, stationary_subspace(&model(n, g, 0.1)).unwrap().dim());
    }
}

#[test]
fn liouvillian_preserves_trace_and_hermiticity() {
    let mut rng = seeded_rng(4);
    for n in [2, 3] {
        let l = model(n, 0.8, 0.1).liouvillian();
        for _ in 0..10 {
            let rho = random_density_matrix(&mut rng, n);
            let out = l.apply(rho.matrix());
            assert!(out.trace().norm() < 1e-10);
            assert!(out.hermiticity_defect() < 1e-10);
        }
    }
}

#[test]
fn decoherence_free_coherences_at_zero_coupling() {
    let grid = linspace(0.0, 100.0, 21);
    let two = pure(2, &[(CollectiveLabel::two(1.0, -1.0), C64::new(0.6, 0.0)), (CollectiveLabel::two(0.0, 0.0), C64::new(0.0, 0.8))]);
    let three = pure(
        3,
        &[
            (CollectiveLabel::three(1.0, 1.5, -1.5), C64::new(0.5, 0.0)),
            (CollectiveLabel::three(0.0, 0.5, -0.5), C64::new(0.5, 0.5)),
            (CollectiveLabel::three(1.0, 0.5, -0.5), C64::new(-0.5, 0.0)),
        ],
    );
    for (n, rho0) in [(2, two), (3, three)] {
        let m = model(n, 0.0, 0.1);
        for run in [
            jump_solve(&m, &rho0, &grid, &JumpOptions::default()).unwrap().into_iter().map(|s| s.rho).collect::<Vec<_>>(),
            rk4_solve(&m, &rho0, &grid, 1e-3).unwrap(),
            liouvillian_solve(&m, &rho0, &grid).unwrap(),
        ] {
            for rho in &run {
                assert!(rho.matrix().approx_eq(rho0.matrix(), 1e-8));
            }
        }
    }
}

#[test]
fn cross_sector_coherence_rotates_when_coupled() {
    // |1,−1⟩ and |0,0⟩ are each stationary but sit at energies 0 and −g.
    let g = 1.0;
    let rho0 = pure(2, &[(CollectiveLabel::two(1.0, -1.0), C64::new(1.0, 0.0)), (CollectiveLabel::two(0.0, 0.0), C64::new(1.0, 0.0))]);
    let t = 0.7;
    let out = liouvillian_solve(&model(2, g, 0.1), &rho0, &[0.0, t]).unwrap();
    let basis = collective_basis(2).unwrap();
    let c = basis.to_collective(out[1].matrix());
    let (a, b) = (basis.idx(CollectiveLabel::two(1.0, -1.0)), basis.idx(CollectiveLabel::two(0.0, 0.0)));
    let expected = C64::new(0.0, -g * t).exp() * 0.5;
    assert!((c[(a, b)] - expected).norm() < 1e-12);
}

#[test]
fn hierarchy_structure() {
    let m = model(3, 1.0, 0.1);
    let grid = linspace(0.0, 40.0, 81);
    let out = jump_solve(&m, &product_state("+-+").unwrap(), &grid, &JumpOptions::default()).unwrap();
    let mut last_top = 0.0;
    for s in &out {
        assert_eq!(s.hierarchy.k_max(), 2);
        let w = s.hierarchy.weights();
        assert!((w.iter().sum::<f64>() - 1.0).abs() < 1e-7);
        for c in &s.hierarchy.conditionals {
            assert!(c.hermiticity_defect() < 1e-10);
            let dm = DensityMatrix::new(c.scale_real(1.0 / c.trace().re.max(1e-300)), BasisTag::Product);
            assert!(c.trace().re < 1e-12 || dm.is_ok());
        }
        // Photons are only ever emitted.
        assert!(w[2] >= last_top - 1e-12);
        last_top = w[2];
    }
    // Two excitations never produce a third photon: the summed state has no
    // population that requires one.
    let basis = collective_basis(3).unwrap();
    let top = basis.idx(CollectiveLabel::three(1.0, 1.5, 1.5));
    for s in &out {
        assert!(basis.to_collective(s.rho.matrix())[(top, top)].norm() < 1e-12);
    }
}

#[test]
fn doublet_superposition_ratio_survives_jumps() {
    // In |+−+⟩ the j = ½ sectors enter as (√3/2)|0,½,m⟩ − ½|1,½,m⟩; jumps and
    // the no-jump evolution both preserve that ratio.
    let grid = linspace(0.0, 50.0, 26);
    let basis = collective_basis(3).unwrap();
    let out = jump_solve(&model(3, 1.0, 0.1), &product_state("+-+").unwrap(), &grid, &JumpOptions::default()).unwrap();
    for s in out.iter().skip(1) {
        let c = basis.to_collective(s.rho.matrix());
        for m in [0.5, -0.5] {
            let i0 = basis.idx(CollectiveLabel::three(0.0, 0.5, m));
            let i1 = basis.idx(CollectiveLabel::three(1.0, 0.5, m));
            let (p0, p1, x) = (c[(i0, i0)].re, c[(i1, i1)].re, c[(i1, i0)]);
            if p0 > 1e-9 {
                assert!((p0 / p1 - 3.0).abs() < 1e-7, "m={m} t={}", s.time);
                assert!((x.re / p1 + 3f64.sqrt()).abs() < 1e-7 && x.im.abs() < 1e-9);
            }
        }
    }
}

#[test]
fn trace_and_positivity_for_random_starts() {
    let mut rng = seeded_rng(12);
    let grid = linspace(0.0, 20.0, 21);
    for n in [2, 3] {
        let rho0 = random_density_matrix(&mut rng, n);
        let m = model(n, 0.6, 0.1);
        for run in [
            jump_solve(&m, &rho0, &grid, &JumpOptions::default()).unwrap().into_iter().map(|s| s.rho).collect::<Vec<_>>(),
            rk4_solve(&m, &rho0, &grid, 1e-3).unwrap(),
            liouvillian_solve(&m, &rho0, &grid).unwrap(),
        ] {
            for rho in &run {
                assert!((rho.trace() - 1.0).abs() < 1e-6);
                assert!(rho.min_eigenvalue().unwrap() > -1e-6);
            }
        }
    }
}

#[test]
fn solvers_reject_bad_grids() {
    let m = model(2, 1.0, 0.1);
    let rho0 = product_state("+-").unwrap();
    for grid in [vec![], vec![0.5, 1.0], vec![0.0, 1.0, 1.0], vec![0.0, 2.0, 1.0]] {
        assert!(jump_solve(&m, &rho0, &grid, &JumpOptions::default()).is_err());
        assert!(rk4_solve(&m, &rho0, &grid, 1e-3).is_err());
        assert!(liouvillian_solve(&m, &rho0, &grid).is_err());
    }
    assert!(jump_solve(&m, &product_state("+-+").unwrap(), &[0.0, 1.0], &JumpOptions::default()).is_err());
}

#[test]
fn collective_basis_initial_state_is_accepted() {
    let basis = collective_basis(2).unwrap();
    let product = product_state("+-").unwrap();
    let collective = DensityMatrix::new(basis.to_collective(product.matrix()), BasisTag::Collective).unwrap();
    let m = model(2, 1.0, 0.1);
    let a = liouvillian_solve(&m, &product, &[0.0, 3.0]).unwrap();
    let b = liouvillian_solve(&m, &collective, &[0.0, 3.0]).unwrap();
    assert!(a[1].matrix().approx_eq(b[1].matrix(), 1e-13));
}
