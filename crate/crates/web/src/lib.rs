//! WebAssembly bindings for the browser demo. Every export returns a flat
//! `Float64Array`; curves share the grid produced by [`time_grid`].

use wasm_bindgen::prelude::*;

use commonbath::dynamics::{jump_solve, JumpOptions, Model};
use commonbath::entanglement::{concurrence, negativity};
use commonbath::hilbert::{product_state, werner_state, ModelParams, WernerSign};
use commonbath::oracles::{steady_concurrence_werner, ClosedFormSolution};
use commonbath::scenario::linspace;
use commonbath::{DensityMatrix, Result};

/// Upper bound on samples per curve, to keep the page responsive.
pub const MAX_POINTS: usize = 2001;

fn grid(t_max: f64, points: usize) -> Result<Vec<f64>> {
    if !(t_max.is_finite() && t_max > 0.0) || !(2..=MAX_POINTS).contains(&points) {
        return Err(commonbath::Error::InvalidInput(format!(
            "need t_max > 0 and 2..={MAX_POINTS} points, got t_max = {t_max}, points = {points}"
        )));
    }
    Ok(linspace(0.0, t_max, points))
}

fn evolve(n: usize, g: f64, gamma: f64, rho0: &DensityMatrix, grid: &[f64]) -> Result<Vec<DensityMatrix>> {
    let model = Model::new(ModelParams::new(n, g, gamma)?)?;
    Ok(jump_solve(&model, rho0, grid, &JumpOptions::default())?.into_iter().map(|s| s.rho).collect())
}

fn sign(plus: bool) -> WernerSign {
    if plus {
        WernerSign::Plus
    } else {
        WernerSign::Minus
    }
}

/// Numerical C(t) for |+−⟩ followed by the closed form on the same grid.
pub fn plus_minus_concurrence(g: f64, gamma: f64, t_max: f64, points: usize) -> Result<Vec<f64>> {
    let grid = grid(t_max, points)?;
    let states = evolve(2, g, gamma, &product_state("+-")?, &grid)?;
    let exact = ClosedFormSolution::two_qubit_plus_minus(g, gamma)?;
    let mut out = states.iter().map(concurrence).collect::<Result<Vec<f64>>>()?;
    for t in &grid {
        out.push(exact.concurrence_exact(*t)?);
    }
    Ok(out)
}

/// C(t) for a Werner state, followed by its stationary value as a last entry.
pub fn werner_concurrence(p: f64, plus: bool, gamma: f64, t_max: f64, points: usize) -> Result<Vec<f64>> {
    let grid = grid(t_max, points)?;
    // The coupling does not act on Werner states, so g = 0 is exact.
    let states = evolve(2, 0.0, gamma, &werner_state(p, sign(plus))?, &grid)?;
    let mut out = states.iter().map(concurrence).collect::<Result<Vec<f64>>>()?;
    out.push(steady_concurrence_werner(p, sign(plus)));
    Ok(out)
}

/// N_A(t), N_B(t), N_C(t) for |+−+⟩, concatenated.
pub fn three_qubit_negativity(g: f64, gamma: f64, t_max: f64, points: usize) -> Result<Vec<f64>> {
    let grid = grid(t_max, points)?;
    let states = evolve(3, g, gamma, &product_state("+-+")?, &grid)?;
    let mut out = Vec::with_capacity(3 * points);
    for site in 1..=3 {
        for rho in &states {
            out.push(negativity(rho, site)?);
        }
    }
    Ok(out)
}

fn js(result: Result<Vec<f64>>) -> std::result::Result<Vec<f64>, JsError> {
    result.map_err(|e| JsError::new(&e.to_string()))
}

#[wasm_bindgen(js_name = timeGrid)]
pub fn time_grid(t_max: f64, points: usize) -> std::result::Result<Vec<f64>, JsError> {
    js(grid(t_max, points))
}

#[wasm_bindgen(js_name = plusMinusConcurrence)]
pub fn plus_minus_concurrence_js(g: f64, gamma: f64, t_max: f64, points: usize) -> std::result::Result<Vec<f64>, JsError> {
    js(plus_minus_concurrence(g, gamma, t_max, points))
}

#[wasm_bindgen(js_name = wernerConcurrence)]
pub fn werner_concurrence_js(p: f64, plus: bool, gamma: f64, t_max: f64, points: usize) -> std::result::Result<Vec<f64>, JsError> {
    js(werner_concurrence(p, plus, gamma, t_max, points))
}

#[wasm_bindgen(js_name = threeQubitNegativity)]
pub fn three_qubit_negativity_js(g: f64, gamma: f64, t_max: f64, points: usize) -> std::result::Result<Vec<f64>, JsError> {
    js(three_qubit_negativity(g, gamma, t_max, points))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn plus_minus_numeric_half_tracks_closed_form() {
        let points = 101;
        let out = plus_minus_concurrence(1.0, 0.1, 20.0, points).unwrap();
        assert_eq!(out.len(), 2 * points);
        let (numeric, exact) = out.split_at(points);
        for (a, b) in numeric.iter().zip(exact) {
            assert!((a - b).abs() < 1e-8);
        }
        assert_eq!(numeric[0], 0.0);
    }

    #[test]
    fn werner_curve_ends_with_stationary_value() {
        let out = werner_concurrence(0.6, false, 0.1, 10.0, 11).unwrap();
        assert_eq!(out.len(), 12);
        assert!((out[0] - 0.4).abs() < 1e-9);
        assert!((out[11] - 0.7).abs() < 1e-12);
    }

    #[test]
    fn outer_qubits_are_symmetric() {
        let points = 21;
        let out = three_qubit_negativity(0.2, 0.1, 20.0, points).unwrap();
        let (a, c) = (&out[..points], &out[2 * points..]);
        for (x, y) in a.iter().zip(c) {
            assert!((x - y).abs() < 1e-9);
        }
        assert!(out.iter().all(|v| *v >= 0.0));
    }

    #[test]
    fn bad_grids_are_rejected() {
        assert!(grid(0.0, 10).is_err());
        assert!(grid(f64::NAN, 10).is_err());
        assert!(grid(10.0, 1).is_err());
        assert!(grid(10.0, MAX_POINTS + 1).is_err());
        assert_eq!(grid(10.0, 3).unwrap(), vec![0.0, 5.0, 10.0]);
    }
}
