//! Scenario runner: builds the initial states and couplings for each scenario,
//! evolves them with the chosen solver and tabulates the entanglement measures.

mod config;
mod table;

pub use config::{linspace, parse_config_text, InitialSpec, ScenarioConfig, ScenarioKind, SolverKind, DEFAULT_P_POINTS};
pub use table::{format_sig, ResultTable};

use std::collections::HashSet;
use std::fmt;
#[cfg(not(target_arch = "wasm32"))]
use std::path::PathBuf;

use crate::dynamics::{jump_solve, liouvillian_solve, rk4_solve, JumpOptions, Model};
use crate::entanglement::{concurrence, negativity};
use crate::error::{Error, Result};
use crate::hilbert::{product_state, werner_state, ModelParams, WernerSign};
use crate::oracles::ClosedFormSolution;
use crate::random::{random_pure_state, seeded_rng};
use crate::state::DensityMatrix;

/// Largest solver disagreement `compare` accepts.
pub const COMPARE_TOL: f64 = 1e-5;

/// One trajectory to evolve.
#[derive(Debug, Clone)]
pub struct CurveSpec {
    pub params: ModelParams,
    pub initial: DensityMatrix,
    pub analytic: Option<ClosedFormSolution>,
}

enum Layout {
    /// Concurrence of curve k into column `names[k]`.
    Concurrence(Vec<String>),
    /// One-vs-rest negativity of every site of curve k, columns `N_<site>_<suffix>`.
    Negativity(Vec<String>),
    /// ΔC columns: (name, curve with coupling, curve without).
    Delta(Vec<(String, usize, usize)>),
}

struct Plan {
    curves: Vec<CurveSpec>,
    layout: Layout,
}

fn label(x: f64) -> String {
    format_sig(x, 6)
}

fn site_letter(site: usize) -> char {
    (b'A' + (site - 1) as u8) as char
}

fn initial_state(spec: &InitialSpec, n_qubits: usize) -> Result<DensityMatrix> {
    match spec {
        InitialSpec::Product(l) => product_state(l),
        InitialSpec::Werner { sign, p } => werner_state(*p, *sign),
        InitialSpec::Random { seed } => Ok(random_pure_state(&mut seeded_rng(*seed), n_qubits)),
    }
}

fn analytic_for(spec: &InitialSpec, params: &ModelParams) -> Option<ClosedFormSolution> {
    match (spec, params.n_qubits) {
        (InitialSpec::Product(l), 2) if l == "+-" => ClosedFormSolution::two_qubit_plus_minus(params.g, params.gamma).ok(),
        (InitialSpec::Product(l), 3) if l == "+-+" => ClosedFormSolution::three_qubit_pmp(params.g, params.gamma).ok(),
        (InitialSpec::Werner { sign, p }, 2) => ClosedFormSolution::werner(*p, *sign, params.gamma).ok(),
        _ => None,
    }
}

fn curve(cfg: &ScenarioConfig, init: &InitialSpec, g: f64, gamma: f64) -> Result<CurveSpec> {
    let params = ModelParams::new(cfg.n_qubits, g, gamma)?;
    Ok(CurveSpec { params, initial: initial_state(init, cfg.n_qubits)?, analytic: analytic_for(init, &params) })
}

fn plan(cfg: &ScenarioConfig) -> Result<Plan> {
    cfg.validate()?;
    let mut curves = Vec::new();
    let layout = match cfg.scenario {
        ScenarioKind::Fig2 => {
            let mut gammas = vec![cfg.gamma];
            if cfg.gamma != 0.0 {
                gammas.push(0.0);
            }
            let mut cols = Vec::new();
            for &gamma in &gammas {
                let base = curves.len();
                curves.push(curve(cfg, &cfg.initial_state, 0.0, gamma)?);
                for &g in &cfg.g_values {
                    cols.push((format!("dC_g{}_gamma{}", label(g), label(gamma)), curves.len(), base));
                    curves.push(curve(cfg, &cfg.initial_state, g, gamma)?);
                }
            }
            Layout::Delta(cols)
        }
        ScenarioKind::Fig3 | ScenarioKind::Fig4 => {
            let sign = if cfg.scenario == ScenarioKind::Fig3 { WernerSign::Plus } else { WernerSign::Minus };
            let mut names = Vec::new();
            for &g in &cfg.g_values {
                for &p in &cfg.p_grid {
                    let init = InitialSpec::Werner { sign, p };
                    names.push(if cfg.g_values.len() == 1 {
                        format!("C_p{}", label(p))
                    } else {
                        format!("C_g{}_p{}", label(g), label(p))
                    });
                    curves.push(curve(cfg, &init, g, cfg.gamma)?);
                }
            }
            Layout::Concurrence(names)
        }
        _ => {
            let mut names = Vec::new();
            for &g in &cfg.g_values {
                names.push(format!("g{}", label(g)));
                curves.push(curve(cfg, &cfg.initial_state, g, cfg.gamma)?);
            }
            if cfg.n_qubits == 2 {
                Layout::Concurrence(names.into_iter().map(|s| format!("C_{s}")).collect())
            } else {
                Layout::Negativity(names)
            }
        }
    };
    Ok(Plan { curves, layout })
}

fn with_context(err: Error, ctx: &str) -> Error {
    match err {
        Error::InvalidInput(m) => Error::InvalidInput(format!("{ctx}: {m}")),
        Error::NumericalFailure(m) => Error::NumericalFailure(format!("{ctx}: {m}")),
        Error::Linalg(e) => Error::NumericalFailure(format!("{ctx}: {e}")),
    }
}

/// Evolves one curve on `grid` with the chosen solver.
pub fn evolve(spec: &CurveSpec, solver: SolverKind, grid: &[f64], dt: f64) -> Result<Vec<DensityMatrix>> {
    let ctx = format!("{solver} solver, g = {}, gamma = {}", spec.params.g, spec.params.gamma);
    let run = || -> Result<Vec<DensityMatrix>> {
        match solver {
            SolverKind::Analytic => {
                let sol = spec.analytic.as_ref().ok_or_else(|| Error::invalid("solver: analytic solution unavailable for this initial state"))?;
                grid.iter().map(|&t| sol.rho_exact(t)).collect()
            }
            SolverKind::Jump => {
                let model = Model::new(spec.params)?;
                Ok(jump_solve(&model, &spec.initial, grid, &JumpOptions { dt })?.into_iter().map(|s| s.rho).collect())
            }
            SolverKind::Rk4 => rk4_solve(&Model::new(spec.params)?, &spec.initial, grid, dt),
            SolverKind::Liouvillian => liouvillian_solve(&Model::new(spec.params)?, &spec.initial, grid),
        }
    };
    run().map_err(|e| with_context(e, &ctx))
}

#[cfg(not(target_arch = "wasm32"))]
fn evolve_all(curves: &[CurveSpec], solver: SolverKind, grid: &[f64], dt: f64) -> Result<Vec<Vec<DensityMatrix>>> {
    let workers = std::thread::available_parallelism().map_or(1, |n| n.get()).max(1);
    let mut out = Vec::with_capacity(curves.len());
    for chunk in curves.chunks(workers) {
        let results: Vec<Result<Vec<DensityMatrix>>> = std::thread::scope(|s| {
            let handles: Vec<_> = chunk.iter().map(|c| s.spawn(move || evolve(c, solver, grid, dt))).collect();
            handles.into_iter().map(|h| h.join().expect("solver thread panicked")).collect()
        });
        for r in results {
            out.push(r?);
        }
    }
    Ok(out)
}

#[cfg(target_arch = "wasm32")]
fn evolve_all(curves: &[CurveSpec], solver: SolverKind, grid: &[f64], dt: f64) -> Result<Vec<Vec<DensityMatrix>>> {
    curves.iter().map(|c| evolve(c, solver, grid, dt)).collect()
}

fn concurrences(states: &[DensityMatrix]) -> Result<Vec<f64>> {
    states.iter().map(concurrence).collect()
}

fn tabulate(cfg: &ScenarioConfig, plan: &Plan, trajectories: &[Vec<DensityMatrix>]) -> Result<ResultTable> {
    let mut table = ResultTable::new(cfg.time_grid());
    let mut seen = HashSet::new();
    let mut push = |table: &mut ResultTable, name: String, values: Vec<f64>| -> Result<()> {
        if !seen.insert(name.clone()) {
            return Err(Error::invalid(format!("g/p values produce the duplicate column {name}; use values differing in 6 significant digits")));
        }
        table.push_column(name, values)
    };
    match &plan.layout {
        Layout::Concurrence(names) => {
            for (name, states) in names.iter().zip(trajectories) {
                push(&mut table, name.clone(), concurrences(states)?)?;
            }
        }
        Layout::Negativity(suffixes) => {
            for (suffix, states) in suffixes.iter().zip(trajectories) {
                for site in 1..=cfg.n_qubits {
                    let values = states.iter().map(|s| negativity(s, site)).collect::<Result<Vec<_>>>()?;
                    push(&mut table, format!("N_{}_{suffix}", site_letter(site)), values)?;
                }
            }
        }
        Layout::Delta(cols) => {
            let mut cache: Vec<Option<Vec<f64>>> = vec![None; trajectories.len()];
            for (name, with, without) in cols {
                for &k in [with, without] {
                    if cache[k].is_none() {
                        cache[k] = Some(concurrences(&trajectories[k])?);
                    }
                }
                let a = cache[*with].as_ref().expect("filled");
                let b = cache[*without].as_ref().expect("filled");
                push(&mut table, name.clone(), a.iter().zip(b).map(|(x, y)| x - y).collect())?;
            }
        }
    }
    Ok(table)
}

fn simulate(cfg: &ScenarioConfig, plan: &Plan, solver: SolverKind) -> Result<(Vec<Vec<DensityMatrix>>, ResultTable)> {
    let trajectories = evolve_all(&plan.curves, solver, &cfg.time_grid(), cfg.dt)?;
    let table = tabulate(cfg, plan, &trajectories)?;
    Ok((trajectories, table))
}

/// Runs the configured scenario with its solver.
pub fn run_scenario(cfg: &ScenarioConfig) -> Result<ResultTable> {
    let plan = plan(cfg)?;
    Ok(simulate(cfg, &plan, cfg.solver)?.1)
}

/// Writes `<scenario>.csv` and `<scenario>.meta` into the output directory.
#[cfg(not(target_arch = "wasm32"))]
pub fn write_outputs(cfg: &ScenarioConfig, table: &ResultTable) -> Result<(PathBuf, PathBuf)> {
    let dir = cfg.output_path.clone().unwrap_or_else(|| PathBuf::from("."));
    let io = |e: std::io::Error, what: &PathBuf| Error::invalid(format!("out: cannot write {}: {e}", what.display()));
    std::fs::create_dir_all(&dir).map_err(|e| io(e, &dir))?;
    let csv = dir.join(format!("{}.csv", cfg.scenario));
    let meta = dir.join(format!("{}.meta", cfg.scenario));
    std::fs::write(&csv, table.to_csv()).map_err(|e| io(e, &csv))?;
    std::fs::write(&meta, cfg.to_meta()).map_err(|e| io(e, &meta))?;
    Ok((csv, meta))
}

#[derive(Debug, Clone, PartialEq)]
pub struct PairDeviation {
    pub a: SolverKind,
    pub b: SolverKind,
    /// Largest entrywise density-matrix difference.
    pub state: f64,
    /// Largest difference of the tabulated measures.
    pub measure: f64,
}

impl PairDeviation {
    pub fn worst(&self) -> f64 {
        self.state.max(self.measure)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ComparisonReport {
    pub scenario: ScenarioKind,
    pub solvers: Vec<SolverKind>,
    pub analytic_available: bool,
    pub pairs: Vec<PairDeviation>,
}

impl ComparisonReport {
    pub fn passes(&self) -> bool {
        self.pairs.iter().all(|p| p.worst() <= COMPARE_TOL)
    }
}

impl fmt::Display for ComparisonReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "scenario {}", self.scenario)?;
        if !self.analytic_available {
            writeln!(f, "analytic: absent (no closed form for this initial state)")?;
        }
        writeln!(f, "{:<24} {:>14} {:>14}", "pair", "max|d rho|", "max|d measure|")?;
        for p in &self.pairs {
            let name = format!("{} vs {}", p.a, p.b);
            writeln!(f, "{name:<24} {:>14.3e} {:>14.3e}", p.state, p.measure)?;
        }
        write!(f, "{} (tolerance {COMPARE_TOL:e})", if self.passes() { "OK" } else { "EXCEEDED" })
    }
}

/// Runs every available solver on the same grid and reports pairwise deviations.
pub fn compare_solvers(cfg: &ScenarioConfig) -> Result<ComparisonReport> {
    let plan = plan(cfg)?;
    let analytic_available = plan.curves.iter().all(|c| c.analytic.is_some());
    let solvers: Vec<SolverKind> =
        SolverKind::ALL.into_iter().filter(|s| *s != SolverKind::Analytic || analytic_available).collect();
    let runs = solvers.iter().map(|&s| simulate(cfg, &plan, s)).collect::<Result<Vec<_>>>()?;
    let mut pairs = Vec::new();
    for i in 0..solvers.len() {
        for j in i + 1..solvers.len() {
            let state = runs[i]
                .0
                .iter()
                .zip(&runs[j].0)
                .flat_map(|(x, y)| x.iter().zip(y))
                .map(|(x, y)| x.matrix().max_abs_diff(y.matrix()))
                .fold(0.0, f64::max);
            let measure = runs[i].1.max_abs_diff(&runs[j].1).unwrap_or(0.0);
            pairs.push(PairDeviation { a: solvers[i], b: solvers[j], state, measure });
        }
    }
    Ok(ComparisonReport { scenario: cfg.scenario, solvers, analytic_available, pairs })
}
