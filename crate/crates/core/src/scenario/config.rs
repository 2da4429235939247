use std::collections::BTreeMap;
use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;

use crate::dynamics::DEFAULT_DT;
use crate::error::{Error, Result};
use crate::hilbert::{label_qubits, product_index, WernerSign};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ScenarioKind {
    /// C(t) from |+−⟩ for several couplings.
    Fig1,
    /// ΔC = C(g) − C(0) from |+−⟩, damped and undamped.
    Fig2,
    /// C(t) from W₊ over a grid of p.
    Fig3,
    /// C(t) from W₋ over a grid of p.
    Fig4,
    /// One-vs-rest negativities from |+−+⟩.
    Fig5,
    Custom,
}

impl ScenarioKind {
    pub const ALL: [ScenarioKind; 6] =
        [ScenarioKind::Fig1, ScenarioKind::Fig2, ScenarioKind::Fig3, ScenarioKind::Fig4, ScenarioKind::Fig5, ScenarioKind::Custom];

    pub fn name(self) -> &'static str {
        match self {
            ScenarioKind::Fig1 => "fig1",
            ScenarioKind::Fig2 => "fig2",
            ScenarioKind::Fig3 => "fig3",
            ScenarioKind::Fig4 => "fig4",
            ScenarioKind::Fig5 => "fig5",
            ScenarioKind::Custom => "custom",
        }
    }
}

impl fmt::Display for ScenarioKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for ScenarioKind {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Self::ALL
            .into_iter()
            .find(|k| k.name() == s.trim())
            .ok_or_else(|| Error::invalid(format!("scenario: unknown value {s:?} (expected fig1..fig5 or custom)")))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SolverKind {
    Jump,
    Rk4,
    Liouvillian,
    Analytic,
}

impl SolverKind {
    pub const ALL: [SolverKind; 4] = [SolverKind::Jump, SolverKind::Rk4, SolverKind::Liouvillian, SolverKind::Analytic];

    pub fn name(self) -> &'static str {
        match self {
            SolverKind::Jump => "jump",
            SolverKind::Rk4 => "rk4",
            SolverKind::Liouvillian => "liouvillian",
            SolverKind::Analytic => "analytic",
        }
    }
}

impl fmt::Display for SolverKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for SolverKind {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Self::ALL
            .into_iter()
            .find(|k| k.name() == s.trim())
            .ok_or_else(|| Error::invalid(format!("solver: unknown value {s:?} (expected jump, rk4, liouvillian or analytic)")))
    }
}

/// Initial state of a custom run.
#[derive(Debug, Clone, PartialEq)]
pub enum InitialSpec {
    /// Product state such as "+-+".
    Product(String),
    /// "werner+:0.8" or "werner-:0.3"
    Werner { sign: WernerSign, p: f64 },
    /// "random:SEED", a seeded random pure state.
    Random { seed: u64 },
}

impl InitialSpec {
    /// Qubit count implied by the initial state, if any.
    pub fn n_qubits(&self) -> Option<usize> {
        match self {
            InitialSpec::Product(label) => Some(label_qubits(label)),
            InitialSpec::Werner { .. } => Some(2),
            InitialSpec::Random { .. } => None,
        }
    }
}

impl fmt::Display for InitialSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            InitialSpec::Product(label) => f.write_str(label),
            InitialSpec::Werner { sign, p } => write!(f, "werner{}:{p}", sign.symbol()),
            InitialSpec::Random { seed } => write!(f, "random:{seed}"),
        }
    }
}

impl FromStr for InitialSpec {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let field = |msg: String| Error::invalid(format!("init: {msg}"));
        if let Some(rest) = s.strip_prefix("werner") {
            let (sign, p) = rest.split_once(':').ok_or_else(|| field(format!("{s:?} should look like werner+:0.8")))?;
            let sign = match sign {
                "+" => WernerSign::Plus,
                "-" | "−" => WernerSign::Minus,
                _ => return Err(field(format!("Werner sign in {s:?} must be + or -"))),
            };
            let p: f64 = p.trim().parse().map_err(|_| field(format!("cannot parse Werner p in {s:?}")))?;
            if !(-1.0 / 3.0 - 1e-12..=1.0 + 1e-12).contains(&p) {
                return Err(field(format!("Werner p = {p} outside [-1/3, 1]")));
            }
            return Ok(InitialSpec::Werner { sign, p });
        }
        if let Some(seed) = s.strip_prefix("random:") {
            let seed = seed.trim().parse().map_err(|_| field(format!("cannot parse seed in {s:?}")))?;
            return Ok(InitialSpec::Random { seed });
        }
        product_index(s).map_err(|_| field(format!("{s:?} is not a ±-string, werner±:p or random:SEED")))?;
        Ok(InitialSpec::Product(s.replace('−', "-")))
    }
}

/// Fully resolved run configuration.
#[derive(Debug, Clone, PartialEq)]
pub struct ScenarioConfig {
    pub scenario: ScenarioKind,
    pub n_qubits: usize,
    pub g_values: Vec<f64>,
    pub gamma: f64,
    /// Werner fidelities (fig3, fig4).
    pub p_grid: Vec<f64>,
    pub t_max: f64,
    pub t_points: usize,
    pub initial_state: InitialSpec,
    pub solver: SolverKind,
    pub dt: f64,
    pub output_path: Option<PathBuf>,
}

/// `count` evenly spaced values from `a` to `b` inclusive.
pub fn linspace(a: f64, b: f64, count: usize) -> Vec<f64> {
    match count {
        0 => Vec::new(),
        1 => vec![a],
        _ => (0..count).map(|k| if k + 1 == count { b } else { a + (b - a) * k as f64 / (count - 1) as f64 }).collect(),
    }
}

pub const DEFAULT_P_POINTS: usize = 29;

impl ScenarioConfig {
    pub fn defaults(scenario: ScenarioKind) -> Self {
        let (n_qubits, g_values, initial_state) = match scenario {
            ScenarioKind::Fig1 => (2, vec![0.0, 0.2, 1.0], InitialSpec::Product("+-".into())),
            ScenarioKind::Fig2 => (2, vec![1.0], InitialSpec::Product("+-".into())),
            ScenarioKind::Fig3 => (2, vec![0.0], InitialSpec::Werner { sign: WernerSign::Plus, p: 1.0 }),
            ScenarioKind::Fig4 => (2, vec![0.0], InitialSpec::Werner { sign: WernerSign::Minus, p: 1.0 }),
            ScenarioKind::Fig5 => (3, vec![0.0, 0.2, 1.0], InitialSpec::Product("+-+".into())),
            ScenarioKind::Custom => (2, vec![1.0], InitialSpec::Product("+-".into())),
        };
        let p_grid = match scenario {
            ScenarioKind::Fig3 | ScenarioKind::Fig4 => linspace(-1.0 / 3.0, 1.0, DEFAULT_P_POINTS),
            _ => Vec::new(),
        };
        Self {
            scenario,
            n_qubits,
            g_values,
            gamma: 0.1,
            p_grid,
            t_max: 50.0,
            t_points: 501,
            initial_state,
            solver: SolverKind::Jump,
            dt: DEFAULT_DT,
            output_path: None,
        }
    }

    /// Defaults for the scenario named in `settings`, then every other key applied.
    pub fn from_settings(settings: &BTreeMap<String, String>) -> Result<Self> {
        let scenario: ScenarioKind = settings
            .get("scenario")
            .ok_or_else(|| Error::invalid("scenario: missing (pass --scenario or set it in the config file)"))?
            .parse()?;
        let mut cfg = Self::defaults(scenario);
        let mut n_qubits_given = false;
        for (key, value) in settings {
            match key.as_str() {
                "scenario" => {}
                "n_qubits" => {
                    cfg.n_qubits = parse_num(key, value)?;
                    n_qubits_given = true;
                }
                "g" => cfg.g_values = parse_list(key, value)?,
                "gamma" => cfg.gamma = parse_num(key, value)?,
                "p" => cfg.p_grid = parse_list(key, value)?,
                "t_max" => cfg.t_max = parse_num(key, value)?,
                "t_points" => cfg.t_points = parse_num(key, value)?,
                "init" => cfg.initial_state = value.parse()?,
                "solver" => cfg.solver = value.parse()?,
                "dt" => cfg.dt = parse_num(key, value)?,
                "out" => cfg.output_path = Some(PathBuf::from(value.trim())),
                _ => return Err(Error::invalid(format!("{key}: unknown configuration key"))),
            }
        }
        if !n_qubits_given {
            if let Some(n) = cfg.initial_state.n_qubits() {
                cfg.n_qubits = n;
            }
        }
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |field: &str, msg: String| Err(Error::invalid(format!("{field}: {msg}")));
        if self.t_points < 2 {
            return bad("t_points", format!("must be at least 2, got {}", self.t_points));
        }
        if !(self.t_max > 0.0) || !self.t_max.is_finite() {
            return bad("t_max", format!("must be positive, got {}", self.t_max));
        }
        if self.g_values.is_empty() {
            return bad("g", "needs at least one value".into());
        }
        if let Some(g) = self.g_values.iter().find(|g| !g.is_finite()) {
            return bad("g", format!("{g} is not finite"));
        }
        if !(self.gamma >= 0.0) || !self.gamma.is_finite() {
            return bad("gamma", format!("must be finite and non-negative, got {}", self.gamma));
        }
        if !(self.dt > 0.0) || !self.dt.is_finite() {
            return bad("dt", format!("must be positive, got {}", self.dt));
        }
        if !(1..=4).contains(&self.n_qubits) {
            return bad("n_qubits", format!("must be between 1 and 4, got {}", self.n_qubits));
        }
        match self.scenario {
            ScenarioKind::Fig3 | ScenarioKind::Fig4 => {
                if self.p_grid.is_empty() {
                    return bad("p", "needs at least one value".into());
                }
                if let Some(p) = self.p_grid.iter().find(|p| !(-1.0 / 3.0 - 1e-12..=1.0 + 1e-12).contains(*p)) {
                    return bad("p", format!("{p} outside [-1/3, 1]"));
                }
            }
            ScenarioKind::Custom => {
                if let Some(n) = self.initial_state.n_qubits() {
                    if n != self.n_qubits {
                        return bad("init", format!("{} names {n} qubits but n_qubits = {}", self.initial_state, self.n_qubits));
                    }
                }
                if self.n_qubits < 2 {
                    return bad("n_qubits", "entanglement needs at least 2 qubits".into());
                }
            }
            _ => {}
        }
        Ok(())
    }

    pub fn time_grid(&self) -> Vec<f64> {
        linspace(0.0, self.t_max, self.t_points)
    }

    /// Resolved configuration as `key = value` lines.
    pub fn to_meta(&self) -> String {
        let list = |v: &[f64]| v.iter().map(|x| format!("{x:?}")).collect::<Vec<_>>().join(",");
        let mut lines = vec![
            format!("scenario = {}", self.scenario),
            format!("n_qubits = {}", self.n_qubits),
            format!("g = {}", list(&self.g_values)),
            format!("gamma = {:?}", self.gamma),
        ];
        if !self.p_grid.is_empty() {
            lines.push(format!("p = {}", list(&self.p_grid)));
        }
        lines.extend([
            format!("t_max = {:?}", self.t_max),
            format!("t_points = {}", self.t_points),
            format!("init = {}", self.initial_state),
            format!("solver = {}", self.solver),
            format!("dt = {:?}", self.dt),
        ]);
        if let Some(out) = &self.output_path {
            lines.push(format!("out = {}", out.display()));
        }
        lines.join("\n") + "\n"
    }
}

fn parse_num<T: FromStr>(key: &str, value: &str) -> Result<T> {
    value.trim().parse().map_err(|_| Error::invalid(format!("{key}: cannot parse {value:?}")))
}

fn parse_list(key: &str, value: &str) -> Result<Vec<f64>> {
    value.split(',').filter(|s| !s.trim().is_empty()).map(|s| parse_num(key, s)).collect()
}

/// Parses `key = value` lines; `#` starts a comment.
pub fn parse_config_text(text: &str) -> Result<BTreeMap<String, String>> {
    let mut map = BTreeMap::new();
    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (key, value) = line
            .split_once('=')
            .ok_or_else(|| Error::invalid(format!("config line {}: expected key = value, got {raw:?}", lineno + 1)))?;
        map.insert(key.trim().replace('-', "_"), value.trim().to_string());
    }
    Ok(map)
}
