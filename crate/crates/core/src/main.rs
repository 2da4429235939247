use std::collections::BTreeMap;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use commonbath::scenario::{compare_solvers, parse_config_text, run_scenario, write_outputs, ScenarioConfig};
use commonbath::Error;

#[derive(Parser)]
#[command(name = "commonbath", version, about = "Entanglement dynamics of qubits in a common vacuum bath")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a scenario and write <scenario>.csv and <scenario>.meta
    Run(Options),
    /// Run every solver on a scenario and report pairwise deviations
    Compare(Options),
}

#[derive(Args)]
struct Options {
    /// fig1, fig2, fig3, fig4, fig5 or custom
    #[arg(long)]
    scenario: Option<String>,
    /// Flat key = value configuration file; flags override its keys
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    gamma: Option<String>,
    /// Comma-separated coupling strengths
    #[arg(long = "g", allow_hyphen_values = true)]
    g: Option<String>,
    /// Comma-separated Werner fidelities (fig3, fig4)
    #[arg(long = "p", allow_hyphen_values = true)]
    p: Option<String>,
    #[arg(long = "n-qubits")]
    n_qubits: Option<String>,
    /// Initial state: a ±-string such as +-+, werner+:P, werner-:P or random:SEED
    #[arg(long, allow_hyphen_values = true)]
    init: Option<String>,
    /// jump, rk4, liouvillian or analytic
    #[arg(long)]
    solver: Option<String>,
    #[arg(long)]
    tmax: Option<String>,
    #[arg(long)]
    points: Option<String>,
    #[arg(long)]
    dt: Option<String>,
    /// Output directory
    #[arg(long)]
    out: Option<PathBuf>,
}

impl Options {
    fn resolve(&self) -> commonbath::Result<ScenarioConfig> {
        let mut settings = BTreeMap::new();
        if let Some(path) = &self.config {
            let text = std::fs::read_to_string(path)
                .map_err(|e| Error::InvalidInput(format!("config: cannot read {}: {e}", path.display())))?;
            settings = parse_config_text(&text)?;
        }
        let flags = [
            ("scenario", self.scenario.clone()),
            ("gamma", self.gamma.clone()),
            ("g", self.g.clone()),
            ("p", self.p.clone()),
            ("n_qubits", self.n_qubits.clone()),
            ("init", self.init.clone()),
            ("solver", self.solver.clone()),
            ("t_max", self.tmax.clone()),
            ("t_points", self.points.clone()),
            ("dt", self.dt.clone()),
            ("out", self.out.as_ref().map(|p| p.display().to_string())),
        ];
        for (key, value) in flags {
            if let Some(v) = value {
                settings.insert(key.to_string(), v);
            }
        }
        ScenarioConfig::from_settings(&settings)
    }
}

fn fail(err: &Error) -> ExitCode {
    eprintln!("error: {err}");
    if err.is_numerical() {
        ExitCode::from(3)
    } else {
        ExitCode::from(2)
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match cli.command {
        Command::Run(opts) => {
            let cfg = match opts.resolve() {
                Ok(c) => c,
                Err(e) => return fail(&e),
            };
            match run_scenario(&cfg).and_then(|t| write_outputs(&cfg, &t)) {
                Ok((csv, meta)) => {
                    println!("wrote {} and {}", csv.display(), meta.display());
                    ExitCode::SUCCESS
                }
                Err(e) => fail(&e),
            }
        }
        Command::Compare(opts) => {
            let cfg = match opts.resolve() {
                Ok(c) => c,
                Err(e) => return fail(&e),
            };
            match compare_solvers(&cfg) {
                Ok(report) => {
                    println!("{report}");
                    if report.passes() {
                        ExitCode::SUCCESS
                    } else {
                        ExitCode::from(1)
                    }
                }
                Err(e) => fail(&e),
            }
        }
    }
}
