use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde::Serialize;

use plg::config::from_config;
use plg::models::{builtin, ModelBundle};
use plg::report::{self, SimulateOptions, VolumeChoice, DEFAULT_DRIFT_TOL, DEFAULT_SAMPLES};
use plg::sampling::seed_from_env;
use plg::{fd, PlgError, Result};

/// Invariant volumes of Hamiltonian flows on Poisson-Lie groups.
#[derive(Parser)]
#[command(name = "plg", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Unimodularity verdict, structure residuals and closed-form comparisons.
    Check {
        #[command(flatten)]
        model: ModelArgs,
        /// Componentwise tolerance of the unimodularity verdict.
        #[arg(long, default_value_t = 1e-10)]
        tol: f64,
        #[arg(long, default_value_t = DEFAULT_SAMPLES)]
        samples: usize,
        #[arg(long)]
        seed: Option<u64>,
        /// Write the JSON report here instead of standard output.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// RK4 trajectory with log-Jacobian and volume/energy/Casimir drifts.
    Simulate {
        #[command(flatten)]
        model: ModelArgs,
        #[arg(long = "H")]
        hamiltonian: Option<String>,
        /// Comma-separated initial point.
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
        x0: Option<Vec<f64>>,
        #[arg(long, default_value_t = 1e-3)]
        h: f64,
        #[arg(long, default_value_t = 1000)]
        steps: usize,
        /// lebesgue, left or invariant.
        #[arg(long, default_value = "invariant")]
        volume: String,
        /// Volume drift above which the run is flagged as not preserving the volume.
        #[arg(long, default_value_t = DEFAULT_DRIFT_TOL)]
        tol: f64,
        /// Trajectory CSV path.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Keep every n-th step in the CSV.
        #[arg(long, default_value_t = 1)]
        stride: usize,
    },
    /// Morse analysis of H at the identity and the resulting verdict.
    Morse {
        #[command(flatten)]
        model: ModelArgs,
        #[arg(long = "H")]
        hamiltonian: Option<String>,
        /// Gradient norm at the identity accepted as critical.
        #[arg(long, default_value_t = fd::FD_TOL)]
        tol: f64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Args)]
struct ModelArgs {
    /// Built-in model id: sl2r, s3, lorenz, eulertop, liepoisson.
    #[arg(value_name = "MODEL")]
    positional: Option<String>,
    #[arg(long, conflicts_with = "positional")]
    model: Option<String>,
    /// JSON model description.
    #[arg(long, conflicts_with_all = ["positional", "model"])]
    config: Option<PathBuf>,
    #[arg(long, allow_hyphen_values = true)]
    eta: Option<f64>,
    /// Algebra of the liepoisson model.
    #[arg(long)]
    algebra: Option<String>,
}

impl ModelArgs {
    fn load(&self) -> Result<ModelBundle> {
        if let Some(path) = &self.config {
            return from_config(path);
        }
        match self.model.as_deref().or(self.positional.as_deref()) {
            Some(id) => builtin(id, self.eta, self.algebra.as_deref()),
            None => Err(PlgError::Invalid("give a model id or --config".into())),
        }
    }
}

fn emit_json<T: Serialize>(value: &T, out: Option<&PathBuf>) -> Result<()> {
    let text = serde_json::to_string_pretty(value)?;
    match out {
        Some(p) => std::fs::write(p, text + "\n")?,
        None => {
            let mut stdout = std::io::stdout().lock();
            writeln!(stdout, "{text}")?;
        }
    }
    Ok(())
}

fn run(cli: Cli) -> Result<i32> {
    match cli.command {
        Command::Check {
            model,
            tol,
            samples,
            seed,
            out,
        } => {
            let bundle = model.load()?;
            let seed = seed.unwrap_or_else(seed_from_env);
            let r = report::cmd_check(&bundle, seed, samples, tol)?;
            emit_json(&r, out.as_ref())?;
            let failed: Vec<_> = r.checks.iter().filter(|c| !c.passed).collect();
            eprintln!(
                "{}: unimodular={} checks={}/{} seed={seed}",
                r.model,
                r.unimodular.map_or("n/a".into(), |u| u.to_string()),
                r.checks.len() - failed.len(),
                r.checks.len()
            );
            for c in &failed {
                eprintln!("FAILED {}: residual {:.3e} > {:.1e}", c.name, c.residual, c.tolerance);
            }
            Ok(if r.passed { 0 } else { 2 })
        }
        Command::Simulate {
            model,
            hamiltonian,
            x0,
            h,
            steps,
            volume,
            tol,
            out,
            stride,
        } => {
            let bundle = model.load()?;
            let opts = SimulateOptions {
                hamiltonian,
                x0,
                h,
                steps,
                volume: volume.parse::<VolumeChoice>()?,
                tol,
            };
            let sim = report::cmd_simulate(&bundle, &opts)?;
            if let Some(p) = &out {
                sim.write_csv(BufWriter::new(File::create(p)?), stride)?;
            }
            emit_json(&sim.report, None)?;
            let r = &sim.report;
            eprintln!(
                "{} {}: volume_drift={:.3e} against {} -> {}",
                r.model,
                r.hamiltonian,
                r.drift.volume_drift,
                r.drift.volume,
                if r.volume_preserved { "preserved" } else { "NOT PRESERVED" }
            );
            Ok(0)
        }
        Command::Morse {
            model,
            hamiltonian,
            tol,
            out,
        } => {
            let bundle = model.load()?;
            let r = report::cmd_morse(&bundle, hamiltonian.as_deref(), tol)?;
            emit_json(&r, out.as_ref())?;
            eprintln!("{} {}: {}", r.model, r.hamiltonian, r.morse.verdict);
            Ok(0)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => ExitCode::from(code as u8),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
