//! Command-line harness for the extended Dicke model toolkit.
//!
//! Thin orchestration over the `edicke` library: parameter sweeps, density
//! of states curves, quantum spectra, Peres lattices, Poincare sections and
//! Monte Carlo oracle reports, all as stable CSV/JSON files. Exit codes:
//! 0 success, 1 computation error, 2 usage error.

mod commands;
mod config;
mod emit;

use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use config::{resolve, FileConfig};
use edicke::{Error, ModelParams};

#[derive(Debug)]
pub enum AppError {
    /// Bad invocation: unusable flags, malformed config, empty grids.
    Usage(String),
    /// The requested computation failed.
    Run(String),
}

impl From<Error> for AppError {
    fn from(e: Error) -> Self {
        match e {
            // parameter and dimension problems originate from the invocation
            Error::InvalidParams(_) | Error::DimensionGuard { .. } => AppError::Usage(e.to_string()),
            other => AppError::Run(other.to_string()),
        }
    }
}

#[derive(Parser)]
#[command(
    name = "edicke",
    version,
    about = "Semiclassical and quantum analysis of the extended Dicke model"
)]
struct Cli {
    #[command(flatten)]
    shared: SharedArgs,
    #[command(subcommand)]
    command: Cmd,
}

#[derive(clap::Args)]
struct SharedArgs {
    /// Flat key = value config file with per-command sections; flags override
    #[arg(long, global = true, value_name = "FILE")]
    config: Option<PathBuf>,
    /// Field frequency (default 1, on resonance)
    #[arg(long, global = true)]
    omega: Option<f64>,
    /// Qubit level splitting (default 1, on resonance)
    #[arg(long, global = true)]
    omega0: Option<f64>,
    /// Field-qubit coupling
    #[arg(long, global = true)]
    gamma: Option<f64>,
    /// Qubit-qubit interaction strength
    #[arg(long, global = true, allow_hyphen_values = true)]
    eta: Option<f64>,
    /// Pseudospin length j = Nq/2 (default 20)
    #[arg(long, global = true)]
    j: Option<f64>,
    /// RNG seed, recorded in every output (default 1)
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Output directory (default .)
    #[arg(long, global = true, value_name = "DIR")]
    out: Option<PathBuf>,
    /// Cap on worker threads (default: machine parallelism)
    #[arg(long, global = true, value_name = "N")]
    threads: Option<usize>,
}

#[derive(Subcommand)]
enum Cmd {
    /// Classify the (gamma, eta) plane into phase-diagram regions
    Regions(commands::regions::RegionsArgs),
    /// Semiclassical density of states with its discontinuity census
    Dos(commands::dos::DosArgs),
    /// Diagonalize parity blocks of the quantum Hamiltonian
    Spectrum(commands::spectrum::SpectrumArgs),
    /// Peres lattice of <J_z>/j versus scaled energy
    Peres(commands::peres::PeresArgs),
    /// Poincare section of classical trajectories on one energy shell
    Poincare(commands::poincare::PoincareArgs),
    /// Monte Carlo cross-check of the analytic density of states
    Oracle(commands::oracle::OracleArgs),
}

impl Cmd {
    fn section(&self) -> &'static str {
        match self {
            Cmd::Regions(_) => "regions",
            Cmd::Dos(_) => "dos",
            Cmd::Spectrum(_) => "spectrum",
            Cmd::Peres(_) => "peres",
            Cmd::Poincare(_) => "poincare",
            Cmd::Oracle(_) => "oracle",
        }
    }
}

/// Shared options after merging flags, config file and defaults.
pub struct Shared {
    pub omega: f64,
    pub omega0: f64,
    pub gamma: Option<f64>,
    pub eta: Option<f64>,
    pub j: f64,
    pub seed: u64,
    pub out: PathBuf,
}

impl Shared {
    /// Model parameters; `gamma` and `eta` must have been supplied.
    pub fn params(&self) -> Result<ModelParams, AppError> {
        let gamma = self
            .gamma
            .ok_or_else(|| AppError::Usage("missing --gamma (flag or config)".into()))?;
        let eta =
            self.eta.ok_or_else(|| AppError::Usage("missing --eta (flag or config)".into()))?;
        Ok(ModelParams::new(self.omega, self.omega0, gamma, eta, self.j)?)
    }

    /// The resolved shared configuration, for embedding into outputs.
    pub fn kvs(&self) -> Vec<(String, String)> {
        let mut kvs = vec![
            ("omega".to_string(), self.omega.to_string()),
            ("omega0".to_string(), self.omega0.to_string()),
        ];
        if let Some(g) = self.gamma {
            kvs.push(("gamma".to_string(), g.to_string()));
        }
        if let Some(e) = self.eta {
            kvs.push(("eta".to_string(), e.to_string()));
        }
        kvs.push(("j".to_string(), self.j.to_string()));
        kvs.push(("seed".to_string(), self.seed.to_string()));
        kvs
    }

    pub fn path(&self, file: &str) -> PathBuf {
        self.out.join(file)
    }
}

fn resolve_shared(
    args: &SharedArgs,
    file: &FileConfig,
    section: &str,
) -> Result<Shared, AppError> {
    Ok(Shared {
        omega: resolve(args.omega, file, section, "omega")?.unwrap_or(1.0),
        omega0: resolve(args.omega0, file, section, "omega0")?.unwrap_or(1.0),
        gamma: resolve(args.gamma, file, section, "gamma")?,
        eta: resolve(args.eta, file, section, "eta")?,
        j: resolve(args.j, file, section, "j")?.unwrap_or(20.0),
        seed: resolve(args.seed, file, section, "seed")?.unwrap_or(1),
        out: resolve(args.out.clone(), file, section, "out")?.unwrap_or_else(|| ".".into()),
    })
}

fn run(cli: Cli) -> Result<(), AppError> {
    let file = match &cli.shared.config {
        Some(path) => {
            let text = fs::read_to_string(path).map_err(|e| {
                AppError::Usage(format!("cannot read config {}: {e}", path.display()))
            })?;
            FileConfig::parse(&text)?
        }
        None => FileConfig::default(),
    };
    let section = cli.command.section();
    let shared = resolve_shared(&cli.shared, &file, section)?;
    if let Some(n) = resolve(cli.shared.threads, &file, section, "threads")? {
        if n == 0 {
            return Err(AppError::Usage("--threads must be positive".into()));
        }
        // results are thread-count independent by module contract, so a
        // failure to resize the already-initialized pool is harmless
        let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
    }
    fs::create_dir_all(&shared.out).map_err(|e| {
        AppError::Run(format!("cannot create output directory {}: {e}", shared.out.display()))
    })?;
    match &cli.command {
        Cmd::Regions(args) => commands::regions::run(&shared, &file, args),
        Cmd::Dos(args) => commands::dos::run(&shared, &file, args),
        Cmd::Spectrum(args) => commands::spectrum::run(&shared, &file, args),
        Cmd::Peres(args) => commands::peres::run(&shared, &file, args),
        Cmd::Poincare(args) => commands::poincare::run(&shared, &file, args),
        Cmd::Oracle(args) => commands::oracle::run(&shared, &file, args),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(AppError::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(AppError::Run(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
    }
}
