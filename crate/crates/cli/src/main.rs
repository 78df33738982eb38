use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

mod commands;
mod config;

use config::{Command, RunConfig};

pub mod exit {
    pub const OK: u8 = 0;
    pub const INVALID: u8 = 1;
    pub const NO_SYMMETRY: u8 = 2;
    pub const DEGENERATE: u8 = 3;
    pub const VERIFY_FAILED: u8 = 4;
    pub const ANOMALIES: u8 = 5;
    pub const NON_CONVERGENCE: u8 = 6;
}

/// An exit code with the message printed to stderr.
#[derive(Debug)]
pub struct Failure {
    pub code: u8,
    pub message: String,
}

impl Failure {
    pub fn new(code: u8, message: impl Into<String>) -> Self {
        Failure {
            code,
            message: message.into(),
        }
    }

    pub fn invalid(message: impl Into<String>) -> Self {
        Failure::new(exit::INVALID, message)
    }
}

#[derive(Parser)]
#[command(
    name = "symforge",
    version,
    about = "Hidden symmetry operators of asymmetric Rabi models"
)]
struct Cli {
    #[command(subcommand)]
    command: Sub,
}

#[derive(Subcommand)]
enum Sub {
    /// Solve [J, H] = 0 for J_M and write it as JSON.
    Derive(Flags),
    /// Run the exact identity suite and write a JSON report.
    Verify(Flags),
    /// Sweep g and write J-labelled levels as CSV.
    Spectrum(Flags),
    /// Sweep g, then find and classify level crossings.
    Crossings(Flags),
}

#[derive(Args, Debug, Default)]
struct Flags {
    /// aqrm, aniso_aqrm, arsm or aniso_arsm.
    #[arg(long)]
    model: Option<String>,
    #[arg(long = "M", allow_hyphen_values = true)]
    m: Option<i64>,
    #[arg(long, allow_hyphen_values = true)]
    g: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    delta: Option<String>,
    /// Defaults to the value where J_M exists.
    #[arg(long, allow_hyphen_values = true)]
    epsilon: Option<String>,
    /// Anisotropy; λ = μ².
    #[arg(long, allow_hyphen_values = true)]
    mu: Option<String>,
    #[arg(long = "sin-t", allow_hyphen_values = true)]
    sin_t: Option<String>,
    #[arg(long = "cos-t", allow_hyphen_values = true)]
    cos_t: Option<String>,
    #[arg(long = "fock-dim")]
    fock_dim: Option<usize>,
    #[arg(long)]
    margin: Option<usize>,
    #[arg(long)]
    levels: Option<usize>,
    #[arg(long = "g-min", allow_hyphen_values = true)]
    g_min: Option<String>,
    #[arg(long = "g-max", allow_hyphen_values = true)]
    g_max: Option<String>,
    #[arg(long)]
    steps: Option<usize>,
    /// Output directory.
    #[arg(long)]
    out: Option<PathBuf>,
    /// TOML file with the same keys; flags take precedence.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Add a small error to J before checking, as a negative control.
    #[arg(long)]
    perturb: bool,
}

impl Flags {
    fn into_config(self, command: Command) -> (RunConfig, Option<PathBuf>) {
        let c = RunConfig {
            command: Some(command),
            model: self.model,
            m: self.m,
            g: self.g,
            delta: self.delta,
            epsilon: self.epsilon,
            mu: self.mu,
            sin_t: self.sin_t,
            cos_t: self.cos_t,
            fock_dim: self.fock_dim,
            margin: self.margin,
            levels: self.levels,
            g_min: self.g_min,
            g_max: self.g_max,
            steps: self.steps,
            out: self.out,
            perturb: self.perturb.then_some(true),
        };
        (c, self.config)
    }
}

fn configure_threads() -> Result<(), Failure> {
    let Ok(value) = std::env::var("SYMFORGE_THREADS") else {
        return Ok(());
    };
    let n: usize = value
        .trim()
        .parse()
        .ok()
        .filter(|&n| n > 0)
        .ok_or_else(|| {
            Failure::invalid(format!(
                "SYMFORGE_THREADS must be a positive integer, got {value:?}"
            ))
        })?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build_global()
        .map_err(|e| Failure::invalid(e.to_string()))
}

fn run(cli: Cli) -> Result<u8, Failure> {
    configure_threads()?;
    let (flags, config_path) = match cli.command {
        Sub::Derive(f) => f.into_config(Command::Derive),
        Sub::Verify(f) => f.into_config(Command::Verify),
        Sub::Spectrum(f) => f.into_config(Command::Spectrum),
        Sub::Crossings(f) => f.into_config(Command::Crossings),
    };
    let config = match config_path {
        Some(path) => {
            let file = RunConfig::load(&path)?;
            if file.command.is_some_and(|c| Some(c) != flags.command) {
                eprintln!(
                    "note: {} was written for another subcommand",
                    path.display()
                );
            }
            file.overlay(&flags)
        }
        None => flags,
    };
    commands::execute(&config)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            // Usage errors share the invalid-parameter code; 2 means no symmetry.
            return ExitCode::from(if e.use_stderr() {
                exit::INVALID
            } else {
                exit::OK
            });
        }
    };
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
