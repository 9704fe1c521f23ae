//! `qsc`: build, check and evolve contraction cocycle generators.
//!
//! Exit codes: 0 pass, 2 I/O or parse error, 3 validation error, 4 property
//! violation.

mod commands;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

#[derive(Debug, Parser)]
#[command(name = "qsc", version, about = "Contraction cocycle engine")]
pub struct Cli {
    #[command(flatten)]
    pub global: Global,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args)]
pub struct Global {
    /// Output file; stdout when omitted.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Pass threshold for defects.
    #[arg(long, global = true, default_value_t = 1e-8)]
    pub tol: f64,
    /// Cap on the toy Fock state dimension.
    #[arg(long, global = true, default_value_t = 1 << 22)]
    pub budget: u128,
    /// Seed for every randomized step.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Turn a model spec into a generator file.
    Build { spec: PathBuf },
    /// Contractivity report for a generator.
    Check {
        generator: PathBuf,
        /// Random vectors for form-defect sampling.
        #[arg(long, default_value_t = 100)]
        samples: usize,
    },
    /// Cocycle matrix elements on a time grid.
    Evolve {
        generator: PathBuf,
        /// Step function file for the bra; zero when omitted.
        #[arg(long)]
        f: Option<PathBuf>,
        /// Step function file for the ket; zero when omitted.
        #[arg(long)]
        g: Option<PathBuf>,
        /// Vector in h as JSON `[[re, im], ...]`; first basis vector by default.
        #[arg(long)]
        u: Option<String>,
        #[arg(long)]
        v: Option<String>,
        #[arg(long, default_value_t = 1.0)]
        t: f64,
        #[arg(long, default_value_t = 10)]
        grid: usize,
        /// Add toy Fock oracle columns with this many slots.
        #[arg(long)]
        oracle: Option<usize>,
    },
    /// Screen the Schur-product criterion with random probes.
    Schur {
        generator: PathBuf,
        #[arg(long, default_value_t = 1000)]
        samples: usize,
        #[arg(long, default_value_t = 4)]
        n_max: usize,
    },
    /// Trotter-Kato convergence of Yosida approximants.
    Tk {
        generator: PathBuf,
        #[arg(long, value_delimiter = ',', default_value = "10,100,1000")]
        n_list: Vec<u32>,
        /// Time horizon.
        #[arg(long = "T", default_value_t = 2.0)]
        horizon: f64,
        #[arg(long, default_value_t = 20)]
        grid: usize,
    },
    /// Semigroup-generator coordinates of a generator.
    Coords { generator: PathBuf },
    /// Dual generator file.
    Dual { generator: PathBuf },
    /// Norm of the toy Fock state `V_t (v ⊗ ε(g))`.
    OracleNorm {
        generator: PathBuf,
        #[arg(long)]
        g: Option<PathBuf>,
        #[arg(long)]
        v: Option<String>,
        #[arg(long, default_value_t = 1.0)]
        t: f64,
        #[arg(long, default_value_t = 12)]
        n: usize,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match commands::run(&cli) {
        Ok(code) => code,
        Err(failure) => {
            eprintln!("error: {}", failure.message);
            ExitCode::from(failure.code)
        }
    }
}
