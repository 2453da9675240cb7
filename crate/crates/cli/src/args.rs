use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};

use crate::report::parse_tol;

#[derive(Debug, Parser)]
#[command(name = "ergomax", version, about = "Maximum ergodic averages on subshifts of finite type")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    /// Emit the JSON report (default).
    #[arg(long, global = true, conflicts_with = "csv")]
    pub json: bool,
    /// Emit CSV instead (horizons and paper-example only).
    #[arg(long, global = true)]
    pub csv: bool,
    /// Override a tolerance; repeatable.
    #[arg(long = "tol", value_name = "NAME=VALUE", global = true, value_parser = parse_tol)]
    pub tol: Vec<(String, f64)>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum MethodArg {
    Karp,
    Brute,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum KindArg {
    Spectral,
    SupNorm,
    MaxErgodic,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Maximum ergodic average and an optimal cycle.
    Alpha {
        #[arg(long)]
        system: PathBuf,
        #[arg(long, value_enum, default_value = "karp")]
        method: MethodArg,
    },
    /// The three-point example with parameter `a`.
    #[command(allow_negative_numbers = true)]
    PaperExample {
        #[arg(long)]
        a: f64,
        #[arg(long, default_value_t = 12)]
        horizon: usize,
    },
    /// sup_x S_n/n for n = 1..N.
    Horizons {
        #[arg(long)]
        system: PathBuf,
        #[arg(long, default_value_t = 50)]
        horizon: usize,
    },
    /// Exact inf/sup/liminf/limsup of the time averages of one point.
    Point {
        #[arg(long)]
        system: PathBuf,
        /// `preperiod|period`, symbols comma-separated, e.g. `a|1,0`.
        #[arg(long, allow_hyphen_values = true)]
        point: String,
    },
    /// Sub-action and the coboundary duality certificate.
    Subaction {
        #[arg(long)]
        system: PathBuf,
    },
    /// Spectral pressure, Gibbs chain and both variational identities.
    Pressure {
        #[arg(long)]
        system: PathBuf,
        #[arg(long, default_value_t = 20)]
        competitors: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Entropy of a Markov measure recovered by conjugate duality.
    Entropy {
        #[arg(long)]
        system: PathBuf,
        /// JSON transition matrix over the recoded vertices; the Gibbs
        /// chain of the system's potential when omitted.
        #[arg(long)]
        transitions: Option<PathBuf>,
        #[arg(long, default_value_t = 100_000)]
        max_iter: usize,
    },
    /// Fenchel–Rockafellar or bilinear minimax instance from JSON.
    Fenchel {
        #[arg(long)]
        instance: PathBuf,
    },
    /// Pressure axioms on random potential pairs.
    Axioms {
        #[arg(long)]
        system: PathBuf,
        /// All three pressures when omitted.
        #[arg(long, value_enum)]
        kind: Option<KindArg>,
        #[arg(long, default_value_t = 100)]
        samples: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}
