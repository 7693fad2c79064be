//! `regen-boot`: command-line harness for the regenerative bootstrap
//! simulation studies.
//!
//! Every subcommand resolves an [`ExperimentConfig`] (defaults, then the
//! `--config` file, then flags), runs on a rayon pool of `--workers`
//! threads, writes its CSV tables into `--out-dir` and finishes with a
//! `manifest.json`. CSV contents depend only on the configuration and the
//! master seed.

pub mod commands;
pub mod config;
pub mod output;

use std::ffi::OsString;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use regen_boot_core::experiments::{ExperimentConfig, MethodSelection};
use regen_boot_core::Studentization;

pub use config::{load_config, ConfigError};
pub use output::{write_csv, Cell, RunManifest, Table};

pub const WORKERS_ENV: &str = "REGEN_BOOT_WORKERS";

#[derive(Debug, Parser)]
#[command(
    name = "regen-boot",
    version,
    about = "Regenerative block bootstrap experiments on the simple symmetric random walk"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Simulate one chain; write trajectory, block and regeneration-time CSVs.
    Simulate(CommonArgs),
    /// Bootstrap one chain; write the replicate distribution CSV.
    Bootstrap(CommonArgs),
    /// Compare bootstrap ECDFs of an anchor chain with the Monte Carlo law of L_n.
    EcdfCompare(CommonArgs),
    /// Coverage and average length of the bootstrap and normal intervals.
    Coverage(CommonArgs),
    /// Empirical moments of the normalized visit count against Mittag-Leffler moments.
    MlMoments(CommonArgs),
    /// Run the built-in invariant checks.
    Selftest(CommonArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum MethodArg {
    Rbb,
    Rgb,
    Both,
}

impl From<MethodArg> for MethodSelection {
    fn from(m: MethodArg) -> Self {
        match m {
            MethodArg::Rbb => MethodSelection::Rbb,
            MethodArg::Rgb => MethodSelection::Rgb,
            MethodArg::Both => MethodSelection::Both,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum StudentizationArg {
    Original,
    Resampled,
}

#[derive(Debug, Clone, Args)]
pub struct CommonArgs {
    /// Time horizon(s), comma separated
    #[arg(long, value_delimiter = ',')]
    pub n: Option<Vec<u64>>,
    /// Number of independent chains
    #[arg(long)]
    pub chains: Option<usize>,
    /// Bootstrap replicates per chain
    #[arg(long)]
    pub boot_reps: Option<usize>,
    /// Chains used for the Monte Carlo law of L_n
    #[arg(long)]
    pub true_reps: Option<usize>,
    /// Confidence level in (0, 1)
    #[arg(long)]
    pub level: Option<f64>,
    /// Master seed
    #[arg(long)]
    pub seed: Option<u64>,
    /// Bootstrap scheme(s)
    #[arg(long, value_enum)]
    pub method: Option<MethodArg>,
    /// Standard deviation used for bootstrap replicates
    #[arg(long, value_enum)]
    pub studentization: Option<StudentizationArg>,
    /// Worker threads (falls back to REGEN_BOOT_WORKERS, then the core count)
    #[arg(long, env = WORKERS_ENV)]
    pub workers: Option<usize>,
    /// Regularity index of the normalization u(n) = n^beta * L
    #[arg(long)]
    pub beta: Option<f64>,
    /// Constant L of the normalization
    #[arg(long)]
    pub l_const: Option<f64>,
    /// Highest Mittag-Leffler moment (at most 4)
    #[arg(long)]
    pub max_moment: Option<u32>,
    /// Studentization target (defaults to the functional's known integral)
    #[arg(long, allow_hyphen_values = true)]
    pub theta: Option<f64>,
    /// Index of the anchor chain for ecdf-compare
    #[arg(long, default_value_t = 0)]
    pub anchor: u64,
    /// Output directory
    #[arg(long, default_value = "out")]
    pub out_dir: PathBuf,
    /// JSON configuration file; flags override its values
    #[arg(long)]
    pub config: Option<PathBuf>,
}

impl CommonArgs {
    pub fn resolve(&self) -> Result<ExperimentConfig, ConfigError> {
        let mut cfg = match &self.config {
            Some(path) => load_config(path)?,
            None => ExperimentConfig::default(),
        };
        if let Some(n) = &self.n {
            cfg.n = n.clone();
        }
        macro_rules! set {
            ($($field:ident <- $flag:expr),* $(,)?) => {
                $(if let Some(v) = $flag { cfg.$field = v.into(); })*
            };
        }
        set!(
            chains <- self.chains,
            boot_reps <- self.boot_reps,
            true_reps <- self.true_reps,
            level <- self.level,
            master_seed <- self.seed,
            beta <- self.beta,
            l_const <- self.l_const,
            max_moment <- self.max_moment,
            method <- self.method,
        );
        if let Some(w) = self.workers {
            cfg.workers = Some(w);
        }
        if let Some(t) = self.theta {
            cfg.theta = Some(t);
        }
        if let Some(s) = self.studentization {
            cfg.studentization = match s {
                StudentizationArg::Original => Studentization::Original,
                StudentizationArg::Resampled => Studentization::Resampled,
            };
        }
        cfg.validate()?;
        Ok(cfg)
    }
}

/// Parses `argv` (program name first), runs the subcommand and returns the
/// process exit code: 0 on success, 1 on runtime failure, 2 on invalid
/// arguments or configuration.
pub fn run_cli<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return e.exit_code();
        }
    };
    let (name, args) = match &cli.command {
        Command::Simulate(a) => ("simulate", a),
        Command::Bootstrap(a) => ("bootstrap", a),
        Command::EcdfCompare(a) => ("ecdf-compare", a),
        Command::Coverage(a) => ("coverage", a),
        Command::MlMoments(a) => ("ml-moments", a),
        Command::Selftest(a) => ("selftest", a),
    };
    let cfg = match args.resolve() {
        Ok(cfg) => cfg,
        Err(e) => {
            eprintln!("regen-boot {name}: invalid configuration: {e}");
            return 2;
        }
    };
    match commands::run(name, &cfg, args) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("regen-boot {name}: {e}");
            1
        }
    }
}
