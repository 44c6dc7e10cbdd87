//! The `spinchain` command line.
//!
//! Exit codes: 0 on success, 1 on a configuration or I/O error, 2 when a
//! numerical invariant fails (output is still written in that case).

pub mod config;
pub mod runs;
pub mod table;

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use log::{error, info};

use self::config::RunConfig;
use self::runs::RunOutput;
use self::table::sibling;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("config error: {0}")]
    Config(String),
    #[error("numerical invariant violated: {0}")]
    Numerical(String),
    #[error("i/o error: {0}")]
    Io(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) | CliError::Io(_) => 1,
            CliError::Numerical(_) => 2,
        }
    }
}

impl From<crate::Error> for CliError {
    fn from(e: crate::Error) -> Self {
        if e.is_numerical() {
            CliError::Numerical(e.to_string())
        } else {
            CliError::Config(e.to_string())
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Io(e.to_string())
    }
}

#[derive(Debug, Parser)]
#[command(
    name = "spinchain",
    version,
    about = "Exact spin-chain gate simulations"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args, Clone)]
pub struct CommonArgs {
    /// JSON run config: {"scenario", "output_path"?, "seed"?, "parameters"?}.
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// Output CSV path; side files go next to it. Defaults to stdout.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Worker threads (0 = one per core).
    #[arg(long, default_value_t = 0)]
    pub jobs: usize,
    /// Seed recorded with the run.
    #[arg(long)]
    pub seed: Option<u64>,
    /// Also write a JSON mirror (<stem>.json, or stdout instead of CSV).
    #[arg(long)]
    pub json: bool,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Gate deviation against its lower bound for every scenario.
    ///
    /// Parameters (defaults): scenarios [idle, sigma_z, sigma_x,
    /// inter_qubit], n_min 2, n_max 6, j2 [0.005, 0.01, 0.05], t (explicit
    /// grid, optional), t_points 20. Writes <stem>.slopes.csv with the
    /// small-t slope per (scenario, j2, n).
    DeviationSweep(CommonArgs),
    /// CPHASE fidelity, leakage and phase on the ten-spin chain.
    ///
    /// Parameters (defaults): j1 1.0, j2 [0.05], x1 0.5, tau [0.1, 0.2,
    /// 0.4], naive false, emit_schedules false.
    GateFidelity {
        #[command(flatten)]
        common: CommonArgs,
        /// Compile pulses as if J2 were zero.
        #[arg(long)]
        naive: bool,
    },
    /// Capacitance inverse, Ising couplings and decay check of CPB arrays.
    ///
    /// Parameters (defaults): arrays [{n_boxes 8, c_g 0.5, c_j 0.5, c_c
    /// 0.01}]; each array may also set gate_charges, x1_max, si_units.
    JosephsonMap(CommonArgs),
    /// Residual logical fields and couplings after blockade cancellation.
    ///
    /// Parameters (defaults): cases [{pair, n_logical 2, m 2, [1, 0.05]},
    /// {single, n_logical 4, m 1, [1]}, {pair, 2, 2, [1, 0.05, 0.01]}].
    BlockadeCheck(CommonArgs),
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::DeviationSweep(_) => "deviation-sweep",
            Command::GateFidelity { .. } => "gate-fidelity",
            Command::JosephsonMap(_) => "josephson-map",
            Command::BlockadeCheck(_) => "blockade-check",
        }
    }

    fn common(&self) -> &CommonArgs {
        match self {
            Command::DeviationSweep(c) | Command::JosephsonMap(c) | Command::BlockadeCheck(c) => c,
            Command::GateFidelity { common, .. } => common,
        }
    }
}

fn load_config(cmd: &Command) -> Result<RunConfig, CliError> {
    let common = cmd.common();
    let mut cfg = match &common.config {
        Some(path) => RunConfig::load(path).map_err(CliError::Config)?,
        None => RunConfig {
            scenario: cmd.name().into(),
            output_path: None,
            seed: 0,
            parameters: serde_json::Value::Null,
        },
    };
    if cfg.scenario != cmd.name() {
        return Err(CliError::Config(format!(
            "config is for {:?}, not {:?}",
            cfg.scenario,
            cmd.name()
        )));
    }
    if let Some(seed) = common.seed {
        cfg.seed = seed;
    }
    if let Some(out) = &common.out {
        cfg.output_path = Some(out.clone());
    }
    Ok(cfg)
}

fn execute(cmd: &Command, cfg: &RunConfig) -> Result<RunOutput, CliError> {
    match cmd {
        Command::DeviationSweep(_) => {
            runs::run_deviation_sweep(&cfg.parameters().map_err(CliError::Config)?)
        }
        Command::GateFidelity { naive, .. } => {
            runs::run_gate_fidelity(&cfg.parameters().map_err(CliError::Config)?, *naive)
        }
        Command::JosephsonMap(_) => {
            runs::run_josephson_map(&cfg.parameters().map_err(CliError::Config)?)
        }
        Command::BlockadeCheck(_) => {
            runs::run_blockade_check(&cfg.parameters().map_err(CliError::Config)?)
        }
    }
}

fn write_file(path: &Path, contents: &str) -> Result<(), CliError> {
    fs::write(path, contents).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))
}

fn emit(out: &RunOutput, cfg: &RunConfig, json: bool) -> Result<(), CliError> {
    let mirror = serde_json::json!({
        "scenario": cfg.scenario,
        "seed": cfg.seed,
        "results": out.json,
    });
    let mirror = serde_json::to_string_pretty(&mirror).expect("json mirror") + "\n";
    match &cfg.output_path {
        Some(path) => {
            write_file(path, &out.table.to_csv_string())?;
            for (suffix, contents) in &out.extras {
                write_file(&sibling(path, suffix), contents)?;
            }
            if json {
                write_file(&sibling(path, "json"), &mirror)?;
            }
            info!("wrote {}", path.display());
        }
        None => {
            let stdout = std::io::stdout();
            let mut lock = stdout.lock();
            if json {
                lock.write_all(mirror.as_bytes())?;
            } else {
                lock.write_all(out.table.to_csv_string().as_bytes())?;
            }
            if !out.extras.is_empty() {
                info!("side files are only written with --out");
            }
        }
    }
    Ok(())
}

/// Runs one parsed command line.
pub fn run(cli: &Cli) -> Result<(), CliError> {
    let cfg = load_config(&cli.command)?;
    let common = cli.command.common();
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(common.jobs)
        .build()
        .map_err(|e| CliError::Config(format!("thread pool: {e}")))?;
    let out = pool.install(|| execute(&cli.command, &cfg))?;
    emit(&out, &cfg, common.json)?;
    if !out.violations.is_empty() {
        for v in &out.violations {
            error!("{v}");
        }
        return Err(CliError::Numerical(format!(
            "{} invariant violation(s)",
            out.violations.len()
        )));
    }
    Ok(())
}

/// Parses `args`, runs, and returns the process exit code.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    match run(&cli) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("spinchain: {e}");
            e.exit_code()
        }
    }
}
