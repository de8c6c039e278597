//! `mliou`: batch runner for the matrix-liouville claim suites, oracle
//! checks, stargen cases and evolutions.
//!
//! Exit codes: 0 success, 1 an asserted claim failed, 2 configuration or
//! selector error, 3 grid or resource limit, 4 CFL abort, 5 I/O failure,
//! 6 consistency abort.

pub mod commands;
pub mod config;
pub mod output;
pub mod svg;

use std::path::PathBuf;

use clap::{Parser, Subcommand};
use matrix_liouville::Error as CoreError;

pub use config::{RunConfig, TEMPLATE};

pub const EXIT_OK: i32 = 0;
pub const EXIT_CLAIM_FAILED: i32 = 1;
pub const EXIT_CONFIG: i32 = 2;
pub const EXIT_GRID: i32 = 3;
pub const EXIT_CFL: i32 = 4;
pub const EXIT_IO: i32 = 5;
pub const EXIT_CONSISTENCY: i32 = 6;

#[derive(Debug, Parser)]
#[command(name = "mliou", version, about = "Matrix-valued phase-space transport: claims, oracles and evolutions")]
pub struct Cli {
    /// Configuration file (TOML); defaults apply when omitted.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    /// Override the configured seed.
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    /// Override the output directory.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Treat recorded claims as asserted.
    #[arg(long, global = true)]
    pub strict: bool,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Write the documented default configuration.
    Init {
        #[arg(default_value = "mliou.toml")]
        path: PathBuf,
        /// Overwrite an existing file.
        #[arg(long)]
        force: bool,
    },
    /// Gamma-matrix identities for every configured representation.
    AlgebraReport,
    /// Axiom suite of the configured brackets.
    BracketClaims,
    /// Exact plane-wave checks of the anticommutator transport equation.
    Oracle,
    /// Stargenvalue residuals of the energy projectors.
    Stargen,
    /// Run the configured evolution.
    Evolve,
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Init { .. } => "init",
            Command::AlgebraReport => "algebra-report",
            Command::BracketClaims => "bracket-claims",
            Command::Oracle => "oracle",
            Command::Stargen => "stargen",
            Command::Evolve => "evolve",
        }
    }
}

#[derive(Debug)]
pub enum CliError {
    Config(String),
    Io(String),
    Core(CoreError),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) => EXIT_CONFIG,
            CliError::Io(_) => EXIT_IO,
            CliError::Core(e) => match e {
                CoreError::InvalidInput(_) | CoreError::Domain(_) | CoreError::Format(_) => EXIT_CONFIG,
                CoreError::Grid(_) | CoreError::Resource(_) => EXIT_GRID,
                CoreError::Cfl { .. } => EXIT_CFL,
                CoreError::Consistency { .. } => EXIT_CONSISTENCY,
            },
        }
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Config(m) => write!(f, "configuration error: {m}"),
            CliError::Io(m) => write!(f, "I/O error: {m}"),
            CliError::Core(e) => write!(f, "{e}"),
        }
    }
}

impl From<CoreError> for CliError {
    fn from(e: CoreError) -> Self {
        CliError::Core(e)
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Io(e.to_string())
    }
}

/// Reads the config file (if any) and applies the command-line overrides.
pub fn load_config(cli: &Cli) -> Result<RunConfig, CliError> {
    let mut cfg = match &cli.config {
        Some(path) => {
            let text = std::fs::read_to_string(path).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
            toml::from_str::<RunConfig>(&text).map_err(|e| CliError::Config(format!("{}: {e}", path.display())))?
        }
        None => RunConfig::default(),
    };
    if let Some(seed) = cli.seed {
        cfg.seed = seed;
    }
    if let Some(out) = &cli.out {
        cfg.out = Some(out.clone());
    }
    cfg.validate().map_err(CliError::Config)?;
    Ok(cfg)
}

fn init(path: &PathBuf, force: bool) -> Result<i32, CliError> {
    if path.exists() && !force {
        return Err(CliError::Io(format!("{} exists (use --force to overwrite)", path.display())));
    }
    std::fs::write(path, TEMPLATE).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
    eprintln!("wrote {}", path.display());
    Ok(EXIT_OK)
}

/// Runs one command and returns the process exit code.
pub fn run(cli: &Cli) -> i32 {
    let result = match &cli.command {
        Command::Init { path, force } => init(path, *force),
        cmd => load_config(cli).and_then(|cfg| commands::dispatch(cmd, &cfg, cli.strict)),
    };
    match result {
        Ok(code) => code,
        Err(e) => {
            eprintln!("mliou {}: {e}", cli.command.name());
            e.exit_code()
        }
    }
}
