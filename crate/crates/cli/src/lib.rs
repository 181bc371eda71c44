//! Command-line front end for `netequil`.
//!
//! Networks are read from NetworkDocument JSON files (see [`document`]).
//! Reports go to stdout in JSON, CSV or text; diagnostics go to stderr and
//! are filtered by the `NETEQUIL_LOG` environment variable.

pub mod commands;
pub mod document;
pub mod output;

use std::ffi::OsString;
use std::path::PathBuf;
use std::str::FromStr;

use clap::{Parser, Subcommand, ValueEnum};

pub use document::NetworkDocument;
pub use output::{Format, Report};

/// Exit codes: 0 success, 1 usage or parse error, 2 solver error,
/// 3 violated precondition.
#[derive(Debug, Clone, PartialEq)]
pub enum CliError {
    Usage(String),
    Solver(String),
    Precondition(String),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Usage(_) => 1,
            CliError::Solver(_) => 2,
            CliError::Precondition(_) => 3,
        }
    }

    pub fn message(&self) -> &str {
        match self {
            CliError::Usage(m) | CliError::Solver(m) | CliError::Precondition(m) => m,
        }
    }
}

#[derive(Debug, Parser)]
#[command(name = "netequil", version, about = "Equilibria of interactive networks x = f(xW + ε)")]
pub struct Cli {
    /// Output format.
    #[arg(long, value_enum, default_value_t = Format::Text, global = true)]
    pub format: Format,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum MethodArg {
    Auto,
    Banach,
    TarskiAbove,
    TarskiBelow,
    Algorithm1,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SamplerArg {
    Continuous,
    Discrete,
}

#[derive(Debug, clap::Args)]
pub struct SolveArgs {
    #[arg(long, value_enum, default_value_t = MethodArg::Auto)]
    pub method: MethodArg,
    #[arg(long, default_value_t = 1e-10)]
    pub tol: f64,
    #[arg(long = "max-iter", default_value_t = 1_000_000)]
    pub max_iter: usize,
    /// Banach starting point as comma-separated values (default: zeros).
    #[arg(long, allow_hyphen_values = true)]
    pub x0: Option<CsvVector>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Contraction / non-expansive classification and uniqueness certificate.
    Classify { file: PathBuf },
    /// Compute an equilibrium.
    Solve {
        file: PathBuf,
        #[command(flatten)]
        args: SolveArgs,
    },
    /// Solve, then look for a continuum of equilibria through the solution.
    Probe {
        file: PathBuf,
        #[arg(long, default_value_t = 1e-9)]
        tol: f64,
    },
    /// Brute-force every equilibrium (n ≤ 12).
    Enumerate {
        file: PathBuf,
        #[arg(long, default_value_t = 1e-9)]
        tol: f64,
    },
    /// Solve, then rank agents by total impact.
    Keyplayer {
        file: PathBuf,
        /// Also report Katz hub and authority centralities at this decay.
        #[arg(long)]
        alpha: Option<f64>,
    },
    /// Fraction of sampled shocks that admit several equilibria.
    Rate {
        file: PathBuf,
        #[arg(long, value_enum)]
        sampler: SamplerArg,
        #[arg(long)]
        trials: usize,
        #[arg(long)]
        seed: u64,
        /// Continuous: two vectors, lower then upper corner of the box
        /// (default: shock ± 1). Discrete: one vector per support point.
        #[arg(long, allow_hyphen_values = true)]
        support: Vec<CsvVector>,
    },
    /// Run a built-in worked example.
    Demo {
        #[arg(value_parser = clap::builder::PossibleValuesParser::new(netequil::demos::DEMO_NAMES))]
        name: String,
    },
    /// Print a built-in example as a NetworkDocument.
    Export {
        #[arg(value_parser = clap::builder::PossibleValuesParser::new(netequil::demos::DEMO_NAMES))]
        name: String,
    },
}

/// A comma-separated list of finite numbers, e.g. `1,-0.5,2`.
#[derive(Debug, Clone, PartialEq)]
pub struct CsvVector(pub Vec<f64>);

impl FromStr for CsvVector {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        let v: Vec<f64> = s
            .split(',')
            .map(|t| t.trim().parse::<f64>().map_err(|e| format!("{t:?}: {e}")))
            .collect::<Result<_, _>>()?;
        if v.iter().any(|x| !x.is_finite()) {
            return Err("values must be finite".into());
        }
        Ok(CsvVector(v))
    }
}

/// Parses arguments and runs one command. `Ok` carries the rendered report;
/// help and version output arrive as `Ok` as well.
pub fn run<I, T>(args: I) -> Result<String, CliError>
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) if !e.use_stderr() => return Ok(e.to_string()),
        Err(e) => return Err(CliError::Usage(e.to_string().trim_start_matches("error: ").to_string())),
    };
    log::debug!("command: {:?}", cli.command);
    let report = commands::execute(&cli.command)?;
    Ok(report.render(cli.format))
}
