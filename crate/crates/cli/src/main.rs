//! `asyncdyn`: simulation, state portraits and invariance/basin analysis of
//! asynchronous Boolean networks.

mod commands;
mod error;
mod input;

use std::io::Write;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::error::{CliError, CliResult, ExitKind};

#[derive(Parser, Debug)]
#[command(
    name = "asyncdyn",
    version,
    about = "Asynchronous dynamics of Boolean networks"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Emit the state portrait (DOT by default).
    Portrait(PortraitArgs),
    /// Simulate one initial state under a schedule.
    Simulate(SimulateArgs),
    /// Print the ω-limit set of one initial state under a schedule.
    Omega(OmegaArgs),
    /// Decide p- and n-invariance of a set.
    Invariance(SetArgs),
    /// Compute the basins of p- and n-attraction of a set.
    Basin(SetArgs),
    /// Invariance, basins and attraction classes of a set.
    Classify(ClassifyArgs),
    /// Brute-force enumeration of achievable ω-limit sets (n ≤ 4).
    #[command(hide = true)]
    Oracle(OracleArgs),
}

#[derive(Args, Debug)]
#[group(required = true, multiple = false)]
pub struct NetworkSource {
    /// Network document: a path to an `.abn` file or the document text.
    #[arg(long, value_name = "FILE|TEXT")]
    pub network: Option<String>,
    /// Truth table: a path to a `.tt` file or the table text.
    #[arg(long, value_name = "FILE|TEXT")]
    pub table: Option<String>,
}

#[derive(Args, Debug)]
pub struct Common {
    #[command(flatten)]
    pub source: NetworkSource,
    /// Write the output to this file instead of standard output.
    #[arg(long, value_name = "FILE")]
    pub out: Option<std::path::PathBuf>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
    Dot,
}

#[derive(Args, Debug)]
pub struct PortraitArgs {
    #[command(flatten)]
    pub common: Common,
    #[arg(long, value_enum, default_value = "dot")]
    pub format: Format,
    /// Build the portrait on all cores.
    #[arg(long)]
    pub parallel: bool,
}

#[derive(Args, Debug)]
pub struct SimulateArgs {
    #[command(flatten)]
    pub common: Common,
    /// Initial state, e.g. `10`.
    #[arg(long, value_name = "BITS")]
    pub init: String,
    /// Schedule literal `prefix;cycle[@t0,t1,.../period]`, e.g. `;11,01`.
    #[arg(long, value_name = "LITERAL", allow_hyphen_values = true)]
    pub schedule: String,
    /// Print segments until this time (default: two passes of the cycle).
    #[arg(long, value_name = "TIME", allow_hyphen_values = true)]
    pub horizon: Option<String>,
    /// Append the ω-limit set.
    #[arg(long)]
    pub omega: bool,
    #[arg(long, value_enum, default_value = "text")]
    pub format: Format,
}

#[derive(Args, Debug)]
pub struct OmegaArgs {
    #[command(flatten)]
    pub common: Common,
    #[arg(long, value_name = "BITS")]
    pub init: String,
    #[arg(long, value_name = "LITERAL", allow_hyphen_values = true)]
    pub schedule: String,
    #[arg(long, value_enum, default_value = "text")]
    pub format: Format,
}

#[derive(Args, Debug)]
pub struct SetArgs {
    #[command(flatten)]
    pub common: Common,
    /// Nonempty state set, e.g. `{01, 10}`.
    #[arg(long, value_name = "SET")]
    pub set: String,
    #[arg(long, value_enum, default_value = "text")]
    pub format: Format,
}

#[derive(Args, Debug)]
pub struct ClassifyArgs {
    #[command(flatten)]
    pub inner: SetArgs,
    /// Report whether this set is p-/n-attracted by the set (repeatable).
    #[arg(long, value_name = "SET")]
    pub query: Vec<String>,
}

#[derive(Args, Debug)]
pub struct OracleArgs {
    #[command(flatten)]
    pub common: Common,
    /// Also compute basins of this set.
    #[arg(long, value_name = "SET")]
    pub set: Option<String>,
    /// Longest schedule prefix explored (default 2^n - 1).
    #[arg(long)]
    pub max_prefix: Option<usize>,
    /// Longest cycle explored (default n * 2^n).
    #[arg(long)]
    pub max_cycle: Option<usize>,
    #[arg(long, value_enum, default_value = "text")]
    pub format: Format,
}

fn run(cli: Cli) -> CliResult<()> {
    let cap = input::dimension_cap()?;
    let (common, output) = match &cli.command {
        Command::Portrait(a) => (&a.common, commands::portrait(a, cap)?),
        Command::Simulate(a) => (&a.common, commands::simulate(a, cap)?),
        Command::Omega(a) => (&a.common, commands::omega(a, cap)?),
        Command::Invariance(a) => (&a.common, commands::invariance(a, cap)?),
        Command::Basin(a) => (&a.common, commands::basin(a, cap)?),
        Command::Classify(a) => (&a.inner.common, commands::classify(a, cap)?),
        Command::Oracle(a) => (&a.common, commands::oracle(a, cap)?),
    };
    emit(common.out.as_deref(), &output)
}

fn emit(path: Option<&std::path::Path>, output: &str) -> CliResult<()> {
    match path {
        Some(path) => std::fs::write(path, output)
            .map_err(|e| CliError::new(ExitKind::Parse, format!("{}: {e}", path.display()))),
        None => {
            let mut stdout = std::io::stdout().lock();
            match stdout
                .write_all(output.as_bytes())
                .and_then(|_| stdout.flush())
            {
                Err(e) if e.kind() != std::io::ErrorKind::BrokenPipe => {
                    Err(CliError::new(ExitKind::Parse, format!("stdout: {e}")))
                }
                _ => Ok(()),
            }
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(ExitKind::Parse as u8)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.code())
        }
    }
}
