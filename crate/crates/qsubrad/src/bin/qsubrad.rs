use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use qsubrad::config::Format;
use qsubrad::error::{CliError, EXIT_ORACLE};
use qsubrad::formats::parse_manybody_state;
use qsubrad::output::render;
use qsubrad::run::{self, RunOptions};
use qsubrad::{RunConfig, Table};

#[derive(Parser)]
#[command(name = "qsubrad", version, about = "Cherenkov emission rates of correlated and entangled electron pairs")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Brace factor around the Cherenkov cone at one photon energy.
    ConeScan(Common),
    /// Brace factor against photon energy at one azimuth.
    SpectrumScan(Common),
    /// Product state against the Bell state built from the same two modes.
    PairCompare(Common),
    /// N-electron rate for a state description file.
    ManybodyRate {
        #[command(flatten)]
        common: Common,
        /// Many-body state file (TOML).
        #[arg(long)]
        state: PathBuf,
    },
    /// Closed-form transforms against quadrature and sampled grids.
    OracleCheck(Common),
}

#[derive(Args)]
struct Common {
    #[arg(long)]
    config: PathBuf,
    /// Output file; defaults to the config's output.path, then stdout.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum)]
    format: Option<FormatArg>,
    #[arg(long, env = "QSUBRAD_THREADS")]
    threads: Option<usize>,
    /// Treat assumption warnings as errors.
    #[arg(long)]
    strict: bool,
}

#[derive(Clone, Copy, ValueEnum)]
enum FormatArg {
    Csv,
    Json,
}

fn emit(table: &Table, cfg: &RunConfig, common: &Common) -> Result<(), CliError> {
    let format = match common.format {
        Some(FormatArg::Csv) => Format::Csv,
        Some(FormatArg::Json) => Format::Json,
        None => cfg.output.format,
    };
    let text = render(table, format, cfg.output.precision);
    match common.out.as_deref().or(cfg.output.path.as_deref()) {
        Some(path) => write_file(path, &text),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn write_file(path: &Path, text: &str) -> Result<(), CliError> {
    std::fs::write(path, text).map_err(|source| CliError::Io {
        path: path.to_path_buf(),
        source,
    })
}

fn execute(cli: Cli) -> Result<i32, CliError> {
    let common = match &cli.command {
        Command::ConeScan(c) | Command::SpectrumScan(c) | Command::PairCompare(c) | Command::OracleCheck(c) => c,
        Command::ManybodyRate { common, .. } => common,
    };
    let cfg = RunConfig::load(&common.config)?;
    let opts = RunOptions {
        threads: common.threads,
        strict: common.strict,
    };
    let table = match &cli.command {
        Command::ConeScan(_) => run::cone_scan(&cfg, opts)?,
        Command::SpectrumScan(_) => run::spectrum_scan(&cfg, opts)?,
        Command::PairCompare(_) => run::pair_compare(&cfg, opts)?,
        Command::ManybodyRate { state, .. } => {
            let text = std::fs::read_to_string(state).map_err(|source| CliError::Io {
                path: state.clone(),
                source,
            })?;
            let parsed = parse_manybody_state(&text).map_err(|mut e| {
                e.field = format!("{}: {}", state.display(), e.field);
                e
            })?;
            run::manybody_rate(&cfg, &parsed, &text, opts)?
        }
        Command::OracleCheck(_) => {
            let outcome = run::oracle_check(&cfg)?;
            emit(&outcome.table, &cfg, common)?;
            if !outcome.passed {
                eprintln!(
                    "qsubrad: oracle check failed: max relative error {:e} exceeds tolerance {:e}",
                    outcome.max_error, cfg.oracle.tolerance
                );
                return Ok(EXIT_ORACLE);
            }
            return Ok(0);
        }
    };
    emit(&table, &cfg, common)?;
    Ok(0)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match execute(cli) {
        Ok(code) => ExitCode::from(code as u8),
        Err(e) => {
            eprintln!("qsubrad: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
