//! Batch front end for the `rareweak` experiments: configuration, data
//! ingestion, subcommand dispatch and reproducible CSV output.

pub mod commands;
pub mod config;
pub mod error;
pub mod ingest;

use std::ffi::OsString;
use std::path::PathBuf;

use clap::Parser;

pub use commands::{run, Command, Invocation};
pub use error::{CliError, CliResult};

#[derive(Debug, Parser)]
#[command(name = "rareweak", version, about = "Higher Criticism SNP-set detection experiments")]
struct Args {
    /// Subcommand to run.
    #[arg(value_enum)]
    command: Command,
    /// Key-value config file, or a `.json` metadata sidecar from an earlier run.
    #[arg(long)]
    config: PathBuf,
    /// Overrides the config's master seed.
    #[arg(long)]
    seed: Option<u64>,
    /// Worker threads; falls back to RAREWEAK_WORKERS, then the config.
    #[arg(long)]
    workers: Option<usize>,
    /// Output directory.
    #[arg(long, default_value = ".")]
    out: PathBuf,
}

/// Parses `args`, runs the subcommand and returns the process exit code.
/// Errors are printed to stderr as a JSON object.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let args = match Args::try_parse_from(args) {
        Ok(a) => a,
        Err(e) => {
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                print!("{e}");
                return 0;
            }
            let err = CliError::config(e.to_string().trim().to_string());
            eprintln!("{}", err.to_json());
            return err.exit_code();
        }
    };
    let inv = Invocation {
        command: args.command,
        config: args.config,
        seed: args.seed,
        workers: args.workers,
        out: args.out,
    };
    match run(&inv) {
        Ok(paths) => {
            for p in paths {
                println!("{}", p.display());
            }
            0
        }
        Err(e) => {
            eprintln!("{}", e.to_json());
            e.exit_code()
        }
    }
}
