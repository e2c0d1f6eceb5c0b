//! `gaptile` — spectral-gap perturbations of the integers and the tilings
//! they generate.
//!
//! Subcommands: `solve` runs the fixed-point pipeline and writes artifacts;
//! `verify` recomputes certificates from those artifacts; `ztile` answers
//! integer-tiling questions on cyclic groups; `export` emits plot-ready CSV.

mod commands;
mod config;
mod csvio;
mod report;

use clap::error::ErrorKind;
use clap::{Parser, Subcommand};
use commands::{cmd_export, cmd_solve, cmd_verify, cmd_ztile};
use commands::{ExportWhat, SpectrumArgs, VerifyKind, ZtileAction};
use std::path::PathBuf;
use std::process::ExitCode;

#[derive(Parser)]
#[command(
    name = "gaptile",
    version,
    about = "Perturbed-integer translation sets with a spectral gap: solve, certify, export"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Solve the gap equation and write alpha.csv, lambda.csv, report.json
    Solve {
        /// Path to a flat JSON config (schema_version 1)
        #[arg(long)]
        config: PathBuf,
    },
    /// Recompute a certificate from persisted artifacts
    Verify {
        /// Which certificate to recompute
        #[arg(value_enum)]
        which: VerifyKind,
        /// Directory containing report.json and alpha.csv
        #[arg(long)]
        artifacts: PathBuf,
    },
    /// Integer-tiling utilities on cyclic groups
    Ztile {
        /// What to do with the instance
        #[arg(value_enum)]
        action: ZtileAction,
        /// Two-line instance file: `N=<modulus> w=<level>` then
        /// `<offset>:<value> ...`
        instance: PathBuf,
        /// Residue list like `0,2,4`; required by `check`, optional for
        /// `period` (which otherwise reports every search result)
        #[arg(long, required_if_eq("action", "check"))]
        set: Option<String>,
    },
    /// Emit plot-ready CSV derived from a run report
    Export {
        /// Which table to emit
        #[arg(value_enum)]
        what: ExportWhat,
        /// Path to a report.json written by `solve`
        #[arg(long)]
        report: PathBuf,
        /// Cyclic modulus of the set (spectrum only)
        #[arg(long, required_if_eq("what", "spectrum"))]
        modulus: Option<usize>,
        /// Residue list like `0,2,4` (spectrum only)
        #[arg(long, required_if_eq("what", "spectrum"))]
        residues: Option<String>,
        /// Cesaro taper length for the spectrum
        #[arg(long, default_value_t = 256)]
        taper: usize,
        /// Number of frequency samples on [0, 1)
        #[arg(long, default_value_t = 512)]
        nfreq: usize,
    },
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                // Bad usage is a parse failure, same bucket as malformed
                // input files.
                _ => 4,
            };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let result = match cli.command {
        Command::Solve { config } => cmd_solve(&config),
        Command::Verify { which, artifacts } => cmd_verify(which, &artifacts),
        Command::Ztile {
            action,
            instance,
            set,
        } => cmd_ztile(action, &instance, set.as_deref()),
        Command::Export {
            what,
            report,
            modulus,
            residues,
            taper,
            nfreq,
        } => cmd_export(
            what,
            &report,
            &SpectrumArgs {
                modulus,
                residues,
                taper,
                nfreq,
            },
        ),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.code())
        }
    }
}
