//! `tcc`: build ruby-lattice patches, verify the plaquette algebra, compare
//! spectra, derive braid phases and check braiding gates.

mod commands;
mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use tcc_core::Error;

#[derive(Parser, Debug)]
#[command(name = "tcc", version, about = "Two-body color code toolkit")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[command(flatten)]
    common: Common,
}

#[derive(Args, Debug, Clone)]
pub struct Common {
    /// Output format.
    #[arg(long, value_enum, default_value_t = Format::Table, global = true)]
    pub format: Format,
    /// Write the report here instead of stdout.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Seed for randomized checks.
    #[arg(long, default_value_t = 0, global = true)]
    pub seed: u64,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Table,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum BoundaryArg {
    Open,
    Periodic,
}

#[derive(Args, Debug, Clone)]
pub struct PatchArgs {
    /// Patch shape as ROWSxCOLS.
    #[arg(long, value_parser = parse_shape)]
    pub patch: Option<(usize, usize)>,
    #[arg(long, value_enum, default_value_t = BoundaryArg::Open)]
    pub boundary: BoundaryArg,
    /// Read the patch from a patch JSON document instead.
    #[arg(long, conflicts_with = "patch")]
    pub patch_file: Option<PathBuf>,
}

#[derive(Args, Debug, Clone)]
pub struct Couplings {
    #[arg(long, default_value_t = 1.0, allow_negative_numbers = true)]
    pub jx: f64,
    #[arg(long, default_value_t = 1.0, allow_negative_numbers = true)]
    pub jy: f64,
    #[arg(long, default_value_t = 1.0, allow_negative_numbers = true)]
    pub jz: f64,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Write a patch JSON document.
    BuildPatch {
        #[command(flatten)]
        patch: PatchArgs,
    },
    /// Check the plaquette algebra and the independence count.
    VerifyAlgebra {
        #[command(flatten)]
        patch: PatchArgs,
        #[command(flatten)]
        j: Couplings,
    },
    /// Microscopic and effective spectra of a small cluster.
    Spectrum {
        /// Chain of N triangles (ignored with --patch or --patch-file).
        #[arg(long, default_value_t = 1)]
        triangles: usize,
        #[command(flatten)]
        patch: PatchArgs,
        #[command(flatten)]
        j: Couplings,
    },
    /// Truth tables of the braiding gates.
    Gates {
        /// hopping, pair, color-switch, fusion (or A-D), or all.
        #[arg(long, default_value = "all")]
        scheme: String,
        /// Control color; with --target, replaces the reference colors.
        #[arg(long, requires = "target")]
        control: Option<String>,
        #[arg(long, requires = "control")]
        target: Option<String>,
        /// Also evaluate every loop on the spin model.
        #[arg(long)]
        cross_check: bool,
    },
    /// Braid phase of a schedule.
    Braid {
        /// Schedule JSON: occupations and moves.
        #[arg(long)]
        schedule: PathBuf,
        #[command(flatten)]
        patch: PatchArgs,
        /// Use the statistics derived from the spin model rather than the
        /// built-in table.
        #[arg(long)]
        derived_table: bool,
        /// Recompute each loop move on the spin model.
        #[arg(long)]
        cross_check: bool,
    },
}

fn parse_shape(s: &str) -> Result<(usize, usize), String> {
    let (r, c) = s
        .split_once(['x', 'X'])
        .ok_or_else(|| format!("expected ROWSxCOLS, got {s:?}"))?;
    let r: usize = r.trim().parse().map_err(|_| format!("bad row count {r:?}"))?;
    let c: usize = c.trim().parse().map_err(|_| format!("bad column count {c:?}"))?;
    if r == 0 || c == 0 {
        return Err("patch dimensions must be positive".into());
    }
    Ok((r, c))
}

/// Stable exit codes.
pub mod exit {
    pub const OK: u8 = 0;
    pub const FAILED: u8 = 1;
    pub const USAGE: u8 = 2;
    pub const CAPACITY: u8 = 3;
}

/// What went wrong, mapped to an exit code.
#[derive(Debug)]
pub enum Failure {
    Usage(String),
    Capacity(String),
    Failed(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::Capacity { .. } => Failure::Capacity(e.to_string()),
            Error::Coupling(_) | Error::Construction(_) | Error::Json(_) | Error::Encoding(_) => {
                Failure::Usage(e.to_string())
            }
            _ => Failure::Failed(e.to_string()),
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { exit::USAGE } else { exit::OK };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let result = match cli.command {
        Command::BuildPatch { patch } => commands::build_patch(&patch),
        Command::VerifyAlgebra { patch, j } => commands::verify_algebra(&patch, &j, cli.common.seed),
        Command::Spectrum { triangles, patch, j } => commands::spectrum(triangles, &patch, &j),
        Command::Gates {
            scheme,
            control,
            target,
            cross_check,
        } => commands::gates(&scheme, control.zip(target), cross_check),
        Command::Braid {
            schedule,
            patch,
            derived_table,
            cross_check,
        } => commands::braid(&schedule, &patch, derived_table, cross_check),
    };
    match result {
        Ok(report) => match output::emit(&report, &cli.common) {
            Ok(()) => ExitCode::from(if report.passed { exit::OK } else { exit::FAILED }),
            Err(e) => {
                eprintln!("error: {e}");
                ExitCode::from(exit::FAILED)
            }
        },
        Err(Failure::Usage(m)) => {
            eprintln!("usage error: {m}");
            ExitCode::from(exit::USAGE)
        }
        Err(Failure::Capacity(m)) => {
            eprintln!("capacity error: {m}");
            ExitCode::from(exit::CAPACITY)
        }
        Err(Failure::Failed(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(exit::FAILED)
        }
    }
}
