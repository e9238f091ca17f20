//! Command-line front end: eigenvalue tables for geodesic balls,
//! verification suites, and Steklov spectra of 2D domains.
//!
//! Exit codes: 0 on success, 1 when a verification suite reports a failed
//! check, 2 on usage or input errors. Float output uses shortest round-trip
//! formatting, so identical inputs produce byte-identical reports.

mod spaces_arg;
mod verify;

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use rayon::prelude::*;

use steklov::domains::StarDomain;
use steklov::steklov2d::dtn_spectrum;
use steklov::{conformal_model, nu1_ball, sweep_to_csv, SpaceModel};

#[derive(Parser)]
#[command(name = "steklov", version, about = "Steklov eigenvalues of geodesic balls and star-shaped 2D domains")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// First Steklov eigenvalue of geodesic balls (two routes, CSV output).
    BallEigen {
        /// Built-in space name: H2, S2, CaH2, Rn, RHn, CHn, HHn, warped-sinh12.
        #[arg(long, conflicts_with = "space_json")]
        space: Option<String>,
        /// Path to a space description JSON file.
        #[arg(long)]
        space_json: Option<PathBuf>,
        /// Base dimension for the Rn/RHn/CHn/HHn families.
        #[arg(long)]
        n: Option<u32>,
        /// Ball radius, or a comma-separated radius grid.
        #[arg(long = "R", value_delimiter = ',', required = true)]
        radii: Vec<f64>,
        /// Write the CSV here as well as to stdout.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run a verification suite: lemma3 | thm1 | thm2 | lemma2 | oracle.
    Verify {
        suite: String,
        /// Write the JSON report here as well as to stdout.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Low Steklov spectrum of a star-shaped 2D domain.
    Spectrum {
        /// Path to a domain description JSON file.
        #[arg(long)]
        domain: PathBuf,
        /// Number of modes to return (including the zero mode).
        #[arg(long, default_value_t = 6)]
        modes: usize,
        /// Boundary discretization size.
        #[arg(long = "N", default_value_t = 256)]
        n: usize,
        /// Write the JSON spectrum here as well as to stdout.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Optionally write boundary eigendensities as CSV (theta, mode columns).
        #[arg(long)]
        densities_csv: Option<PathBuf>,
    },
}

/// Resolve an output path against STEKLOV_OUT_DIR for relative paths.
fn resolve_out(path: &Path) -> PathBuf {
    if path.is_absolute() {
        return path.to_path_buf();
    }
    match std::env::var_os("STEKLOV_OUT_DIR") {
        Some(dir) => PathBuf::from(dir).join(path),
        None => path.to_path_buf(),
    }
}

fn write_out(path: &Path, contents: &str) -> Result<(), String> {
    let path = resolve_out(path);
    if let Some(parent) = path.parent() {
        if !parent.as_os_str().is_empty() {
            std::fs::create_dir_all(parent).map_err(|e| format!("cannot create {}: {e}", parent.display()))?;
        }
    }
    std::fs::write(&path, contents).map_err(|e| format!("cannot write {}: {e}", path.display()))
}

fn load_space(
    space: Option<String>,
    space_json: Option<PathBuf>,
    n: Option<u32>,
) -> Result<SpaceModel, String> {
    match (space, space_json) {
        (Some(name), None) => spaces_arg::builtin_space(&name, n),
        (None, Some(path)) => {
            let text = std::fs::read_to_string(&path).map_err(|e| format!("cannot read {}: {e}", path.display()))?;
            SpaceModel::from_json(&text).map_err(|e| e.to_string())
        }
        (None, None) => Err("one of --space or --space-json is required".into()),
        (Some(_), Some(_)) => unreachable!("clap conflicts_with"),
    }
}

fn run(cli: Cli) -> Result<u8, String> {
    match cli.command {
        Command::BallEigen { space, space_json, n, radii, out } => {
            if radii.is_empty() {
                return Err("at least one radius is required".into());
            }
            let model = load_space(space, space_json, n)?;
            // Radii are independent solves; keep the output order fixed.
            let entries: Vec<_> = radii.par_iter().map(|&r| (r, nu1_ball(&model, r))).collect();
            for (radius, entry) in &entries {
                if let Err(e) = entry {
                    eprintln!("warning: R = {radius}: {e}");
                }
            }
            if entries.iter().all(|(_, e)| e.is_err()) {
                return Err("no radius in the grid produced a result".into());
            }
            let csv = sweep_to_csv(&entries);
            print!("{csv}");
            if let Some(path) = out {
                write_out(&path, &csv)?;
            }
            Ok(0)
        }
        Command::Verify { suite, out } => {
            let report = verify::run_suite(&suite).map_err(|e| e.to_string())?;
            let json = report.to_json();
            println!("{json}");
            if let Some(path) = out {
                write_out(&path, &json)?;
            }
            Ok(if report.pass { 0 } else { 1 })
        }
        Command::Spectrum { domain, modes, n, out, densities_csv } => {
            let text = std::fs::read_to_string(&domain)
                .map_err(|e| format!("cannot read {}: {e}", domain.display()))?;
            let dom = StarDomain::from_json(&text).map_err(|e| e.to_string())?;
            let planar = conformal_model(&dom).map_err(|e| e.to_string())?;
            let spectrum = dtn_spectrum(&planar, modes, n).map_err(|e| e.to_string())?;
            let json = serde_json::to_string_pretty(&spectrum.to_json_value()).expect("spectrum json");
            println!("{json}");
            if let Some(path) = out {
                write_out(&path, &json)?;
            }
            if let Some(path) = densities_csv {
                write_out(&path, &spectrum.densities_csv())?;
            }
            Ok(0)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(message) => {
            eprintln!("error: {message}");
            ExitCode::from(2)
        }
    }
}
