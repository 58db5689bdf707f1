use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::Result;
use clap::{Args, Parser, Subcommand, ValueEnum};
use quasimass_io::commands::{self, LadderOptions, Outcome, TableKind};
use quasimass_io::formats;
use quasimass_io::report::{emit, to_text};

/// Sharp bounds on Wigner quasiprobability mass over phase-space regions.
#[derive(Parser)]
#[command(name = "quasimass", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Ladder {
    /// Dimension ladder `a:b[:c]`.
    #[arg(long, default_value = commands::DEFAULT_DIMS)]
    dims: String,
    /// Quadrature resolution.
    #[arg(long, default_value_t = quasimass::DEFAULT_RESOLUTION)]
    resolution: usize,
    /// Largest allowed change of a numeric bound on the last ladder step.
    #[arg(long, default_value_t = commands::DEFAULT_TOLERANCE)]
    tolerance: f64,
}

impl Ladder {
    fn options(&self) -> Result<LadderOptions> {
        anyhow::ensure!(self.resolution >= 4, "resolution must be at least 4");
        anyhow::ensure!(
            self.tolerance.is_finite() && self.tolerance >= 0.0,
            "tolerance must be a finite non-negative number"
        );
        Ok(LadderOptions {
            dims: commands::parse_dims(&self.dims)?,
            resolution: self.resolution,
            tolerance: self.tolerance,
        })
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum Kind {
    Disk,
    Circle,
    Segment,
}

#[derive(Subcommand)]
enum Command {
    /// Bounds of a region on a dimension ladder.
    Bounds {
        #[arg(long)]
        region: PathBuf,
        #[command(flatten)]
        ladder: Ladder,
        #[arg(long)]
        out: Option<PathBuf>,
        /// Add wall-clock timings (the report is then no longer reproducible).
        #[arg(long)]
        timing: bool,
    },
    /// Closed-form spectra as CSV.
    Tabulate {
        kind: Kind,
        /// Radii (disk, circle) or lengths (segment): `1,2,3` or `lo:hi:count`.
        #[arg(long)]
        values: String,
        /// Largest number-state index (disk, circle).
        #[arg(long, default_value_t = 10)]
        nmax: usize,
        /// Wavenumbers (segment).
        #[arg(long)]
        k: Option<String>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Expectation of a region operator in a state, against its bounds.
    Verify {
        #[arg(long)]
        state: PathBuf,
        #[arg(long)]
        region: PathBuf,
        #[command(flatten)]
        ladder: Ladder,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Mass of a sampled Wigner grid over a region, with a consistency verdict.
    Ingest {
        #[arg(long)]
        grid: PathBuf,
        #[arg(long)]
        region: PathBuf,
        /// Overrides the sidecar noise level.
        #[arg(long)]
        noise_level: Option<f64>,
        #[command(flatten)]
        ladder: Ladder,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Samples the Wigner function of a state on a uniform grid (CSV).
    Sample {
        #[arg(long)]
        state: PathBuf,
        /// `lo:hi` for both axes.
        #[arg(long, default_value = "-6:6", allow_hyphen_values = true)]
        range: String,
        #[arg(long, default_value_t = 201)]
        points: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn report(outcome: Outcome, out: Option<PathBuf>) -> Result<i32> {
    emit(out.as_deref(), &to_text(&outcome.report))?;
    Ok(outcome.status.exit_code())
}

fn run(cli: Cli) -> Result<i32> {
    match cli.command {
        Command::Bounds {
            region,
            ladder,
            out,
            timing,
        } => {
            let region = formats::read_region(&region)?;
            report(
                commands::cmd_bounds(&region, &ladder.options()?, timing)?,
                out,
            )
        }
        Command::Tabulate {
            kind,
            values,
            nmax,
            k,
            out,
        } => {
            let params = commands::parse_values(&values)?;
            let (kind, ks) = match kind {
                Kind::Disk => (TableKind::Disk, Vec::new()),
                Kind::Circle => (TableKind::Circle, Vec::new()),
                Kind::Segment => {
                    let k = k.ok_or_else(|| anyhow::anyhow!("segment tables need --k"))?;
                    (TableKind::Segment, commands::parse_values(&k)?)
                }
            };
            emit(
                out.as_deref(),
                &commands::cmd_tabulate(kind, &params, nmax, &ks)?,
            )?;
            Ok(0)
        }
        Command::Verify {
            state,
            region,
            ladder,
            out,
        } => {
            let rho = formats::read_state(&state)?;
            let region = formats::read_region(&region)?;
            report(
                commands::cmd_verify(&rho, &region, &ladder.options()?)?,
                out,
            )
        }
        Command::Ingest {
            grid,
            region,
            noise_level,
            ladder,
            out,
        } => {
            let grid = formats::read_grid(&grid, noise_level)?;
            let region = formats::read_region(&region)?;
            report(
                commands::cmd_ingest(&grid, &region, &ladder.options()?)?,
                out,
            )
        }
        Command::Sample {
            state,
            range,
            points,
            out,
        } => {
            let rho = formats::read_state(&state)?;
            let r = commands::parse_range(&range)?;
            let grid = commands::cmd_sample(&rho, r, r, points)?;
            emit(out.as_deref(), &formats::grid_csv(&grid)?)?;
            Ok(0)
        }
    }
}

fn main() -> ExitCode {
    // clap's own usage errors exit with 2, which is reserved for non-convergence
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 1 } else { 0 });
        }
    };
    match run(cli) {
        Ok(code) => ExitCode::from(code as u8),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}
