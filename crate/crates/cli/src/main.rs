//! `sphere-steer`: LARC checks, normal forms, steering plans and RK4
//! playback for bilinear systems on S².

mod output;
mod system;

use std::fs::{self, File};
use std::io::BufWriter;
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::{Parser, Subcommand};
use serde::Serialize;
use sphere_steer::induced_fields::{DEFAULT_DEPTH, SKEW_TOL};
use sphere_steer::larc::{larc_global, larc_skew_report, DEFAULT_SAMPLES};
use sphere_steer::linalg3::Vector3;
use sphere_steer::normal_form::{ensure_b3_nonzero, reduce_system, DEFAULT_TOL};
use sphere_steer::planner::{plan, SteeringPlan};
use sphere_steer::simulator::{integrate, integrate_endpoint, IntegrateOptions};
use sphere_steer::Error;

use crate::system::{parse_endpoint, SystemFile};

#[derive(Parser)]
#[command(name = "sphere-steer", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Check the Lie algebra rank condition.
    Larc {
        #[arg(long)]
        system: PathBuf,
        #[arg(long, default_value_t = DEFAULT_SAMPLES)]
        samples: usize,
        #[arg(long, default_value_t = DEFAULT_DEPTH)]
        depth: usize,
        #[arg(long, default_value_t = DEFAULT_TOL)]
        tol: f64,
    },
    /// Reduce a skew pair to its working frame.
    NormalForm {
        #[arg(long)]
        system: PathBuf,
        #[arg(long, default_value_t = DEFAULT_TOL)]
        tol: f64,
    },
    /// Plan a piecewise-constant control between two points.
    Plan {
        #[arg(long)]
        system: PathBuf,
        #[arg(long, allow_hyphen_values = true)]
        from: String,
        #[arg(long, allow_hyphen_values = true)]
        to: String,
        #[arg(long, default_value_t = DEFAULT_TOL)]
        tol: f64,
    },
    /// Integrate a plan with RK4 and report the endpoint error.
    Simulate {
        #[arg(long)]
        system: PathBuf,
        #[arg(long)]
        plan: PathBuf,
        #[arg(long, default_value_t = 1e-4)]
        step: f64,
        /// Write the sampled trajectory as CSV.
        #[arg(long)]
        csv: Option<PathBuf>,
    },
}

#[derive(Serialize)]
struct SimulationReport {
    endpoint: Vector3,
    endpoint_error: f64,
    step: f64,
    renormalized: bool,
    total_time: f64,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(code) => code,
        Err(err) => {
            eprintln!("error: {err:#}");
            match err.downcast_ref::<Error>() {
                Some(Error::BracketVanishes { .. }) => ExitCode::from(2),
                _ => ExitCode::from(1),
            }
        }
    }
}

fn run(command: Command) -> Result<ExitCode> {
    match command {
        Command::Larc {
            system,
            samples,
            depth,
            tol,
        } => {
            let file = SystemFile::load(&system)?;
            let pair = file.pair()?;
            let report = if pair.skew {
                let (a, b) = file.skew_pair(SKEW_TOL)?;
                larc_skew_report(&a, &b, depth, tol)?
            } else {
                larc_global(&pair, samples, depth, tol)
            };
            emit(&report)?;
            Ok(if report.verdict.is_satisfied() {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(2)
            })
        }
        Command::NormalForm { system, tol } => {
            let (a, b) = SystemFile::load(&system)?.skew_pair(tol)?;
            let reduced = reduce_system(&a, &b, tol)?;
            // commuting pairs have no b3 fixup; report the plain reduction
            let nf = if reduced.alpha > tol {
                ensure_b3_nonzero(&reduced, tol)?
            } else {
                reduced
            };
            emit(&nf)?;
            Ok(ExitCode::SUCCESS)
        }
        Command::Plan {
            system,
            from,
            to,
            tol,
        } => {
            let (a, b) = SystemFile::load(&system)?.skew_pair(tol)?;
            let plan = plan(&a, &b, parse_endpoint(&from)?, parse_endpoint(&to)?, tol)?;
            emit(&plan)?;
            Ok(ExitCode::SUCCESS)
        }
        Command::Simulate {
            system,
            plan,
            step,
            csv,
        } => {
            let pair = SystemFile::load(&system)?.pair()?;
            let text =
                fs::read_to_string(&plan).with_context(|| format!("reading {}", plan.display()))?;
            let plan: SteeringPlan = serde_json::from_str(&text)
                .with_context(|| format!("parsing {}", plan.display()))?;
            let opts = IntegrateOptions::for_system(&pair, step);
            let endpoint = match &csv {
                Some(path) => {
                    let traj = integrate(&pair, &plan.start, &plan.segments, &opts)?;
                    let out = File::create(path)
                        .with_context(|| format!("creating {}", path.display()))?;
                    output::write_csv(BufWriter::new(out), &traj.samples)?;
                    traj.endpoint()
                }
                None => integrate_endpoint(&pair, &plan.start, &plan.segments, &opts)?,
            };
            emit(&SimulationReport {
                endpoint,
                endpoint_error: endpoint.distance(&plan.target.as_vector()),
                step,
                renormalized: opts.renormalize,
                total_time: plan.total_time,
            })?;
            Ok(ExitCode::SUCCESS)
        }
    }
}

fn emit<T: Serialize>(value: &T) -> Result<()> {
    println!("{}", output::to_json(value)?);
    Ok(())
}
