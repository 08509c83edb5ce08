//! `isodiam`: closed forms, figures, symmetrization runs and optimizer runs
//! for the constrained isodiametric problem in a cone.
//!
//! Exit status: 0 on success, 1 when `verify` finds a failing check, 2 on
//! usage errors and invalid arguments, 3 on I/O errors.

use std::fs;
use std::io::{self, Write as _};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{Context as _, Result};
use clap::{Args, Parser, Subcommand};
use serde::Serialize;

use isodiam_core::closed_form::{delta_params, part_volumes, sweep_csv, sweep_table};
use isodiam_core::figure::section_svg;
use isodiam_core::geometry::make_random_convex_polygon;
use isodiam_core::oracles::{monte_carlo_volume, Aabb3};
use isodiam_core::search::{optimize_profile, wall_optimize, FeasibleSpec, OptResult};
use isodiam_core::symmetrization::{random_symmetrization_run, steiner_symmetrize};
use isodiam_core::verify::{self, Scale};
use isodiam_core::{Aperture, ConvexPolygon, Direction2};

const FIGURE_FIXTURE: &str = include_str!("../../core/tests/fixtures/section_right_angle.svg");

#[derive(Parser, Debug)]
#[command(name = "isodiam", version, about = "Volume-maximal bodies of diameter one in a cone")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug, Clone, Copy)]
struct Angle {
    /// Cone aperture in radians (degrees with --degrees).
    #[arg(long, allow_hyphen_values = true)]
    theta: f64,
    /// Read angles as degrees.
    #[arg(long)]
    degrees: bool,
}

impl Angle {
    fn aperture(self) -> Result<Aperture> {
        Ok(if self.degrees { Aperture::from_degrees(self.theta)? } else { Aperture::new(self.theta)? })
    }
}

#[derive(Args, Debug)]
struct Output {
    /// Write to this file instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args, Debug)]
#[group(required = true, multiple = false)]
struct PolygonSource {
    /// Polygon JSON file: {"vertices": [[x, y], ...]}.
    #[arg(long)]
    input: Option<PathBuf>,
    /// Random convex polygon: hull of this many points in the unit disk.
    #[arg(long)]
    random: Option<usize>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Junction constants of the extremal body as JSON.
    Params {
        #[command(flatten)]
        angle: Angle,
        #[command(flatten)]
        output: Output,
    },
    /// Part volumes and total volume as JSON.
    Volume {
        #[command(flatten)]
        angle: Angle,
        #[command(flatten)]
        output: Output,
    },
    /// CSV sweep of constants and volumes over an aperture range.
    Table {
        #[arg(long, allow_hyphen_values = true)]
        from: f64,
        #[arg(long, allow_hyphen_values = true)]
        to: f64,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        degrees: bool,
        #[command(flatten)]
        output: Output,
    },
    /// SVG of the meridian section.
    ProfileSvg {
        #[command(flatten)]
        angle: Angle,
        #[command(flatten)]
        output: Output,
    },
    /// One Steiner symmetrization of a polygon.
    Symmetrize {
        #[command(flatten)]
        source: PolygonSource,
        /// Seed for --random.
        #[arg(long)]
        seed: Option<u64>,
        /// Direction of the symmetrization line, radians from the x-axis.
        #[arg(long, allow_hyphen_values = true)]
        angle: f64,
        #[arg(long)]
        degrees: bool,
        #[command(flatten)]
        output: Output,
    },
    /// Random symmetrization run; CSV trace plus a JSON sidecar.
    Converge {
        #[command(flatten)]
        source: PolygonSource,
        /// Seed for --random.
        #[arg(long)]
        polygon_seed: Option<u64>,
        #[arg(long, default_value_t = 200)]
        steps: usize,
        /// Seed for the line directions.
        #[arg(long)]
        seed: u64,
        /// CSV path; the sidecar goes next to it with a .json extension.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Monte Carlo volume estimate of the extremal body.
    McVolume {
        #[command(flatten)]
        angle: Angle,
        #[arg(long, default_value_t = 1_000_000)]
        samples: u64,
        #[arg(long)]
        seed: u64,
        #[command(flatten)]
        output: Output,
    },
    /// Volume maximization over profiles in the cone.
    Optimize {
        #[command(flatten)]
        angle: Angle,
        #[command(flatten)]
        run: RunArgs,
    },
    /// Volume maximization over the middle slab with pinned end disks.
    Wall {
        #[command(flatten)]
        angle: Angle,
        #[command(flatten)]
        run: RunArgs,
    },
    /// Run the check suite and print a pass/fail table.
    Verify {
        /// Acceptance-size samples instead of the quick defaults.
        #[arg(long)]
        full: bool,
    },
}

#[derive(Args, Debug)]
struct RunArgs {
    #[arg(long, default_value_t = 64)]
    knots: usize,
    /// Objective evaluations over all starts.
    #[arg(long, default_value_t = 200_000)]
    budget: u64,
    #[arg(long)]
    seed: u64,
    /// Result JSON path (stdout when omitted).
    #[arg(long)]
    out: Option<PathBuf>,
    /// Run-log CSV path.
    #[arg(long)]
    log: Option<PathBuf>,
}

fn emit(out: Option<&Path>, body: &str) -> Result<()> {
    match out {
        Some(path) => fs::write(path, body).with_context(|| format!("writing {}", path.display())),
        None => {
            let mut stdout = io::stdout().lock();
            stdout.write_all(body.as_bytes()).context("writing to stdout")?;
            stdout.flush().context("writing to stdout")
        }
    }
}

fn json<T: Serialize>(value: &T) -> Result<String> {
    Ok(serde_json::to_string_pretty(value)? + "\n")
}

fn polygon(source: &PolygonSource, seed: Option<u64>) -> Result<ConvexPolygon> {
    if let Some(path) = &source.input {
        let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
        return serde_json::from_str(&text).with_context(|| format!("parsing {}", path.display()));
    }
    let n = source.random.expect("clap enforces one source");
    let seed = seed.context("--random needs a seed")?;
    Ok(make_random_convex_polygon(n, seed)?)
}

fn to_radians(v: f64, degrees: bool) -> f64 {
    if degrees {
        v.to_radians()
    } else {
        v
    }
}

fn write_run(result: &OptResult, run: &RunArgs) -> Result<()> {
    if let Some(log) = &run.log {
        emit(Some(log), &result.log_csv())?;
    }
    emit(run.out.as_deref(), &json(result)?)
}

/// Returns whether every check passed (always true outside `verify`).
fn run(cli: Cli) -> Result<bool> {
    match cli.command {
        Command::Params { angle, output } => emit(output.out.as_deref(), &json(&delta_params(angle.aperture()?)?)?)?,
        Command::Volume { angle, output } => emit(output.out.as_deref(), &json(&part_volumes(angle.aperture()?)?)?)?,
        Command::Table { from, to, n, degrees, output } => {
            let lo = Aperture::new(to_radians(from, degrees))?;
            let hi = Aperture::new(to_radians(to, degrees))?;
            emit(output.out.as_deref(), &sweep_csv(&sweep_table(lo, hi, n)?))?;
        }
        Command::ProfileSvg { angle, output } => emit(output.out.as_deref(), &section_svg(angle.aperture()?)?)?,
        Command::Symmetrize { source, seed, angle, degrees, output } => {
            let p = polygon(&source, seed)?;
            let s = steiner_symmetrize(&p, Direction2::new(to_radians(angle, degrees)))?;
            emit(output.out.as_deref(), &json(&s)?)?;
        }
        Command::Converge { source, polygon_seed, steps, seed, out } => {
            let p = polygon(&source, polygon_seed)?;
            let run = random_symmetrization_run(&p, steps, seed)?;
            emit(out.as_deref(), &run.trace.to_csv())?;
            if let Some(path) = out {
                emit(Some(&path.with_extension("json")), &json(&run.trace)?)?;
            }
        }
        Command::McVolume { angle, samples, seed, output } => {
            let d = delta_params(angle.aperture()?)?;
            let est = monte_carlo_volume(|p| d.contains(p), Aabb3::for_delta(&d), samples, seed)?;
            emit(output.out.as_deref(), &json(&est)?)?;
        }
        Command::Optimize { angle, run } => {
            let spec = FeasibleSpec::full_cone(angle.aperture()?, run.knots)?;
            write_run(&optimize_profile(&spec, run.budget, run.seed)?, &run)?;
        }
        Command::Wall { angle, run } => {
            let spec = FeasibleSpec::wall_for(angle.aperture()?, run.knots)?;
            write_run(&wall_optimize(&spec, run.budget, run.seed)?, &run)?;
        }
        Command::Verify { full } => {
            let scale = if full { Scale::Full } else { Scale::Quick };
            let outcomes = verify::run_all(scale, FIGURE_FIXTURE)?;
            let mut table = String::new();
            for o in &outcomes {
                table.push_str(&o.to_string());
                table.push('\n');
            }
            let failed = outcomes.iter().filter(|o| !o.passed).count();
            table.push_str(&format!("{} passed, {failed} failed\n", outcomes.len() - failed));
            emit(None, &table)?;
            return Ok(failed == 0);
        }
    }
    Ok(true)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => e.exit(),
    };
    match run(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(err) => {
            eprintln!("error: {err:#}");
            if err.chain().any(|e| e.is::<io::Error>()) {
                ExitCode::from(3)
            } else {
                ExitCode::from(2)
            }
        }
    }
}
