use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use mazer::sweep::{
    compare, exceeds_failure_budget, parse_pi_expr, peaks, preset, run_sweep, write_compare, write_csv, write_peaks,
    Axis, AxisRange, Engine, Overrides, SweepSpec,
};
use mazer::{MazerError, MazerParams, ModeProfile};

const EXIT_INVALID: u8 = 2;
const EXIT_NUMERICAL: u8 = 3;

#[derive(Parser)]
#[command(
    name = "mazer",
    version,
    about = "Cold-atom micromaser emission and scattering sweeps"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate one engine over a parameter grid and write CSV.
    Sweep {
        #[command(flatten)]
        grid: GridArgs,
        #[arg(long, default_value = "closed_form")]
        engine: Engine,
    },
    /// Evaluate several engines over the same grid and report deviations from the first.
    Compare {
        #[command(flatten)]
        grid: GridArgs,
        /// Comma-separated list, the first is the reference.
        #[arg(long, value_delimiter = ',', default_value = "closed_form,oracle")]
        engines: Vec<Engine>,
    },
    /// Predicted resonance positions next to maxima of the exact curve.
    Peaks {
        #[arg(long, default_value_t = 0)]
        n: u32,
        #[arg(long, value_parser = parse_pi_expr, allow_hyphen_values = true)]
        k_over_kappa: f64,
        #[arg(long, value_parser = parse_pi_expr, default_value = "0", allow_hyphen_values = true)]
        delta_over_g: f64,
        #[arg(long, default_value_t = 10)]
        m_max: u32,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Args)]
struct GridArgs {
    /// Start from a named grid; explicit flags override it.
    #[arg(long)]
    preset: Option<String>,
    #[arg(long)]
    n: Option<u32>,
    #[arg(long, value_parser = parse_pi_expr, allow_hyphen_values = true)]
    k_over_kappa: Option<f64>,
    #[arg(long, value_parser = parse_pi_expr, allow_hyphen_values = true)]
    delta_over_g: Option<f64>,
    /// Accepts pi literals such as 10pi.
    #[arg(long, value_parser = parse_pi_expr, allow_hyphen_values = true)]
    kappa_l: Option<f64>,
    #[arg(long)]
    axis: Option<Axis>,
    #[arg(long, value_parser = parse_pi_expr, allow_hyphen_values = true)]
    min: Option<f64>,
    #[arg(long, value_parser = parse_pi_expr, allow_hyphen_values = true)]
    max: Option<f64>,
    #[arg(long)]
    steps: Option<usize>,
    /// Outer axis: either a list of values or a range.
    #[arg(long)]
    axis2: Option<Axis>,
    #[arg(long, value_delimiter = ',', value_parser = parse_pi_expr, allow_hyphen_values = true)]
    values2: Option<Vec<f64>>,
    #[arg(long, value_parser = parse_pi_expr, allow_hyphen_values = true)]
    min2: Option<f64>,
    #[arg(long, value_parser = parse_pi_expr, allow_hyphen_values = true)]
    max2: Option<f64>,
    #[arg(long)]
    steps2: Option<usize>,
    /// Pin κL to the m-th predicted cold resonance at every point.
    #[arg(long)]
    at_peak: Option<u32>,
    /// mesa, sech2, sine2 or file:<path>
    #[arg(long, default_value = "mesa")]
    profile: String,
    #[arg(long)]
    slices: Option<usize>,
    /// Output file; stdout when omitted or `-`.
    #[arg(long)]
    out: Option<PathBuf>,
}

fn parse_profile(text: &str) -> Result<ModeProfile, MazerError> {
    match text {
        "mesa" => Ok(ModeProfile::mesa()),
        "sech2" => Ok(ModeProfile::sech2()),
        "sine2" => Ok(ModeProfile::sine2()),
        other => match other.strip_prefix("file:") {
            Some(path) => ModeProfile::load(path),
            None => Err(MazerError::InvalidParams(format!(
                "unknown profile `{other}` (mesa, sech2, sine2, file:<path>)"
            ))),
        },
    }
}

fn build_spec(grid: &GridArgs, engine: Engine) -> Result<SweepSpec, MazerError> {
    let mut spec = match &grid.preset {
        Some(name) => preset(name)?,
        None => {
            let axis = grid
                .axis
                .ok_or_else(|| MazerError::InvalidParams("--axis is required without --preset".into()))?;
            let base = MazerParams {
                n: 0,
                k_over_kappa: 1.0,
                delta_over_g: 0.0,
                kappa_l: 0.0,
            };
            SweepSpec::new(base, AxisRange::new(axis, 0.0, 1.0, 2), engine)
        }
    };
    spec.engine = engine;
    if let Some(n) = grid.n {
        spec.base.n = n;
    }
    if let Some(k) = grid.k_over_kappa {
        spec.base.k_over_kappa = k;
    }
    if let Some(d) = grid.delta_over_g {
        spec.base.delta_over_g = d;
    }
    if let Some(l) = grid.kappa_l {
        spec.base.kappa_l = l;
    }
    if grid.preset.is_none() || grid.axis.is_some() {
        let axis = grid.axis.unwrap_or(spec.axis.axis);
        let need = |v: Option<f64>, flag: &str| {
            v.ok_or_else(|| MazerError::InvalidParams(format!("--{flag} is required with --axis")))
        };
        let keep_range = grid.preset.is_some() && axis == spec.axis.axis;
        spec.axis = AxisRange::new(
            axis,
            if keep_range {
                grid.min.unwrap_or(spec.axis.min)
            } else {
                need(grid.min, "min")?
            },
            if keep_range {
                grid.max.unwrap_or(spec.axis.max)
            } else {
                need(grid.max, "max")?
            },
            grid.steps.unwrap_or(if keep_range { spec.axis.steps } else { 101 }),
        );
    } else {
        spec.axis.min = grid.min.unwrap_or(spec.axis.min);
        spec.axis.max = grid.max.unwrap_or(spec.axis.max);
        spec.axis.steps = grid.steps.unwrap_or(spec.axis.steps);
    }
    if let Some(axis2) = grid.axis2 {
        spec.series = match (&grid.values2, grid.min2, grid.max2) {
            (Some(values), None, None) => values.iter().map(|&v| Overrides::single(axis2, v)).collect(),
            (None, Some(lo), Some(hi)) => {
                let range = AxisRange::new(axis2, lo, hi, grid.steps2.unwrap_or(11));
                if range.steps < 2 || lo >= hi {
                    return Err(MazerError::InvalidParams(
                        "second axis needs min2 < max2 and steps2 >= 2".into(),
                    ));
                }
                range
                    .values()
                    .into_iter()
                    .map(|v| Overrides::single(axis2, v))
                    .collect()
            }
            _ => {
                return Err(MazerError::InvalidParams(
                    "--axis2 needs either --values2 or both --min2 and --max2".into(),
                ))
            }
        };
    } else if grid.values2.is_some() || grid.min2.is_some() || grid.max2.is_some() {
        return Err(MazerError::InvalidParams("--values2/--min2/--max2 need --axis2".into()));
    }
    if let Some(m) = grid.at_peak {
        spec.peak_order = Some(m);
    }
    spec.profile = parse_profile(&grid.profile)?;
    spec.slices = grid.slices.or(spec.slices);
    spec.validate()?;
    Ok(spec)
}

fn open_output(path: &Option<PathBuf>) -> io::Result<Box<dyn Write>> {
    Ok(match path {
        Some(p) if p.as_os_str() != "-" => Box::new(BufWriter::new(File::create(p)?)),
        _ => Box::new(BufWriter::new(io::stdout().lock())),
    })
}

fn fail(err: impl std::fmt::Display, code: u8) -> ExitCode {
    eprintln!("mazer: {err}");
    ExitCode::from(code)
}

fn run(cli: Cli) -> ExitCode {
    match cli.command {
        Command::Sweep { grid, engine } => {
            let spec = match build_spec(&grid, engine) {
                Ok(s) => s,
                Err(e) => return fail(e, EXIT_INVALID),
            };
            let rows = match run_sweep(&spec) {
                Ok(r) => r,
                Err(e) => return fail(e, EXIT_INVALID),
            };
            let written = open_output(&grid.out).and_then(|mut w| {
                write_csv(&mut w, &spec, &rows)?;
                w.flush()
            });
            if let Err(e) = written {
                return fail(e, 1);
            }
            if exceeds_failure_budget(&rows) {
                let failed = mazer::sweep::numerical_failures(&rows);
                return fail(
                    format!("{failed} of {} points failed numerically", rows.len()),
                    EXIT_NUMERICAL,
                );
            }
            ExitCode::SUCCESS
        }
        Command::Compare { grid, engines } => {
            let spec = match build_spec(&grid, engines.first().copied().unwrap_or(Engine::ClosedForm)) {
                Ok(s) => s,
                Err(e) => return fail(e, EXIT_INVALID),
            };
            let report = match compare(&engines, &spec) {
                Ok(r) => r,
                Err(e) => return fail(e, EXIT_INVALID),
            };
            let written = open_output(&grid.out).and_then(|mut w| {
                write_compare(&mut w, &spec, &report)?;
                w.flush()
            });
            if let Err(e) = written {
                return fail(e, 1);
            }
            let total = report.points.len();
            if report
                .failures
                .iter()
                .any(|&f| f as f64 > mazer::sweep::FAILURE_FRACTION * total as f64)
            {
                return fail("numerical failures exceed the budget", EXIT_NUMERICAL);
            }
            ExitCode::SUCCESS
        }
        Command::Peaks {
            n,
            k_over_kappa,
            delta_over_g,
            m_max,
            out,
        } => {
            let table = match peaks(n, k_over_kappa, delta_over_g, m_max) {
                Ok(t) => t,
                Err(e) => return fail(e, EXIT_INVALID),
            };
            let written = open_output(&out).and_then(|mut w| {
                write_peaks(&mut w, n, k_over_kappa, delta_over_g, &table)?;
                w.flush()
            });
            match written {
                Ok(()) => ExitCode::SUCCESS,
                Err(e) => fail(e, 1),
            }
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_INVALID } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    run(cli)
}
