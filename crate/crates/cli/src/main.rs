//! Command-line front end: loads a field document and runs the pipeline
//! stage the subcommand names, emitting a machine-readable report.
//!
//! Exit codes: 0 success, 2 classification rejection or an order the
//! document cannot certify, 3 period constants of a non-center, 64 usage,
//! 66 unreadable or malformed input, 1 anything else.

mod report;

use clap::error::ErrorKind;
use clap::{Parser, Subcommand, ValueEnum};
use filperiod::field::{classify, load_field, PiecewiseField};
use filperiod::half_return::center_check;
use filperiod::oracle::{convergence_report, default_grid, numeric_period, SimulationConfig};
use filperiod::period::{corollary_values, period_constants};
use std::path::PathBuf;

#[derive(Parser)]
#[command(
    name = "filperiod",
    version,
    about = "Tangential centers of planar two-zone fields: classification, half-return maps, exact period constants, and numeric cross-checks"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Classify the tangency pair of a field document
    Classify(Args),
    /// Compute both half-return maps and compare them
    Halfreturn(Args),
    /// Exact period constants with the closed-form cross-check
    Period(Args),
    /// Measure closed orbits numerically over the grid
    Simulate(Args),
    /// Fit the residual order of the measured period against the series
    Compare(Args),
}

#[derive(clap::Args)]
struct Args {
    /// Field document (JSON)
    #[arg(long)]
    input: PathBuf,

    /// Truncation order for series outputs
    #[arg(long, default_value_t = 8)]
    order: usize,

    /// Grid spec a:b:n, n log-spaced abscissas from a to b
    #[arg(long)]
    grid: Option<String>,

    /// Step tolerance; the event tolerance is a tenth of it
    #[arg(long, default_value_t = 1e-12)]
    tol: f64,

    /// Write the report here instead of stdout
    #[arg(long)]
    out: Option<PathBuf>,

    /// Report format; csv is available for simulate and compare
    #[arg(long, value_enum, default_value_t = Format::Json)]
    format: Format,
}

#[derive(Clone, Copy, PartialEq, ValueEnum)]
enum Format {
    Json,
    Csv,
}

struct Failure {
    code: i32,
    message: String,
}

impl Failure {
    fn usage(message: impl Into<String>) -> Self {
        Failure {
            code: 64,
            message: message.into(),
        }
    }
}

impl From<filperiod::Error> for Failure {
    fn from(err: filperiod::Error) -> Self {
        use filperiod::Error::*;
        let code = match &err {
            NotTangential { .. } | VisibleContact { .. } | NoFirstReturn => 2,
            InsufficientOrder { .. } | DepthTooLarge { .. } => 2,
            NotACenter { .. } => 3,
            Document(_) => 66,
            BadConfig(_) => 64,
            _ => 1,
        };
        Failure {
            code,
            message: err.to_string(),
        }
    }
}

fn main() {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(err) => {
            let code = match err.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 64,
            };
            let _ = err.print();
            std::process::exit(code);
        }
    };
    if let Err(failure) = run(&cli) {
        eprintln!("error: {}", failure.message);
        std::process::exit(failure.code);
    }
}

fn run(cli: &Cli) -> Result<(), Failure> {
    let (args, tabular) = match &cli.command {
        Command::Classify(a) | Command::Halfreturn(a) | Command::Period(a) => (a, false),
        Command::Simulate(a) | Command::Compare(a) => (a, true),
    };
    if args.format == Format::Csv && !tabular {
        return Err(Failure::usage(
            "csv output is only available for simulate and compare",
        ));
    }
    let field = load(&args.input)?;
    let rendered = match &cli.command {
        Command::Classify(_) => {
            let class = classify(&field)?;
            report::to_json(&report::ClassifyReport::new(field.order(), &class))
        }
        Command::Halfreturn(_) => {
            let center = center_check(&field, args.order)?;
            report::to_json(&report::HalfReturnReport::new(&center))
        }
        Command::Period(_) => {
            let data = period_constants(&field, args.order)?;
            let corollary = corollary_values(&field)?;
            report::to_json(&report::PeriodReport::new(&data, &corollary))
        }
        Command::Simulate(_) => {
            let cfg = simulation_config(args)?;
            let mut measurements = Vec::with_capacity(cfg.x_grid.len());
            for &x0 in &cfg.x_grid {
                measurements.push(numeric_period(&field, x0, &cfg)?);
            }
            match args.format {
                Format::Json => report::to_json(&report::SimulateReport::new(&measurements)),
                Format::Csv => report::simulate_csv(&measurements),
            }
        }
        Command::Compare(_) => {
            let cfg = simulation_config(args)?;
            let table = convergence_report(&field, args.order, &cfg)?;
            match args.format {
                Format::Json => report::to_json(&report::CompareReport::new(args.order, &table)),
                Format::Csv => report::compare_csv(&table),
            }
        }
    };
    emit(args, &rendered)
}

fn load(path: &PathBuf) -> Result<PiecewiseField, Failure> {
    let text = std::fs::read_to_string(path).map_err(|err| Failure {
        code: 66,
        message: format!("cannot read {}: {err}", path.display()),
    })?;
    Ok(load_field(&text)?)
}

fn simulation_config(args: &Args) -> Result<SimulationConfig, Failure> {
    let x_grid = match &args.grid {
        None => default_grid(),
        Some(spec) => parse_grid(spec)?,
    };
    if args.tol.is_nan() || args.tol <= 0.0 {
        return Err(Failure::usage(format!(
            "--tol must be positive, got {}",
            args.tol
        )));
    }
    let cfg = SimulationConfig {
        abs_tol: args.tol,
        rel_tol: args.tol,
        event_tol: args.tol / 10.0,
        x_grid,
        ..SimulationConfig::default()
    };
    cfg.validate()?;
    Ok(cfg)
}

fn parse_grid(spec: &str) -> Result<Vec<f64>, Failure> {
    let bad = || {
        Failure::usage(format!(
            "--grid expects a:b:n with 0 < a <= b, got {spec:?}"
        ))
    };
    let parts: Vec<&str> = spec.split(':').collect();
    if parts.len() != 3 {
        return Err(bad());
    }
    let a: f64 = parts[0].parse().map_err(|_| bad())?;
    let b: f64 = parts[1].parse().map_err(|_| bad())?;
    let n: usize = parts[2].parse().map_err(|_| bad())?;
    if !(a > 0.0 && b >= a) || n == 0 {
        return Err(bad());
    }
    if n == 1 {
        return Ok(vec![a]);
    }
    let ratio = b / a;
    Ok((0..n)
        .map(|j| a * ratio.powf(j as f64 / (n - 1) as f64))
        .collect())
}

fn emit(args: &Args, rendered: &str) -> Result<(), Failure> {
    match &args.out {
        None => {
            print!("{rendered}");
            Ok(())
        }
        Some(path) => std::fs::write(path, rendered).map_err(|err| Failure {
            code: 1,
            message: format!("cannot write {}: {err}", path.display()),
        }),
    }
}
