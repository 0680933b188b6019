use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::time::Duration;

use clap::{Parser, Subcommand};

use crate::analysis::{sweep, SweepRow};
use crate::model::MicrogridCase;
use crate::planner::{plan, PlanError, PlanOptions};
use crate::solver::{BnbOptions, MilpStatus, SolverError};

use super::case_file::parse_case;
use super::report::write_report;
use super::results::{ensure_dir, fmt_value, write_atomic, write_results};

pub const EXIT_OK: i32 = 0;
pub const EXIT_NOT_SOLVED: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

#[derive(Debug, Parser)]
#[command(name = "mecgrid", about = "Day-ahead planner for hybrid AC/DC microgrids with a gas network")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, clap::Args)]
struct SolveArgs {
    /// PWL segments per cost/fuel curve (overrides the case).
    #[arg(long)]
    segments: Option<usize>,
    /// Relative optimality gap.
    #[arg(long, default_value_t = 1e-6)]
    gap: f64,
    /// Solver backend (default: $MECGRID_BACKEND, then `reference`).
    #[arg(long)]
    backend: Option<String>,
    /// Wall-clock limit per solve in seconds.
    #[arg(long)]
    time_limit: Option<f64>,
    #[arg(long)]
    node_limit: Option<usize>,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Solve a case and write schedule, flows, battery and metrics files.
    Plan {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        out: PathBuf,
        #[command(flatten)]
        solve: SolveArgs,
    },
    /// Solve a case once per parameter value.
    Sweep {
        #[arg(long)]
        input: PathBuf,
        /// Field to vary, e.g. `inverters[0].p_max` or `pipes[*].f_max`.
        #[arg(long)]
        param: String,
        #[arg(long, value_delimiter = ',', required = true, allow_negative_numbers = true)]
        values: Vec<f64>,
        #[arg(long)]
        out: PathBuf,
        #[command(flatten)]
        solve: SolveArgs,
    },
    /// Parse and validate a case file.
    Validate {
        #[arg(long)]
        input: PathBuf,
    },
    /// Build plot tables and a gnuplot script from a plan output directory.
    Report {
        #[arg(long)]
        out: PathBuf,
    },
}

impl SolveArgs {
    fn options(&self) -> Result<PlanOptions, String> {
        if !(self.gap >= 0.0 && self.gap.is_finite()) {
            return Err(format!("--gap must be a non-negative number, got {}", self.gap));
        }
        if self.segments == Some(0) {
            return Err("--segments must be at least 1".into());
        }
        let mut bnb = BnbOptions {
            gap_rel: self.gap,
            ..BnbOptions::default()
        };
        if let Some(s) = self.time_limit {
            if !(s > 0.0 && s.is_finite()) {
                return Err(format!("--time-limit must be positive, got {s}"));
            }
            bnb.time_limit = Some(Duration::from_secs_f64(s));
        }
        if let Some(n) = self.node_limit {
            bnb.node_limit = n;
        }
        Ok(PlanOptions {
            segments: self.segments,
            bnb,
            backend: self.backend.clone(),
        })
    }
}

fn load(path: &Path) -> Result<MicrogridCase, i32> {
    parse_case(path).map_err(|e| {
        eprintln!("error: {e}");
        EXIT_USAGE
    })
}

fn plan_error_code(e: &PlanError) -> i32 {
    match e {
        PlanError::Solver(SolverError::UnknownBackend(_)) | PlanError::Build(_) => EXIT_USAGE,
    }
}

fn run_plan(input: &Path, out: &Path, solve: &SolveArgs) -> Result<i32, i32> {
    let opts = solve.options().map_err(|m| {
        eprintln!("error: {m}");
        EXIT_USAGE
    })?;
    let case = load(input)?;
    let outcome = plan(&case, &opts).map_err(|e| {
        eprintln!("error: {e}");
        plan_error_code(&e)
    })?;
    let status = outcome.status();
    let (Some(schedule), Some(metrics)) = (&outcome.schedule, &outcome.metrics) else {
        eprintln!("no feasible schedule: status {}", status.as_str());
        return Ok(EXIT_NOT_SOLVED);
    };
    write_results(&case, &outcome.solution, schedule, metrics, out).map_err(|e| {
        eprintln!("error: {e}");
        EXIT_NOT_SOLVED
    })?;
    println!("status: {}", status.as_str());
    println!("objective: {}", fmt_value(schedule.objective));
    println!("lost_load_kwh: {}", fmt_value(metrics.lost_load_kwh));
    println!("heat_served_fraction: {}", fmt_value(metrics.heat_served_fraction));
    println!("fuel_cost: {}", fmt_value(metrics.fuel_cost));
    println!("degradation_cost: {}", fmt_value(metrics.degradation_cost));
    Ok(if status == MilpStatus::Optimal { EXIT_OK } else { EXIT_NOT_SOLVED })
}

/// CSV table of sweep results.
pub fn sweep_table(rows: &[SweepRow]) -> String {
    let mut out = String::from(
        "value,status,objective,lost_load_kwh,heat_served_fraction,fuel_cost,degradation_cost,total_generation_kwh\n",
    );
    for r in rows {
        let _ = write!(out, "{},{}", r.value, r.status.as_str());
        match (&r.objective, &r.metrics) {
            (Some(obj), Some(m)) => {
                for v in [
                    *obj,
                    m.lost_load_kwh,
                    m.heat_served_fraction,
                    m.fuel_cost,
                    m.degradation_cost,
                    m.total_generation_kwh,
                ] {
                    let _ = write!(out, ",{}", fmt_value(v));
                }
            }
            _ => out.push_str(",,,,,,"),
        }
        out.push('\n');
    }
    out
}

fn run_sweep(input: &Path, param: &str, values: &[f64], out: &Path, solve: &SolveArgs) -> Result<i32, i32> {
    let opts = solve.options().map_err(|m| {
        eprintln!("error: {m}");
        EXIT_USAGE
    })?;
    let case = load(input)?;
    let rows = sweep(&case, param, values, &opts).map_err(|e| {
        eprintln!("error: {e}");
        EXIT_USAGE
    })?;
    let table = sweep_table(&rows);
    let written = ensure_dir(out).and_then(|_| write_atomic(&out.join("sweep.csv"), table.as_bytes()));
    if let Err(e) = written {
        eprintln!("error: {e}");
        return Err(EXIT_NOT_SOLVED);
    }
    print!("{table}");
    for r in &rows {
        if let Some(e) = &r.error {
            eprintln!("value {}: {e}", r.value);
        }
    }
    Ok(if rows.iter().all(|r| r.status == MilpStatus::Optimal) {
        EXIT_OK
    } else {
        EXIT_NOT_SOLVED
    })
}

fn run_validate(input: &Path) -> Result<i32, i32> {
    let case = load(input)?;
    println!(
        "{}: valid ({} AC hubs, {} DC hubs, {} gas hubs, {} turbines, {} inverters, {} pipes, horizon {})",
        input.display(),
        case.ac_hubs.len(),
        case.dc_hubs.len(),
        case.gas_hubs.len(),
        case.turbines.len(),
        case.inverters.len(),
        case.pipes.len(),
        case.horizon
    );
    Ok(EXIT_OK)
}

fn run_report(out: &Path) -> Result<i32, i32> {
    let files = write_report(out).map_err(|e| {
        eprintln!("error: {e}");
        EXIT_USAGE
    })?;
    for f in files {
        println!("{}", f.display());
    }
    Ok(EXIT_OK)
}

/// Run one command; `argv[0]` is the program name.
pub fn cli_main<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
        }
    };
    let result = match &cli.command {
        Command::Plan { input, out, solve } => run_plan(input, out, solve),
        Command::Sweep {
            input,
            param,
            values,
            out,
            solve,
        } => run_sweep(input, param, values, out, solve),
        Command::Validate { input } => run_validate(input),
        Command::Report { out } => run_report(out),
    };
    result.unwrap_or_else(|code| code)
}
