use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Mutex;
use std::time::Duration;

use dspg_core::io::{load_instance, read_manifest, round_sig, RhoSpec, REPORT_DIGITS};
use dspg_core::metrics::{nnz, DEFAULT_THRESHOLD};
use dspg_core::solver::{solve, SolveStatus, SolverConfig};
use dspg_core::{ProblemInstance, SymMat};

use crate::{CmdResult, Failure, EXIT_NOT_CONVERGED, EXIT_OK};

pub const HEADER: &str = "rho,iters,primal_obj,dual_obj,gap,nnz,status";

#[derive(Debug, clap::Args)]
pub struct Args {
    /// Instance manifest; must use a uniform penalty.
    #[arg(long)]
    instance: PathBuf,
    /// Comma-separated penalty values, e.g. "0.1,0.05,0.01".
    #[arg(long)]
    rho_grid: String,
    /// Result CSV. Wall-clock times go to a sibling `<stem>.timing.csv`.
    #[arg(long)]
    out: PathBuf,
    /// Magnitude at which a solution entry counts as nonzero.
    #[arg(long, default_value_t = DEFAULT_THRESHOLD)]
    threshold: f64,
    /// Number of worker threads.
    #[arg(long, default_value_t = 1)]
    parallel: usize,
    #[arg(long, default_value_t = 1e-5)]
    eps: f64,
    #[arg(long)]
    max_iter: Option<usize>,
}

struct Row {
    rho: f64,
    outcome: Result<Solved, String>,
}

struct Solved {
    status: SolveStatus,
    iters: usize,
    primal: f64,
    dual: f64,
    gap: f64,
    nnz: usize,
    time: Duration,
}

pub fn parse_grid(text: &str) -> Result<Vec<f64>, String> {
    let grid: Vec<f64> = text
        .split(',')
        .map(|t| {
            let t = t.trim();
            match t.parse::<f64>() {
                Ok(v) if v.is_finite() && v >= 0.0 => Ok(v),
                _ => Err(format!("invalid penalty '{t}' in --rho-grid")),
            }
        })
        .collect::<Result<_, _>>()?;
    if grid.is_empty() {
        return Err("--rho-grid is empty".into());
    }
    Ok(grid)
}

pub fn run(args: Args) -> CmdResult {
    let grid = parse_grid(&args.rho_grid).map_err(Failure::bad_input)?;
    if args.parallel == 0 {
        return Err(Failure::bad_input("--parallel must be at least 1"));
    }
    if args.threshold.is_nan() || args.threshold < 0.0 {
        return Err(Failure::bad_input("--threshold must be nonnegative"));
    }
    let (manifest, base) = read_manifest(&args.instance)?;
    if let RhoSpec::Matrix(_) = manifest.rho {
        return Err(Failure::bad_input(
            "sweep overrides a uniform penalty; the manifest uses a penalty matrix",
        ));
    }
    let inst = load_instance(&manifest, &base)?;
    let mut cfg = SolverConfig {
        eps: args.eps,
        ..SolverConfig::default()
    };
    if let Some(k) = args.max_iter {
        cfg.max_outer = k;
    }
    cfg.validate()?;

    let rows = run_grid(&inst, &grid, &cfg, args.threshold, args.parallel);
    let all_converged = rows
        .iter()
        .all(|r| matches!(&r.outcome, Ok(s) if s.status == SolveStatus::Converged));
    write(&args.out, &results_csv(&rows))?;
    write(&timing_path(&args.out), &timing_csv(&rows))?;
    Ok(if all_converged { EXIT_OK } else { EXIT_NOT_CONVERGED })
}

/// Solves every grid point; the result order follows the grid whatever the
/// completion order of the workers.
fn run_grid(
    inst: &ProblemInstance,
    grid: &[f64],
    cfg: &SolverConfig,
    threshold: f64,
    workers: usize,
) -> Vec<Row> {
    let slots: Vec<Mutex<Option<Row>>> = grid.iter().map(|_| Mutex::new(None)).collect();
    let next = AtomicUsize::new(0);
    std::thread::scope(|scope| {
        for _ in 0..workers.min(grid.len()) {
            scope.spawn(|| loop {
                let k = next.fetch_add(1, Ordering::Relaxed);
                let Some(&rho) = grid.get(k) else { break };
                let row = Row {
                    rho,
                    outcome: solve_one(inst, rho, cfg, threshold),
                };
                *slots[k].lock().expect("row slot") = Some(row);
            });
        }
    });
    slots
        .into_iter()
        .map(|s| s.into_inner().expect("row slot").expect("every row is solved"))
        .collect()
}

fn solve_one(inst: &ProblemInstance, rho: f64, cfg: &SolverConfig, threshold: f64) -> Result<Solved, String> {
    let n = inst.dim();
    let inst = inst
        .with_rho(SymMat::filled(n, rho).map_err(|e| e.to_string())?)
        .map_err(|e| e.to_string())?;
    match solve(&inst, None, cfg) {
        Ok(r) => Ok(Solved {
            status: r.status,
            iters: r.iterations,
            primal: r.primal_obj,
            dual: r.dual_obj,
            gap: r.gap,
            nnz: nnz(&r.x, threshold),
            time: r.wall_time,
        }),
        Err(dspg_core::Error::Infeasible(_)) => Err("infeasible_start".into()),
        Err(e) => Err(format!("error: {e}").replace(',', ";")),
    }
}

fn results_csv(rows: &[Row]) -> String {
    let sig = |x: f64| round_sig(x, REPORT_DIGITS);
    let mut out = format!("{HEADER}\n");
    for r in rows {
        match &r.outcome {
            Ok(s) => writeln!(
                out,
                "{},{},{},{},{},{},{}",
                r.rho,
                s.iters,
                sig(s.primal),
                sig(s.dual),
                sig(s.gap),
                s.nnz,
                s.status.as_str()
            ),
            Err(status) => writeln!(out, "{},,,,,,{status}", r.rho),
        }
        .expect("writing to a String");
    }
    out
}

fn timing_csv(rows: &[Row]) -> String {
    let mut out = String::from("rho,time_s\n");
    for r in rows {
        let t = r.outcome.as_ref().map(|s| s.time.as_secs_f64()).unwrap_or(0.0);
        writeln!(out, "{},{t:.6}", r.rho).expect("writing to a String");
    }
    out
}

/// `results.csv` -> `results.timing.csv`.
pub fn timing_path(out: &Path) -> PathBuf {
    out.with_extension("timing.csv")
}

fn write(path: &Path, text: &str) -> Result<(), Failure> {
    std::fs::write(path, text).map_err(|e| Failure::bad_input(format!("{}: {e}", path.display())))
}
