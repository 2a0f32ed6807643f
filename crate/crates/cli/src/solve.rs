use std::path::PathBuf;

use dspg_core::io::{read_instance, read_iterate, write_matrix, write_report, write_trace};
use dspg_core::solver::{solve, SolveStatus, SolverConfig};

use crate::{CmdResult, EXIT_NOT_CONVERGED, EXIT_OK};

#[derive(Debug, clap::Args)]
pub struct Args {
    /// Instance manifest (JSON).
    #[arg(long)]
    instance: PathBuf,
    /// Solve report (JSON).
    #[arg(long)]
    out: PathBuf,
    /// Stopping tolerance on the unit-step direction.
    #[arg(long, default_value_t = 1e-5)]
    eps: f64,
    /// Maximum number of outer iterations.
    #[arg(long)]
    max_iter: Option<usize>,
    /// Keep the raw primal matrix instead of zeroing the constrained entries.
    #[arg(long)]
    no_cleanup: bool,
    /// Starting dual point, in the report's `final_iterate` format.
    #[arg(long)]
    init: Option<PathBuf>,
    /// Per-iteration CSV trace.
    #[arg(long)]
    trace: Option<PathBuf>,
    /// Primal solution matrix file [default: the report path with extension `X.sym`].
    #[arg(long)]
    solution: Option<PathBuf>,
}

pub fn run(args: Args) -> CmdResult {
    let inst = read_instance(&args.instance)?;
    let mut cfg = SolverConfig {
        eps: args.eps,
        cleanup: !args.no_cleanup,
        ..SolverConfig::default()
    };
    if let Some(k) = args.max_iter {
        cfg.max_outer = k;
    }
    cfg.validate()?;
    let init = match &args.init {
        Some(path) => Some(read_iterate(path)?.into_point(inst.dim(), inst.map().len())?),
        None => None,
    };

    let report = solve(&inst, init, &cfg)?;
    write_report(&args.out, &report)?;
    let solution = args
        .solution
        .clone()
        .unwrap_or_else(|| args.out.with_extension("X.sym"));
    write_matrix(&solution, &report.x)?;
    if let Some(path) = &args.trace {
        write_trace(path, &report.trace)?;
    }

    println!(
        "{} after {} iterations: primal {:.12e}  dual {:.12e}  gap {:.3e}",
        report.status.as_str(),
        report.iterations,
        report.primal_obj,
        report.dual_obj,
        report.gap
    );
    if !report.cleanup_preserved_pd {
        eprintln!("warning: zeroing the constrained entries broke positive definiteness; the raw primal matrix was kept");
    }
    Ok(match report.status {
        SolveStatus::Converged => EXIT_OK,
        SolveStatus::MaxOuterReached | SolveStatus::LineSearchStalled => EXIT_NOT_CONVERGED,
    })
}
