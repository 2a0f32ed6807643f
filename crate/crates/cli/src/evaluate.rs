use std::path::PathBuf;

use dspg_core::io::read_matrix;
use dspg_core::metrics::{evaluate, DEFAULT_THRESHOLD};

use crate::{CmdResult, EXIT_OK};

#[derive(Debug, clap::Args)]
pub struct Args {
    /// Estimated precision matrix file.
    #[arg(long)]
    solution: PathBuf,
    /// True precision matrix file.
    #[arg(long)]
    truth: PathBuf,
    /// Magnitude at which an estimated entry counts as nonzero.
    #[arg(long, default_value_t = DEFAULT_THRESHOLD)]
    threshold: f64,
}

pub fn run(args: Args) -> CmdResult {
    let x = read_matrix(&args.solution)?;
    let truth = read_matrix(&args.truth)?;
    print!("{}", report_csv(&truth, &x, args.threshold)?);
    Ok(EXIT_OK)
}

pub fn report_csv(
    truth: &dspg_core::SymMat,
    x: &dspg_core::SymMat,
    threshold: f64,
) -> Result<String, dspg_core::Error> {
    let r = evaluate(truth, x, threshold)?;
    let s = r.scores;
    Ok(format!(
        "key,value\nloss_e,{}\nloss_q,{}\nsensitivity,{}\nspecificity,{}\ntp,{}\ntn,{}\nfp,{}\nfn,{}\nnnz,{}\nthreshold,{}\n",
        r.loss_e, r.loss_q, s.sensitivity, s.specificity, s.tp, s.tn, s.fp, s.fn_, s.nnz, s.threshold
    ))
}
