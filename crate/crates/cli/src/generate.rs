use std::path::PathBuf;

use dspg_core::generators::{
    bandwidth, build_zero_constraints, gen_precision, sample_covariance, zero_positions, Family,
    GenSpec,
};
use dspg_core::io::{write_manifest, write_matrix, ConstraintSpec, InstanceManifest, RhoSpec, SCHEMA_VERSION};
use serde_json::{json, Map};

use crate::{CmdResult, Failure, EXIT_OK};

pub const MANIFEST_FILE: &str = "instance.json";
pub const COVARIANCE_FILE: &str = "c.sym";
pub const TRUTH_FILE: &str = "truth.sym";

#[derive(Debug, clap::Args)]
pub struct Args {
    /// random, ar1 .. arK, decay, star, circle or full.
    #[arg(long, value_parser = parse_family)]
    family: Family,
    #[arg(long)]
    n: usize,
    /// Fraction of nonzero off-diagonal pairs (random family).
    #[arg(long, default_value_t = 0.1)]
    density: f64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Number of Gaussian samples [default: 2n].
    #[arg(long)]
    samples: Option<usize>,
    /// Constrain this fraction of the true zeros to stay zero.
    #[arg(long)]
    constraint_fraction: Option<f64>,
    /// Uniform penalty written into the manifest.
    #[arg(long, default_value_t = 0.1)]
    rho: f64,
    #[arg(long)]
    out_dir: PathBuf,
}

fn parse_family(s: &str) -> Result<Family, String> {
    s.parse().map_err(|e: dspg_core::Error| e.to_string())
}

pub fn run(args: Args) -> CmdResult {
    let spec = GenSpec {
        n: args.n,
        density: args.density,
        seed: args.seed,
        family: args.family,
        samples: args.samples,
    };
    spec.validate()?;
    if !(args.rho.is_finite() && args.rho >= 0.0) {
        return Err(Failure::bad_input(format!("--rho must be nonnegative, got {}", args.rho)));
    }

    let truth = gen_precision(&spec)?;
    let c = sample_covariance(&truth, spec.samples(), spec.seed)?;
    let constraints = match args.constraint_fraction {
        Some(fraction) => {
            let (_, pattern) = build_zero_constraints(&truth, fraction, spec.seed)?;
            Some(ConstraintSpec::ZeroPattern(
                pattern.iter().map(|&(i, j)| [i + 1, j + 1]).collect(),
            ))
        }
        None => None,
    };

    let mut metadata = Map::new();
    metadata.insert(
        "generator".into(),
        json!({
            "family": spec.family.to_string(),
            "n": spec.n,
            "density": spec.density,
            "seed": spec.seed,
            "samples": spec.samples(),
            "constraint_fraction": args.constraint_fraction,
        }),
    );
    metadata.insert("structure".into(), json!(spec.family.structure()));
    metadata.insert("bandwidth".into(), json!(bandwidth(&truth)));
    let off = spec.n * (spec.n - 1) / 2 - zero_positions(&truth).len();
    metadata.insert("truth_offdiag_nonzeros".into(), json!(off));
    if spec.family.is_repo_variant() {
        metadata.insert("variant".into(), json!("repo-defined variant"));
    }
    metadata.insert("truth_path".into(), json!(TRUTH_FILE));
    metadata.insert("version".into(), json!(env!("CARGO_PKG_VERSION")));

    let manifest = InstanceManifest {
        schema_version: SCHEMA_VERSION,
        n: spec.n,
        mu: 1.0,
        rho: RhoSpec::Uniform(args.rho),
        c_path: COVARIANCE_FILE.into(),
        constraints,
        metadata,
    };

    std::fs::create_dir_all(&args.out_dir)
        .map_err(|e| Failure::bad_input(format!("{}: {e}", args.out_dir.display())))?;
    write_matrix(&args.out_dir.join(COVARIANCE_FILE), &c)?;
    write_matrix(&args.out_dir.join(TRUTH_FILE), &truth)?;
    write_manifest(&args.out_dir.join(MANIFEST_FILE), &manifest)?;
    println!("wrote {}", args.out_dir.join(MANIFEST_FILE).display());
    Ok(EXIT_OK)
}
