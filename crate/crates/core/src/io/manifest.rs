//! JSON instance manifests.
//!
//! ```json
//! {
//!   "schema_version": 1,
//!   "n": 2,
//!   "mu": 1.0,
//!   "rho": { "uniform": 0.5 },
//!   "c_path": "c.sym",
//!   "constraints": { "zero_pattern": [[1, 2]] },
//!   "metadata": {}
//! }
//! ```
//!
//! `rho` may instead be `{ "matrix": "rho.sym" }`; `constraints` may be
//! `{ "general": [{ "matrix": "a1.sym", "b": 0.0 }, ...] }` or absent.
//! Relative paths resolve against the manifest's directory. Indices are
//! 1-based.

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use serde_json::{Map, Value};

use super::{read_matrix, read_text, write_text};
use crate::error::{Error, Result};
use crate::linalg::SymMat;
use crate::model::{ConstraintMap, ProblemInstance, SparseSym};

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InstanceManifest {
    pub schema_version: u32,
    pub n: usize,
    pub mu: f64,
    pub rho: RhoSpec,
    pub c_path: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub constraints: Option<ConstraintSpec>,
    #[serde(default)]
    pub metadata: Map<String, Value>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", deny_unknown_fields)]
pub enum RhoSpec {
    Uniform(f64),
    Matrix(String),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", deny_unknown_fields)]
pub enum ConstraintSpec {
    /// Pairs `[i, j]`, 1-based with `i < j`, constrained to `X_ij = 0`.
    ZeroPattern(Vec<[usize; 2]>),
    General(Vec<GeneralConstraint>),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GeneralConstraint {
    pub matrix: String,
    pub b: f64,
}

/// Parses a manifest and returns it with the directory its relative paths
/// refer to.
pub fn read_manifest(path: &Path) -> Result<(InstanceManifest, PathBuf)> {
    let text = read_text(path)?;
    let manifest: InstanceManifest = serde_json::from_str(&text).map_err(|e| Error::Parse {
        path: path.to_path_buf(),
        line: e.line(),
        message: e.to_string(),
    })?;
    if manifest.schema_version != SCHEMA_VERSION {
        return Err(Error::Validation(format!(
            "{}: unsupported schema_version {} (expected {SCHEMA_VERSION})",
            path.display(),
            manifest.schema_version
        )));
    }
    let base = path.parent().map(Path::to_path_buf).unwrap_or_default();
    Ok((manifest, base))
}

pub fn write_manifest(path: &Path, manifest: &InstanceManifest) -> Result<()> {
    let mut text = serde_json::to_string_pretty(manifest).expect("manifest serializes");
    text.push('\n');
    write_text(path, &text)
}

/// Reads and validates the instance a manifest describes, including the
/// Gram surjectivity check on its constraints.
pub fn read_instance(path: &Path) -> Result<ProblemInstance> {
    let (manifest, base) = read_manifest(path)?;
    load_instance(&manifest, &base)
}

pub fn load_instance(manifest: &InstanceManifest, base: &Path) -> Result<ProblemInstance> {
    let n = manifest.n;
    let matrix = |rel: &str| -> Result<SymMat> {
        let m = read_matrix(&base.join(rel))?;
        if m.dim() != n {
            return Err(Error::Validation(format!(
                "{rel}: matrix dimension {} does not match n = {n}",
                m.dim()
            )));
        }
        Ok(m)
    };
    let mut builder = ProblemInstance::builder(matrix(&manifest.c_path)?).mu(manifest.mu);
    builder = match &manifest.rho {
        RhoSpec::Uniform(r) => {
            if !(r.is_finite() && *r >= 0.0) {
                return Err(Error::Validation(format!(
                    "uniform rho must be a finite nonnegative number, got {r}"
                )));
            }
            builder.uniform_rho(*r)?
        }
        RhoSpec::Matrix(rel) => builder.rho(matrix(rel)?),
    };
    builder = match &manifest.constraints {
        None => builder,
        Some(ConstraintSpec::ZeroPattern(pairs)) => {
            let mut zero = Vec::with_capacity(pairs.len());
            for &[i, j] in pairs {
                if !(1 <= i && i < j && j <= n) {
                    return Err(Error::Validation(format!(
                        "zero_pattern entry [{i}, {j}] must satisfy 1 <= i < j <= {n}"
                    )));
                }
                zero.push((i - 1, j - 1));
            }
            builder.zero_pattern(zero)?
        }
        Some(ConstraintSpec::General(list)) => {
            let mut coeffs = Vec::with_capacity(list.len());
            let mut b = Vec::with_capacity(list.len());
            for c in list {
                let a = matrix(&c.matrix)?;
                let entries = a.upper_entries().filter(|e| e.2 != 0.0).collect();
                coeffs.push(SparseSym::new(n, entries)?);
                b.push(c.b);
            }
            builder.constraints(ConstraintMap::new(n, coeffs, b)?)
        }
    };
    builder.build()
}
