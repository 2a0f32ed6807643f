//! On-disk formats: coordinate matrix files, JSON instance manifests, solve
//! reports, warm-start files and iteration traces.

mod manifest;
mod matrix_file;
mod report;

use std::path::Path;

pub use manifest::{
    load_instance, read_instance, read_manifest, write_manifest, ConstraintSpec,
    GeneralConstraint, InstanceManifest, RhoSpec, SCHEMA_VERSION,
};
pub use matrix_file::{format_matrix, parse_matrix, read_matrix, write_matrix, HEADER};
pub use report::{
    read_iterate, round_sig, trace_csv, write_iterate, write_report, write_trace, IterateFile,
    KktSummary, ReportFile, REPORT_DIGITS,
};

use crate::error::{Error, Result};

pub(crate) fn read_text(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).map_err(|source| Error::Io {
        path: path.to_path_buf(),
        source,
    })
}

pub(crate) fn write_text(path: &Path, text: &str) -> Result<()> {
    std::fs::write(path, text).map_err(|source| Error::Io {
        path: path.to_path_buf(),
        source,
    })
}
