//! Symmetric coordinate files.
//!
//! ```text
//! %%SymCoord n nnz
//! i j v            (nnz lines, 1 <= i <= j <= n, unique)
//! ```
//!
//! Unlisted entries are zero. Blank lines and lines starting with `%` after
//! the header are ignored. Values are written with 17 significant digits, so
//! a write/read cycle reproduces every entry exactly.

use std::collections::HashSet;
use std::fmt::Write as _;
use std::path::Path;

use super::{read_text, write_text};
use crate::error::{Error, Result};
use crate::linalg::SymMat;

pub const HEADER: &str = "%%SymCoord";

pub fn format_matrix(m: &SymMat) -> String {
    let entries: Vec<_> = m.upper_entries().filter(|e| e.2 != 0.0).collect();
    let mut out = format!("{HEADER} {} {}\n", m.dim(), entries.len());
    for (i, j, v) in entries {
        writeln!(out, "{} {} {:.16e}", i + 1, j + 1, v).expect("writing to a String");
    }
    out
}

pub fn write_matrix(path: &Path, m: &SymMat) -> Result<()> {
    write_text(path, &format_matrix(m))
}

pub fn read_matrix(path: &Path) -> Result<SymMat> {
    parse_matrix(&read_text(path)?, path)
}

/// Parses file contents; `path` is only used in error messages.
pub fn parse_matrix(text: &str, path: &Path) -> Result<SymMat> {
    let err = |line: usize, message: String| Error::Parse {
        path: path.to_path_buf(),
        line,
        message,
    };
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(k, l)| (k + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty());

    let (hline, header) = lines.next().ok_or_else(|| err(1, "empty file".into()))?;
    let fields: Vec<&str> = header.split_whitespace().collect();
    let (n, nnz) = match fields.as_slice() {
        [tag, n, nnz] if *tag == HEADER => match (n.parse::<usize>(), nnz.parse::<usize>()) {
            (Ok(n), Ok(nnz)) => (n, nnz),
            _ => return Err(err(hline, format!("bad size fields in header '{header}'"))),
        },
        _ => {
            return Err(err(
                hline,
                format!("expected header '{HEADER} n nnz', found '{header}'"),
            ))
        }
    };
    if nnz > n * (n + 1) / 2 {
        return Err(err(hline, format!("nnz = {nnz} exceeds the upper triangle of n = {n}")));
    }

    let mut m = SymMat::zeros(n);
    let mut seen = HashSet::with_capacity(nnz);
    let mut last = hline;
    for (lineno, line) in lines.filter(|(_, l)| !l.starts_with('%')) {
        last = lineno;
        if seen.len() == nnz {
            return Err(err(lineno, format!("more than the {nnz} entries declared in the header")));
        }
        let fields: Vec<&str> = line.split_whitespace().collect();
        let [i, j, v] = fields.as_slice() else {
            return Err(err(lineno, format!("expected 'i j v', found '{line}'")));
        };
        let i: usize = i.parse().map_err(|_| err(lineno, format!("bad row index '{i}'")))?;
        let j: usize = j.parse().map_err(|_| err(lineno, format!("bad column index '{j}'")))?;
        let v: f64 = v.parse().map_err(|_| err(lineno, format!("bad value '{v}'")))?;
        if !(1 <= i && i <= j && j <= n) {
            return Err(err(lineno, format!("index ({i}, {j}) outside 1 <= i <= j <= {n}")));
        }
        if !v.is_finite() {
            return Err(err(lineno, format!("non-finite value at ({i}, {j})")));
        }
        if !seen.insert((i, j)) {
            return Err(err(lineno, format!("duplicate entry ({i}, {j})")));
        }
        m.set(i - 1, j - 1, v);
    }
    if seen.len() != nnz {
        return Err(err(
            last,
            format!("header declares {nnz} entries but {} were found", seen.len()),
        ));
    }
    Ok(m)
}
