//! CSV serialization of trajectories and convergence studies.
//!
//! Numbers are written with 17 significant digits (`{:.16e}`), which
//! round-trips every `f64`. Output depends only on the data, so equal inputs
//! give byte-identical files.

use std::fmt::Write as _;
use std::path::Path;

use crate::error::{Error, Result};
use crate::experiments::ConvergenceStudy;
use crate::schemes::Trajectory;

pub const ERRORS_HEADER: &str = "scheme,tau,norm,error";

pub(crate) fn write_file(path: &Path, contents: &str) -> Result<()> {
    std::fs::write(path, contents).map_err(|source| Error::Io {
        path: path.to_path_buf(),
        source,
    })
}

fn num(x: f64) -> String {
    format!("{x:.16e}")
}

/// Header `# t, x_0, ..., x_{K-1}` followed by one row per snapshot: the time,
/// then the real-space samples at the grid points.
///
/// Samples are the real parts of the inverse transform; fields evolved with
/// the literal Nyquist symbols carry an imaginary Nyquist component that is
/// dropped here.
pub fn format_trajectory_csv(traj: &Trajectory) -> String {
    let mut out = String::new();
    let k = traj.snapshots.first().map_or(0, |s| s.field.grid().num_modes());
    out.push_str("# t");
    for a in 0..k {
        let _ = write!(out, ", x_{a}");
    }
    out.push('\n');
    for snap in &traj.snapshots {
        out.push_str(&num(snap.t));
        for s in snap.field.real_part_samples() {
            out.push(',');
            out.push_str(&num(s));
        }
        out.push('\n');
    }
    out
}

pub fn write_trajectory_csv(traj: &Trajectory, path: &Path) -> Result<()> {
    write_file(path, &format_trajectory_csv(traj))
}

/// Columns `scheme,tau,norm,error`, one row per record and norm, followed by
/// comment rows `# slope,<scheme>,<norm>,<slope>` and, for divergent runs,
/// `# diverged,<scheme>,<tau>`.
pub fn format_errors_csv(study: &ConvergenceStudy) -> String {
    let mut out = String::new();
    out.push_str(ERRORS_HEADER);
    out.push('\n');
    for r in &study.records {
        for &(norm, err) in &r.errors {
            let _ = writeln!(out, "{},{},{},{}", r.scheme, num(r.tau), norm, num(err));
        }
    }
    for s in &study.slopes {
        let _ = writeln!(out, "# slope,{},{},{}", s.scheme, s.norm, num(s.slope));
    }
    for r in study.records.iter().filter(|r| r.diverged) {
        let _ = writeln!(out, "# diverged,{},{}", r.scheme, num(r.tau));
    }
    let _ = writeln!(out, "# reference,{}", study.reference_kind);
    out
}

pub fn write_errors_csv(study: &ConvergenceStudy, path: &Path) -> Result<()> {
    write_file(path, &format_errors_csv(study))
}

/// Rows of an errors CSV as `(scheme, tau, norm, error)`, comments skipped.
pub fn read_errors_csv(text: &str) -> Result<Vec<(String, f64, String, f64)>> {
    let mut rows = Vec::new();
    for (i, line) in text.lines().enumerate() {
        if i == 0 || line.starts_with('#') || line.trim().is_empty() {
            continue;
        }
        let bad = || Error::Config {
            line: i + 1,
            message: format!("malformed error row '{line}'"),
        };
        let cols: Vec<&str> = line.split(',').collect();
        let [scheme, tau, norm, err] = cols[..] else {
            return Err(bad());
        };
        rows.push((
            scheme.to_string(),
            tau.parse().map_err(|_| bad())?,
            norm.to_string(),
            err.parse().map_err(|_| bad())?,
        ));
    }
    Ok(rows)
}
