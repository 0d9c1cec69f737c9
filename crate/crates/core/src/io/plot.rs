//! Self-contained gnuplot scripts for the CSV outputs.

use std::fmt::Write as _;
use std::path::{Component, Path, PathBuf};

use super::csv::write_file;
use crate::error::{Error, Result};
use crate::experiments::ConvergenceStudy;
use crate::schemes::{Trajectory, Variant};

pub enum PlotSource<'a> {
    Study(&'a ConvergenceStudy),
    Trajectory(&'a Trajectory),
}

/// `target` relative to `base_dir`, using `..` where needed.
fn relative_path(target: &Path, base_dir: &Path) -> Result<PathBuf> {
    let abs = |p: &Path| {
        std::path::absolute(p).map_err(|source| Error::Io {
            path: p.to_path_buf(),
            source,
        })
    };
    let target = abs(target)?;
    let base = abs(base_dir)?;
    let t: Vec<Component> = target.components().collect();
    let b: Vec<Component> = base.components().collect();
    let common = t.iter().zip(&b).take_while(|(x, y)| x == y).count();
    let mut out = PathBuf::new();
    for _ in common..b.len() {
        out.push("..");
    }
    for c in &t[common..] {
        out.push(c);
    }
    Ok(out)
}

fn quoted(p: &Path) -> String {
    format!("'{}'", p.to_string_lossy().replace('\'', "''"))
}

fn image_name(script: &Path, suffix: &str) -> String {
    let stem = script.file_stem().map_or("plot".into(), |s| s.to_string_lossy().into_owned());
    format!("{stem}{suffix}.png")
}

/// Write a gnuplot script next to `script` that plots the CSV at `csv`
/// (referenced by its path relative to the script's directory) and renders
/// PNG files beside it. Studies get log-log axes with slope-1 (dashed) and
/// slope-2 (dash-dotted) guide lines, one image per norm; trajectories get
/// linear axes with one curve `u(x)` per snapshot.
pub fn emit_plot_script(src: PlotSource<'_>, csv: &Path, script: &Path) -> Result<()> {
    if !csv.exists() {
        return Err(Error::Io {
            path: csv.to_path_buf(),
            source: std::io::Error::new(std::io::ErrorKind::NotFound, "CSV must be written before its plot script"),
        });
    }
    let dir = script.parent().filter(|p| !p.as_os_str().is_empty()).unwrap_or(Path::new("."));
    let data = quoted(&relative_path(csv, dir)?);
    let text = match src {
        PlotSource::Study(s) => study_script(s, &data, script),
        PlotSource::Trajectory(t) => trajectory_script(t, &data, script),
    };
    write_file(script, &text)
}

fn study_script(study: &ConvergenceStudy, data: &str, script: &Path) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "# convergence plot; run with: gnuplot {}", script.file_name().unwrap_or_default().to_string_lossy());
    out.push_str("set datafile separator ','\n");
    out.push_str("set terminal pngcairo size 800,600\n");
    out.push_str("set logscale xy\n");
    out.push_str("set format x '10^{%L}'\nset format y '10^{%L}'\n");
    out.push_str("set xlabel 'tau'\nset key left top\nset grid\n");
    for &norm in &study.norms {
        let series: Vec<(Variant, Vec<(f64, f64)>)> = [Variant::ExpInt1, Variant::ExpInt2]
            .into_iter()
            .map(|v| (v, study.series(v, norm)))
            .filter(|(_, s)| !s.is_empty())
            .collect();
        let _ = writeln!(out, "\nset output '{}'", image_name(script, &format!("_{norm}")));
        let _ = writeln!(out, "set ylabel 'error ({norm})'");
        // guides pass through the first point of the first-order series, or
        // of whatever is plotted
        let anchor = |v: Variant| {
            series
                .iter()
                .find(|(s, _)| *s == v)
                .or(series.first())
                .and_then(|(_, pts)| pts.first().copied())
        };
        let mut terms = Vec::new();
        for (v, _) in &series {
            let pt = if *v == Variant::ExpInt1 { 6 } else { 3 };
            terms.push(format!(
                "{data} skip 1 using 2:((strcol(1) eq '{v}' && strcol(3) eq '{norm}') ? $4 : 1/0) with linespoints pt {pt} title '{v}'"
            ));
        }
        if let Some((tau, err)) = anchor(Variant::ExpInt1) {
            terms.push(format!("{:.16e} * x with lines dt 2 lc 'black' title 'slope 1'", 0.5 * err / tau));
        }
        if let Some((tau, err)) = anchor(Variant::ExpInt2) {
            terms.push(format!("{:.16e} * x**2 with lines dt 4 lc 'black' title 'slope 2'", 0.5 * err / (tau * tau)));
        }
        if terms.is_empty() {
            out.push_str("# no data for this norm\n");
            continue;
        }
        let _ = writeln!(out, "plot {}", terms.join(", \\\n     "));
    }
    out
}

fn trajectory_script(traj: &Trajectory, data: &str, script: &Path) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "# solution snapshots; run with: gnuplot {}", script.file_name().unwrap_or_default().to_string_lossy());
    out.push_str("set datafile separator ','\n");
    out.push_str("set terminal pngcairo size 900,600\n");
    let _ = writeln!(out, "set output '{}'", image_name(script, ""));
    out.push_str("set xlabel 'x'\nset ylabel 'u(t,x)'\nset key outside right\nset grid\n");
    let Some(first) = traj.snapshots.first() else {
        out.push_str("# empty trajectory\n");
        return out;
    };
    let g = first.field.grid();
    // column 0 of the matrix is the time; sample a sits in column a + 1
    let _ = writeln!(out, "x0 = {:.16e}", g.point(g.min_mode()));
    let _ = writeln!(out, "dx = {:.16e}", g.length() / g.num_modes() as f64);
    let times: Vec<String> = traj.snapshots.iter().map(|s| format!("{}", s.t)).collect();
    let _ = writeln!(out, "times = \"{}\"", times.join(" "));
    let _ = writeln!(
        out,
        "plot for [i=0:{}] {data} matrix every ::1:i::i using (x0 + ($1 - 1) * dx):3 with lines title sprintf('t = %s', word(times, i + 1))",
        traj.snapshots.len() - 1
    );
    out
}
