//! Deterministic CSV/JSON artifact writers. Every CSV starts with comment
//! lines naming the tool version, the subcommand and the full flag set.

use crate::chart::Chart;
use crate::error::{CoreError, Result};
use crate::field::MatrixField;
use crate::fiducial::FiducialProfile;
use crate::grid::{MapGrid, TargetTag};
use std::fmt::Write as _;
use std::path::Path;

pub const TOOL_VERSION: &str = env!("CARGO_PKG_VERSION");

pub fn csv_header(subcommand: &str, flags: &str) -> String {
    format!("# hitchinlab {TOOL_VERSION}\n# subcommand: {subcommand}\n# flags: {flags}\n")
}

fn write_file(path: &Path, contents: &str) -> Result<()> {
    std::fs::write(path, contents)
        .map_err(|e| CoreError::BadDomain(format!("cannot write {}: {e}", path.display())))
}

/// Matrix-field grid export, row-major with y outer:
/// x,y,re00,im00,re01,im01,re10,im10,re11,im11.
pub fn write_matrix_field_csv(
    path: &Path,
    field: &MatrixField,
    chart: &Chart,
    subcommand: &str,
    flags: &str,
) -> Result<()> {
    let mut s = csv_header(subcommand, flags);
    s.push_str("x,y,re00,im00,re01,im01,re10,im10,re11,im11\n");
    for (_, _, x, y) in chart.nodes() {
        let m = field.eval(x, y);
        let _ = write!(s, "{x},{y}");
        for r in 0..2 {
            for c in 0..2 {
                let _ = write!(s, ",{},{}", m.m[r][c].re, m.m[r][c].im);
            }
        }
        s.push('\n');
    }
    write_file(path, &s)
}

/// Map-grid export: x,y,c0,c1,c2,c3[,c4]; the JSON sidecar (same path with
/// .json appended) records the target tag and diagnostics.
pub fn write_map_grid_csv(
    path: &Path,
    grid: &MapGrid,
    sidecar: &serde_json::Value,
    subcommand: &str,
    flags: &str,
) -> Result<()> {
    let mut s = csv_header(subcommand, flags);
    let dim = grid.tag.dim();
    s.push_str("x,y,c0,c1,c2,c3");
    if dim == 5 {
        s.push_str(",c4");
    }
    s.push('\n');
    for (i, j, x, y) in grid.chart.nodes() {
        let v = grid.value(i, j);
        let _ = write!(s, "{x},{y}");
        for c in v.iter().take(dim) {
            let _ = write!(s, ",{c}");
        }
        s.push('\n');
    }
    write_file(path, &s)?;
    let side_path = path.with_extension("json");
    write_file(&side_path, &serde_json::to_string_pretty(sidecar).unwrap())
}

/// Reads a map grid written by `write_map_grid_csv` (target tag from the
/// sidecar).
pub fn read_map_grid_csv(path: &Path) -> Result<MapGrid> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CoreError::BadDomain(format!("cannot read {}: {e}", path.display())))?;
    let side_path = path.with_extension("json");
    let side_text = std::fs::read_to_string(&side_path).map_err(|e| {
        CoreError::BadDomain(format!("cannot read sidecar {}: {e}", side_path.display()))
    })?;
    let sidecar: serde_json::Value = serde_json::from_str(&side_text)
        .map_err(|e| CoreError::BadDomain(format!("bad sidecar: {e}")))?;
    let tag: TargetTag = serde_json::from_value(
        sidecar
            .get("target")
            .cloned()
            .ok_or_else(|| CoreError::BadDomain("sidecar lacks 'target'".into()))?,
    )
    .map_err(|e| CoreError::BadDomain(format!("bad target tag: {e}")))?;
    let mut xs: Vec<f64> = Vec::new();
    let mut ys: Vec<f64> = Vec::new();
    let mut rows: Vec<[f64; 5]> = Vec::new();
    for line in text.lines() {
        if line.starts_with('#') || line.starts_with('x') || line.trim().is_empty() {
            continue;
        }
        let vals: Vec<f64> = line
            .split(',')
            .map(|v| v.trim().parse::<f64>())
            .collect::<std::result::Result<_, _>>()
            .map_err(|e| CoreError::BadDomain(format!("bad CSV row '{line}': {e}")))?;
        if vals.len() < 2 + tag.dim() {
            return Err(CoreError::BadDomain(format!("short CSV row '{line}'")));
        }
        if !xs.contains(&vals[0]) {
            xs.push(vals[0]);
        }
        if !ys.contains(&vals[1]) {
            ys.push(vals[1]);
        }
        let mut r = [0.0; 5];
        for (k, v) in vals[2..2 + tag.dim()].iter().enumerate() {
            r[k] = *v;
        }
        rows.push(r);
    }
    let (nx, ny) = (xs.len(), ys.len());
    if nx * ny != rows.len() || nx < 2 || ny < 2 {
        return Err(CoreError::BadDomain("CSV grid is not rectangular".into()));
    }
    let period = sidecar.get("period").and_then(|v| v.as_f64());
    let chart = Chart::new(
        (xs[0], xs[nx - 1]),
        (ys[0], ys[ny - 1] + if period.is_some() { ys[1] - ys[0] } else { 0.0 }),
        period,
        false,
        nx,
        ny,
    )?;
    Ok(MapGrid { chart, tag, data: rows })
}

/// Fiducial profile export: r,ell,dell_dr,F_t.
pub fn write_profile_csv(
    path: &Path,
    profile: &FiducialProfile,
    subcommand: &str,
    flags: &str,
) -> Result<()> {
    let mut s = csv_header(subcommand, flags);
    s.push_str("r,ell,dell_dr,F_t\n");
    for (r, ell, dell, ft) in profile.rows() {
        let _ = writeln!(s, "{r},{ell},{dell},{ft}");
    }
    write_file(path, &s)
}

/// Gluing error sweep export: t,region,sup_err,weighted_sup_err.
pub fn write_error_sweep_csv(
    path: &Path,
    rows: &[(f64, String, f64, f64)],
    subcommand: &str,
    flags: &str,
) -> Result<()> {
    let mut s = csv_header(subcommand, flags);
    s.push_str("t,region,sup_err,weighted_sup_err\n");
    for (t, region, sup, wsup) in rows {
        let _ = writeln!(s, "{t},{region},{sup},{wsup}");
    }
    write_file(path, &s)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model;

    #[test]
    fn map_grid_roundtrip() {
        let dir = std::env::temp_dir().join("hitchinlab_csv_test");
        std::fs::create_dir_all(&dir).unwrap();
        let chart = Chart::new((0.5, 1.0), (0.0, 0.4), None, false, 6, 5).unwrap();
        let g = MapGrid::from_fn4(chart, TargetTag::DS3, |x, y| {
            model::model_map_gauss(1.0, x, y)
        });
        let path = dir.join("grid.csv");
        let sidecar = serde_json::json!({"target": g.tag});
        write_map_grid_csv(&path, &g, &sidecar, "test", "--none").unwrap();
        let back = read_map_grid_csv(&path).unwrap();
        assert_eq!(back.tag, TargetTag::DS3);
        assert_eq!(back.data.len(), g.data.len());
        for (a, b) in back.data.iter().zip(&g.data) {
            for k in 0..4 {
                assert!((a[k] - b[k]).abs() < 1e-12);
            }
        }
        let text = std::fs::read_to_string(&path).unwrap();
        assert!(text.starts_with("# hitchinlab"));
    }
}
