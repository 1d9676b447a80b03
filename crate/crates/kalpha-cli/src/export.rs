//! Deterministic writers: CSV curves, SVG polylines, OBJ meshes and JSON
//! residual reports. All float formatting is fixed-width scientific with 17
//! significant digits (lossless double round-trip), LF line endings.

use std::fs;
use std::io;
use std::path::Path;

use serde::Serialize;

use kalpha::Vec3;

pub fn fmt_float(x: f64) -> String {
    format!("{:.16e}", x)
}

/// `r,f,fprime,fsecond` rows.
pub fn write_profile_csv(path: &Path, rows: &[(f64, f64, f64, f64)]) -> io::Result<()> {
    let mut out = String::from("r,f,fprime,fsecond\n");
    for &(r, f, df, d2f) in rows {
        out.push_str(&fmt_float(r));
        out.push(',');
        out.push_str(&fmt_float(f));
        out.push(',');
        out.push_str(&fmt_float(df));
        out.push(',');
        out.push_str(&fmt_float(d2f));
        out.push('\n');
    }
    fs::write(path, out)
}

const SVG_PALETTE: [&str; 6] = ["#1f6feb", "#d1242f", "#1a7f37", "#9a6700", "#8250df", "#57606a"];

/// One SVG with a polyline per curve, auto-fitted viewBox, y axis upward.
pub fn write_svg(path: &Path, curves: &[Vec<(f64, f64)>]) -> io::Result<()> {
    let mut min_x = f64::INFINITY;
    let mut max_x = f64::NEG_INFINITY;
    let mut min_y = f64::INFINITY;
    let mut max_y = f64::NEG_INFINITY;
    for curve in curves {
        for &(x, y) in curve {
            if x.is_finite() && y.is_finite() {
                min_x = min_x.min(x);
                max_x = max_x.max(x);
                min_y = min_y.min(y);
                max_y = max_y.max(y);
            }
        }
    }
    if !min_x.is_finite() {
        (min_x, max_x, min_y, max_y) = (0.0, 1.0, 0.0, 1.0);
    }
    let pad_x = 0.05 * (max_x - min_x).max(1e-9);
    let pad_y = 0.05 * (max_y - min_y).max(1e-9);
    let x0 = min_x - pad_x;
    let (w, h) = (max_x - min_x + 2.0 * pad_x, max_y - min_y + 2.0 * pad_y);
    let stroke = 0.008 * w.max(h);
    // SVG y grows downward; mirror inside the box.
    let flip = move |y: f64| (max_y + min_y) - y;

    let mut out = String::new();
    out.push_str(&format!(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"{:.6} {:.6} {:.6} {:.6}\">\n",
        x0,
        flip(max_y) - pad_y,
        w,
        h
    ));
    for (k, curve) in curves.iter().enumerate() {
        out.push_str(&format!(
            "  <polyline fill=\"none\" stroke=\"{}\" stroke-width=\"{:.6}\" points=\"",
            SVG_PALETTE[k % SVG_PALETTE.len()],
            stroke
        ));
        for (i, &(x, y)) in curve.iter().enumerate() {
            if !(x.is_finite() && y.is_finite()) {
                continue;
            }
            if i > 0 {
                out.push(' ');
            }
            out.push_str(&format!("{:.6},{:.6}", x, flip(y)));
        }
        out.push_str("\"/>\n");
    }
    out.push_str("</svg>\n");
    fs::write(path, out)
}

/// Rectangular-grid OBJ: vertices are raw chart evaluations, each cell split
/// along one diagonal. `nu`/`nv` count cells, so there are (nu+1)(nv+1)
/// vertices.
pub fn write_obj(path: &Path, vertices: &[Vec3], nu: usize, nv: usize) -> io::Result<()> {
    assert_eq!(vertices.len(), (nu + 1) * (nv + 1));
    let mut out = String::new();
    for v in vertices {
        out.push_str("v ");
        out.push_str(&fmt_float(v.x));
        out.push(' ');
        out.push_str(&fmt_float(v.y));
        out.push(' ');
        out.push_str(&fmt_float(v.z));
        out.push('\n');
    }
    let id = |i: usize, j: usize| i * (nv + 1) + j + 1;
    for i in 0..nu {
        for j in 0..nv {
            out.push_str(&format!("f {} {} {}\n", id(i, j), id(i + 1, j), id(i + 1, j + 1)));
            out.push_str(&format!("f {} {} {}\n", id(i, j), id(i + 1, j + 1), id(i, j + 1)));
        }
    }
    fs::write(path, out)
}

/// Machine-checkable verification record.
#[derive(Debug, Serialize)]
pub struct VerifyReport {
    pub family: String,
    pub alpha: f64,
    pub speed: [f64; 3],
    pub grid: [usize; 2],
    pub max_abs: f64,
    pub mean_abs: f64,
    pub skipped: usize,
    pub tolerance: f64,
    pub pass: bool,
}

pub fn write_json(path: &Path, report: &VerifyReport) -> io::Result<()> {
    let mut body = serde_json::to_string_pretty(report).expect("report serializes");
    body.push('\n');
    fs::write(path, body)
}
