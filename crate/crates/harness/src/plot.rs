//! Deterministic SVG line charts: one series per sequence, with a shaded
//! confidence band and error bars.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use crate::trend::Point;
use crate::RunError;

const WIDTH: f64 = 640.0;
const HEIGHT: f64 = 400.0;
const LEFT: f64 = 64.0;
const RIGHT: f64 = 170.0;
const TOP: f64 = 40.0;
const BOTTOM: f64 = 48.0;
const PALETTE: &[&str] = &["#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b", "#17becf"];

#[derive(Debug, Clone, PartialEq)]
pub struct Series {
    pub label: String,
    pub points: Vec<Point>,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct Chart {
    pub title: String,
    pub series: Vec<Series>,
    /// Dashed horizontal line.
    pub target: Option<f64>,
    /// Shaded horizontal band `(value, half_width)`, e.g. a reference estimate.
    pub reference: Option<(f64, f64)>,
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;").replace('"', "&quot;")
}

struct Frame {
    x0: f64,
    x1: f64,
    y0: f64,
    y1: f64,
}

impl Frame {
    fn fit(chart: &Chart) -> Frame {
        let pts = chart.series.iter().flat_map(|s| &s.points);
        let (mut x0, mut x1) = (f64::INFINITY, f64::NEG_INFINITY);
        let (mut y0, mut y1) = (0.0f64, 1.0f64);
        for p in pts {
            x0 = x0.min(p.n as f64);
            x1 = x1.max(p.n as f64);
            y0 = y0.min(p.value - p.ci);
            y1 = y1.max(p.value + p.ci);
        }
        for v in chart.target.into_iter().chain(chart.reference.map(|(v, _)| v)) {
            y0 = y0.min(v);
            y1 = y1.max(v);
        }
        if !x0.is_finite() {
            (x0, x1) = (0.0, 1.0);
        } else if x0 == x1 {
            (x0, x1) = (x0 - 1.0, x1 + 1.0);
        }
        Frame { x0, x1, y0, y1 }
    }

    fn x(&self, v: f64) -> f64 {
        LEFT + (v - self.x0) / (self.x1 - self.x0) * (WIDTH - LEFT - RIGHT)
    }

    fn y(&self, v: f64) -> f64 {
        HEIGHT - BOTTOM - (v - self.y0) / (self.y1 - self.y0) * (HEIGHT - TOP - BOTTOM)
    }
}

pub fn render_svg(chart: &Chart) -> String {
    let f = Frame::fit(chart);
    let mut s = String::new();
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}" font-family="sans-serif" font-size="12">"#
    );
    let _ = writeln!(s, r#"<rect width="{WIDTH}" height="{HEIGHT}" fill="white"/>"#);
    let _ = writeln!(s, r#"<text x="{:.2}" y="24" font-size="15">{}</text>"#, LEFT, escape(&chart.title));

    let (left, right, top, bottom) = (LEFT, WIDTH - RIGHT, TOP, HEIGHT - BOTTOM);
    for i in 0..=4 {
        let v = f.y0 + (f.y1 - f.y0) * i as f64 / 4.0 + 0.0;
        let v = if v.abs() < 1e-9 { 0.0 } else { v };
        let y = f.y(v);
        let _ = writeln!(s, r##"<line x1="{left:.2}" y1="{y:.2}" x2="{right:.2}" y2="{y:.2}" stroke="#e0e0e0"/>"##);
        let _ = writeln!(s, r#"<text x="{:.2}" y="{:.2}" text-anchor="end">{v:.2}</text>"#, left - 6.0, y + 4.0);
    }
    let xs = x_ticks(&f, chart);
    for v in xs {
        let x = f.x(v);
        let _ = writeln!(s, r##"<line x1="{x:.2}" y1="{bottom:.2}" x2="{x:.2}" y2="{:.2}" stroke="#333"/>"##, bottom + 4.0);
        let _ = writeln!(s, r#"<text x="{x:.2}" y="{:.2}" text-anchor="middle">{v}</text>"#, bottom + 18.0);
    }
    let _ = writeln!(
        s,
        r##"<polyline points="{left:.2},{top:.2} {left:.2},{bottom:.2} {right:.2},{bottom:.2}" fill="none" stroke="#333"/>"##
    );
    let _ = writeln!(s, r#"<text x="{:.2}" y="{:.2}" text-anchor="middle">n</text>"#, (left + right) / 2.0, HEIGHT - 10.0);

    if let Some((v, h)) = chart.reference {
        let (ya, yb) = (f.y(v + h), f.y(v - h));
        let _ = writeln!(
            s,
            r##"<rect x="{left:.2}" y="{ya:.2}" width="{:.2}" height="{:.2}" fill="#999" fill-opacity="0.2"/>"##,
            right - left,
            yb - ya
        );
        let _ = writeln!(s, r##"<line x1="{left:.2}" y1="{:.2}" x2="{right:.2}" y2="{:.2}" stroke="#666"/>"##, f.y(v), f.y(v));
    }
    if let Some(t) = chart.target {
        let y = f.y(t);
        let _ = writeln!(
            s,
            r##"<line x1="{left:.2}" y1="{y:.2}" x2="{right:.2}" y2="{y:.2}" stroke="#000" stroke-dasharray="6 4"/>"##
        );
    }

    for (i, series) in chart.series.iter().enumerate() {
        let color = PALETTE[i % PALETTE.len()];
        let pts = &series.points;
        if pts.len() > 1 {
            let upper = pts.iter().map(|p| format!("{:.2},{:.2}", f.x(p.n as f64), f.y(p.value + p.ci)));
            let lower = pts.iter().rev().map(|p| format!("{:.2},{:.2}", f.x(p.n as f64), f.y(p.value - p.ci)));
            let band: Vec<String> = upper.chain(lower).collect();
            let _ = writeln!(s, r#"<polygon points="{}" fill="{color}" fill-opacity="0.15"/>"#, band.join(" "));
            let line: Vec<String> = pts.iter().map(|p| format!("{:.2},{:.2}", f.x(p.n as f64), f.y(p.value))).collect();
            let _ = writeln!(s, r#"<polyline points="{}" fill="none" stroke="{color}" stroke-width="2"/>"#, line.join(" "));
        }
        for p in pts {
            let x = f.x(p.n as f64);
            let _ = writeln!(
                s,
                r#"<line x1="{x:.2}" y1="{:.2}" x2="{x:.2}" y2="{:.2}" stroke="{color}"/>"#,
                f.y(p.value + p.ci),
                f.y(p.value - p.ci)
            );
            let _ = writeln!(s, r#"<circle cx="{x:.2}" cy="{:.2}" r="3" fill="{color}"/>"#, f.y(p.value));
        }
        let ly = TOP + 16.0 * i as f64;
        let _ = writeln!(s, r#"<rect x="{:.2}" y="{:.2}" width="12" height="12" fill="{color}"/>"#, right + 12.0, ly);
        let _ = writeln!(s, r#"<text x="{:.2}" y="{:.2}">{}</text>"#, right + 30.0, ly + 10.0, escape(&series.label));
    }
    s.push_str("</svg>\n");
    s
}

fn x_ticks(f: &Frame, chart: &Chart) -> Vec<f64> {
    let mut ns: Vec<u64> = chart.series.iter().flat_map(|s| s.points.iter().map(|p| p.n)).collect();
    ns.sort_unstable();
    ns.dedup();
    if !ns.is_empty() && ns.len() <= 12 {
        return ns.into_iter().map(|n| n as f64).collect();
    }
    let (lo, hi) = (f.x0.ceil() as i64, f.x1.floor() as i64);
    let step = ((hi - lo) / 6).max(1);
    (lo..=hi).step_by(step as usize).map(|v| v as f64).collect()
}

/// Lowercase file stem made of letters, digits, `-` and `_`.
pub fn file_stem(name: &str) -> String {
    name.chars().map(|c| if c.is_ascii_alphanumeric() || c == '-' { c.to_ascii_lowercase() } else { '_' }).collect()
}

/// Writes `<dir>/<stem>.svg` for each `(stem, chart)`.
pub fn emit_plots(dir: &Path, charts: &[(String, Chart)]) -> Result<Vec<PathBuf>, RunError> {
    std::fs::create_dir_all(dir)?;
    let mut out = Vec::new();
    for (stem, chart) in charts {
        let path = dir.join(format!("{}.svg", file_stem(stem)));
        std::fs::write(&path, render_svg(chart))?;
        out.push(path);
    }
    Ok(out)
}
