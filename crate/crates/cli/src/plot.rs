//! Static 800×600 SVG charts with a deterministic element order.

use std::fmt::Write;
use std::io;
use std::path::Path;

use crate::numfmt::fmt_num;

pub const WIDTH: f64 = 800.0;
pub const HEIGHT: f64 = 600.0;
const MARGIN: f64 = 70.0;
const COLORS: [&str; 4] = ["#1f77b4", "#d62728", "#2ca02c", "#9467bd"];

#[derive(Debug, Clone, PartialEq)]
pub enum Series {
    /// A polyline through `(x, y)` points.
    Line { label: String, points: Vec<(f64, f64)> },
    /// Vertical bars `(x, lo, hi)`; infinite ends are clipped to the axes.
    Bars { label: String, bars: Vec<(f64, f64, f64)> },
}

impl Series {
    fn label(&self) -> &str {
        match self {
            Series::Line { label, .. } | Series::Bars { label, .. } => label,
        }
    }

    fn xs(&self) -> Vec<f64> {
        match self {
            Series::Line { points, .. } => points.iter().map(|p| p.0).collect(),
            Series::Bars { bars, .. } => bars.iter().map(|b| b.0).collect(),
        }
    }

    fn ys(&self) -> Vec<f64> {
        match self {
            Series::Line { points, .. } => points.iter().map(|p| p.1).collect(),
            Series::Bars { bars, .. } => bars.iter().flat_map(|b| [b.1, b.2]).collect(),
        }
    }
}

fn range(vals: impl Iterator<Item = f64>) -> (f64, f64) {
    let (lo, hi) = vals.filter(|v| v.is_finite()).fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), v| (a.min(v), b.max(v)));
    if lo > hi {
        (0.0, 1.0)
    } else if lo == hi {
        (lo - 1.0, hi + 1.0)
    } else {
        let pad = 0.05 * (hi - lo);
        (lo - pad, hi + pad)
    }
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

pub struct Chart<'a> {
    pub title: &'a str,
    pub x_label: &'a str,
    pub y_label: &'a str,
    pub series: &'a [Series],
}

impl Chart<'_> {
    pub fn render(&self) -> String {
        let (x0, x1) = range(self.series.iter().flat_map(|s| s.xs()));
        let (y0, y1) = range(self.series.iter().flat_map(|s| s.ys()));
        let px = |x: f64| MARGIN + (x - x0) / (x1 - x0) * (WIDTH - 2.0 * MARGIN);
        let py = |y: f64| HEIGHT - MARGIN - (y.clamp(y0, y1) - y0) / (y1 - y0) * (HEIGHT - 2.0 * MARGIN);
        let mut s = String::new();
        let _ = writeln!(s, r#"<svg xmlns="http://www.w3.org/2000/svg" width="800" height="600" viewBox="0 0 800 600">"#);
        let _ = writeln!(s, r#"<rect x="0" y="0" width="800" height="600" fill="white"/>"#);
        let _ = writeln!(s, r#"<text x="400" y="30" text-anchor="middle" font-size="18">{}</text>"#, escape(self.title));
        let (left, right, top, bottom) = (MARGIN, WIDTH - MARGIN, MARGIN, HEIGHT - MARGIN);
        let _ = writeln!(s, r#"<line x1="{left}" y1="{bottom}" x2="{right}" y2="{bottom}" stroke="black"/>"#);
        let _ = writeln!(s, r#"<line x1="{left}" y1="{top}" x2="{left}" y2="{bottom}" stroke="black"/>"#);
        for i in 0..=4 {
            let t = i as f64 / 4.0;
            let (xv, yv) = (x0 + t * (x1 - x0), y0 + t * (y1 - y0));
            let _ = writeln!(s, r#"<text x="{:.2}" y="{:.2}" text-anchor="middle" font-size="12">{}</text>"#, px(xv), bottom + 20.0, fmt_num(round4(xv)));
            let _ = writeln!(s, r#"<text x="{:.2}" y="{:.2}" text-anchor="end" font-size="12">{}</text>"#, left - 8.0, py(yv) + 4.0, fmt_num(round4(yv)));
        }
        let _ = writeln!(s, r#"<text x="400" y="{}" text-anchor="middle" font-size="14">{}</text>"#, HEIGHT - 20.0, escape(self.x_label));
        let _ = writeln!(s, r#"<text x="20" y="300" text-anchor="middle" font-size="14" transform="rotate(-90 20 300)">{}</text>"#, escape(self.y_label));
        for (k, series) in self.series.iter().enumerate() {
            let color = COLORS[k % COLORS.len()];
            match series {
                Series::Line { points, .. } => {
                    let pts: Vec<String> = points.iter().filter(|p| p.0.is_finite() && p.1.is_finite()).map(|p| format!("{:.2},{:.2}", px(p.0), py(p.1))).collect();
                    let _ = writeln!(s, r#"<polyline fill="none" stroke="{color}" stroke-width="2" points="{}"/>"#, pts.join(" "));
                }
                Series::Bars { bars, .. } => {
                    for (x, lo, hi) in bars.iter().filter(|b| b.0.is_finite() && b.1 <= b.2) {
                        let _ = writeln!(s, r#"<line x1="{:.2}" y1="{:.2}" x2="{:.2}" y2="{:.2}" stroke="{color}" stroke-width="3"/>"#, px(*x), py(*lo), px(*x), py(*hi));
                    }
                }
            }
            let ly = MARGIN + 18.0 * k as f64;
            let _ = writeln!(s, r#"<text x="{}" y="{ly}" fill="{color}" font-size="12">{}</text>"#, right - 150.0, escape(series.label()));
        }
        s.push_str("</svg>\n");
        s
    }
}

fn round4(v: f64) -> f64 {
    (v * 1e4).round() / 1e4
}

pub fn emit_plot(path: &Path, chart: &Chart) -> io::Result<()> {
    std::fs::write(path, chart.render())
}
