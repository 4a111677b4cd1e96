//! Minimal SVG line plots.

use std::fmt::Write as _;

const WIDTH: f64 = 800.0;
const HEIGHT: f64 = 450.0;
const MARGIN: f64 = 40.0;

pub struct Series<'a> {
    pub label: &'a str,
    pub color: &'a str,
    pub ys: &'a [f64],
}

/// Renders every series against the shared `xs` with a common y-range.
pub fn line_plot(xs: &[f64], series: &[Series<'_>]) -> String {
    let (x0, x1) = bounds(xs.iter().copied());
    let (mut y0, mut y1) = bounds(series.iter().flat_map(|s| s.ys.iter().copied()));
    y0 = y0.min(0.0);
    if y1 <= y0 {
        y1 = y0 + 1.0;
    }
    let px = |x: f64| MARGIN + (x - x0) / (x1 - x0).max(f64::MIN_POSITIVE) * (WIDTH - 2.0 * MARGIN);
    let py = |y: f64| HEIGHT - MARGIN - (y - y0) / (y1 - y0) * (HEIGHT - 2.0 * MARGIN);

    let mut out = String::new();
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}">"#
    );
    let _ = writeln!(out, r#"<rect width="100%" height="100%" fill="white"/>"#);
    let _ = writeln!(
        out,
        r#"<line x1="{:.2}" y1="{:.2}" x2="{:.2}" y2="{:.2}" stroke="black"/>"#,
        px(x0),
        py(0.0),
        px(x1),
        py(0.0)
    );
    if x0 <= 0.0 && 0.0 <= x1 {
        let _ = writeln!(
            out,
            r#"<line x1="{:.2}" y1="{:.2}" x2="{:.2}" y2="{:.2}" stroke="black"/>"#,
            px(0.0),
            py(y0),
            px(0.0),
            py(y1)
        );
    }
    for (i, s) in series.iter().enumerate() {
        let mut points = String::new();
        for (x, y) in xs.iter().zip(s.ys) {
            let _ = write!(points, "{:.2},{:.2} ", px(*x), py(*y));
        }
        let _ = writeln!(
            out,
            r#"<polyline fill="none" stroke="{}" stroke-width="1.5" points="{}"/>"#,
            s.color,
            points.trim_end()
        );
        let _ = writeln!(
            out,
            r#"<text x="{:.0}" y="{:.0}" fill="{}" font-family="sans-serif" font-size="14">{}</text>"#,
            WIDTH - 2.0 * MARGIN - 60.0,
            MARGIN + 18.0 * i as f64,
            s.color,
            s.label
        );
    }
    let _ = writeln!(
        out,
        r#"<text x="{MARGIN}" y="{:.0}" font-family="sans-serif" font-size="12">x from {x0} to {x1}, y from {y0:.3} to {y1:.3}</text>"#,
        HEIGHT - 10.0
    );
    out.push_str("</svg>\n");
    out
}

fn bounds(values: impl Iterator<Item = f64>) -> (f64, f64) {
    values.filter(|v| v.is_finite()).fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), v| (lo.min(v), hi.max(v)))
}
