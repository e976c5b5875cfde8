//! Static SVG trajectory plot: one polyline per state component, with
//! circles on the initial history and the terminal state.

use std::fmt::Write;

use delayctl_core::{Scalar, Trajectory};

const WIDTH: f64 = 640.0;
const HEIGHT: f64 = 400.0;
const MARGIN: f64 = 40.0;
const COLORS: [&str; 6] = ["#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#17becf"];

pub fn render<T: Scalar>(traj: &Trajectory<T>) -> String {
    let p = traj.delay() as i64;
    let r1 = traj.horizon() as i64;
    let d = traj.terminal().len();
    let points: Vec<(i64, Vec<f64>)> = traj.iter().map(|(r, y)| (r, y.iter().map(Scalar::to_f64).collect())).collect();

    let (mut lo, mut hi) = points
        .iter()
        .flat_map(|(_, y)| y.iter().copied())
        .filter(|v| v.is_finite())
        .fold((0.0f64, 0.0f64), |(lo, hi), v| (lo.min(v), hi.max(v)));
    if hi - lo < 1e-12 {
        lo -= 1.0;
        hi += 1.0;
    }
    let span_r = (r1 + p).max(1) as f64;
    let x = |r: i64| MARGIN + (r + p) as f64 / span_r * (WIDTH - 2.0 * MARGIN);
    let y = |v: f64| HEIGHT - MARGIN - (v - lo) / (hi - lo) * (HEIGHT - 2.0 * MARGIN);

    let mut svg = String::new();
    let _ = writeln!(
        svg,
        r#"<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{WIDTH}" height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}">"#
    );
    let _ = writeln!(svg, r#"<rect width="{WIDTH}" height="{HEIGHT}" fill="white"/>"#);
    // axes: r = 0 and y = 0
    let _ = writeln!(
        svg,
        r##"<line x1="{:.2}" y1="{MARGIN}" x2="{:.2}" y2="{:.2}" stroke="#999" stroke-dasharray="4 3"/>"##,
        x(0),
        x(0),
        HEIGHT - MARGIN
    );
    let _ = writeln!(
        svg,
        r##"<line x1="{MARGIN}" y1="{:.2}" x2="{:.2}" y2="{:.2}" stroke="#999"/>"##,
        y(0.0),
        WIDTH - MARGIN,
        y(0.0)
    );
    for (label, r) in [(-p, -p), (0, 0), (r1, r1)] {
        let _ = writeln!(
            svg,
            r#"<text x="{:.2}" y="{:.2}" font-size="11" text-anchor="middle">{label}</text>"#,
            x(r),
            HEIGHT - MARGIN + 16.0
        );
    }
    for i in 0..d {
        let color = COLORS[i % COLORS.len()];
        let coords: Vec<String> = points.iter().map(|(r, v)| format!("{:.2},{:.2}", x(*r), y(v[i]))).collect();
        let _ = writeln!(
            svg,
            r#"<polyline fill="none" stroke="{color}" stroke-width="1.5" points="{}"><title>y_{}</title></polyline>"#,
            coords.join(" "),
            i + 1
        );
        for (r, v) in points.iter().filter(|(r, _)| *r <= 0 || *r == r1) {
            let _ = writeln!(svg, r#"<circle cx="{:.2}" cy="{:.2}" r="3.5" fill="{color}"/>"#, x(*r), y(v[i]));
        }
    }
    svg.push_str("</svg>\n");
    svg
}
