//! Minimal SVG line plots: first column on x, every other column as a polyline.

use std::fmt::Write as _;

use crate::error::Result;
use crate::experiments::output::ResultSet;

const WIDTH: f64 = 640.0;
const HEIGHT: f64 = 400.0;
const MARGIN: f64 = 50.0;
const COLORS: [&str; 6] = [
    "#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#17becf",
];

fn bounds<'a>(values: impl Iterator<Item = &'a f64>) -> Option<(f64, f64)> {
    let mut lo = f64::INFINITY;
    let mut hi = f64::NEG_INFINITY;
    for &v in values.filter(|v| v.is_finite()) {
        lo = lo.min(v);
        hi = hi.max(v);
    }
    if lo > hi {
        return None;
    }
    if hi - lo < 1e-300 {
        Some((lo - 0.5, hi + 0.5))
    } else {
        Some((lo, hi))
    }
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;")
        .replace('<', "&lt;")
        .replace('>', "&gt;")
}

pub fn line_plot(rs: &ResultSet) -> Result<String> {
    rs.validate()?;
    let x = &rs.columns[0];
    let (x0, x1) = bounds(x.values.iter()).unwrap_or((0.0, 1.0));
    let (y0, y1) =
        bounds(rs.columns[1..].iter().flat_map(|c| c.values.iter())).unwrap_or((0.0, 1.0));
    let px = |v: f64| MARGIN + (v - x0) / (x1 - x0) * (WIDTH - 2.0 * MARGIN);
    let py = |v: f64| HEIGHT - MARGIN - (v - y0) / (y1 - y0) * (HEIGHT - 2.0 * MARGIN);

    let mut out = String::new();
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}">"#
    );
    if let Some(title) = rs.metadata_value("scenario") {
        let _ = writeln!(out, r#"<title>{}</title>"#, escape(title));
    }
    let _ = writeln!(
        out,
        r#"<rect x="{MARGIN}" y="{MARGIN}" width="{}" height="{}" fill="none" stroke="black"/>"#,
        WIDTH - 2.0 * MARGIN,
        HEIGHT - 2.0 * MARGIN
    );
    let _ = writeln!(
        out,
        r#"<text x="{}" y="{}" text-anchor="middle" font-size="12">{}</text>"#,
        WIDTH / 2.0,
        HEIGHT - 15.0,
        escape(&x.name)
    );
    for (v, anchor, xpos) in [(x0, "start", MARGIN), (x1, "end", WIDTH - MARGIN)] {
        let _ = writeln!(
            out,
            r#"<text x="{xpos}" y="{}" text-anchor="{anchor}" font-size="10">{v:.4e}</text>"#,
            HEIGHT - MARGIN + 14.0
        );
    }
    for (v, ypos) in [(y0, HEIGHT - MARGIN), (y1, MARGIN)] {
        let _ = writeln!(
            out,
            r#"<text x="{}" y="{ypos}" text-anchor="end" font-size="10">{v:.3e}</text>"#,
            MARGIN - 4.0
        );
    }
    for (i, col) in rs.columns[1..].iter().enumerate() {
        let color = COLORS[i % COLORS.len()];
        // Non-finite samples split the curve.
        let mut segments: Vec<Vec<String>> = vec![Vec::new()];
        for (&xv, &yv) in x.values.iter().zip(&col.values) {
            if xv.is_finite() && yv.is_finite() {
                segments
                    .last_mut()
                    .expect("segment")
                    .push(format!("{:.2},{:.2}", px(xv), py(yv)));
            } else if !segments.last().expect("segment").is_empty() {
                segments.push(Vec::new());
            }
        }
        for seg in segments.iter().filter(|s| !s.is_empty()) {
            let _ = writeln!(
                out,
                r#"<polyline fill="none" stroke="{color}" stroke-width="1.5" points="{}"/>"#,
                seg.join(" ")
            );
        }
        let _ = writeln!(
            out,
            r#"<text x="{}" y="{}" font-size="11" fill="{color}">{}</text>"#,
            MARGIN + 8.0,
            MARGIN + 14.0 * (i as f64 + 1.0),
            escape(&col.name)
        );
    }
    out.push_str("</svg>\n");
    Ok(out)
}
