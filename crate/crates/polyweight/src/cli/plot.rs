//! Single-series SVG line plots with fixed layout, so equal input gives equal bytes.

use std::fmt::Write;

use super::table::format_float;

const WIDTH: f64 = 640.0;
const HEIGHT: f64 = 400.0;
const MARGIN: f64 = 60.0;

fn span(values: impl Iterator<Item = f64>) -> (f64, f64) {
    let (lo, hi) = values.fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), v| {
        (lo.min(v), hi.max(v))
    });
    if !lo.is_finite() {
        (0.0, 1.0)
    } else if hi - lo <= f64::EPSILON * lo.abs().max(1.0) {
        (lo - 0.5, hi + 0.5)
    } else {
        (lo, hi)
    }
}

/// Line plot of `points` with linear axes labelled `x_label` and `y_label`.
pub fn line_plot(points: &[(f64, f64)], x_label: &str, y_label: &str) -> String {
    let (x0, x1) = span(points.iter().map(|p| p.0));
    let (y0, y1) = span(points.iter().map(|p| p.1));
    let sx = |x: f64| MARGIN + (x - x0) / (x1 - x0) * (WIDTH - 2.0 * MARGIN);
    let sy = |y: f64| HEIGHT - MARGIN - (y - y0) / (y1 - y0) * (HEIGHT - 2.0 * MARGIN);
    let mut svg = String::new();
    let _ = writeln!(
        svg,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}">"#
    );
    let _ = writeln!(
        svg,
        r#"<rect width="{WIDTH}" height="{HEIGHT}" fill="white"/>"#
    );
    let (left, right, top, bottom) = (MARGIN, WIDTH - MARGIN, MARGIN, HEIGHT - MARGIN);
    let _ = writeln!(
        svg,
        r#"<path d="M{left} {top} L{left} {bottom} L{right} {bottom}" fill="none" stroke="black" stroke-width="1"/>"#
    );
    let label = |svg: &mut String, x: f64, y: f64, anchor: &str, text: &str| {
        let _ = writeln!(
            svg,
            r#"<text x="{x:.2}" y="{y:.2}" font-family="sans-serif" font-size="11" text-anchor="{anchor}">{text}</text>"#
        );
    };
    label(&mut svg, left, bottom + 16.0, "middle", &format_float(x0));
    label(&mut svg, right, bottom + 16.0, "middle", &format_float(x1));
    label(&mut svg, left - 6.0, bottom, "end", &format_float(y0));
    label(&mut svg, left - 6.0, top + 4.0, "end", &format_float(y1));
    label(
        &mut svg,
        0.5 * WIDTH,
        HEIGHT - 16.0,
        "middle",
        &escape(x_label),
    );
    label(&mut svg, 16.0, 0.5 * HEIGHT, "middle", &escape(y_label));
    if !points.is_empty() {
        let path: Vec<String> = points
            .iter()
            .map(|&(x, y)| format!("{:.2},{:.2}", sx(x), sy(y)))
            .collect();
        let _ = writeln!(
            svg,
            r#"<polyline points="{}" fill="none" stroke="steelblue" stroke-width="1.5"/>"#,
            path.join(" ")
        );
        for &(x, y) in points {
            let _ = writeln!(
                svg,
                r#"<circle cx="{:.2}" cy="{:.2}" r="2.5" fill="steelblue"/>"#,
                sx(x),
                sy(y)
            );
        }
    }
    svg.push_str("</svg>\n");
    svg
}

fn escape(text: &str) -> String {
    text.replace('&', "&amp;")
        .replace('<', "&lt;")
        .replace('>', "&gt;")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn deterministic_and_total() {
        let pts = [(1.0, 2.0), (2.0, 1.5), (4.0, -3.0)];
        let a = line_plot(&pts, "n", "constant/n");
        assert_eq!(a, line_plot(&pts, "n", "constant/n"));
        assert_eq!(a.matches("<circle").count(), 3);
        let empty = line_plot(&[], "n", "y");
        assert!(
            empty.starts_with("<svg") && empty.ends_with("</svg>\n") && !empty.contains("polyline")
        );
        assert!(line_plot(&[(1.0, 1.0)], "x", "y").contains("polyline"));
    }
}
