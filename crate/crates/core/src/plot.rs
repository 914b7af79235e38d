//! Static SVG scatter plots of 2-D runs.
//!
//! Everything inside the plot group is drawn in data coordinates: the group
//! transform maps the data box onto the canvas with equal scales on both
//! axes. Points are small squares; each representative is one `<circle>`
//! of radius `sqrt(gamma_j)`, so the circle count equals the cluster count.

use std::fmt::Write;

use ndarray::Array2;

use crate::error::{Error, Result};
use crate::types::DataSet;

const CANVAS: f64 = 640.0;
const MARGIN: f64 = 20.0;

const PALETTE: [&str; 8] = [
    "#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b", "#e377c2", "#17becf",
];

fn color(label: usize) -> &'static str {
    if label == 0 {
        "#888888"
    } else {
        PALETTE[(label - 1) % PALETTE.len()]
    }
}

/// Renders points colored by `labels` (0 drawn grey) and one circle per
/// row of `theta`.
pub fn render_svg(data: &DataSet, theta: &Array2<f64>, gamma: &[f64], labels: &[usize]) -> Result<String> {
    if data.dim() != 2 || theta.ncols() != 2 {
        return Err(Error::DimensionMismatch("plots need 2-D data".into()));
    }
    if gamma.len() != theta.nrows() || labels.len() != data.len() {
        return Err(Error::DimensionMismatch(format!(
            "{} representatives, {} scales, {} labels for {} points",
            theta.nrows(),
            gamma.len(),
            labels.len(),
            data.len()
        )));
    }

    // the view covers the points and every circle
    let (lo, hi) = data.bounding_box();
    let (mut x0, mut y0, mut x1, mut y1) = (lo[0], lo[1], hi[0], hi[1]);
    for (row, g) in theta.rows().into_iter().zip(gamma) {
        let r = g.max(0.0).sqrt();
        x0 = x0.min(row[0] - r);
        x1 = x1.max(row[0] + r);
        y0 = y0.min(row[1] - r);
        y1 = y1.max(row[1] + r);
    }
    let span = (x1 - x0).max(y1 - y0).max(1e-12);
    let scale = (CANVAS - 2.0 * MARGIN) / span;
    let marker = 3.0 / scale;

    let mut s = String::new();
    let size = CANVAS;
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{size}" height="{size}" viewBox="0 0 {size} {size}">"#
    );
    let _ = writeln!(s, r#"<rect x="0" y="0" width="{size}" height="{size}" fill="white"/>"#);
    // flip y so that larger values go up
    let _ = writeln!(
        s,
        r#"<g transform="translate({MARGIN} {}) scale({scale} {}) translate({} {})">"#,
        CANVAS - MARGIN,
        -scale,
        -x0,
        -y0
    );
    let _ = writeln!(s, r#"<g class="points">"#);
    for (row, &l) in data.points.rows().into_iter().zip(labels) {
        let _ = writeln!(
            s,
            r#"<rect x="{}" y="{}" width="{marker}" height="{marker}" fill="{}"/>"#,
            row[0] - marker / 2.0,
            row[1] - marker / 2.0,
            color(l)
        );
    }
    let _ = writeln!(s, "</g>");
    let _ = writeln!(s, r#"<g class="representatives" fill="none" stroke-width="2">"#);
    for (j, (row, g)) in theta.rows().into_iter().zip(gamma).enumerate() {
        let _ = writeln!(
            s,
            r#"<circle cx="{}" cy="{}" r="{}" stroke="{}" vector-effect="non-scaling-stroke"/>"#,
            row[0],
            row[1],
            g.max(0.0).sqrt(),
            color(j + 1)
        );
    }
    let _ = writeln!(s, "</g>\n</g>\n</svg>");
    Ok(s)
}
