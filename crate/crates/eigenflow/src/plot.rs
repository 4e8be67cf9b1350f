//! SVG scatter plots of eigenspace diagrams, birth on x and death on y.

use std::fmt::Write;

use serde::Deserialize;

use crate::eigen::EigenspaceDiagram;

const PANEL: f64 = 240.0;
const MARGIN: f64 = 36.0;
const COLUMNS: usize = 4;

/// The parts of a results file needed for plotting.
#[derive(Clone, Debug, Deserialize)]
pub struct PlotInput {
    pub diagrams: Vec<EigenspaceDiagram>,
    pub filtration: PlotRange,
}

#[derive(Clone, Debug, Deserialize)]
pub struct PlotRange {
    pub last_radius: f64,
}

impl PlotInput {
    pub fn from_json(text: &str) -> Result<Self, serde_json::Error> {
        serde_json::from_str(text)
    }
}

fn panel(out: &mut String, d: &EigenspaceDiagram, x0: f64, y0: f64, max: f64) {
    let side = PANEL - 2.0 * MARGIN;
    let sx = |v: f64| x0 + MARGIN + side * (v / max).clamp(0.0, 1.0);
    let sy = |v: f64| y0 + PANEL - MARGIN - side * (v / max).clamp(0.0, 1.0);
    let (left, right, top, bottom) = (sx(0.0), sx(max), sy(max), sy(0.0));
    let _ = writeln!(
        out,
        r##"<rect x="{left:.2}" y="{top:.2}" width="{side:.2}" height="{side:.2}" fill="none" stroke="#444"/>"##
    );
    let _ = writeln!(
        out,
        r##"<line x1="{left:.2}" y1="{bottom:.2}" x2="{right:.2}" y2="{top:.2}" stroke="#999" stroke-dasharray="4 3"/>"##
    );
    let _ = writeln!(
        out,
        r#"<text x="{:.2}" y="{:.2}" font-size="12" text-anchor="middle">t = {}</text>"#,
        x0 + PANEL / 2.0,
        y0 + MARGIN - 10.0,
        d.t
    );
    let _ = writeln!(
        out,
        r#"<text x="{:.2}" y="{:.2}" font-size="10" text-anchor="middle">birth</text>"#,
        x0 + PANEL / 2.0,
        bottom + 24.0
    );
    let _ = writeln!(
        out,
        r#"<text x="{:.2}" y="{:.2}" font-size="10" text-anchor="end">{max:.3}</text>"#,
        left - 4.0,
        top + 4.0
    );
    let _ = writeln!(
        out,
        r#"<text x="{:.2}" y="{:.2}" font-size="10" text-anchor="middle" transform="rotate(-90 {:.2} {:.2})">death</text>"#,
        x0 + 14.0,
        y0 + PANEL / 2.0,
        x0 + 14.0,
        y0 + PANEL / 2.0
    );
    for iv in &d.intervals {
        let cx = sx(iv.birth);
        let cy = sy(iv.death.unwrap_or(max));
        let fill = if iv.death.is_none() { "#c0392b" } else { "#2c6fbb" };
        let _ = writeln!(out, r#"<circle cx="{cx:.2}" cy="{cy:.2}" r="3" fill="{fill}"/>"#);
    }
}

/// One panel per diagram. Essential intervals are drawn on the top edge.
pub fn render_svg(diagrams: &[EigenspaceDiagram], max_radius: f64) -> String {
    let max = if max_radius > 0.0 { max_radius } else { 1.0 };
    let count = diagrams.len().max(1);
    let cols = count.min(COLUMNS);
    let rows = count.div_ceil(COLUMNS);
    let (w, h) = (cols as f64 * PANEL, rows as f64 * PANEL);
    let mut out = String::new();
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{w}" height="{h}" viewBox="0 0 {w} {h}" font-family="sans-serif">"#
    );
    let _ = writeln!(out, r#"<rect width="{w}" height="{h}" fill="white"/>"#);
    if diagrams.is_empty() {
        let empty = EigenspaceDiagram { t: 0, intervals: Vec::new(), violations: 0 };
        panel(&mut out, &empty, 0.0, 0.0, max);
    }
    for (k, d) in diagrams.iter().enumerate() {
        let (c, r) = (k % COLUMNS, k / COLUMNS);
        panel(&mut out, d, c as f64 * PANEL, r as f64 * PANEL, max);
    }
    out.push_str("</svg>\n");
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::eigen::EigenInterval;

    #[test]
    fn empty_diagram_has_axes_only() {
        let d = EigenspaceDiagram { t: 3, intervals: Vec::new(), violations: 0 };
        let svg = render_svg(&[d], 1.0);
        assert!(svg.contains("<line"));
        assert!(!svg.contains("<circle"));
        assert!(svg.contains("t = 3"));
    }

    #[test]
    fn essential_points_sit_on_top_edge() {
        let iv = EigenInterval { birth: 0.25, death: None, birth_rank: 1, death_rank: None };
        let d = EigenspaceDiagram { t: 2, intervals: vec![iv], violations: 0 };
        let svg = render_svg(&[d], 1.0);
        // top edge of the first panel is at y = MARGIN
        assert!(svg.contains(&format!(r#"cy="{MARGIN:.2}""#)));
        assert_eq!(svg, render_svg(&[EigenspaceDiagram {
            t: 2,
            intervals: vec![EigenInterval { birth: 0.25, death: None, birth_rank: 1, death_rank: None }],
            violations: 0,
        }], 1.0));
    }
}
