use std::fmt::Write;

use super::{SweepGrid, ThresholdCurve};
use crate::criteria::format_number;

/// `p,q,margin` for every point inside the simplex, in `(i, j)` order.
pub fn grid_csv(grid: &SweepGrid) -> String {
    let mut out = String::from("p,q,margin\n");
    for pt in grid.evaluated() {
        let _ = writeln!(
            out,
            "{},{},{}",
            format_number(pt.p),
            format_number(pt.q),
            format_number(pt.margin)
        );
    }
    out
}

/// `p,q` for every vertex, ordered by ray angle.
pub fn curve_csv(curve: &ThresholdCurve) -> String {
    let mut out = String::from("p,q\n");
    for v in &curve.vertices {
        let _ = writeln!(out, "{},{}", format_number(v.p), format_number(v.q));
    }
    out
}

const SIZE: f64 = 800.0;
const LEFT: f64 = 60.0;
const RIGHT: f64 = 760.0;
const SPAN: f64 = RIGHT - LEFT;
const PALETTE: [&str; 8] = [
    "#d62728", "#1f77b4", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b", "#e377c2", "#17becf",
];

fn x(p: f64) -> f64 {
    LEFT + SPAN * p
}

fn y(q: f64) -> f64 {
    RIGHT - SPAN * q
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

/// Threshold curves and detection regions drawn over the unit square, with
/// the simplex edge `q = 1 − p` dashed.
#[derive(Clone, Debug, Default)]
pub struct SvgPlot {
    title: String,
    curves: Vec<(String, Vec<(f64, f64)>)>,
    regions: Vec<(String, Vec<(f64, f64)>, f64)>,
}

impl SvgPlot {
    pub fn new(title: &str) -> Self {
        Self {
            title: title.to_string(),
            ..Self::default()
        }
    }

    pub fn curve(&mut self, label: &str, curve: &ThresholdCurve) -> &mut Self {
        let pts = curve.vertices.iter().map(|v| (v.p, v.q)).collect();
        self.curves.push((label.to_string(), pts));
        self
    }

    /// Shades violated grid points.
    pub fn region(&mut self, label: &str, grid: &SweepGrid) -> &mut Self {
        let pts = grid.evaluated().filter(|g| g.violated).map(|g| (g.p, g.q)).collect();
        let cell = SPAN / (grid.resolution - 1) as f64;
        self.regions.push((label.to_string(), pts, cell));
        self
    }

    pub fn render(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(
            s,
            r#"<svg xmlns="http://www.w3.org/2000/svg" viewBox="0 0 {SIZE} {SIZE}" width="{SIZE}" height="{SIZE}">"#
        );
        let _ = writeln!(s, r#"<rect x="0" y="0" width="{SIZE}" height="{SIZE}" fill="white"/>"#);
        let _ = writeln!(
            s,
            r#"<text x="{}" y="30" font-family="sans-serif" font-size="18" text-anchor="middle">{}</text>"#,
            SIZE / 2.0,
            escape(&self.title)
        );

        let n_series = self.regions.len() + self.curves.len();
        for (idx, (_, pts, cell)) in self.regions.iter().enumerate() {
            let color = PALETTE[idx % PALETTE.len()];
            let _ = writeln!(s, r#"<g fill="{color}" fill-opacity="0.25" stroke="none">"#);
            for &(p, q) in pts {
                let _ = writeln!(
                    s,
                    r#"<rect x="{:.3}" y="{:.3}" width="{:.3}" height="{:.3}"/>"#,
                    x(p) - cell / 2.0,
                    y(q) - cell / 2.0,
                    cell,
                    cell
                );
            }
            let _ = writeln!(s, "</g>");
        }

        // axes, ticks, simplex edge
        let _ = writeln!(
            s,
            r#"<g stroke="black" stroke-width="1.5"><line x1="{LEFT}" y1="{RIGHT}" x2="{RIGHT}" y2="{RIGHT}"/><line x1="{LEFT}" y1="{RIGHT}" x2="{LEFT}" y2="{LEFT}"/></g>"#
        );
        let _ = writeln!(s, r#"<g font-family="sans-serif" font-size="12" stroke="black">"#);
        for t in 0..=5 {
            let v = t as f64 * 0.2;
            let _ = writeln!(
                s,
                r#"<line x1="{0:.3}" y1="{1}" x2="{0:.3}" y2="{2}"/><line x1="{3}" y1="{4:.3}" x2="{5}" y2="{4:.3}"/>"#,
                x(v),
                RIGHT,
                RIGHT + 6.0,
                LEFT - 6.0,
                y(v),
                LEFT
            );
            let _ = writeln!(
                s,
                r#"<text x="{:.3}" y="{}" stroke="none" text-anchor="middle">{v:.1}</text><text x="{}" y="{:.3}" stroke="none" text-anchor="end">{v:.1}</text>"#,
                x(v),
                RIGHT + 22.0,
                LEFT - 10.0,
                y(v) + 4.0
            );
        }
        let _ = writeln!(s, "</g>");
        let _ = writeln!(
            s,
            r#"<text x="{}" y="{}" font-family="sans-serif" font-size="16" text-anchor="middle">p</text><text x="20" y="{}" font-family="sans-serif" font-size="16" text-anchor="middle">q</text>"#,
            SIZE / 2.0,
            RIGHT + 38.0,
            SIZE / 2.0
        );
        let _ = writeln!(
            s,
            r#"<line x1="{:.3}" y1="{:.3}" x2="{:.3}" y2="{:.3}" stroke="gray" stroke-dasharray="6,4"/>"#,
            x(1.0),
            y(0.0),
            x(0.0),
            y(1.0)
        );

        for (idx, (_, pts)) in self.curves.iter().enumerate() {
            let color = PALETTE[(self.regions.len() + idx) % PALETTE.len()];
            let coords: Vec<String> = pts.iter().map(|&(p, q)| format!("{:.3},{:.3}", x(p), y(q))).collect();
            let _ = writeln!(
                s,
                r#"<polyline fill="none" stroke="{color}" stroke-width="2" points="{}"/>"#,
                coords.join(" ")
            );
        }

        // legend
        let labels = self.regions.iter().map(|r| &r.0).chain(self.curves.iter().map(|c| &c.0));
        for (idx, label) in labels.enumerate().take(n_series) {
            let color = PALETTE[idx % PALETTE.len()];
            let ly = 70.0 + 22.0 * idx as f64;
            let _ = writeln!(
                s,
                r#"<rect x="560" y="{:.1}" width="16" height="10" fill="{color}"/><text x="584" y="{:.1}" font-family="sans-serif" font-size="13">{}</text>"#,
                ly - 9.0,
                ly,
                escape(label)
            );
        }
        s.push_str("</svg>\n");
        s
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::criteria::CriterionId;
    use crate::sweep::CurveVertex;

    fn curve(n: usize) -> ThresholdCurve {
        ThresholdCurve {
            family: "GhzMix10".into(),
            criterion: CriterionId::SwapProducibility,
            k: 3,
            vertices: (0..n)
                .map(|i| CurveVertex {
                    ray: i,
                    angle: i as f64,
                    p: 0.1 * i as f64,
                    q: 0.05,
                })
                .collect(),
            skipped: vec![],
        }
    }

    #[test]
    fn curve_csv_lines() {
        assert_eq!(curve_csv(&curve(3)).lines().count(), 4);
        assert_eq!(curve_csv(&curve(0)), "p,q\n");
    }

    #[test]
    fn svg_is_deterministic() {
        let mut a = SvgPlot::new("t < 1");
        a.curve("line a", &curve(3));
        let text = a.render();
        assert_eq!(text, a.clone().render());
        assert!(text.starts_with("<svg"));
        assert!(text.contains("viewBox=\"0 0 800 800\""));
        assert!(text.contains("t &lt; 1"));
        assert!(text.contains("stroke-dasharray"));
    }
}
