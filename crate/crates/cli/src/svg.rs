//! Pseudospectrum level sets drawn as SVG.

use std::fmt::Write;

use qnil_core::spectra::{contours, Contour, PseudospectrumGrid, Region};
use qnil_core::C64;

const WIDTH: f64 = 640.0;
const MARGIN_LEFT: f64 = 70.0;
const MARGIN_RIGHT: f64 = 190.0;
const MARGIN_Y: f64 = 40.0;
const PALETTE: [&str; 8] = ["#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#17becf", "#8c564b", "#e377c2"];

/// The level set `|R(z)| = 1/eps` as polylines.
#[derive(Debug, Clone)]
pub struct Level {
    pub eps: f64,
    pub loops: Vec<Contour<f64>>,
}

impl Level {
    pub fn is_empty(&self) -> bool {
        self.loops.is_empty()
    }

    /// Some polyline ends on the region boundary.
    pub fn clipped(&self) -> bool {
        self.loops.iter().any(|c| !c.closed)
    }

    pub fn closed_loops(&self) -> usize {
        self.loops.iter().filter(|c| c.closed).count()
    }
}

#[derive(Debug, Clone)]
pub struct ContourPlot {
    pub region: Region<f64>,
    pub levels: Vec<Level>,
    /// Marked with crosses (typically the spectrum).
    pub points: Vec<C64>,
}

pub fn contour_plot(grid: &PseudospectrumGrid<f64>, eps_list: &[f64]) -> ContourPlot {
    let levels = eps_list.iter().map(|&eps| Level { eps, loops: contours(grid, eps) }).collect();
    ContourPlot { region: grid.region(), levels, points: Vec::new() }
}

/// SVG with one polyline set per `eps`, framed axes and a legend.
pub fn emit_contour_svg(grid: &PseudospectrumGrid<f64>, eps_list: &[f64]) -> String {
    contour_plot(grid, eps_list).to_svg()
}

fn tick_label(x: f64) -> String {
    let s = format!("{x:.3}");
    if s == "-0.000" { "0.000".to_string() } else { s }
}

impl ContourPlot {
    pub fn with_points(mut self, points: Vec<C64>) -> Self {
        self.points = points;
        self
    }

    pub fn to_svg(&self) -> String {
        let r = &self.region;
        let plot_w = WIDTH - MARGIN_LEFT - MARGIN_RIGHT;
        let scale = plot_w / r.width();
        let plot_h = r.height() * scale;
        let height = plot_h + 2.0 * MARGIN_Y;
        let px = |z: C64| (MARGIN_LEFT + (z.re - r.re_min) * scale, MARGIN_Y + (r.im_max - z.im) * scale);

        let mut s = String::new();
        let _ = writeln!(
            s,
            r#"<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH:.0}" height="{height:.0}" viewBox="0 0 {WIDTH:.0} {height:.0}" font-family="sans-serif" font-size="11">"#
        );
        let _ = writeln!(s, r#"<rect x="0" y="0" width="{WIDTH:.0}" height="{height:.0}" fill="white"/>"#);
        let _ = writeln!(
            s,
            r#"<rect x="{MARGIN_LEFT:.2}" y="{MARGIN_Y:.2}" width="{plot_w:.2}" height="{plot_h:.2}" fill="none" stroke="black"/>"#
        );
        for k in 0..=4 {
            let frac = k as f64 / 4.0;
            let (x, _) = px(C64::new(r.re_min + frac * r.width(), r.im_min));
            let (_, y) = px(C64::new(r.re_min, r.im_min + frac * r.height()));
            let bottom = MARGIN_Y + plot_h;
            let _ = writeln!(s, r#"<line x1="{x:.2}" y1="{bottom:.2}" x2="{x:.2}" y2="{:.2}" stroke="black"/>"#, bottom + 5.0);
            let _ = writeln!(
                s,
                r#"<text x="{x:.2}" y="{:.2}" text-anchor="middle">{}</text>"#,
                bottom + 18.0,
                tick_label(r.re_min + frac * r.width())
            );
            let _ = writeln!(s, r#"<line x1="{:.2}" y1="{y:.2}" x2="{MARGIN_LEFT:.2}" y2="{y:.2}" stroke="black"/>"#, MARGIN_LEFT - 5.0);
            let _ = writeln!(
                s,
                r#"<text x="{:.2}" y="{:.2}" text-anchor="end">{}</text>"#,
                MARGIN_LEFT - 8.0,
                y + 4.0,
                tick_label(r.im_min + frac * r.height())
            );
        }
        let _ = writeln!(
            s,
            r#"<text x="{:.2}" y="{:.2}" text-anchor="middle">Re z</text>"#,
            MARGIN_LEFT + plot_w / 2.0,
            height - 4.0
        );
        let _ = writeln!(
            s,
            r#"<text x="14" y="{:.2}" text-anchor="middle" transform="rotate(-90 14 {:.2})">Im z</text>"#,
            MARGIN_Y + plot_h / 2.0,
            MARGIN_Y + plot_h / 2.0
        );

        for (k, level) in self.levels.iter().enumerate() {
            let color = PALETTE[k % PALETTE.len()];
            let _ = writeln!(s, r#"<g stroke="{color}" fill="none" stroke-width="1.2" data-eps="{:e}">"#, level.eps);
            for c in &level.loops {
                let mut pts: Vec<String> = c.points.iter().map(|z| {
                    let (x, y) = px(*z);
                    format!("{x:.2},{y:.2}")
                }).collect();
                if c.closed {
                    if let Some(first) = pts.first().cloned() {
                        pts.push(first);
                    }
                }
                let _ = writeln!(s, r#"<polyline points="{}"/>"#, pts.join(" "));
            }
            let _ = writeln!(s, "</g>");
        }

        for z in &self.points {
            if !r.contains(*z) {
                continue;
            }
            let (x, y) = px(*z);
            let _ = writeln!(
                s,
                r#"<path d="M{:.2},{:.2}L{:.2},{:.2}M{:.2},{:.2}L{:.2},{:.2}" stroke="black" stroke-width="1"/>"#,
                x - 3.0, y - 3.0, x + 3.0, y + 3.0, x - 3.0, y + 3.0, x + 3.0, y - 3.0
            );
        }

        let lx = WIDTH - MARGIN_RIGHT + 16.0;
        let _ = writeln!(s, r#"<text x="{lx:.2}" y="{:.2}" font-weight="bold">levels |R(z)| = 1/ε</text>"#, MARGIN_Y + 4.0);
        for (k, level) in self.levels.iter().enumerate() {
            let y = MARGIN_Y + 24.0 + 18.0 * k as f64;
            let color = PALETTE[k % PALETTE.len()];
            let note = if level.is_empty() {
                " (empty, not drawn)"
            } else if level.clipped() {
                " (clipped)"
            } else {
                ""
            };
            let _ = writeln!(
                s,
                r#"<line x1="{lx:.2}" y1="{:.2}" x2="{:.2}" y2="{:.2}" stroke="{color}" stroke-width="2"/>"#,
                y - 4.0,
                lx + 18.0,
                y - 4.0
            );
            let _ = writeln!(s, r#"<text x="{:.2}" y="{y:.2}">ε = {:.3e}{note}</text>"#, lx + 24.0, level.eps);
        }
        s.push_str("</svg>\n");
        s
    }
}
