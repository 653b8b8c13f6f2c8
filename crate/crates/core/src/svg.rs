//! Minimal SVG writer for debugging figures.

use std::fmt::Write as _;

/// An SVG canvas mapping a data rectangle onto a square image.
#[derive(Debug, Clone)]
pub struct SvgCanvas {
    size: f64,
    min: (f64, f64),
    scale: f64,
    body: String,
}

impl SvgCanvas {
    /// Canvas of `size` pixels showing the data box `[x0, x1] x [y0, y1]` (aspect preserved).
    pub fn new(size: f64, x0: f64, x1: f64, y0: f64, y1: f64) -> Self {
        let span = (x1 - x0).max(y1 - y0).max(1e-12);
        Self {
            size,
            min: (x0, y0),
            scale: size * 0.9 / span,
            body: String::new(),
        }
    }

    /// Canvas fitted to a set of points with a small margin.
    pub fn fitted(size: f64, pts: impl IntoIterator<Item = (f64, f64)>) -> Self {
        let (mut x0, mut x1, mut y0, mut y1) = (f64::INFINITY, f64::NEG_INFINITY, f64::INFINITY, f64::NEG_INFINITY);
        for (x, y) in pts {
            x0 = x0.min(x);
            x1 = x1.max(x);
            y0 = y0.min(y);
            y1 = y1.max(y);
        }
        if !x0.is_finite() {
            return Self::new(size, -1.0, 1.0, -1.0, 1.0);
        }
        Self::new(size, x0, x1, y0, y1)
    }

    fn map(&self, (x, y): (f64, f64)) -> (f64, f64) {
        let m = self.size * 0.05;
        (m + (x - self.min.0) * self.scale, self.size - m - (y - self.min.1) * self.scale)
    }

    pub fn circle(&mut self, c: (f64, f64), r_px: f64, fill: &str, stroke: &str) {
        let (x, y) = self.map(c);
        let _ = writeln!(
            self.body,
            r#"<circle cx="{x:.3}" cy="{y:.3}" r="{r_px:.3}" fill="{fill}" stroke="{stroke}"/>"#
        );
    }

    /// Circle whose radius is given in data units.
    pub fn data_circle(&mut self, c: (f64, f64), r: f64, fill: &str, stroke: &str) {
        let r_px = r * self.scale;
        self.circle(c, r_px, fill, stroke);
    }

    pub fn polyline(&mut self, pts: &[(f64, f64)], stroke: &str, width: f64, closed: bool) {
        let coords: Vec<String> = pts
            .iter()
            .map(|&p| {
                let (x, y) = self.map(p);
                format!("{x:.3},{y:.3}")
            })
            .collect();
        let tag = if closed { "polygon" } else { "polyline" };
        let _ = writeln!(
            self.body,
            r#"<{tag} points="{}" fill="none" stroke="{stroke}" stroke-width="{width}"/>"#,
            coords.join(" ")
        );
    }

    pub fn text(&mut self, at: (f64, f64), s: &str) {
        let (x, y) = self.map(at);
        let _ = writeln!(self.body, r#"<text x="{x:.3}" y="{y:.3}" font-size="12">{s}</text>"#);
    }

    pub fn finish(self) -> String {
        format!(
            "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{0}\" height=\"{0}\" viewBox=\"0 0 {0} {0}\">\n<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n{1}</svg>\n",
            self.size, self.body
        )
    }
}
