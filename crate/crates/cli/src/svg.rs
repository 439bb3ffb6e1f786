//! Minimal self-contained SVG rendering: axes, polylines, cells, markers.
//! No plotting framework; output is deterministic.

use std::fmt::Write as _;

pub struct Canvas {
    width: f64,
    height: f64,
    margin: f64,
    x_range: (f64, f64),
    y_range: (f64, f64),
    body: String,
}

impl Canvas {
    pub fn new(width: f64, height: f64, x_range: (f64, f64), y_range: (f64, f64)) -> Self {
        Self { width, height, margin: 46.0, x_range, y_range, body: String::new() }
    }

    fn x(&self, v: f64) -> f64 {
        let (lo, hi) = self.x_range;
        self.margin + (v - lo) / (hi - lo) * (self.width - 2.0 * self.margin)
    }

    fn y(&self, v: f64) -> f64 {
        let (lo, hi) = self.y_range;
        self.height - self.margin - (v - lo) / (hi - lo) * (self.height - 2.0 * self.margin)
    }

    pub fn polyline(&mut self, pts: &[(f64, f64)], color: &str, width: f64) {
        if pts.len() < 2 {
            return;
        }
        let mut d = String::new();
        for (i, p) in pts.iter().enumerate() {
            let _ = write!(d, "{}{:.2},{:.2}", if i == 0 { "" } else { " " }, self.x(p.0), self.y(p.1));
        }
        let _ = writeln!(
            self.body,
            r#"<polyline points="{d}" fill="none" stroke="{color}" stroke-width="{width:.1}"/>"#
        );
    }

    pub fn cell(&mut self, x0: f64, x1: f64, y0: f64, y1: f64, color: &str) {
        let (px, py) = (self.x(x0), self.y(y1));
        let (w, h) = (self.x(x1) - self.x(x0), self.y(y0) - self.y(y1));
        let _ = writeln!(
            self.body,
            r#"<rect x="{px:.2}" y="{py:.2}" width="{w:.2}" height="{h:.2}" fill="{color}"/>"#
        );
    }

    pub fn marker(&mut self, x: f64, y: f64, r: f64, color: &str) {
        let _ = writeln!(
            self.body,
            r#"<circle cx="{:.2}" cy="{:.2}" r="{r:.1}" fill="{color}"/>"#,
            self.x(x),
            self.y(y)
        );
    }

    pub fn label(&mut self, x: f64, y: f64, text: &str, size: f64) {
        let _ = writeln!(
            self.body,
            r#"<text x="{:.2}" y="{:.2}" font-size="{size:.0}" font-family="sans-serif">{text}</text>"#,
            self.x(x),
            self.y(y)
        );
    }

    pub fn axes(&mut self, x_label: &str, y_label: &str) {
        let (x0, x1) = self.x_range;
        let (y0, y1) = self.y_range;
        let frame = [
            (self.x(x0), self.y(y0)),
            (self.x(x1), self.y(y0)),
            (self.x(x1), self.y(y1)),
            (self.x(x0), self.y(y1)),
            (self.x(x0), self.y(y0)),
        ];
        let mut d = String::new();
        for (i, p) in frame.iter().enumerate() {
            let _ = write!(d, "{}{:.2},{:.2}", if i == 0 { "" } else { " " }, p.0, p.1);
        }
        let _ = writeln!(
            self.body,
            r#"<polyline points="{d}" fill="none" stroke="#000" stroke-width="1.0"/>"#
        );
        for i in 0..=4 {
            let vx = x0 + (x1 - x0) * i as f64 / 4.0;
            let vy = y0 + (y1 - y0) * i as f64 / 4.0;
            let _ = writeln!(
                self.body,
                r#"<text x="{:.2}" y="{:.2}" font-size="10" font-family="sans-serif" text-anchor="middle">{:.3}</text>"#,
                self.x(vx),
                self.height - self.margin + 14.0,
                vx
            );
            let _ = writeln!(
                self.body,
                r#"<text x="{:.2}" y="{:.2}" font-size="10" font-family="sans-serif" text-anchor="end">{:.3}</text>"#,
                self.margin - 4.0,
                self.y(vy) + 3.0,
                vy
            );
        }
        let _ = writeln!(
            self.body,
            r#"<text x="{:.2}" y="{:.2}" font-size="12" font-family="sans-serif" text-anchor="middle">{x_label}</text>"#,
            0.5 * self.width,
            self.height - 8.0
        );
        let _ = writeln!(
            self.body,
            r#"<text x="14" y="{:.2}" font-size="12" font-family="sans-serif" text-anchor="middle" transform="rotate(-90 14 {:.2})">{y_label}</text>"#,
            0.5 * self.height,
            0.5 * self.height
        );
    }

    pub fn finish(self) -> String {
        format!(
            "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{:.0}\" height=\"{:.0}\" \
             viewBox=\"0 0 {:.0} {:.0}\">\n<rect width=\"100%\" height=\"100%\" fill=\"#fff\"/>\n{}</svg>\n",
            self.width, self.height, self.width, self.height, self.body
        )
    }
}
