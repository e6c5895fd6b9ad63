//! SVG pictures of the `(β, α)` half plane.
//!
//! Geometry is exact up to this module; here α = √α² and every coordinate is
//! turned into an `f64` only to place it on the canvas. Captions keep the
//! exact values.

use std::fmt::Write as _;

use tiltlab_core::{format_rational, ExtremalEllipse, QuadValue, Rational, Semicircle};

const WIDTH: f64 = 640.0;
const MIN_HEIGHT: f64 = 120.0;
const MARGIN: f64 = 0.08;

#[derive(Clone, Debug, PartialEq)]
pub enum Item {
    Semicircle { circle: Semicircle, label: String },
    Ellipse { ellipse: ExtremalEllipse, label: String },
    /// A vertical wall or the boundary of a stability region.
    Vertical { beta: QuadValue, label: String },
    Marker { beta: Rational, alpha_sq: Rational, label: String },
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct Scene {
    pub items: Vec<Item>,
}

impl Scene {
    pub fn push(&mut self, item: Item) {
        self.items.push(item);
    }

    pub fn is_empty(&self) -> bool {
        self.items.is_empty()
    }
}

fn to_f64(r: &Rational) -> f64 {
    QuadValue::from(r).to_f64()
}

/// Fixed three decimals, with `-0.000` folded into `0.000`.
fn coord(x: f64) -> String {
    let s = format!("{x:.3}");
    if s == "-0.000" {
        "0.000".to_string()
    } else {
        s
    }
}

fn escape(text: &str) -> String {
    text.replace('&', "&amp;")
        .replace('<', "&lt;")
        .replace('>', "&gt;")
        .replace('"', "&quot;")
}

struct Frame {
    beta_min: f64,
    scale: f64,
    height: f64,
}

impl Frame {
    fn fit(scene: &Scene) -> Frame {
        let mut lo = f64::INFINITY;
        let mut hi = f64::NEG_INFINITY;
        let mut top: f64 = 0.0;
        for item in &scene.items {
            let (a, b, h) = match item {
                Item::Semicircle { circle, .. } => {
                    let r = circle.radius().to_f64();
                    let s = to_f64(&circle.center);
                    (s - r, s + r, r)
                }
                Item::Ellipse { ellipse, .. } => {
                    let (l, r) = ellipse.intercepts();
                    let h = (to_f64(&ellipse.rhs) / to_f64(&(&ellipse.v0 + &ellipse.hn))).sqrt();
                    (l.to_f64(), r.to_f64(), h)
                }
                Item::Vertical { beta, .. } => {
                    let b = beta.to_f64();
                    (b, b, 0.0)
                }
                Item::Marker { beta, alpha_sq, .. } => {
                    let b = to_f64(beta);
                    (b, b, to_f64(alpha_sq).sqrt())
                }
            };
            lo = lo.min(a);
            hi = hi.max(b);
            top = top.max(h);
        }
        let mut span = hi - lo;
        if span <= 0.0 {
            span = top.max(1.0) * 2.0;
            lo -= span / 2.0;
        }
        let pad = span * MARGIN;
        let beta_min = lo - pad;
        let scale = WIDTH / (span + 2.0 * pad);
        let height = ((top + pad) * scale).max(MIN_HEIGHT);
        Frame {
            beta_min,
            scale,
            height,
        }
    }

    fn x(&self, beta: f64) -> String {
        coord((beta - self.beta_min) * self.scale)
    }

    fn y(&self, alpha: f64) -> String {
        coord(self.height - alpha * self.scale)
    }
}

/// Upper half of the ellipse `(β − c)²/a² + α²/b² = 1` as `samples` straight
/// segments at equal angular steps.
fn arc_path(frame: &Frame, center: f64, a: f64, b: f64, samples: u32) -> String {
    let mut d = String::new();
    for k in 0..=samples {
        let theta = std::f64::consts::PI * f64::from(samples - k) / f64::from(samples);
        let beta = center + a * theta.cos();
        let alpha = b * theta.sin();
        let op = if k == 0 { 'M' } else { 'L' };
        if k > 0 {
            d.push(' ');
        }
        let _ = write!(d, "{op}{},{}", frame.x(beta), frame.y(alpha));
    }
    d
}

/// Renders the scene, or `None` when there is nothing to draw.
pub fn render_svg(scene: &Scene, samples: u32) -> Option<String> {
    if scene.is_empty() || samples == 0 {
        return None;
    }
    let frame = Frame::fit(scene);
    let height = coord(frame.height);
    let mut out = String::new();
    let _ = writeln!(out, r#"<?xml version="1.0" encoding="UTF-8"?>"#);
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{w}" height="{height}" viewBox="0 0 {w} {height}">"#,
        w = coord(WIDTH)
    );
    let _ = writeln!(
        out,
        r#"<line class="axis" x1="0.000" y1="{y}" x2="{w}" y2="{y}" stroke="black"/>"#,
        y = height,
        w = coord(WIDTH)
    );
    let beta_max = frame.beta_min + WIDTH / frame.scale;
    if frame.beta_min <= 0.0 && 0.0 <= beta_max {
        let _ = writeln!(
            out,
            r#"<line class="axis" x1="{x}" y1="0.000" x2="{x}" y2="{y}" stroke="black"/>"#,
            x = frame.x(0.0),
            y = height
        );
    }
    for item in &scene.items {
        match item {
            Item::Semicircle { circle, label } => {
                let r = circle.radius().to_f64();
                let d = arc_path(&frame, to_f64(&circle.center), r, r, samples);
                let _ = writeln!(
                    out,
                    r##"<path class="wall" d="{d}" fill="none" stroke="#1f5fa8"><title>{}</title></path>"##,
                    escape(label)
                );
            }
            Item::Ellipse { ellipse, label } => {
                let a = (to_f64(&ellipse.rhs) / to_f64(&ellipse.v0)).sqrt();
                let b = (to_f64(&ellipse.rhs) / to_f64(&(&ellipse.v0 + &ellipse.hn))).sqrt();
                let d = arc_path(&frame, to_f64(&ellipse.mu), a, b, samples);
                let _ = writeln!(
                    out,
                    r##"<path class="ellipse" d="{d}" fill="none" stroke="#b8401c"><title>{}</title></path>"##,
                    escape(label)
                );
            }
            Item::Vertical { beta, label } => {
                let x = frame.x(beta.to_f64());
                let _ = writeln!(
                    out,
                    r##"<line class="vertical" x1="{x}" y1="0.000" x2="{x}" y2="{height}" stroke="#3a7d44" stroke-dasharray="4 3"><title>{}</title></line>"##,
                    escape(label)
                );
            }
            Item::Marker {
                beta,
                alpha_sq,
                label,
            } => {
                let _ = writeln!(
                    out,
                    r#"<circle class="marker" cx="{}" cy="{}" r="3.000" fill="black"><title>{}</title></circle>"#,
                    frame.x(to_f64(beta)),
                    frame.y(to_f64(alpha_sq).sqrt()),
                    escape(label)
                );
            }
        }
    }
    out.push_str("</svg>\n");
    Some(out)
}

/// `"s=-3/2 rsq=1/4"`.
pub fn circle_caption(circle: &Semicircle) -> String {
    format!(
        "s={} rsq={}",
        format_rational(&circle.center),
        format_rational(&circle.radius_sq)
    )
}
