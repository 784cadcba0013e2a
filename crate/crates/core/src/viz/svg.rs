//! Minimal retained-mode SVG 1.1 scene.
//!
//! Coordinates are written with Rust's shortest round-trip float formatting,
//! so parsing an emitted document returns exactly the coordinates that were
//! pushed. Output contains no timestamps or generated ids and is
//! byte-identical for identical scenes.

use std::collections::HashSet;
use std::fmt::Write as _;

use serde::Serialize;

use crate::error::{HceError, Result};

#[derive(Debug, Clone, PartialEq)]
pub enum PathCmd {
    MoveTo(f64, f64),
    LineTo(f64, f64),
    Close,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Anchor {
    Start,
    Middle,
    End,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Shape {
    Rect { x: f64, y: f64, w: f64, h: f64 },
    Line { x1: f64, y1: f64, x2: f64, y2: f64 },
    Polyline(Vec<(f64, f64)>),
    Polygon(Vec<(f64, f64)>),
    Path(Vec<PathCmd>),
    Text { x: f64, y: f64, text: String, anchor: Anchor, size: f64, rotate: bool },
    Circle { cx: f64, cy: f64, r: f64 },
}

impl Shape {
    fn points(&self) -> Vec<(f64, f64)> {
        match self {
            Shape::Rect { x, y, w, h } => vec![(*x, *y), (x + w, y + h)],
            Shape::Line { x1, y1, x2, y2 } => vec![(*x1, *y1), (*x2, *y2)],
            Shape::Polyline(p) | Shape::Polygon(p) => p.clone(),
            Shape::Path(cmds) => cmds
                .iter()
                .filter_map(|c| match c {
                    PathCmd::MoveTo(x, y) | PathCmd::LineTo(x, y) => Some((*x, *y)),
                    PathCmd::Close => None,
                })
                .collect(),
            Shape::Text { x, y, .. } => vec![(*x, *y)],
            Shape::Circle { cx, cy, r } => vec![(cx - r, cy - r), (cx + r, cy + r)],
        }
    }
}

/// Presentation attributes, written in insertion order.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct Style(Vec<(&'static str, String)>);

impl Style {
    pub fn new() -> Self {
        Style::default()
    }

    pub fn fill(self, c: &str) -> Self {
        self.attr("fill", c)
    }

    pub fn stroke(self, c: &str, width: f64) -> Self {
        self.attr("stroke", c).attr("stroke-width", &fmt_num(width))
    }

    pub fn dashed(self, pattern: &str) -> Self {
        self.attr("stroke-dasharray", pattern)
    }

    pub fn opacity(self, o: f64) -> Self {
        self.attr("fill-opacity", &fmt_num(o))
    }

    pub fn attr(mut self, key: &'static str, value: &str) -> Self {
        self.0.push((key, value.to_string()));
        self
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Element {
    pub id: String,
    pub shape: Shape,
    pub style: Style,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Rect {
    pub x: f64,
    pub y: f64,
    pub w: f64,
    pub h: f64,
}

impl Rect {
    pub fn right(&self) -> f64 {
        self.x + self.w
    }

    pub fn bottom(&self) -> f64 {
        self.y + self.h
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SvgScene {
    pub width: f64,
    pub height: f64,
    pub title: String,
    pub font_family: String,
    pub elements: Vec<Element>,
    ids: HashSet<String>,
}

/// Shortest round-trip representation; negative zero prints as `0`.
pub fn fmt_num(v: f64) -> String {
    if v == 0.0 {
        "0".to_string()
    } else {
        v.to_string()
    }
}

fn escape(s: &str) -> String {
    let mut out = String::with_capacity(s.len());
    for c in s.chars() {
        match c {
            '&' => out.push_str("&amp;"),
            '<' => out.push_str("&lt;"),
            '>' => out.push_str("&gt;"),
            '"' => out.push_str("&quot;"),
            '\'' => out.push_str("&apos;"),
            c => out.push(c),
        }
    }
    out
}

/// Turns arbitrary text into an id fragment.
pub fn slug(s: &str) -> String {
    s.chars().map(|c| if c.is_ascii_alphanumeric() { c.to_ascii_lowercase() } else { '-' }).collect()
}

impl SvgScene {
    pub fn new(width: f64, height: f64, title: &str, font_family: &str) -> Self {
        SvgScene {
            width,
            height,
            title: title.to_string(),
            font_family: font_family.to_string(),
            elements: Vec::new(),
            ids: HashSet::new(),
        }
    }

    /// Adds an element. Panics on a duplicate id, which is a renderer bug.
    pub fn push(&mut self, id: impl Into<String>, shape: Shape, style: Style) {
        let id = id.into();
        assert!(self.ids.insert(id.clone()), "duplicate element id {id}");
        self.elements.push(Element { id, shape, style });
    }

    pub fn rect(&mut self, id: impl Into<String>, r: Rect, style: Style) {
        self.push(id, Shape::Rect { x: r.x, y: r.y, w: r.w, h: r.h }, style);
    }

    pub fn line(&mut self, id: impl Into<String>, p: (f64, f64), q: (f64, f64), style: Style) {
        self.push(id, Shape::Line { x1: p.0, y1: p.1, x2: q.0, y2: q.1 }, style);
    }

    pub fn text(&mut self, id: impl Into<String>, x: f64, y: f64, text: &str, anchor: Anchor, size: f64) {
        self.push(
            id,
            Shape::Text { x, y, text: text.to_string(), anchor, size, rotate: false },
            Style::new().fill("#222222"),
        );
    }

    pub fn get(&self, id: &str) -> Option<&Element> {
        self.elements.iter().find(|e| e.id == id)
    }

    /// Checks that coordinates are finite and inside the canvas and ids unique.
    pub fn validate(&self) -> Result<()> {
        let eps = 1e-9;
        let mut seen = HashSet::new();
        for e in &self.elements {
            if !seen.insert(&e.id) {
                return Err(HceError::invalid(format!("duplicate id {}", e.id)));
            }
            if let Shape::Rect { w, h, .. } = e.shape {
                if w < 0.0 || h < 0.0 {
                    return Err(HceError::invalid(format!("{}: negative rectangle size", e.id)));
                }
            }
            for (x, y) in e.shape.points() {
                if !(x.is_finite() && y.is_finite()) {
                    return Err(HceError::invalid(format!("{}: non-finite coordinate", e.id)));
                }
                if x < -eps || y < -eps || x > self.width + eps || y > self.height + eps {
                    return Err(HceError::invalid(format!("{}: ({x}, {y}) outside the canvas", e.id)));
                }
            }
        }
        Ok(())
    }

    pub fn to_svg(&self) -> String {
        let mut s = String::new();
        let (w, h) = (fmt_num(self.width), fmt_num(self.height));
        let _ = writeln!(s, r#"<?xml version="1.0" encoding="UTF-8"?>"#);
        let _ = writeln!(
            s,
            r#"<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{w}" height="{h}" viewBox="0 0 {w} {h}" font-family="{}">"#,
            escape(&self.font_family)
        );
        let _ = writeln!(s, "<title>{}</title>", escape(&self.title));
        let _ = writeln!(s, r##"<rect id="background" x="0" y="0" width="{w}" height="{h}" fill="#ffffff"/>"##);
        for e in &self.elements {
            write_element(&mut s, e);
        }
        s.push_str("</svg>\n");
        s
    }
}

fn pts(points: &[(f64, f64)]) -> String {
    points.iter().map(|(x, y)| format!("{},{}", fmt_num(*x), fmt_num(*y))).collect::<Vec<_>>().join(" ")
}

fn write_element(s: &mut String, e: &Element) {
    let mut style = String::new();
    for (k, v) in &e.style.0 {
        let _ = write!(style, r#" {k}="{}""#, escape(v));
    }
    let id = escape(&e.id);
    let _ = match &e.shape {
        Shape::Rect { x, y, w, h } => writeln!(
            s,
            r#"<rect id="{id}" x="{}" y="{}" width="{}" height="{}"{style}/>"#,
            fmt_num(*x),
            fmt_num(*y),
            fmt_num(*w),
            fmt_num(*h)
        ),
        Shape::Line { x1, y1, x2, y2 } => writeln!(
            s,
            r#"<line id="{id}" x1="{}" y1="{}" x2="{}" y2="{}"{style}/>"#,
            fmt_num(*x1),
            fmt_num(*y1),
            fmt_num(*x2),
            fmt_num(*y2)
        ),
        Shape::Polyline(p) => writeln!(s, r#"<polyline id="{id}" points="{}"{style}/>"#, pts(p)),
        Shape::Polygon(p) => writeln!(s, r#"<polygon id="{id}" points="{}"{style}/>"#, pts(p)),
        Shape::Path(cmds) => {
            let d: Vec<String> = cmds
                .iter()
                .map(|c| match c {
                    PathCmd::MoveTo(x, y) => format!("M{},{}", fmt_num(*x), fmt_num(*y)),
                    PathCmd::LineTo(x, y) => format!("L{},{}", fmt_num(*x), fmt_num(*y)),
                    PathCmd::Close => "Z".to_string(),
                })
                .collect();
            writeln!(s, r#"<path id="{id}" d="{}"{style}/>"#, d.join(" "))
        }
        Shape::Text { x, y, text, anchor, size, rotate } => {
            let anchor = match anchor {
                Anchor::Start => "start",
                Anchor::Middle => "middle",
                Anchor::End => "end",
            };
            let transform = if *rotate {
                format!(r#" transform="rotate(-90 {} {})""#, fmt_num(*x), fmt_num(*y))
            } else {
                String::new()
            };
            writeln!(
                s,
                r#"<text id="{id}" x="{}" y="{}" text-anchor="{anchor}" font-size="{}"{transform}{style}>{}</text>"#,
                fmt_num(*x),
                fmt_num(*y),
                fmt_num(*size),
                escape(text)
            )
        }
        Shape::Circle { cx, cy, r } => {
            writeln!(s, r#"<circle id="{id}" cx="{}" cy="{}" r="{}"{style}/>"#, fmt_num(*cx), fmt_num(*cy), fmt_num(*r))
        }
    };
}

/// Shoelace area of a closed polygon (absolute value).
pub fn polygon_area(points: &[(f64, f64)]) -> f64 {
    let n = points.len();
    let mut acc = 0.0;
    for i in 0..n {
        let (x0, y0) = points[i];
        let (x1, y1) = points[(i + 1) % n];
        acc += x0 * y1 - x1 * y0;
    }
    acc.abs() / 2.0
}
