//! SVG renderers for the HCE figure families.
//!
//! Every renderer returns a [`Rendered`] scene plus a serializable metadata
//! record (band widths, region areas, adjustments, warnings) that is written
//! next to the SVG as a sidecar JSON file.

mod basic;
mod components;
mod contour;
mod kde;
mod maraca;
mod mosaic2d;
mod sunset;
mod svg;
mod theme;

pub use basic::{render_binary_bar, render_mosaic, render_shift_plot, BinaryMeta, MosaicMeta, Segment, ShiftMeta};
pub use components::{render_component_plot, ComponentMeta, ComponentRowMeta};
pub use contour::extract_iso_contour;
pub use kde::{box_stats, gaussian_kde, quantile, silverman_bandwidth, BoxStats, Kde, KDE_POINTS, MIN_KDE_VALUES};
pub use maraca::{render_maraca, MaracaMeta, SLIVER_FRACTION};
pub use mosaic2d::{render_mosaic_2d, Mosaic2dMeta, TieMode};
pub use sunset::{render_sunset, SunsetAnchor, SunsetMeta, SunsetOptions};
pub use svg::{fmt_num, polygon_area, slug, Anchor, Element, PathCmd, Rect, Shape, Style, SvgScene};
pub use theme::{Margins, PlotTheme, Rgb};

use serde::Serialize;

/// A scene and its metadata sidecar.
#[derive(Debug, Clone)]
pub struct Rendered<M> {
    pub scene: SvgScene,
    pub meta: M,
}

impl<M: Serialize> Rendered<M> {
    pub fn svg(&self) -> String {
        self.scene.to_svg()
    }

    pub fn meta_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(&self.meta).expect("metadata serializes");
        s.push('\n');
        s
    }
}

/// Affine map from a data interval onto a pixel interval.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LinearScale {
    pub d0: f64,
    pub d1: f64,
    pub r0: f64,
    pub r1: f64,
}

impl LinearScale {
    pub fn new(domain: (f64, f64), range: (f64, f64)) -> Self {
        LinearScale { d0: domain.0, d1: domain.1, r0: range.0, r1: range.1 }
    }

    pub fn map(&self, v: f64) -> f64 {
        if self.d1 == self.d0 {
            return (self.r0 + self.r1) / 2.0;
        }
        self.r0 + (v - self.d0) / (self.d1 - self.d0) * (self.r1 - self.r0)
    }

    pub fn map_clamped(&self, v: f64) -> f64 {
        let (lo, hi) = (self.r0.min(self.r1), self.r0.max(self.r1));
        self.map(v).clamp(lo, hi)
    }
}

/// Pads a data range by `frac` on each side; a zero-width range is widened by one unit.
pub(crate) fn padded(lo: f64, hi: f64, frac: f64) -> (f64, f64) {
    if hi > lo {
        let p = (hi - lo) * frac;
        (lo - p, hi + p)
    } else {
        (lo - 1.0, hi + 1.0)
    }
}

/// About `n` round tick values covering `[lo, hi]`.
pub(crate) fn nice_ticks(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    if hi.is_nan() || lo.is_nan() || hi <= lo {
        return vec![lo];
    }
    let raw = (hi - lo) / n.max(1) as f64;
    let mag = 10f64.powf(raw.log10().floor());
    let step = [1.0, 2.0, 2.5, 5.0, 10.0].iter().map(|m| m * mag).find(|s| *s >= raw).unwrap_or(10.0 * mag);
    let first = (lo / step).ceil() as i64;
    let last = (hi / step).floor() as i64;
    (first..=last).map(|i| i as f64 * step).map(|v| if v.abs() < step * 1e-9 { 0.0 } else { v }).collect()
}

/// Short tick label: up to three decimals, trailing zeros trimmed.
pub(crate) fn tick_label(v: f64) -> String {
    let s = format!("{v:.3}");
    let s = s.trim_end_matches('0').trim_end_matches('.');
    if s == "-0" {
        "0".into()
    } else {
        s.into()
    }
}

/// Interval label like `WO 1.22 (1.10–1.35)`.
pub fn wo_annotation(est: f64, lo: f64, hi: f64) -> String {
    let f = |v: f64| {
        if v.is_finite() {
            format!("{v:.2}")
        } else if v > 0.0 {
            "inf".into()
        } else {
            "-inf".into()
        }
    };
    format!("WO {} ({}\u{2013}{})", f(est), f(lo), f(hi))
}

/// Win share label like `55% vs 45%`; the two parts always sum to 100.
pub fn share_annotation(theta: f64) -> String {
    let w = (theta * 100.0).round();
    format!("{w:.0}% vs {:.0}%", 100.0 - w)
}

pub(crate) fn axis_line(scene: &mut SvgScene, id: &str, p: (f64, f64), q: (f64, f64)) {
    scene.line(id, p, q, Style::new().stroke("#444444", 1.0));
}

/// Vertical axis at `x` with ticks for `ticks` mapped by `scale`.
pub(crate) fn y_axis(
    scene: &mut SvgScene,
    prefix: &str,
    scale: &LinearScale,
    x: f64,
    ticks: &[f64],
    fmt: impl Fn(f64) -> String,
) {
    axis_line(scene, &format!("{prefix}-axis"), (x, scale.r0), (x, scale.r1));
    for (i, &t) in ticks.iter().enumerate() {
        let y = scale.map(t);
        scene.line(format!("{prefix}-tick-{i}"), (x - 4.0, y), (x, y), Style::new().stroke("#444444", 1.0));
        scene.text(format!("{prefix}-tick-label-{i}"), x - 6.0, y + 4.0, &fmt(t), Anchor::End, 10.0);
    }
}

/// Horizontal axis at `y`.
pub(crate) fn x_axis(
    scene: &mut SvgScene,
    prefix: &str,
    scale: &LinearScale,
    y: f64,
    ticks: &[f64],
    fmt: impl Fn(f64) -> String,
) {
    axis_line(scene, &format!("{prefix}-axis"), (scale.r0, y), (scale.r1, y));
    for (i, &t) in ticks.iter().enumerate() {
        let x = scale.map(t);
        scene.line(format!("{prefix}-tick-{i}"), (x, y), (x, y + 4.0), Style::new().stroke("#444444", 1.0));
        scene.text(format!("{prefix}-tick-label-{i}"), x, y + 16.0, &fmt(t), Anchor::Middle, 10.0);
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) enum Orientation {
    /// Values along y.
    Vertical,
    /// Values along x.
    Horizontal,
}

/// Violin outline plus box, whiskers and median, centered at `center` on the
/// cross axis.
#[allow(clippy::too_many_arguments)]
pub(crate) fn draw_violin(
    scene: &mut SvgScene,
    prefix: &str,
    kde: &Kde,
    bx: &BoxStats,
    value_scale: &LinearScale,
    center: f64,
    half_width: f64,
    orient: Orientation,
    fill: &str,
) {
    let dmax = kde.max_density();
    let place = |v: f64, off: f64| match orient {
        Orientation::Vertical => (center + off, value_scale.map(v)),
        Orientation::Horizontal => (value_scale.map(v), center + off),
    };
    let mut outline: Vec<(f64, f64)> =
        kde.xs.iter().zip(&kde.density).map(|(&x, &d)| place(x, half_width * d / dmax)).collect();
    outline.extend(kde.xs.iter().zip(&kde.density).rev().map(|(&x, &d)| place(x, -half_width * d / dmax)));
    scene.push(
        format!("{prefix}-violin"),
        Shape::Polygon(outline),
        Style::new().fill(fill).opacity(0.45).stroke(fill, 1.0),
    );
    let bw = half_width * 0.18;
    let (a, b) = (place(bx.q1, -bw), place(bx.q3, bw));
    let r = Rect { x: a.0.min(b.0), y: a.1.min(b.1), w: (a.0 - b.0).abs(), h: (a.1 - b.1).abs() };
    scene.line(
        format!("{prefix}-whisker-lo"),
        place(bx.whisker_lo, 0.0),
        place(bx.q1, 0.0),
        Style::new().stroke("#333333", 1.0),
    );
    scene.line(
        format!("{prefix}-whisker-hi"),
        place(bx.q3, 0.0),
        place(bx.whisker_hi, 0.0),
        Style::new().stroke("#333333", 1.0),
    );
    scene.rect(format!("{prefix}-box"), r, Style::new().fill("#ffffff").stroke("#333333", 1.0));
    scene.line(
        format!("{prefix}-median"),
        place(bx.median, -bw),
        place(bx.median, bw),
        Style::new().stroke("#000000", 2.0),
    );
}
