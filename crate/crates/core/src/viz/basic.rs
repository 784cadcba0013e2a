//! Shift plot, binary bars and the stacked mosaic.

use serde::Serialize;

use super::kde::{box_stats, gaussian_kde, BoxStats};
use super::svg::{Anchor, Rect, Style, SvgScene};
use super::{draw_violin, nice_ticks, padded, tick_label, y_axis, LinearScale, Orientation, PlotTheme, Rendered};
use crate::error::{HceError, Result};
use crate::win::Marginals;

fn plot_area(theme: &PlotTheme, width: f64, height: f64) -> Rect {
    let m = &theme.margins;
    Rect { x: m.left, y: m.top, w: width - m.left - m.right, h: height - m.top - m.bottom }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ShiftMeta {
    pub kind: &'static str,
    pub plot_area: Rect,
    pub mean_active: f64,
    pub mean_control: f64,
    /// Band extent in data units.
    pub band_lo: f64,
    pub band_hi: f64,
    pub band_height_px: f64,
    pub bandwidth_active: f64,
    pub bandwidth_control: f64,
    pub box_active: BoxStats,
    pub box_control: BoxStats,
}

/// Violin and box per arm with a grey band spanning the two means.
pub fn render_shift_plot(active: &[f64], control: &[f64], theme: &PlotTheme) -> Result<Rendered<ShiftMeta>> {
    let kde_a = gaussian_kde(active).map_err(|e| HceError::invalid(format!("active arm: {e}")))?;
    let kde_c = gaussian_kde(control).map_err(|e| HceError::invalid(format!("control arm: {e}")))?;
    let (box_a, box_c) = (box_stats(active)?, box_stats(control)?);
    let (width, height) = (560.0, 480.0);
    let area = plot_area(theme, width, height);
    let mut scene = SvgScene::new(width, height, "Shift in distributions", &theme.font_family);

    let lo = active.iter().chain(control).cloned().fold(f64::INFINITY, f64::min);
    let hi = active.iter().chain(control).cloned().fold(f64::NEG_INFINITY, f64::max);
    let (d0, d1) = padded(lo, hi, 0.05);
    let ys = LinearScale::new((d0, d1), (area.bottom(), area.y));

    let (band_lo, band_hi) = (box_a.mean.min(box_c.mean), box_a.mean.max(box_c.mean));
    let (y_top, y_bottom) = (ys.map(band_hi), ys.map(band_lo));
    if band_hi > band_lo {
        scene.rect(
            "mean-band",
            Rect { x: area.x, y: y_top, w: area.w, h: y_bottom - y_top },
            Style::new().fill("#9e9e9e").opacity(0.4),
        );
    } else {
        scene.line("mean-band", (area.x, y_top), (area.right(), y_top), Style::new().stroke("#9e9e9e", 2.0));
    }

    let ticks = nice_ticks(d0, d1, 6);
    y_axis(&mut scene, "y", &ys, area.x, &ticks, tick_label);
    let half = area.w / 6.0;
    let arms = [
        ("active", "Active", &kde_a, &box_a, theme.active, 1.0),
        ("control", "Control", &kde_c, &box_c, theme.control, 2.0),
    ];
    for (id, label, kde, bx, color, slot) in arms {
        let cx = area.x + area.w * slot / 3.0;
        draw_violin(&mut scene, id, kde, bx, &ys, cx, half, Orientation::Vertical, &color.hex());
        scene.line(
            format!("{id}-mean"),
            (cx - half, ys.map(bx.mean)),
            (cx + half, ys.map(bx.mean)),
            Style::new().stroke("#555555", 1.0).dashed("4 3"),
        );
        scene.text(format!("{id}-label"), cx, area.bottom() + 24.0, label, Anchor::Middle, theme.font_size);
    }
    scene.text(
        "title",
        width / 2.0,
        24.0,
        "Shift in distributions (grey: difference in means)",
        Anchor::Middle,
        theme.font_size + 2.0,
    );

    let meta = ShiftMeta {
        kind: "shift",
        plot_area: area,
        mean_active: box_a.mean,
        mean_control: box_c.mean,
        band_lo,
        band_hi,
        band_height_px: y_bottom - y_top,
        bandwidth_active: kde_a.bandwidth,
        bandwidth_control: kde_c.bandwidth,
        box_active: box_a,
        box_control: box_c,
    };
    scene.validate()?;
    Ok(Rendered { scene, meta })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BinaryMeta {
    pub kind: &'static str,
    pub plot_area: Rect,
    pub p_active: f64,
    pub p_control: f64,
    pub band_lo: f64,
    pub band_hi: f64,
    pub band_height_px: f64,
}

/// Event-proportion bars with a band between the two proportions.
pub fn render_binary_bar(active: (u64, u64), control: (u64, u64), theme: &PlotTheme) -> Result<Rendered<BinaryMeta>> {
    for (name, (events, total)) in [("active", active), ("control", control)] {
        if total == 0 {
            return Err(HceError::invalid(format!("{name} arm has zero subjects")));
        }
        if events > total {
            return Err(HceError::invalid(format!("{name} arm has more events than subjects")));
        }
    }
    let p_a = active.0 as f64 / active.1 as f64;
    let p_c = control.0 as f64 / control.1 as f64;
    let (width, height) = (480.0, 440.0);
    let area = plot_area(theme, width, height);
    let mut scene = SvgScene::new(width, height, "Event proportions", &theme.font_family);
    let ys = LinearScale::new((0.0, 1.0), (area.bottom(), area.y));

    let (band_lo, band_hi) = (p_a.min(p_c), p_a.max(p_c));
    let (y_top, y_bottom) = (ys.map(band_hi), ys.map(band_lo));
    let bar_w = area.w / 4.0;
    let bars = [
        ("active", "Active", p_a, active, theme.active, 1.0),
        ("control", "Control", p_c, control, theme.control, 2.0),
    ];
    for (id, label, p, (events, total), color, slot) in bars {
        let cx = area.x + area.w * slot / 3.0;
        let top = ys.map(p);
        scene.rect(
            format!("{id}-bar"),
            Rect { x: cx - bar_w / 2.0, y: top, w: bar_w, h: area.bottom() - top },
            Style::new().fill(&color.hex()),
        );
        scene.text(
            format!("{id}-pct"),
            cx,
            (top - 6.0).max(14.0),
            &format!("{:.1}% ({events}/{total})", 100.0 * p),
            Anchor::Middle,
            11.0,
        );
        scene.text(format!("{id}-label"), cx, area.bottom() + 24.0, label, Anchor::Middle, theme.font_size);
    }
    if band_hi > band_lo {
        scene.rect(
            "difference-band",
            Rect { x: area.x, y: y_top, w: area.w, h: y_bottom - y_top },
            Style::new().fill("#9e9e9e").opacity(0.45),
        );
    } else {
        scene.line("difference-band", (area.x, y_top), (area.right(), y_top), Style::new().stroke("#9e9e9e", 2.0));
    }
    let ticks = nice_ticks(0.0, 1.0, 5);
    y_axis(&mut scene, "y", &ys, area.x, &ticks, |v| format!("{:.0}%", v * 100.0));
    scene.text(
        "title",
        width / 2.0,
        24.0,
        "Proportion with event (grey: difference)",
        Anchor::Middle,
        theme.font_size + 2.0,
    );
    let meta = BinaryMeta {
        kind: "binary",
        plot_area: area,
        p_active: p_a,
        p_control: p_c,
        band_lo,
        band_hi,
        band_height_px: y_bottom - y_top,
    };
    scene.validate()?;
    Ok(Rendered { scene, meta })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Segment {
    pub arm: &'static str,
    /// 1-based category, 1 = worst.
    pub category: usize,
    pub proportion: f64,
    pub y: f64,
    pub height: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MosaicMeta {
    pub kind: &'static str,
    pub plot_area: Rect,
    pub bar_height_px: f64,
    pub split_index: Option<usize>,
    pub gap_px: f64,
    /// Categories after which a gap was drawn.
    pub gaps_after: Vec<usize>,
    pub segments: Vec<Segment>,
}

pub(crate) fn check_normalized(m: &Marginals) -> Result<()> {
    if m.active.len() != m.control.len() || m.is_empty() {
        return Err(HceError::invalid("arms must share a non-empty category list"));
    }
    for (name, p) in [("active", &m.active), ("control", &m.control)] {
        if p.iter().any(|x| !(x.is_finite() && *x >= 0.0)) {
            return Err(HceError::invalid(format!("{name} proportions must be finite and non-negative")));
        }
        let s: f64 = p.iter().sum();
        if (s - 1.0).abs() > 1e-9 {
            return Err(HceError::invalid(format!("{name} proportions sum to {s}, not 1")));
        }
    }
    Ok(())
}

/// One stacked bar per arm, worst category at the bottom. With
/// `split_index = Some(k)`, a gap separates categories `1..=k` from the rest.
pub fn render_mosaic(
    marginals: &Marginals,
    labels: &[String],
    split_index: Option<usize>,
    theme: &PlotTheme,
) -> Result<Rendered<MosaicMeta>> {
    check_normalized(marginals)?;
    let k = marginals.len();
    if labels.len() != k {
        return Err(HceError::invalid(format!("{} labels for {k} categories", labels.len())));
    }
    if let Some(s) = split_index {
        if s == 0 || s >= k {
            return Err(HceError::invalid(format!("split index {s} must be between 1 and {}", k - 1)));
        }
    }
    let (width, height) = (620.0, 520.0);
    let area = Rect {
        x: theme.margins.left,
        y: theme.margins.top,
        w: width - theme.margins.left - 200.0,
        h: height - theme.margins.top - theme.margins.bottom,
    };
    let gap_px = if split_index.is_some() { 12.0 } else { 0.0 };
    let bar_h = area.h - gap_px;
    let mut scene = SvgScene::new(width, height, "Mosaic of HCE categories", &theme.font_family);
    let ramp = theme.severity_ramp(k);
    let bar_w = area.w / 4.0;
    let mut segments = Vec::new();
    for (arm, label, props, slot) in
        [("active", "Active", &marginals.active, 1.0), ("control", "Control", &marginals.control, 2.0)]
    {
        let x = area.x + area.w * slot / 3.0 - bar_w / 2.0;
        let mut bottom = area.bottom();
        for (i, &p) in props.iter().enumerate() {
            let h = p * bar_h;
            let y = bottom - h;
            scene.rect(
                format!("{arm}-seg-{}", i + 1),
                Rect { x, y, w: bar_w, h },
                Style::new().fill(&ramp[i].hex()).stroke("#ffffff", 0.5),
            );
            if h >= 12.0 {
                let fill = if ramp[i].luminance() < 0.3 { "#ffffff" } else { "#222222" };
                scene.push(
                    format!("{arm}-seg-{}-pct", i + 1),
                    super::Shape::Text {
                        x: x + bar_w / 2.0,
                        y: y + h / 2.0 + 4.0,
                        text: format!("{:.1}%", 100.0 * p),
                        anchor: Anchor::Middle,
                        size: 10.0,
                        rotate: false,
                    },
                    Style::new().fill(fill),
                );
            }
            segments.push(Segment { arm, category: i + 1, proportion: p, y, height: h });
            bottom = y;
            if split_index == Some(i + 1) {
                bottom -= gap_px;
            }
        }
        scene.text(
            format!("{arm}-label"),
            x + bar_w / 2.0,
            area.bottom() + 24.0,
            label,
            Anchor::Middle,
            theme.font_size,
        );
    }
    // legend, best category on top
    let lx = area.right() + 20.0;
    for i in (0..k).rev() {
        let row = (k - 1 - i) as f64;
        let y = area.y + row * 20.0;
        scene.rect(
            format!("legend-swatch-{}", i + 1),
            Rect { x: lx, y, w: 14.0, h: 14.0 },
            Style::new().fill(&ramp[i].hex()),
        );
        scene.text(
            format!("legend-label-{}", i + 1),
            lx + 20.0,
            y + 11.0,
            &format!("{}. {}", i + 1, labels[i]),
            Anchor::Start,
            11.0,
        );
    }
    scene.text(
        "title",
        width / 2.0,
        24.0,
        "HCE categories per arm (darker = worse)",
        Anchor::Middle,
        theme.font_size + 2.0,
    );
    let meta = MosaicMeta {
        kind: "mosaic",
        plot_area: area,
        bar_height_px: bar_h,
        split_index,
        gap_px,
        gaps_after: split_index.into_iter().collect(),
        segments,
    };
    scene.validate()?;
    Ok(Rendered { scene, meta })
}
