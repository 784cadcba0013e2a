//! Contour map of win odds over hazard ratio (x) and mean difference (y).

use serde::Serialize;

use super::contour::extract_iso_contour;
use super::svg::{Anchor, Rect, Shape, Style, SvgScene};
use super::{nice_ticks, tick_label, x_axis, y_axis, LinearScale, PlotTheme, Rendered};
use crate::design::{FeasibilityOverlay, SunsetGrid};
use crate::error::{HceError, Result};

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SunsetAnchor {
    pub hr: f64,
    pub delta: f64,
    pub label: String,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SunsetOptions {
    pub iso_levels: Vec<f64>,
    /// Level drawn as a solid grey line.
    pub highlight: Option<f64>,
    /// Win odds at or below `clamp.0` get the no-effect color, at or above `clamp.1` the strong-effect color.
    pub clamp: (f64, f64),
}

impl Default for SunsetOptions {
    fn default() -> Self {
        SunsetOptions { iso_levels: crate::design::default_iso_levels(), highlight: Some(1.2), clamp: (1.0, 1.86) }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ContourMeta {
    pub level: f64,
    pub highlight: bool,
    /// Polylines in grid coordinates `(column, row)`.
    pub grid_polylines: Vec<Vec<(f64, f64)>>,
    /// Same polylines in `(hr, delta)`.
    pub data_polylines: Vec<Vec<(f64, f64)>>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SunsetMeta {
    pub kind: &'static str,
    pub plot_area: Rect,
    pub hr_range: (f64, f64),
    pub delta_range: (f64, f64),
    pub value_range: (f64, f64),
    pub contours: Vec<ContourMeta>,
    pub skipped_levels: Vec<f64>,
    pub anchors: Vec<SunsetAnchor>,
    pub overlay_points: usize,
    pub overlay_polygon: bool,
    pub warnings: Vec<String>,
}

fn axis_value(axis: &[f64], pos: f64) -> f64 {
    let i = (pos.floor() as usize).min(axis.len() - 2);
    axis[i] + (pos - i as f64) * (axis[i + 1] - axis[i])
}

/// Cell boundaries halfway between nodes, clipped to the axis ends.
fn cell_edges(axis: &[f64]) -> Vec<f64> {
    let mut e = vec![axis[0]];
    e.extend(axis.windows(2).map(|w| (w[0] + w[1]) / 2.0));
    e.push(*axis.last().unwrap());
    e
}

pub fn render_sunset(
    grid: &SunsetGrid,
    opts: &SunsetOptions,
    anchors: &[SunsetAnchor],
    overlay: Option<&FeasibilityOverlay>,
    theme: &PlotTheme,
) -> Result<Rendered<SunsetMeta>> {
    let (rows, cols) = (grid.delta_axis.len(), grid.hr_axis.len());
    if rows < 2 || cols < 2 || grid.values.len() != rows || grid.values.iter().any(|r| r.len() != cols) {
        return Err(HceError::invalid("sunset grid must be at least 2 x 2 with matching axes"));
    }
    if grid.values.iter().flatten().any(|v| !v.is_finite()) {
        return Err(HceError::invalid("sunset grid contains non-finite values"));
    }
    let mut levels = opts.iso_levels.clone();
    if levels.iter().any(|l| !l.is_finite()) {
        return Err(HceError::invalid("iso levels must be finite"));
    }
    levels.sort_by(f64::total_cmp);
    levels.dedup();

    let area = Rect { x: 80.0, y: 50.0, w: 560.0, h: 480.0 };
    let (width, height) = (area.right() + 130.0, area.bottom() + 60.0);
    let (h0, h1) = (grid.hr_axis[0], grid.hr_axis[cols - 1]);
    let (d0, d1) = (grid.delta_axis[0], grid.delta_axis[rows - 1]);
    let xs = LinearScale::new((h0, h1), (area.x, area.right()));
    let ys = LinearScale::new((d0, d1), (area.bottom(), area.y));
    let mut scene = SvgScene::new(width, height, "Sunset plot of win odds", &theme.font_family);
    let mut warnings = Vec::new();

    let band_color = |b: usize| {
        let rep = if b == 0 {
            opts.clamp.0
        } else if b == levels.len() {
            opts.clamp.1
        } else {
            (levels[b - 1] + levels[b]) / 2.0
        };
        theme.sunset_color(rep, opts.clamp.0, opts.clamp.1).hex()
    };
    let band_of = |v: f64| levels.iter().filter(|&&l| l <= v).count();
    let (he, de) = (cell_edges(&grid.hr_axis), cell_edges(&grid.delta_axis));
    for r in 0..rows {
        for c in 0..cols {
            let (x0, x1) = (xs.map(he[c]), xs.map(he[c + 1]));
            let (y0, y1) = (ys.map(de[r + 1]), ys.map(de[r]));
            let color = band_color(band_of(grid.values[r][c]));
            scene.rect(
                format!("cell-{r}-{c}"),
                Rect { x: x0, y: y0, w: x1 - x0, h: y1 - y0 },
                Style::new().fill(&color).attr("stroke", &color).attr("stroke-width", "0.3"),
            );
        }
    }

    let (vmin, vmax) = (grid.min_value(), grid.max_value());
    let mut draw: Vec<(f64, bool)> =
        levels.iter().map(|&l| (l, opts.highlight.is_some_and(|h| (h - l).abs() < 1e-12))).collect();
    if let Some(h) = opts.highlight {
        if !draw.iter().any(|d| d.1) {
            draw.push((h, true));
        }
    }
    let mut contours = Vec::new();
    let mut skipped = Vec::new();
    for (idx, &(level, hl)) in draw.iter().enumerate() {
        if level < vmin || level > vmax {
            warnings.push(format!("iso level {level} outside the grid range [{vmin:.4}, {vmax:.4}]; skipped"));
            skipped.push(level);
            continue;
        }
        let grid_lines = extract_iso_contour(&grid.values, level);
        let data_lines: Vec<Vec<(f64, f64)>> = grid_lines
            .iter()
            .map(|l| l.iter().map(|&(c, r)| (axis_value(&grid.hr_axis, c), axis_value(&grid.delta_axis, r))).collect())
            .collect();
        for (j, l) in data_lines.iter().enumerate() {
            let pts: Vec<(f64, f64)> = l.iter().map(|&(h, d)| (xs.map(h), ys.map(d))).collect();
            let (id, style) = if hl {
                (format!("iso-highlight-{j}"), Style::new().fill("none").stroke("#7f7f7f", 3.0))
            } else {
                (format!("iso-{idx}-{j}"), Style::new().fill("none").stroke("#ffffff", 0.8))
            };
            scene.push(id, Shape::Polyline(pts), style);
        }
        contours.push(ContourMeta { level, highlight: hl, grid_polylines: grid_lines, data_polylines: data_lines });
    }

    let inside = |h: f64, d: f64| h >= h0 && h <= h1 && d >= d0 && d <= d1;
    let (mut n_points, mut has_poly) = (0, false);
    if let Some(ov) = overlay {
        if let Some(poly) = &ov.polygon {
            let pts: Vec<(f64, f64)> = poly.iter().map(|&(h, d)| (xs.map_clamped(h), ys.map_clamped(d))).collect();
            if poly.iter().any(|&(h, d)| !inside(h, d)) {
                warnings.push("overlay polygon clipped to the grid range".into());
            }
            scene.push(
                "overlay-polygon",
                Shape::Polygon(pts),
                Style::new().fill("#404040").opacity(0.25).stroke("#202020", 1.5).dashed("6 3"),
            );
            has_poly = true;
        }
        for (i, p) in ov.points.iter().enumerate() {
            if !inside(p.hr, p.delta) {
                warnings.push(format!("overlay point ({}, {}) outside the grid; skipped", p.hr, p.delta));
                continue;
            }
            let (x, y) = (xs.map(p.hr), ys.map(p.delta));
            scene.push(
                format!("overlay-point-{i}"),
                Shape::Circle { cx: x, cy: y, r: 4.0 },
                Style::new().fill("#ffffff").stroke("#202020", 1.5),
            );
            if let Some(label) = &p.label {
                scene.text(format!("overlay-label-{i}"), x + 6.0, y - 6.0, label, Anchor::Start, 10.0);
            }
            n_points += 1;
        }
    }
    let mut drawn_anchors = Vec::new();
    for (i, a) in anchors.iter().enumerate() {
        if !inside(a.hr, a.delta) {
            warnings.push(format!("anchor ({}, {}) outside the grid; skipped", a.hr, a.delta));
            continue;
        }
        let (x, y) = (xs.map(a.hr), ys.map(a.delta));
        scene.push(
            format!("anchor-{i}"),
            Shape::Circle { cx: x, cy: y, r: 5.0 },
            Style::new().fill("#000000").stroke("#ffffff", 1.5),
        );
        scene.text(format!("anchor-label-{i}"), x + 8.0, y + 4.0, &a.label, Anchor::Start, 11.0);
        drawn_anchors.push(a.clone());
    }

    x_axis(&mut scene, "x", &xs, area.bottom(), &nice_ticks(h0, h1, 6), tick_label);
    y_axis(&mut scene, "y", &ys, area.x, &nice_ticks(d0, d1, 6), tick_label);
    scene.text(
        "x-title",
        area.x + area.w / 2.0,
        height - 14.0,
        "Hazard ratio (event components)",
        Anchor::Middle,
        theme.font_size,
    );
    scene.push(
        "y-title",
        Shape::Text {
            x: 20.0,
            y: area.y + area.h / 2.0,
            text: "Mean difference (continuous component)".into(),
            anchor: Anchor::Middle,
            size: theme.font_size,
            rotate: true,
        },
        Style::new().fill("#222222"),
    );
    scene.text(
        "title",
        area.x,
        30.0,
        &format!(
            "Win odds, p(event) = {}, SD = {}",
            tick_label(grid.params.p_event_control),
            tick_label(grid.params.sd)
        ),
        Anchor::Start,
        theme.font_size + 1.0,
    );
    // legend: one swatch per band, strongest effect on top
    let lx = area.right() + 16.0;
    let n_bands = levels.len() + 1;
    for b in (0..n_bands).rev() {
        let row = (n_bands - 1 - b) as f64;
        let y = area.y + row * 18.0;
        let color = band_color(b);
        let label = if b == 0 {
            format!("< {}", levels.first().map_or("-".into(), |l| format!("{l:.2}")))
        } else {
            format!("\u{2265} {:.2}", levels[b - 1])
        };
        scene.rect(format!("legend-swatch-{b}"), Rect { x: lx, y, w: 14.0, h: 14.0 }, Style::new().fill(&color));
        scene.text(format!("legend-label-{b}"), lx + 20.0, y + 11.0, &label, Anchor::Start, 10.0);
    }

    let meta = SunsetMeta {
        kind: "sunset",
        plot_area: area,
        hr_range: (h0, h1),
        delta_range: (d0, d1),
        value_range: (vmin, vmax),
        contours,
        skipped_levels: skipped,
        anchors: drawn_anchors,
        overlay_points: n_points,
        overlay_polygon: has_poly,
        warnings,
    };
    scene.validate()?;
    Ok(Rendered { scene, meta })
}
