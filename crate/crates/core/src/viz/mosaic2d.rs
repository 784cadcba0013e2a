//! Product plot of the two arms' category distributions with the ordinal
//! dominance graph separating the win and loss regions.

use serde::{Deserialize, Serialize};

use super::basic::check_normalized;
use super::svg::{polygon_area, Anchor, Rect, Shape, Style, SvgScene};
use super::{share_annotation, wo_annotation, PlotTheme, Rendered};
use crate::error::{HceError, Result};
use crate::win::{Marginals, OdgCurve, WinStats};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TieMode {
    /// Each diagonal block is halved along its diagonal (ties split evenly).
    TriangleSplit,
    /// The supplied curve is drawn inside each block (ties broken by timing or magnitude).
    OrderedTieBreak,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CellMeta {
    /// Active category (row), 1 = worst.
    pub active_category: usize,
    /// Control category (column), 1 = worst.
    pub control_category: usize,
    pub x: f64,
    pub y: f64,
    pub w: f64,
    pub h: f64,
    pub area_fraction: f64,
    pub expected: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Mosaic2dMeta {
    pub kind: &'static str,
    pub tie_mode: TieMode,
    pub plot_area: Rect,
    pub cells: Vec<CellMeta>,
    /// Win region in pixels, as drawn.
    pub win_polygon: Vec<(f64, f64)>,
    /// Win region area over plot area.
    pub win_area: f64,
    pub loss_area: f64,
    /// Win probability reported by the supplied statistics.
    pub theta: f64,
    pub share_label: String,
    pub wo_label: String,
}

/// `K × K` grid: column widths are control proportions (worst on the left),
/// row heights active proportions (worst at the bottom). The region above the
/// curve, where the active subject is better, has area equal to the win
/// probability.
pub fn render_mosaic_2d(
    marginals: &Marginals,
    labels: &[String],
    odg: &OdgCurve,
    stats: &WinStats,
    tie_mode: TieMode,
    theme: &PlotTheme,
) -> Result<Rendered<Mosaic2dMeta>> {
    check_normalized(marginals)?;
    let k = marginals.len();
    if labels.len() != k {
        return Err(HceError::invalid(format!("{} labels for {k} categories", labels.len())));
    }
    let cum = |p: &[f64]| -> Vec<f64> {
        let mut acc = vec![0.0];
        for &x in p {
            acc.push(acc.last().unwrap() + x);
        }
        *acc.last_mut().unwrap() = 1.0;
        acc
    };
    let (cu, cv) = (cum(&marginals.control), cum(&marginals.active));
    for i in 0..=k {
        if !odg.passes_through(cu[i], cv[i], 1e-9) {
            return Err(HceError::invalid(format!(
                "curve does not pass through category corner {i} ({}, {}); marginals and curve disagree",
                cu[i], cv[i]
            )));
        }
    }

    let side = 480.0;
    let area = Rect { x: 150.0, y: 70.0, w: side, h: side };
    let (width, height) = (area.right() + 40.0, area.bottom() + 110.0);
    let px = |(u, v): (f64, f64)| (area.x + u * side, area.y + (1.0 - v) * side);
    let mut scene = SvgScene::new(width, height, "Two-dimensional mosaic", &theme.font_family);

    let curve: Vec<(f64, f64)> = match tie_mode {
        TieMode::TriangleSplit => cu.iter().zip(&cv).map(|(&u, &v)| (u, v)).collect(),
        TieMode::OrderedTieBreak => odg.vertices.clone(),
    };
    let mut win: Vec<(f64, f64)> = curve.iter().map(|&p| px(p)).collect();
    win.push(px((0.0, 1.0)));
    let mut loss: Vec<(f64, f64)> = curve.iter().map(|&p| px(p)).collect();
    loss.push(px((1.0, 0.0)));
    scene.push("loss-region", Shape::Polygon(loss.clone()), Style::new().fill(&theme.control.hex()).opacity(0.55));
    scene.push("win-region", Shape::Polygon(win.clone()), Style::new().fill(&theme.active.hex()).opacity(0.55));

    let mut cells = Vec::new();
    for i in 0..k {
        for j in 0..k {
            let r = Rect {
                x: area.x + cu[j] * side,
                y: area.y + (1.0 - cv[i + 1]) * side,
                w: marginals.control[j] * side,
                h: marginals.active[i] * side,
            };
            if i == j && tie_mode == TieMode::TriangleSplit && r.w > 0.0 && r.h > 0.0 {
                let (bl, tl, tr, br) = ((r.x, r.bottom()), (r.x, r.y), (r.right(), r.y), (r.right(), r.bottom()));
                scene.push(
                    format!("tie-win-{}", i + 1),
                    Shape::Polygon(vec![bl, tl, tr]),
                    Style::new().fill(&theme.active_light.hex()),
                );
                scene.push(
                    format!("tie-loss-{}", i + 1),
                    Shape::Polygon(vec![bl, br, tr]),
                    Style::new().fill(&theme.control_light.hex()),
                );
            }
            scene.rect(format!("cell-{}-{}", i + 1, j + 1), r, Style::new().fill("none").stroke("#ffffff", 1.0));
            cells.push(CellMeta {
                active_category: i + 1,
                control_category: j + 1,
                x: r.x,
                y: r.y,
                w: r.w,
                h: r.h,
                area_fraction: r.w * r.h / (side * side),
                expected: marginals.active[i] * marginals.control[j],
            });
        }
    }
    if tie_mode == TieMode::OrderedTieBreak {
        scene.push(
            "odg",
            Shape::Polyline(curve.iter().map(|&p| px(p)).collect()),
            Style::new().fill("none").stroke("#1a1a1a", 1.5),
        );
    }
    scene.line("diagonal", px((0.0, 0.0)), px((1.0, 1.0)), Style::new().stroke("#000000", 1.0));
    scene.rect("frame", area, Style::new().fill("none").stroke("#444444", 1.0));

    for j in 0..k {
        let x = area.x + (cu[j] + cu[j + 1]) / 2.0 * side;
        scene.push(
            format!("control-label-{}", j + 1),
            Shape::Text {
                x,
                y: area.bottom() + 8.0,
                text: labels[j].clone(),
                anchor: Anchor::End,
                size: 9.0,
                rotate: true,
            },
            Style::new().fill("#222222"),
        );
    }
    for i in 0..k {
        let y = area.y + (1.0 - (cv[i] + cv[i + 1]) / 2.0) * side + 3.0;
        scene.text(format!("active-label-{}", i + 1), area.x - 6.0, y, &labels[i], Anchor::End, 9.0);
    }
    scene.text(
        "control-title",
        area.x + side / 2.0,
        height - 10.0,
        "Control (worst \u{2192} best)",
        Anchor::Middle,
        theme.font_size,
    );
    scene.push(
        "active-title",
        Shape::Text {
            x: 16.0,
            y: area.y + side / 2.0,
            text: "Active (worst \u{2192} best)".into(),
            anchor: Anchor::Middle,
            size: theme.font_size,
            rotate: true,
        },
        Style::new().fill("#222222"),
    );
    let share_label = share_annotation(stats.theta.est);
    let wo_label = wo_annotation(stats.win_odds.est, stats.win_odds.lo, stats.win_odds.hi);
    scene.text("annotation-share", area.x, 28.0, &format!("Wins: {share_label}"), Anchor::Start, theme.font_size + 1.0);
    scene.text("annotation-wo", area.x, 50.0, &wo_label, Anchor::Start, theme.font_size + 1.0);

    let plot = side * side;
    let meta = Mosaic2dMeta {
        kind: "mosaic2d",
        tie_mode,
        plot_area: area,
        cells,
        win_area: polygon_area(&win) / plot,
        loss_area: polygon_area(&loss) / plot,
        win_polygon: win,
        theta: stats.theta.est,
        share_label,
        wo_label,
    };
    scene.validate()?;
    Ok(Rendered { scene, meta })
}
