//! Cumulative component plot: win/tie/loss bars beside a forest of win odds
//! and win ratios as components are added in priority order.

use serde::Serialize;

use super::svg::{Anchor, Rect, Shape, Style, SvgScene};
use super::{axis_line, tick_label, wo_annotation, LinearScale, PlotTheme, Rendered};
use crate::error::{HceError, Result};
use crate::win::CumulativeRow;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ComponentRowMeta {
    pub depth: u32,
    pub label: String,
    pub win_width: f64,
    pub tie_width: f64,
    pub loss_width: f64,
    pub wo_x: f64,
    pub wr_x: f64,
    /// Interval ends drawn at the axis edge because they fell outside it.
    pub clipped: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ComponentMeta {
    pub kind: &'static str,
    pub bar_panel: Rect,
    pub forest_panel: Rect,
    pub log_domain: (f64, f64),
    pub reference_x: f64,
    pub rows: Vec<ComponentRowMeta>,
}

fn row_label(row: &CumulativeRow) -> String {
    match row.included_components.as_slice() {
        [] => String::new(),
        [only] => only.clone(),
        [.., last] => format!("+ {last}"),
    }
}

pub fn render_component_plot(rows: &[CumulativeRow], theme: &PlotTheme) -> Result<Rendered<ComponentMeta>> {
    if rows.is_empty() {
        return Err(HceError::invalid("component plot needs at least one row"));
    }
    for (i, r) in rows.iter().enumerate() {
        if r.depth as usize != i + 1 {
            return Err(HceError::invalid("rows must be ordered by depth starting at 1"));
        }
    }
    let row_h = 34.0;
    let top = 70.0;
    let bars = Rect { x: 180.0, y: top, w: 340.0, h: row_h * rows.len() as f64 };
    let forest = Rect { x: 560.0, y: top, w: 300.0, h: bars.h };
    let (width, height) = (forest.right() + 30.0, bars.bottom() + 60.0);
    let mut scene = SvgScene::new(width, height, "Cumulative components", &theme.font_family);

    let mut lo = 1.0f64;
    let mut hi = 1.0f64;
    for r in rows {
        for e in [r.stats.win_odds, r.stats.win_ratio] {
            for v in [e.est, e.lo, e.hi] {
                if v.is_finite() && v > 0.0 {
                    lo = lo.min(v);
                    hi = hi.max(v);
                }
            }
        }
    }
    let (ln_lo, ln_hi) = (lo.ln() - 0.1, hi.ln() + 0.1);
    let xs = LinearScale::new((ln_lo, ln_hi), (forest.x, forest.right()));
    let lx = |v: f64| -> (f64, bool) {
        if v.is_finite() && v > 0.0 {
            (xs.map_clamped(v.ln()), false)
        } else if v > 0.0 {
            (forest.right(), true)
        } else {
            (forest.x, true)
        }
    };

    let mut metas = Vec::new();
    for (i, r) in rows.iter().enumerate() {
        let y = top + row_h * i as f64;
        let d = r.depth;
        let label = row_label(r);
        scene.text(format!("row-label-{d}"), bars.x - 8.0, y + row_h / 2.0 + 4.0, &label, Anchor::End, 11.0);

        let win_w = r.win_pct_active / 100.0 * bars.w;
        let tie_w = r.tie_pct / 100.0 * bars.w;
        let loss_w = r.win_pct_control / 100.0 * bars.w;
        let bar_y = y + 6.0;
        let bh = row_h - 12.0;
        let segs = [
            ("win", bars.x, win_w, theme.active, r.win_pct_active),
            ("tie", bars.x + win_w, tie_w, theme.tie, r.tie_pct),
            ("loss", bars.x + win_w + tie_w, loss_w, theme.control, r.win_pct_control),
        ];
        for (name, x, w, color, pct) in segs {
            scene.rect(format!("bar-{d}-{name}"), Rect { x, y: bar_y, w, h: bh }, Style::new().fill(&color.hex()));
            if w >= 34.0 {
                scene.text(
                    format!("bar-{d}-{name}-pct"),
                    x + w / 2.0,
                    bar_y + bh / 2.0 + 4.0,
                    &format!("{pct:.1}%"),
                    Anchor::Middle,
                    10.0,
                );
            }
        }

        let (wo_x, c1) = lx(r.stats.win_odds.est);
        let (wr_x, c2) = lx(r.stats.win_ratio.est);
        let mut clipped = c1 || c2;
        for (name, e, cy) in
            [("wo", r.stats.win_odds, y + row_h / 2.0 - 5.0), ("wr", r.stats.win_ratio, y + row_h / 2.0 + 5.0)]
        {
            let (a, ca) = lx(e.lo);
            let (b, cb) = lx(e.hi);
            clipped |= ca || cb;
            scene.line(format!("{name}-ci-{d}"), (a, cy), (b, cy), Style::new().stroke("#333333", 1.2));
        }
        scene.push(
            format!("wo-{d}"),
            Shape::Circle { cx: wo_x, cy: y + row_h / 2.0 - 5.0, r: 4.0 },
            Style::new().fill(&theme.active.hex()),
        );
        scene.rect(
            format!("wr-{d}"),
            Rect { x: wr_x - 3.5, y: y + row_h / 2.0 + 1.5, w: 7.0, h: 7.0 },
            Style::new().fill("#333333"),
        );
        metas.push(ComponentRowMeta {
            depth: d,
            label,
            win_width: win_w,
            tie_width: tie_w,
            loss_width: loss_w,
            wo_x,
            wr_x,
            clipped,
        });
    }

    let ref_x = xs.map(0.0);
    scene.line(
        "ref-line",
        (ref_x, top - 6.0),
        (ref_x, forest.bottom()),
        Style::new().stroke("#555555", 1.0).dashed("5 4"),
    );
    axis_line(&mut scene, "forest-axis", (forest.x, forest.bottom()), (forest.right(), forest.bottom()));
    let candidates: [f64; 14] = [0.1, 0.2, 0.25, 0.5, 0.67, 0.8, 1.0, 1.25, 1.5, 2.0, 3.0, 4.0, 5.0, 10.0];
    for (i, t) in candidates.iter().filter(|t| t.ln() >= ln_lo && t.ln() <= ln_hi).enumerate() {
        let x = xs.map(t.ln());
        scene.line(
            format!("forest-tick-{i}"),
            (x, forest.bottom()),
            (x, forest.bottom() + 4.0),
            Style::new().stroke("#444444", 1.0),
        );
        scene.text(format!("forest-tick-label-{i}"), x, forest.bottom() + 16.0, &tick_label(*t), Anchor::Middle, 10.0);
    }
    scene.text(
        "forest-title",
        forest.x + forest.w / 2.0,
        height - 12.0,
        "Win odds (circle) and win ratio (square), log scale",
        Anchor::Middle,
        11.0,
    );
    scene.text(
        "bar-title",
        bars.x + bars.w / 2.0,
        height - 12.0,
        "Active wins / ties / control wins",
        Anchor::Middle,
        11.0,
    );
    let last = rows.last().unwrap();
    scene.text(
        "annotation-wo",
        bars.x,
        30.0,
        &wo_annotation(last.stats.win_odds.est, last.stats.win_odds.lo, last.stats.win_odds.hi),
        Anchor::Start,
        theme.font_size + 1.0,
    );
    let meta = ComponentMeta {
        kind: "components",
        bar_panel: bars,
        forest_panel: forest,
        log_domain: (ln_lo, ln_hi),
        reference_x: ref_x,
        rows: metas,
    };
    scene.validate()?;
    Ok(Rendered { scene, meta })
}
