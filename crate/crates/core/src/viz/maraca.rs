use serde::Serialize;

use super::kde::{box_stats, gaussian_kde};
use super::svg::{Anchor, PathCmd, Rect, Shape, Style, SvgScene};
use super::{
    draw_violin, nice_ticks, tick_label, wo_annotation, x_axis, y_axis, LinearScale, Orientation, PlotTheme, Rendered,
};
use crate::error::{HceError, Result};
use crate::model::{Arm, Direction, HceDataset};
use crate::win::WinStats;

/// Width given to a component nobody experienced, as a fraction of the plot.
pub const SLIVER_FRACTION: f64 = 0.01;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MaracaMeta {
    pub kind: &'static str,
    pub plot_area: Rect,
    pub components: Vec<String>,
    pub pooled_counts: Vec<u64>,
    /// Pooled proportions, before any sliver adjustment.
    pub raw_fractions: Vec<f64>,
    /// Fractions actually drawn.
    pub fractions: Vec<f64>,
    /// Band boundaries in pixels, `K + 1` values.
    pub band_edges: Vec<f64>,
    pub sliver_applied: bool,
    /// 1-based categories that received a sliver.
    pub empty_components: Vec<usize>,
    /// Upper limit of the cumulative-percent axis.
    pub y_max_pct: f64,
    /// Final cumulative event percentage per arm.
    pub event_pct_active: f64,
    pub event_pct_control: f64,
    pub wo_label: String,
    pub warnings: Vec<String>,
}

/// Component bands sized by pooled frequency, cumulative event curves per arm
/// and violins of the continuous outcome in the last band.
pub fn render_maraca(dataset: &HceDataset, stats: &WinStats, theme: &PlotTheme) -> Result<Rendered<MaracaMeta>> {
    let config = dataset.config();
    let k = config.k() as usize;
    if k < 2 {
        return Err(HceError::invalid("a maraca plot needs at least one event component and the continuous one"));
    }
    let (n_a, n_c) = dataset.require_both_arms()?;
    let (ca, cc) = dataset.category_counts();
    let pooled: Vec<u64> = ca.iter().zip(&cc).map(|(a, c)| a + c).collect();
    let total: u64 = pooled.iter().sum();
    let raw: Vec<f64> = pooled.iter().map(|&c| c as f64 / total as f64).collect();
    let empty: Vec<usize> = (0..k).filter(|&i| pooled[i] == 0).map(|i| i + 1).collect();
    let mut warnings = Vec::new();
    let fractions: Vec<f64> = if empty.is_empty() {
        raw.clone()
    } else {
        let scale = 1.0 - SLIVER_FRACTION * empty.len() as f64;
        raw.iter().zip(&pooled).map(|(&f, &c)| if c == 0 { SLIVER_FRACTION } else { f * scale }).collect()
    };
    if pooled.iter().filter(|&&c| c > 0).count() == 1 {
        warnings.push("degenerate layout: all subjects fall in a single component".to_string());
    }

    let (width, height) = (900.0, 500.0);
    let area = Rect { x: 70.0, y: 70.0, w: 800.0, h: 360.0 };
    let mut scene = SvgScene::new(width, height, "Maraca plot", &theme.font_family);
    let mut edges = vec![area.x];
    for f in &fractions {
        edges.push(edges.last().unwrap() + f * area.w);
    }
    edges[k] = area.right();

    let per_arm_events =
        |counts: &[u64], n: usize| -> f64 { 100.0 * counts[..k - 1].iter().sum::<u64>() as f64 / n as f64 };
    let (pct_a, pct_c) = (per_arm_events(&ca, n_a), per_arm_events(&cc, n_c));
    let y_max = ((pct_a.max(pct_c) / 10.0).ceil() * 10.0).clamp(10.0, 100.0);
    let ys = LinearScale::new((0.0, y_max), (area.bottom(), area.y));

    // alternating band backgrounds
    for i in 0..k {
        let fill = if i % 2 == 0 { "#f4f4f4" } else { "#ffffff" };
        scene.rect(
            format!("band-{}", i + 1),
            Rect { x: edges[i], y: area.y, w: edges[i + 1] - edges[i], h: area.h },
            Style::new().fill(fill),
        );
    }

    let tau = config.follow_up();
    for (arm, name, n, color) in
        [(Arm::Active, "active", n_a, theme.active), (Arm::Control, "control", n_c, theme.control)]
    {
        let values = dataset.values(arm);
        let mut cum = 0usize;
        for cat in 1..k {
            let mut times: Vec<f64> =
                values.iter().filter(|v| v.category as usize == cat).map(|v| v.magnitude).collect();
            times.sort_by(f64::total_cmp);
            if config.direction_of(cat as u32) == Direction::LowerIsBetter {
                // positions run from tau - t, so walk the times in descending order
                times.reverse();
            }
            let xs = LinearScale::new((0.0, tau), (edges[cat - 1], edges[cat]));
            let pos = |t: f64| match config.direction_of(cat as u32) {
                Direction::HigherIsBetter => xs.map(t),
                Direction::LowerIsBetter => xs.map(tau - t),
            };
            let y = |c: usize| ys.map(100.0 * c as f64 / n as f64);
            let mut path = vec![PathCmd::MoveTo(edges[cat - 1], y(cum))];
            for t in times {
                let x = pos(t);
                path.push(PathCmd::LineTo(x, y(cum)));
                cum += 1;
                path.push(PathCmd::LineTo(x, y(cum)));
            }
            path.push(PathCmd::LineTo(edges[cat], y(cum)));
            scene.push(
                format!("step-{name}-{cat}"),
                Shape::Path(path),
                Style::new().fill("none").stroke(&color.hex(), 2.0),
            );
        }
    }

    // continuous band
    let (c0, c1) = (edges[k - 1], edges[k]);
    let cont: Vec<(Arm, f64)> = dataset
        .subjects()
        .iter()
        .filter(|s| s.value.category as usize == k)
        .map(|s| (s.arm, s.value.magnitude))
        .collect();
    if !cont.is_empty() && c1 - c0 > 4.0 {
        let lo = cont.iter().map(|c| c.1).fold(f64::INFINITY, f64::min);
        let hi = cont.iter().map(|c| c.1).fold(f64::NEG_INFINITY, f64::max);
        let (lo, hi) = if hi > lo { (lo, hi) } else { (lo - 1.0, hi + 1.0) };
        let pad = (c1 - c0) * 0.04;
        let range = match config.continuous().direction {
            Direction::HigherIsBetter => (c0 + pad, c1 - pad),
            Direction::LowerIsBetter => (c1 - pad, c0 + pad),
        };
        let xs = LinearScale::new((lo, hi), range);
        for (arm, name, slot, color) in
            [(Arm::Active, "active", 0.3, theme.active), (Arm::Control, "control", 0.7, theme.control)]
        {
            let vals: Vec<f64> = cont.iter().filter(|c| c.0 == arm).map(|c| c.1).collect();
            let cy = area.y + area.h * slot;
            let half = area.h * 0.13;
            match gaussian_kde(&vals) {
                Ok(kde) => {
                    let bx = box_stats(&vals)?;
                    draw_violin(
                        &mut scene,
                        &format!("cont-{name}"),
                        &kde,
                        &bx,
                        &xs,
                        cy,
                        half,
                        Orientation::Horizontal,
                        &color.hex(),
                    );
                }
                Err(e) => {
                    warnings.push(format!("{name} continuous values drawn as points: {e}"));
                    for (i, v) in vals.iter().enumerate() {
                        scene.push(
                            format!("cont-{name}-pt-{i}"),
                            Shape::Circle { cx: xs.map(*v), cy, r: 2.5 },
                            Style::new().fill(&color.hex()),
                        );
                    }
                }
            }
            scene.text(
                format!("cont-{name}-label"),
                c0 + 4.0,
                cy - half - 4.0,
                if arm == Arm::Active { "Active" } else { "Control" },
                Anchor::Start,
                10.0,
            );
        }
        let ticks = nice_ticks(lo, hi, 4);
        x_axis(&mut scene, "cont-x", &xs, area.bottom(), &ticks, tick_label);
    }

    for i in 1..k {
        scene.line(
            format!("sep-{i}"),
            (edges[i], area.y),
            (edges[i], area.bottom()),
            Style::new().stroke("#666666", 1.0).dashed("5 4"),
        );
    }
    for i in 0..k {
        let name = &config.component(i as u32 + 1).name;
        let star = if pooled[i] == 0 { "*" } else { "" };
        scene.text(
            format!("band-label-{}", i + 1),
            (edges[i] + edges[i + 1]) / 2.0,
            area.y - 8.0 - 12.0 * (i % 2) as f64,
            &format!("{name}{star} ({:.1}%)", 100.0 * raw[i]),
            Anchor::Middle,
            9.0,
        );
    }
    y_axis(&mut scene, "y", &ys, area.x, &nice_ticks(0.0, y_max, 5), |v| format!("{v:.0}%"));
    scene.push(
        "y-title",
        Shape::Text {
            x: 18.0,
            y: area.y + area.h / 2.0,
            text: "Cumulative % with event".into(),
            anchor: Anchor::Middle,
            size: theme.font_size,
            rotate: true,
        },
        Style::new().fill("#222222"),
    );
    let wo_label = wo_annotation(stats.win_odds.est, stats.win_odds.lo, stats.win_odds.hi);
    scene.text("annotation-wo", area.x, 28.0, &wo_label, Anchor::Start, theme.font_size + 1.0);
    for (i, (id, label, color)) in
        [("active", "Active", theme.active), ("control", "Control", theme.control)].into_iter().enumerate()
    {
        let x = area.right() - 170.0 + 90.0 * i as f64;
        scene.line(format!("legend-{id}-line"), (x, 24.0), (x + 18.0, 24.0), Style::new().stroke(&color.hex(), 2.0));
        scene.text(format!("legend-{id}"), x + 22.0, 28.0, label, Anchor::Start, 11.0);
    }
    if !empty.is_empty() {
        scene.text(
            "sliver-note",
            area.x,
            height - 12.0,
            "* no subjects; band widened for legibility",
            Anchor::Start,
            10.0,
        );
    }

    let meta = MaracaMeta {
        kind: "maraca",
        plot_area: area,
        components: config.components().iter().map(|c| c.name.clone()).collect(),
        pooled_counts: pooled,
        raw_fractions: raw,
        fractions,
        band_edges: edges,
        sliver_applied: !empty.is_empty(),
        empty_components: empty,
        y_max_pct: y_max,
        event_pct_active: pct_a,
        event_pct_control: pct_c,
        wo_label,
        warnings,
    };
    scene.validate()?;
    Ok(Rendered { scene, meta })
}
