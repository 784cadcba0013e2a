use hce_core::design::{
    feasibility_overlay, simulate_trial, solve_delta_for_wo, sunset_grid, FeasibilityOverlay, GridSpec, OverlayPoint,
    Scenario, SunsetParams,
};
use hce_core::model::{ordinalize_8, Arm, ComponentConfig, HceDataset, HceValue};
use hce_core::rng::stream;
use hce_core::viz::{
    render_binary_bar, render_component_plot, render_maraca, render_mosaic, render_mosaic_2d, render_shift_plot,
    render_sunset, PlotTheme, SunsetAnchor, SunsetOptions, TieMode,
};
use hce_core::win::{
    analyze, category_odg, cumulative_components, marginal_proportions, ordinal_dominance_graph, AnalysisOptions,
};
use rand_distr::{Distribution, Normal};

fn theme() -> PlotTheme {
    PlotTheme::default()
}

fn scenario_a(n: usize) -> HceDataset {
    let path = format!("{}/../../data/scenario_a.json", env!("CARGO_MANIFEST_DIR"));
    let s = Scenario::from_json(&std::fs::read_to_string(path).unwrap()).unwrap();
    simulate_trial(&Scenario { n_per_arm: n, ..s }).unwrap()
}

/// Parses the document and returns the `points` of the polygon with `id`.
fn polygon_points(svg: &str, id: &str) -> Vec<(f64, f64)> {
    let doc = roxmltree::Document::parse(svg).unwrap();
    let node = doc.descendants().find(|n| n.attribute("id") == Some(id)).unwrap();
    node.attribute("points")
        .unwrap()
        .split_whitespace()
        .map(|p| {
            let (x, y) = p.split_once(',').unwrap();
            (x.parse().unwrap(), y.parse().unwrap())
        })
        .collect()
}

fn shoelace(p: &[(f64, f64)]) -> f64 {
    let n = p.len();
    (0..n).map(|i| p[i].0 * p[(i + 1) % n].1 - p[(i + 1) % n].0 * p[i].1).sum::<f64>().abs() / 2.0
}

fn assert_well_formed(svg: &str) {
    let doc = roxmltree::Document::parse(svg).unwrap();
    let root = doc.root_element();
    assert_eq!(root.tag_name().name(), "svg");
    assert!(root.attribute("viewBox").is_some());
    let mut ids: Vec<&str> = doc.descendants().filter_map(|n| n.attribute("id")).collect();
    let n = ids.len();
    ids.sort();
    ids.dedup();
    assert_eq!(ids.len(), n, "duplicate ids");
}

/// Win probability of a category-level comparison, ties split evenly.
fn category_theta(pa: &[f64], pc: &[f64]) -> f64 {
    let mut below = 0.0;
    let mut t = 0.0;
    for i in 0..pa.len() {
        t += pa[i] * (below + 0.5 * pc[i]);
        below += pc[i];
    }
    t
}

#[test]
fn mosaic_2d_cells_and_win_region() {
    let ds = scenario_a(400);
    let table = ordinalize_8(&ds).unwrap();
    let m = marginal_proportions(&table.active, &table.control).unwrap();
    let stats = analyze(&ds, &AnalysisOptions::default()).unwrap();
    let odg = category_odg(&table.active, &table.control).unwrap();
    let r = render_mosaic_2d(&m, &table.labels, &odg, &stats, TieMode::TriangleSplit, &theme()).unwrap();
    let side = r.meta.plot_area.w;
    let (na, nc) = (ds.arm_size(Arm::Active) as f64, ds.arm_size(Arm::Control) as f64);
    for c in &r.meta.cells {
        let expected =
            table.active[c.active_category - 1] as f64 / na * table.control[c.control_category - 1] as f64 / nc;
        assert!((c.w * c.h / (side * side) - expected).abs() < 1e-9);
    }
    let svg = r.svg();
    assert_well_formed(&svg);
    let area = shoelace(&polygon_points(&svg, "win-region")) / (side * side);
    let pa: Vec<f64> = table.active.iter().map(|&c| c as f64 / na).collect();
    let pc: Vec<f64> = table.control.iter().map(|&c| c as f64 / nc).collect();
    assert!((area - category_theta(&pa, &pc)).abs() < 1e-9, "{area}");
    assert!((r.meta.win_area + r.meta.loss_area - 1.0).abs() < 1e-9);
}

#[test]
fn mosaic_2d_ordered_region_is_theta() {
    let ds = scenario_a(300);
    let (ca, cc) = ds.category_counts();
    let m = marginal_proportions(&ca, &cc).unwrap();
    let labels: Vec<String> = ds.config().components().iter().map(|c| c.name.clone()).collect();
    let stats = analyze(&ds, &AnalysisOptions::default()).unwrap();
    let odg = ordinal_dominance_graph(&ds).unwrap();
    let r = render_mosaic_2d(&m, &labels, &odg, &stats, TieMode::OrderedTieBreak, &theme()).unwrap();
    let side = r.meta.plot_area.w;
    let area = shoelace(&polygon_points(&r.svg(), "win-region")) / (side * side);
    assert!((area - stats.theta.est).abs() < 1e-9, "{area} vs {}", stats.theta.est);
    assert!(r.meta.share_label.contains("% vs "));
}

#[test]
fn mosaic_2d_rejects_mismatched_curve() {
    let ds = scenario_a(200);
    let table = ordinalize_8(&ds).unwrap();
    let m = marginal_proportions(&table.active, &table.control).unwrap();
    let stats = analyze(&ds, &AnalysisOptions::default()).unwrap();
    let other = category_odg(&[1, 1, 1, 1, 1, 1, 1, 1], &[1, 2, 3, 4, 5, 6, 7, 8]).unwrap();
    assert!(render_mosaic_2d(&m, &table.labels, &other, &stats, TieMode::TriangleSplit, &theme()).is_err());
}

#[test]
fn maraca_bands_follow_pooled_proportions() {
    let ds = scenario_a(500);
    let stats = analyze(&ds, &AnalysisOptions::default()).unwrap();
    let r = render_maraca(&ds, &stats, &theme()).unwrap();
    let (ca, cc) = ds.category_counts();
    let total = (ds.arm_size(Arm::Active) + ds.arm_size(Arm::Control)) as f64;
    let e = &r.meta.band_edges;
    assert!(!r.meta.sliver_applied);
    for i in 0..ca.len() {
        let width = (e[i + 1] - e[i]) / r.meta.plot_area.w;
        assert!((width - (ca[i] + cc[i]) as f64 / total).abs() < 1e-9);
    }
    assert_well_formed(&r.svg());
}

#[test]
fn maraca_without_events_uses_slivers() {
    let config = ComponentConfig::from_names(&["Death", "Hospitalization"], "Score", 365.0).unwrap();
    let a: Vec<HceValue> = (0..30).map(|i| HceValue::new(3, i as f64 * 0.1)).collect();
    let c: Vec<HceValue> = (0..30).map(|i| HceValue::new(3, i as f64 * 0.1 - 0.5)).collect();
    let ds = HceDataset::from_arms(config, &a, &c).unwrap();
    let stats = analyze(&ds, &AnalysisOptions::default()).unwrap();
    let r = render_maraca(&ds, &stats, &theme()).unwrap();
    assert!(r.meta.sliver_applied);
    assert_eq!(r.meta.empty_components, vec![1, 2]);
    assert!(r.meta.warnings.iter().any(|w| w.starts_with("degenerate layout")));
    assert!((r.meta.fractions.iter().sum::<f64>() - 1.0).abs() < 1e-12);
    assert_eq!(*r.meta.band_edges.last().unwrap(), r.meta.plot_area.right());
}

#[test]
fn component_bars_close_and_last_row_agrees() {
    let ds = scenario_a(400);
    let rows = cumulative_components(&ds, &AnalysisOptions::default()).unwrap();
    let r = render_component_plot(&rows, &theme()).unwrap();
    let w = r.meta.bar_panel.w;
    for row in &r.meta.rows {
        assert!((row.win_width + row.tie_width + row.loss_width - w).abs() <= 0.5);
    }
    let last = r.meta.rows.last().unwrap();
    assert!((last.wo_x - last.wr_x).abs() < 1e-9);
    assert!(last.tie_width.abs() < 1e-9);
    let widest = r.meta.rows.iter().map(|r| r.tie_width).fold(0.0, f64::max);
    assert_eq!(r.meta.rows[0].tie_width, widest);
}

fn normal_sample(seed: u64, mean: f64, n: usize) -> Vec<f64> {
    let mut rng = stream(seed, &[]);
    let d = Normal::new(mean, 1.0).unwrap();
    (0..n).map(|_| d.sample(&mut rng)).collect()
}

#[test]
fn shift_band_spans_the_mean_difference() {
    let (a, c) = (normal_sample(1, 1.0, 500), normal_sample(2, 0.0, 500));
    let r = render_shift_plot(&a, &c, &theme()).unwrap();
    assert!((r.meta.band_hi - r.meta.band_lo - 1.0).abs() < 0.15);
    assert!(r.meta.band_height_px > 0.0);
    assert_well_formed(&r.svg());

    let same = render_shift_plot(&c, &c, &theme()).unwrap();
    assert_eq!(same.meta.band_height_px, 0.0);
    assert!(same.svg().contains(r#"<line id="mean-band""#));

    assert!(render_shift_plot(&[2.0; 20], &c, &theme()).is_err());
}

#[test]
fn binary_bars() {
    let r = render_binary_bar((30, 100), (45, 100), &theme()).unwrap();
    assert!((r.meta.p_active - 0.30).abs() < 1e-12);
    assert!((r.meta.band_hi - r.meta.band_lo - 0.15).abs() < 1e-12);
    assert!(render_binary_bar((10, 50), (10, 50), &theme()).unwrap().svg().contains(r#"<line id="difference-band""#));
    assert!(render_binary_bar((0, 0), (1, 2), &theme()).is_err());
    assert!(render_binary_bar((5, 3), (1, 2), &theme()).is_err());
}

#[test]
fn mosaic_segments_and_gap() {
    let m = marginal_proportions(&[1; 8], &[1; 8]).unwrap();
    let labels: Vec<String> = (1..=8).map(|i| format!("C{i}")).collect();
    let r = render_mosaic(&m, &labels, Some(7), &theme()).unwrap();
    assert_eq!(r.meta.gaps_after, vec![7]);
    for s in &r.meta.segments {
        assert!((s.height - r.meta.bar_height_px / 8.0).abs() < 1e-9);
    }
    let active: Vec<_> = r.meta.segments.iter().filter(|s| s.arm == "active").collect();
    // bottom-up: category 8 sits above the gap
    let below = active.iter().find(|s| s.category == 7).unwrap();
    let above = active.iter().find(|s| s.category == 8).unwrap();
    assert!((below.y - (above.y + above.height) - r.meta.gap_px).abs() < 1e-9);
    assert!(render_mosaic(&m, &labels, Some(8), &theme()).is_err());
}

#[test]
fn sunset_contours_and_anchor() {
    let params = SunsetParams::default();
    let grid = sunset_grid(&GridSpec::default()).unwrap();
    let delta = solve_delta_for_wo(0.8, 1.2, &params).unwrap();
    let anchors = [SunsetAnchor { hr: 0.8, delta, label: "WO 1.2, HR 0.8".into() }];
    let r = render_sunset(&grid, &SunsetOptions::default(), &anchors, None, &theme()).unwrap();
    assert_well_formed(&r.svg());
    for c in &r.meta.contours {
        assert_eq!(c.data_polylines.len(), 1, "level {}", c.level);
        // the level set is a graph over hr: delta increases with hr
        for w in c.data_polylines[0].windows(2) {
            assert!((w[1].0 - w[0].0) * (w[1].1 - w[0].1) >= -1e-12);
        }
    }
    let hl = r.meta.contours.iter().find(|c| c.highlight).unwrap();
    assert!((hl.level - 1.2).abs() < 1e-12);
    assert!(r.svg().contains(r#"id="iso-highlight-0""#));
    let dh = grid.hr_axis[1] - grid.hr_axis[0];
    let dd = grid.delta_axis[1] - grid.delta_axis[0];
    let near = hl.data_polylines[0]
        .iter()
        .map(|&(h, d)| (((h - 0.8) / dh).powi(2) + ((d - delta) / dd).powi(2)).sqrt())
        .fold(f64::INFINITY, f64::min);
    assert!(near <= 2f64.sqrt(), "{near}");
}

#[test]
fn sunset_empty_overlay_changes_nothing() {
    let grid = sunset_grid(&GridSpec { resolution: (12, 10), ..Default::default() }).unwrap();
    let opts = SunsetOptions::default();
    let none = render_sunset(&grid, &opts, &[], None, &theme()).unwrap();
    let empty = render_sunset(&grid, &opts, &[], Some(&FeasibilityOverlay::default()), &theme()).unwrap();
    assert_eq!(none.svg(), empty.svg());

    let pts: Vec<OverlayPoint> = [(0.7, 0.5), (0.9, 0.4), (0.8, 1.2), (0.75, 0.9)]
        .iter()
        .map(|&(hr, delta)| OverlayPoint { hr, delta, label: None })
        .collect();
    let ov = feasibility_overlay(pts, None, true).unwrap();
    let with = render_sunset(&grid, &opts, &[], Some(&ov), &theme()).unwrap();
    assert!(with.meta.overlay_polygon);
    assert_eq!(with.meta.overlay_points, 4);
}

#[test]
fn renderers_are_deterministic() {
    let ds = scenario_a(300);
    let stats = analyze(&ds, &AnalysisOptions::default()).unwrap();
    let rows = cumulative_components(&ds, &AnalysisOptions::default()).unwrap();
    let svgs = || {
        let a: Vec<f64> = ds.values(Arm::Active).iter().map(|v| v.magnitude).collect();
        let c: Vec<f64> = ds.values(Arm::Control).iter().map(|v| v.magnitude).collect();
        vec![
            render_maraca(&ds, &stats, &theme()).unwrap().svg(),
            render_component_plot(&rows, &theme()).unwrap().svg(),
            render_shift_plot(&a, &c, &theme()).unwrap().svg(),
            render_component_plot(&rows, &PlotTheme::colorblind()).unwrap().meta_json(),
        ]
    };
    assert_eq!(svgs(), svgs());
}
