use std::fs::{self, File};
use std::io::BufReader;
use std::path::Path;

use hce_core::design::{
    feasibility_overlay, load_overlay_csv, simulate_trial, solve_delta_for_wo, sunset_grid, FeasibilityOverlay,
    GridMethod, GridSpec, McConfig, Scenario, SunsetParams,
};
use hce_core::model::{
    load_dataset, load_wide_dataset, ordinalize_8, parse_component_config, write_dataset, Arm, ArmLabels,
    ComponentConfig, HceDataset,
};
use hce_core::viz::{
    render_binary_bar, render_component_plot, render_maraca, render_mosaic, render_mosaic_2d, render_shift_plot,
    render_sunset, PlotTheme, Rendered, SunsetAnchor, SunsetOptions, TieMode,
};
use hce_core::win::{
    analyze, category_odg, cumulative_components, marginal_proportions, ordinal_dominance_graph, AnalysisOptions,
    BootstrapConfig, CiMethod, Marginals, OdgCurve, WinStats,
};
use hce_core::Execution;
use serde_json::json;

use crate::args::{
    CiArg, DataArgs, InputFormat, MethodArg, PlotArgs, PlotKind, SimulateArgs, StatsArgs, SummarizeArgs, SunsetArgs,
    TieModeArg,
};
use crate::report::{cumulative_text, sig4, stats_text};
use crate::Failure;

type Res<T> = std::result::Result<T, Failure>;

fn require_file(path: &Path, what: &str) -> Res<()> {
    if !path.is_file() {
        return Err(Failure::input(format!("{what} {} does not exist", path.display())));
    }
    Ok(())
}

fn read_text(path: &Path, what: &str) -> Res<String> {
    require_file(path, what)?;
    Ok(fs::read_to_string(path)?)
}

fn parse_labels(s: &str) -> Res<ArmLabels> {
    let parts: Vec<&str> = s.split(',').collect();
    if parts.len() != 2 {
        return Err(Failure::input(format!("--arm-labels expects ACTIVE,CONTROL, got '{s}'")));
    }
    Ok(ArmLabels::new(parts[0].trim(), parts[1].trim())?)
}

fn parse_pair(s: &str, flag: &str) -> Res<(f64, f64)> {
    let v: Vec<f64> = s
        .split(',')
        .map(|p| p.trim().parse::<f64>())
        .collect::<Result<_, _>>()
        .map_err(|_| Failure::input(format!("{flag} expects two numbers, got '{s}'")))?;
    match v.as_slice() {
        [a, b] => Ok((*a, *b)),
        _ => Err(Failure::input(format!("{flag} expects two numbers, got '{s}'"))),
    }
}

fn parse_list(s: &str, flag: &str) -> Res<Vec<f64>> {
    s.split(',')
        .map(|p| p.trim().parse::<f64>().map_err(|_| Failure::input(format!("{flag}: '{p}' is not a number"))))
        .collect()
}

fn load_config(path: Option<&Path>) -> Res<ComponentConfig> {
    match path {
        Some(p) => Ok(parse_component_config(&read_text(p, "component config")?)?),
        None => Ok(ComponentConfig::kidney_example()),
    }
}

fn load_data(d: &DataArgs) -> Res<HceDataset> {
    require_file(&d.input, "input")?;
    let config = load_config(d.components.as_deref())?;
    let labels = parse_labels(&d.arm_labels)?;
    let reader = BufReader::new(File::open(&d.input)?);
    let ds = match d.format {
        InputFormat::Composed => load_dataset(reader, &config, &labels)?,
        InputFormat::Wide => load_wide_dataset(reader, &config, &labels)?,
    };
    Ok(ds)
}

fn options(s: &StatsArgs) -> Res<AnalysisOptions> {
    if !(s.alpha > 0.0 && s.alpha < 1.0) {
        return Err(Failure::input(format!("--alpha must be in (0, 1), got {}", s.alpha)));
    }
    if s.boot_reps < 1 {
        return Err(Failure::input("--boot-reps must be at least 1"));
    }
    Ok(AnalysisOptions {
        alpha: s.alpha,
        ci_method: match s.ci {
            CiArg::Analytic => CiMethod::Analytic,
            CiArg::Bootstrap => CiMethod::Bootstrap,
        },
        bootstrap: BootstrapConfig { reps: s.boot_reps, seed: s.seed, exec: Execution::default() },
    })
}

fn theme() -> Res<PlotTheme> {
    Ok(PlotTheme::by_name(&std::env::var("HCE_THEME").unwrap_or_default())?)
}

fn ensure_dir(path: &Path) -> Res<()> {
    fs::create_dir_all(path).map_err(|e| Failure::input(format!("cannot create {}: {e}", path.display())))
}

pub fn summarize(a: &SummarizeArgs) -> Res<()> {
    let opts = options(&a.stats)?;
    let ds = load_data(&a.data)?;
    let stats = analyze(&ds, &opts)?;
    let rows = cumulative_components(&ds, &opts)?;
    let doc = json!({
        "components": ds.config().components().iter().map(|c| &c.name).collect::<Vec<_>>(),
        "follow_up_days": ds.config().follow_up(),
        "event_fraction": {
            "active": ds.event_fraction(Some(Arm::Active)),
            "control": ds.event_fraction(Some(Arm::Control)),
            "pooled": ds.event_fraction(None),
        },
        "stats": stats,
        "cumulative": rows,
    });
    let text = serde_json::to_string_pretty(&doc).expect("summary serializes") + "\n";
    if let Some(out) = &a.out {
        ensure_dir(out)?;
        fs::write(out.join("summary.json"), &text)?;
    }
    if a.json {
        print!("{text}");
    } else {
        print!("{}", stats_text(&stats));
        print!("{}", cumulative_text(&rows));
    }
    Ok(())
}

/// Ordinal view used by the mosaics: the eight-category kidney layout when it
/// applies, the HCE categories otherwise.
struct OrdinalView {
    labels: Vec<String>,
    active: Vec<u64>,
    control: Vec<u64>,
    default_split: Option<usize>,
}

fn ordinal_view(ds: &HceDataset) -> OrdinalView {
    match ordinalize_8(ds) {
        Ok(t) => OrdinalView { labels: t.labels, active: t.active, control: t.control, default_split: Some(7) },
        Err(_) => {
            let (active, control) = ds.category_counts();
            OrdinalView {
                labels: ds.config().components().iter().map(|c| c.name.clone()).collect(),
                active,
                control,
                default_split: None,
            }
        }
    }
}

fn write_plot<M: serde::Serialize>(out: &Path, kind: &str, r: &Rendered<M>) -> Res<()> {
    fs::write(out.join(format!("{kind}.svg")), r.svg())?;
    fs::write(out.join(format!("{kind}.meta.json")), r.meta_json())?;
    Ok(())
}

fn render_one(
    kind: PlotKind,
    a: &PlotArgs,
    ds: &HceDataset,
    stats: &WinStats,
    opts: &AnalysisOptions,
    theme: &PlotTheme,
) -> Res<Vec<String>> {
    let k = ds.config().k();
    let out = a.out.as_path();
    let name = kind.name();
    let warnings = match kind {
        PlotKind::Shift => {
            let vals =
                |arm| ds.values(arm).into_iter().filter(|v| v.category == k).map(|v| v.magnitude).collect::<Vec<_>>();
            let r = render_shift_plot(&vals(Arm::Active), &vals(Arm::Control), theme)?;
            write_plot(out, name, &r)?;
            vec![]
        }
        PlotKind::Binary => {
            let ev = |arm| (ds.values(arm).iter().filter(|v| v.category < k).count() as u64, ds.arm_size(arm) as u64);
            let r = render_binary_bar(ev(Arm::Active), ev(Arm::Control), theme)?;
            write_plot(out, name, &r)?;
            vec![]
        }
        PlotKind::Mosaic => {
            let view = ordinal_view(ds);
            let m = marginal_proportions(&view.active, &view.control)?;
            let r = render_mosaic(&m, &view.labels, a.split.or(view.default_split), theme)?;
            write_plot(out, name, &r)?;
            vec![]
        }
        PlotKind::Mosaic2d => {
            let view = ordinal_view(ds);
            let m: Marginals = marginal_proportions(&view.active, &view.control)?;
            let (odg, mode): (OdgCurve, TieMode) = match a.tie_mode {
                TieModeArg::Triangle => (category_odg(&view.active, &view.control)?, TieMode::TriangleSplit),
                TieModeArg::Ordered => (ordinal_dominance_graph(ds)?, TieMode::OrderedTieBreak),
            };
            let r = render_mosaic_2d(&m, &view.labels, &odg, stats, mode, theme)?;
            write_plot(out, name, &r)?;
            vec![]
        }
        PlotKind::Maraca => {
            let r = render_maraca(ds, stats, theme)?;
            write_plot(out, name, &r)?;
            r.meta.warnings.clone()
        }
        PlotKind::Components => {
            let rows = cumulative_components(ds, opts)?;
            let r = render_component_plot(&rows, theme)?;
            write_plot(out, name, &r)?;
            vec![]
        }
    };
    Ok(warnings)
}

pub fn plot(a: &PlotArgs) -> Res<()> {
    let opts = options(&a.stats)?;
    let theme = theme()?;
    let ds = load_data(&a.data)?;
    let stats = analyze(&ds, &opts)?;
    ensure_dir(&a.out)?;
    let mut kinds = a.plots.clone();
    kinds.dedup();
    let mut worst: Option<Failure> = None;
    for kind in kinds {
        match render_one(kind, a, &ds, &stats, &opts, &theme) {
            Ok(warnings) => {
                println!("wrote {}.svg", kind.name());
                for w in warnings {
                    eprintln!("warning ({}): {w}", kind.name());
                }
            }
            Err(f) => {
                eprintln!("plot {} failed: {}", kind.name(), f.message);
                if worst.as_ref().is_none_or(|w| f.code > w.code) {
                    worst = Some(f);
                }
            }
        }
    }
    match worst {
        None => Ok(()),
        Some(f) => Err(Failure { code: f.code, message: "one or more plots failed".into() }),
    }
}

fn parse_grid(s: &str) -> Res<(usize, usize)> {
    let bad = || Failure::input(format!("--grid expects N or HRxDELTA, got '{s}'"));
    let parts: Vec<&str> = s.split(['x', 'X']).collect();
    let nums: Vec<usize> = parts.iter().map(|p| p.trim().parse::<usize>().map_err(|_| bad())).collect::<Res<_>>()?;
    match nums.as_slice() {
        [n] => Ok((*n, *n)),
        [h, d] => Ok((*h, *d)),
        _ => Err(bad()),
    }
}

pub fn sunset(a: &SunsetArgs) -> Res<()> {
    let theme = theme()?;
    let params = SunsetParams { p_event_control: a.p_event, sd: a.sd, follow_up: a.tau };
    params.validate()?;
    let iso_levels = match &a.iso {
        Some(s) => parse_list(s, "--iso")?,
        None => hce_core::design::default_iso_levels(),
    };
    let highlight = match a.highlight.trim() {
        "none" => None,
        s => Some(s.parse::<f64>().map_err(|_| Failure::input(format!("--highlight: '{s}' is not a number")))?),
    };
    let spec = GridSpec {
        hr_range: parse_pair(&a.hr_range, "--hr-range")?,
        delta_range: parse_pair(&a.delta_range, "--delta-range")?,
        resolution: parse_grid(&a.grid)?,
        params,
        method: match a.method {
            MethodArg::Cf => GridMethod::ClosedForm,
            MethodArg::Mc => GridMethod::MonteCarlo,
        },
        mc: McConfig { n_per_arm: a.n, reps: a.reps, seed: a.seed, exec: Execution::default() },
        iso_levels: iso_levels.clone(),
    };
    if spec.method == GridMethod::MonteCarlo && (a.n < 2 || a.reps < 1) {
        return Err(Failure::input("--n must be at least 2 and --reps at least 1"));
    }
    let mut anchors = Vec::new();
    for s in &a.anchor {
        let (hr, wo) = parse_pair(s, "--anchor")?;
        let delta = solve_delta_for_wo(hr, wo, &params)?;
        anchors.push(SunsetAnchor { hr, delta, label: format!("WO {wo}, HR {hr}") });
    }
    let overlay: Option<FeasibilityOverlay> = match &a.overlay {
        Some(p) => {
            require_file(p, "overlay")?;
            let points = load_overlay_csv(BufReader::new(File::open(p)?))?;
            Some(feasibility_overlay(points, None, a.hull)?)
        }
        None if a.hull => return Err(Failure::input("--hull needs --overlay")),
        None => None,
    };
    let grid = sunset_grid(&spec)?;
    let opts = SunsetOptions { iso_levels, highlight, ..SunsetOptions::default() };
    let rendered = render_sunset(&grid, &opts, &anchors, overlay.as_ref(), &theme)?;
    ensure_dir(&a.out)?;
    write_plot(&a.out, "sunset", &rendered)?;
    fs::write(a.out.join("sunset.csv"), grid.to_csv())?;
    for w in &rendered.meta.warnings {
        eprintln!("warning: {w}");
    }
    println!(
        "grid {}x{} ({}), win odds {} to {}",
        grid.hr_axis.len(),
        grid.delta_axis.len(),
        match grid.method {
            GridMethod::ClosedForm => "closed form",
            GridMethod::MonteCarlo => "Monte Carlo",
        },
        sig4(grid.min_value()),
        sig4(grid.max_value())
    );
    for an in &anchors {
        println!("anchor {}: mean difference {}", an.label, sig4(an.delta));
    }
    println!("wrote sunset.svg, sunset.meta.json, sunset.csv");
    Ok(())
}

pub fn simulate(a: &SimulateArgs) -> Res<()> {
    let mut scenario = Scenario::from_json(&read_text(&a.scenario, "scenario")?)?;
    if let Some(n) = a.n {
        scenario.n_per_arm = n;
    }
    if let Some(seed) = a.seed {
        scenario.seed = seed;
    }
    scenario.validate()?;
    let labels = parse_labels(&a.arm_labels)?;
    let ds = simulate_trial(&scenario)?;
    ensure_dir(&a.out)?;
    let mut buf = Vec::new();
    write_dataset(&ds, &labels, &mut buf)?;
    fs::write(a.out.join("dataset.csv"), buf)?;
    fs::write(a.out.join("components.json"), ds.config().to_json())?;
    let stats = analyze(&ds, &AnalysisOptions::default())?;
    println!("subjects per arm: {}", scenario.n_per_arm);
    println!(
        "with an event: active {}, control {}, pooled {}",
        sig4(ds.event_fraction(Some(Arm::Active))),
        sig4(ds.event_fraction(Some(Arm::Control))),
        sig4(ds.event_fraction(None))
    );
    println!("win probability {}", sig4(stats.theta.est));
    println!(
        "win odds {} ({} to {}), closed form {}",
        sig4(stats.win_odds.est),
        sig4(stats.win_odds.lo),
        sig4(stats.win_odds.hi),
        sig4(scenario.closed_form_win_odds())
    );
    println!("wrote dataset.csv, components.json");
    Ok(())
}
