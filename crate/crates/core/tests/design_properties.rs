use hce_core::design::{
    hce_theta, simulate_trial, solve_delta_for_wo, sunset_cell_closed_form, sunset_cell_mc, sunset_grid,
    sunset_theta_closed_form, tune_mean_difference, GridMethod, GridSpec, McConfig, Scenario, SunsetParams,
};
use hce_core::model::Arm;
use hce_core::win::{analyze, AnalysisOptions};
use hce_core::Execution;
use statrs::distribution::{ContinuousCDF, Normal};

/// Composite Simpson on [a, b].
fn simpson(f: impl Fn(f64) -> f64, a: f64, b: f64, n: usize) -> f64 {
    let h = (b - a) / n as f64;
    let mut s = f(a) + f(b);
    for i in 1..n {
        s += f(a + i as f64 * h) * if i % 2 == 1 { 4.0 } else { 2.0 };
    }
    s * h / 3.0
}

fn phi(x: f64) -> f64 {
    Normal::standard().cdf(x)
}

#[test]
fn closed_form_matches_quadrature_one_component() {
    let tau: f64 = 3.0;
    for &(la, lc, delta, sd) in &[(0.2f64, 0.3, 0.5, 1.0), (0.5, 0.5, 0.0, 2.0), (0.05, 0.4, -1.0, 4.0)] {
        let sa = (-la * tau).exp();
        let sc = (-lc * tau).exp();
        // control event first, or active event-free while control had one
        let later = simpson(|t: f64| la * (-la * t).exp() * (1.0 - (-lc * t).exp()), 0.0, tau, 20_000);
        let oracle = later + sa * (1.0 - sc) + sa * sc * phi(delta / (sd * 2f64.sqrt()));
        let cf = hce_theta(&[la], &[lc], tau, delta, sd);
        assert!((cf - oracle).abs() < 1e-10, "{cf} vs {oracle}");
    }
}

#[test]
fn closed_form_matches_quadrature_two_components() {
    let (tau, delta, sd) = (2.0, 0.7, 1.5);
    let (a1, a2, c1, c2) = (0.15, 0.3, 0.25, 0.35);
    let s = |l: f64| (-l * tau).exp();
    let later = |la: f64, lc: f64| simpson(|t: f64| la * (-la * t).exp() * (1.0 - (-lc * t).exp()), 0.0, tau, 20_000);
    // category 1 (worst): active wins if it escapes component 1 while control does not
    let mut oracle = s(a1) * (1.0 - s(c1)) + later(a1, c1);
    // both escape component 1: same comparison on component 2
    oracle += s(a1) * s(c1) * (s(a2) * (1.0 - s(c2)) + later(a2, c2));
    oracle += s(a1) * s(c1) * s(a2) * s(c2) * phi(delta / (sd * 2f64.sqrt()));
    let cf = hce_theta(&[a1, a2], &[c1, c2], tau, delta, sd);
    assert!((cf - oracle).abs() < 1e-10, "{cf} vs {oracle}");
}

#[test]
fn null_cell_is_exactly_one() {
    for p in [0.0, 0.1, 0.5, 0.8] {
        let params = SunsetParams { p_event_control: p, ..Default::default() };
        assert!((sunset_cell_closed_form(1.0, 0.0, &params).unwrap() - 1.0).abs() <= 1e-12);
    }
}

#[test]
fn closed_form_grid_is_monotone() {
    let g = sunset_grid(&GridSpec::default()).unwrap();
    assert_eq!((g.values.len(), g.values[0].len()), (60, 60));
    for r in 0..60 {
        for c in 0..60 {
            if c + 1 < 60 {
                assert!(g.values[r][c + 1] < g.values[r][c], "hr direction at ({r}, {c})");
            }
            if r + 1 < 60 {
                assert!(g.values[r + 1][c] > g.values[r][c], "delta direction at ({r}, {c})");
            }
        }
    }
}

#[test]
fn continuous_only_matches_standardized_difference() {
    let params = SunsetParams { p_event_control: 0.0, sd: 1.0, follow_up: 1095.0 };
    let target = phi(1.0 / 2f64.sqrt());
    assert!((sunset_theta_closed_form(1.0, 1.0, &params).unwrap() - target).abs() < 1e-14);
    let mc =
        sunset_cell_mc(1.0, 1.0, &params, &McConfig { n_per_arm: 500, reps: 200, seed: 3, exec: Execution::Parallel })
            .unwrap();
    assert!((mc.theta - target).abs() <= 3.0 * mc.theta_se, "{} +- {}", mc.theta, mc.theta_se);
}

#[test]
fn monte_carlo_agrees_with_closed_form_on_corners() {
    let params = SunsetParams::default();
    let mc = McConfig { n_per_arm: 300, reps: 100, seed: 9, exec: Execution::Parallel };
    for &(hr, d) in &[(0.5, -0.5), (0.5, 2.0), (1.15, -0.5), (1.15, 2.0), (0.8, 0.75)] {
        let e = sunset_cell_mc(hr, d, &params, &mc).unwrap();
        let cf = sunset_cell_closed_form(hr, d, &params).unwrap();
        assert!((e.win_odds - cf).abs() <= 3.0 * e.win_odds_se, "({hr}, {d}): {} vs {cf}", e.win_odds);
    }
}

#[test]
fn monte_carlo_grid_ignores_scheduling() {
    let spec = |exec| GridSpec {
        resolution: (3, 4),
        method: GridMethod::MonteCarlo,
        mc: McConfig { n_per_arm: 60, reps: 10, seed: 7, exec },
        ..Default::default()
    };
    let a = sunset_grid(&spec(Execution::Sequential)).unwrap();
    let b = sunset_grid(&spec(Execution::Parallel)).unwrap();
    assert_eq!(a.to_csv(), b.to_csv());
}

#[test]
fn anchor_solver_inverts_closed_form() {
    let params = SunsetParams::default();
    for hr in [0.6, 0.8, 1.0, 1.1] {
        let d = solve_delta_for_wo(hr, 1.2, &params).unwrap();
        assert!((sunset_cell_closed_form(hr, d, &params).unwrap() - 1.2).abs() < 1e-9);
    }
    assert!(solve_delta_for_wo(0.8, 0.0, &params).is_err());
}

fn scenario(name: &str) -> Scenario {
    let path = format!("{}/../../data/{name}.json", env!("CARGO_MANIFEST_DIR"));
    Scenario::from_json(&std::fs::read_to_string(path).unwrap()).unwrap()
}

#[test]
fn shipped_scenarios_hit_their_targets() {
    for (name, frac) in [("scenario_a", 0.50), ("scenario_b", 0.25)] {
        let s = scenario(name);
        let wo = s.closed_form_win_odds();
        assert!((1.17..=1.27).contains(&wo), "{name}: {wo}");
        assert!((s.total_control_event_prob() - frac).abs() < 0.05);
        let ds = simulate_trial(&s).unwrap();
        assert_eq!(ds.arm_size(Arm::Active), 2000);
        assert!((ds.event_fraction(None) - frac).abs() <= 0.03, "{name}: {}", ds.event_fraction(None));
        let st = analyze(&ds, &AnalysisOptions::default()).unwrap();
        assert!(st.win_odds.contains(wo), "{name}: {:?}", st.win_odds);
    }
}

#[test]
fn tuning_recovers_shipped_mean_difference() {
    for name in ["scenario_a", "scenario_b"] {
        let s = scenario(name);
        let d = tune_mean_difference(&s, s.closed_form_win_odds()).unwrap();
        assert!((d - s.mean_difference()).abs() < 1e-6);
    }
}

#[test]
fn simulation_is_reproducible() {
    let s = Scenario { n_per_arm: 50, ..scenario("scenario_a") };
    assert_eq!(simulate_trial(&s).unwrap(), simulate_trial(&s).unwrap());
    let other = Scenario { seed: s.seed + 1, ..s.clone() };
    assert_ne!(simulate_trial(&s).unwrap(), simulate_trial(&other).unwrap());
}

#[test]
fn large_sample_estimate_converges() {
    let s = Scenario { n_per_arm: 5000, seed: 42, ..scenario("scenario_b") };
    let st = analyze(&simulate_trial(&s).unwrap(), &AnalysisOptions::default()).unwrap();
    let se = (st.theta.hi - st.theta.lo) / (2.0 * 1.96);
    assert!((st.theta.est - s.closed_form_theta()).abs() < 3.0 * se);
}
