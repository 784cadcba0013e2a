use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use hce_core::design::{simulate_trial, Scenario};
use hce_core::win::{analyze, AnalysisOptions};
use serde_json::Value;

fn hce(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_hce")).args(args).env_remove("HCE_THEME").output().unwrap()
}

fn data_file(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../data").join(name)
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

/// Simulates scenario A with `n` per arm into `dir`.
fn simulate(dir: &Path, n: &str) -> (PathBuf, PathBuf) {
    let o = hce(&["simulate", "--scenario", s(&data_file("scenario_a.json")), "--n", n, "--out", s(dir)]);
    assert!(o.status.success(), "{}", stderr(&o));
    (dir.join("dataset.csv"), dir.join("components.json"))
}

#[test]
fn summarize_round_trips_the_simulation() {
    let tmp = tempfile::tempdir().unwrap();
    let (csv, comps) = simulate(tmp.path(), "250");
    let o = hce(&["summarize", "--input", s(&csv), "--components", s(&comps), "--json"]);
    assert!(o.status.success(), "{}", stderr(&o));
    let doc: Value = serde_json::from_slice(&o.stdout).unwrap();
    let c = &doc["stats"]["counts"];
    let total = c["wins"].as_u64().unwrap() + c["losses"].as_u64().unwrap() + c["ties"].as_u64().unwrap();
    assert_eq!(total, 250 * 250);

    let text = std::fs::read_to_string(data_file("scenario_a.json")).unwrap();
    let scenario = Scenario { n_per_arm: 250, ..Scenario::from_json(&text).unwrap() };
    let direct = analyze(&simulate_trial(&scenario).unwrap(), &AnalysisOptions::default()).unwrap();
    assert_eq!(doc["stats"]["theta"]["est"].as_f64().unwrap(), direct.theta.est);
    assert_eq!(doc["cumulative"].as_array().unwrap().len(), 7);
}

#[test]
fn alpha_flag_narrows_intervals() {
    let tmp = tempfile::tempdir().unwrap();
    let (csv, comps) = simulate(tmp.path(), "200");
    let width = |alpha: &str| {
        let o = hce(&["summarize", "--input", s(&csv), "--components", s(&comps), "--alpha", alpha, "--json"]);
        let doc: Value = serde_json::from_slice(&o.stdout).unwrap();
        let wo = &doc["stats"]["win_odds"];
        wo["hi"].as_f64().unwrap() - wo["lo"].as_f64().unwrap()
    };
    assert!(width("0.1") < width("0.05"));
}

#[test]
fn text_summary_uses_four_significant_digits() {
    let tmp = tempfile::tempdir().unwrap();
    let (csv, comps) = simulate(tmp.path(), "200");
    let o = hce(&["summarize", "--input", s(&csv), "--components", s(&comps)]);
    let out = String::from_utf8(o.stdout).unwrap();
    let line = out.lines().find(|l| l.starts_with("win odds")).unwrap();
    let est = line.split_whitespace().nth(2).unwrap();
    assert_eq!(est.chars().filter(char::is_ascii_digit).count(), 4, "{line}");
}

#[test]
fn missing_arm_column_is_an_input_error() {
    let tmp = tempfile::tempdir().unwrap();
    let csv = tmp.path().join("bad.csv");
    std::fs::write(&csv, "SUBJID,GROUPN,AVAL0\nA1,1,10\n").unwrap();
    let o = hce(&["summarize", "--input", s(&csv)]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("ARM"), "{}", stderr(&o));
}

#[test]
fn empty_arm_is_degenerate() {
    let tmp = tempfile::tempdir().unwrap();
    let csv = tmp.path().join("one_arm.csv");
    std::fs::write(&csv, "SUBJID,ARM,GROUPN,AVAL0\nA1,Active,7,1.5\nA2,Active,1,100\n").unwrap();
    let o = hce(&["summarize", "--input", s(&csv)]);
    assert_eq!(o.status.code(), Some(3), "{}", stderr(&o));
}

#[test]
fn selected_plots_and_sidecars() {
    let tmp = tempfile::tempdir().unwrap();
    let (csv, comps) = simulate(&tmp.path().join("sim"), "150");
    let out = tmp.path().join("plots");
    let o =
        hce(&["plot", "--input", s(&csv), "--components", s(&comps), "--plots", "maraca,components", "--out", s(&out)]);
    assert!(o.status.success(), "{}", stderr(&o));
    let mut names: Vec<String> =
        std::fs::read_dir(&out).unwrap().map(|e| e.unwrap().file_name().to_string_lossy().into_owned()).collect();
    names.sort();
    assert_eq!(names, ["components.meta.json", "components.svg", "maraca.meta.json", "maraca.svg"]);
}

#[test]
fn maraca_on_event_free_data_warns() {
    let tmp = tempfile::tempdir().unwrap();
    let csv = tmp.path().join("no_events.csv");
    let mut text = String::from("SUBJID,ARM,GROUPN,AVAL0\n");
    for i in 0..20 {
        text += &format!("A{i},Active,7,{}\nC{i},Control,7,{}\n", i as f64 * 0.5, i as f64 * 0.4 - 1.0);
    }
    std::fs::write(&csv, text).unwrap();
    let out = tmp.path().join("plots");
    let o = hce(&["plot", "--input", s(&csv), "--plots", "maraca", "--out", s(&out)]);
    assert!(o.status.success(), "{}", stderr(&o));
    let meta: Value = serde_json::from_str(&std::fs::read_to_string(out.join("maraca.meta.json")).unwrap()).unwrap();
    assert!(meta["warnings"].as_array().unwrap().iter().any(|w| w.as_str().unwrap().starts_with("degenerate layout")));
}

#[test]
fn failing_plot_does_not_stop_the_others() {
    let tmp = tempfile::tempdir().unwrap();
    let csv = tmp.path().join("constant.csv");
    let mut text = String::from("SUBJID,ARM,GROUPN,AVAL0\n");
    for i in 0..10 {
        text += &format!("A{i},Active,7,1\nC{i},Control,7,1\n");
    }
    std::fs::write(&csv, text).unwrap();
    let out = tmp.path().join("plots");
    let o = hce(&["plot", "--input", s(&csv), "--plots", "shift,mosaic", "--out", s(&out)]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("plot shift failed"));
    assert!(out.join("mosaic.svg").exists());
}

#[test]
fn sunset_defaults_and_overlay() {
    let tmp = tempfile::tempdir().unwrap();
    let o = hce(&["sunset", "--overlay", s(&data_file("overlay_example.csv")), "--hull", "--out", s(tmp.path())]);
    assert!(o.status.success(), "{}", stderr(&o));
    let csv = std::fs::read_to_string(tmp.path().join("sunset.csv")).unwrap();
    assert_eq!(csv.lines().count(), 61);
    let svg = std::fs::read_to_string(tmp.path().join("sunset.svg")).unwrap();
    assert!(svg.contains(r#"id="iso-highlight-0""#));
    assert!(svg.contains(r#"id="overlay-polygon""#));
    let meta: Value =
        serde_json::from_str(&std::fs::read_to_string(tmp.path().join("sunset.meta.json")).unwrap()).unwrap();
    assert_eq!(meta["overlay_points"], 7);
}

#[test]
fn invalid_inputs_exit_2() {
    let tmp = tempfile::tempdir().unwrap();
    let out = s(tmp.path());
    for args in [
        vec!["sunset", "--hr-range", "1.2,0.5", "--out", out],
        vec!["sunset", "--grid", "1", "--out", out],
        vec!["sunset", "--hull", "--out", out],
        vec!["simulate", "--scenario", s(&data_file("scenario_a.json")), "--n", "0", "--out", out],
        vec!["summarize", "--input", "/nonexistent.csv"],
        vec!["plot", "--plots", "pie", "--input", "x", "--out", out],
    ] {
        assert_eq!(hce(&args).status.code(), Some(2), "{args:?}");
    }
}

#[test]
fn colorblind_theme_changes_colors_only() {
    let tmp = tempfile::tempdir().unwrap();
    let (csv, comps) = simulate(&tmp.path().join("sim"), "100");
    let run = |theme: &str, dir: &str| {
        let out = tmp.path().join(dir);
        let o = Command::new(env!("CARGO_BIN_EXE_hce"))
            .args(["plot", "--input", s(&csv), "--components", s(&comps), "--plots", "binary", "--out", s(&out)])
            .env("HCE_THEME", theme)
            .output()
            .unwrap();
        assert!(o.status.success());
        (
            std::fs::read_to_string(out.join("binary.svg")).unwrap(),
            std::fs::read_to_string(out.join("binary.meta.json")).unwrap(),
        )
    };
    let (a, am) = run("default", "d");
    let (b, bm) = run("colorblind", "c");
    assert_ne!(a, b);
    assert_eq!(am, bm);
    let bad = Command::new(env!("CARGO_BIN_EXE_hce"))
        .args(["plot", "--input", s(&csv), "--out", s(tmp.path())])
        .env("HCE_THEME", "neon")
        .output()
        .unwrap();
    assert_eq!(bad.status.code(), Some(2));
}
