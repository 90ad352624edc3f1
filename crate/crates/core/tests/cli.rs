use std::path::Path;
use std::process::{Command, Output};

use stickydiscs::cli::analyze_configuration;
use stickydiscs::orient::DEFAULT_TOL_THETA;
use stickydiscs::synth::hexagon_minimizer;

fn stickydiscs(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_stickydiscs"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn path(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn analyze_seven_point_hexagon() {
    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("points.csv");
    let pts: Vec<String> = std::iter::once("0,0".to_string())
        .chain((0..6).map(|k| {
            let a = std::f64::consts::FRAC_PI_3 * k as f64;
            format!("{},{}", a.cos(), a.sin())
        }))
        .collect();
    std::fs::write(&csv, format!("x,y\n{}\n", pts.join("\n"))).unwrap();
    let out = stickydiscs(&["analyze", "--eps", "1", path(&csv)]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["energy"]["E"], -12);
    assert_eq!(v["chi"], 1);
    assert_eq!(v["grains"].as_array().unwrap().len(), 1);
    assert_eq!(v["faces"]["triangular"], 6);
    assert!(v["config"]["hash"].as_str().unwrap().len() == 64);
}

#[test]
fn synth_hexagon_has_nineteen_rows() {
    let out = stickydiscs(&["synth", "hexagon", "--s", "2", "--eps", "0.5"]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    let rows = text.lines().filter(|l| !l.starts_with('#')).count() - 1;
    assert_eq!(rows, 19);
}

#[test]
fn coincident_points_exit_2() {
    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("bad.csv");
    std::fs::write(&csv, "x,y\n0.25,0.5\n0.25,0.5\n").unwrap();
    let out = stickydiscs(&["analyze", "--eps", "1", path(&csv)]);
    assert_eq!(out.status.code(), Some(2));
    assert!(!out.stderr.is_empty());
}

#[test]
fn synth_then_analyze_matches_in_memory_report() {
    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("hex.csv");
    let json = dir.path().join("hex.json");
    assert!(stickydiscs(&["synth", "hexagon", "--s", "4", "--eps", "0.25", "--out", path(&csv)])
        .status
        .success());
    assert!(stickydiscs(&["analyze", "--eps", "0.25", "--out", path(&json), path(&csv)])
        .status
        .success());
    let report = analyze_configuration(&hexagon_minimizer(4, 0.25).unwrap(), DEFAULT_TOL_THETA).unwrap();
    let mut expected = serde_json::to_string_pretty(&report).unwrap();
    expected.push('\n');
    assert_eq!(std::fs::read_to_string(&json).unwrap(), expected);
}

#[test]
fn sweep_writes_json_and_csv_deterministically() {
    let dir = tempfile::tempdir().unwrap();
    let spec = dir.path().join("spec.json");
    std::fs::write(
        &spec,
        r#"{"shape": {"kind": "hexagon_minimizer"}, "epsilons": [0.5, 0.25, 0.125]}"#,
    )
    .unwrap();
    let (a, b) = (dir.path().join("a.json"), dir.path().join("b.json"));
    for out in [&a, &b] {
        let o = stickydiscs(&["sweep", path(&spec), "--out", path(out)]);
        assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    }
    assert_eq!(std::fs::read(&a).unwrap(), std::fs::read(&b).unwrap());
    let csv = std::fs::read_to_string(a.with_extension("csv")).unwrap();
    assert_eq!(csv.lines().count(), 4);
    assert!(csv.starts_with("epsilon,offset_x,offset_y,N,E,surplus"));
}

#[test]
fn spec_errors_exit_2() {
    let dir = tempfile::tempdir().unwrap();
    let spec = dir.path().join("spec.json");
    std::fs::write(&spec, r#"{"shape": {"kind": "hexagon_minimizer"}, "epsilons": [0.25, 0.5]}"#).unwrap();
    assert_eq!(stickydiscs(&["sweep", path(&spec)]).status.code(), Some(2));
    assert_eq!(stickydiscs(&["render", "--eps", "1", "missing.csv"]).status.code(), Some(2));
    assert_eq!(stickydiscs(&["synth", "hexagon", "--s", "0", "--eps", "1"]).status.code(), Some(2));
}

#[test]
fn render_is_deterministic_svg() {
    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("r.csv");
    assert!(stickydiscs(&["synth", "random", "--seed", "3", "--out", path(&csv)]).status.success());
    let run = |mode: &str| stickydiscs(&["render", "--eps", "1", "--color-by", mode, path(&csv)]).stdout;
    for mode in ["orientation", "edge-class", "grain"] {
        let svg = run(mode);
        assert!(svg.starts_with(b"<svg"));
        assert_eq!(svg, run(mode));
    }
}

#[test]
fn overlap_and_tessellate_subcommands() {
    let o = stickydiscs(&["overlap", "--from", "1.0", "--to", "1.3", "--count", "4"]);
    assert!(o.status.success());
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["rows"].as_array().unwrap().len(), 4);

    let dir = tempfile::tempdir().unwrap();
    let spec = dir.path().join("t.json");
    std::fs::write(
        &spec,
        r#"{"shape": {"kind": "polygon", "vertices": [{"x":0,"y":0},{"x":1,"y":0},{"x":1,"y":1},{"x":0,"y":1}]},
            "family": "square", "thetas": [1.5707963267948966], "epsilons": [0.25]}"#,
    )
    .unwrap();
    let o = stickydiscs(&["tessellate", path(&spec)]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["rows"][0]["per_eps"], 4.0);
}
