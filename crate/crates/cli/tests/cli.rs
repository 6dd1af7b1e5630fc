use std::fs;
use std::path::PathBuf;
use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_specset"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).env_remove("SPECSET_TOL").output().expect("binary runs")
}

fn scratch(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("specset-cli-{}", std::process::id()));
    fs::create_dir_all(&dir).unwrap();
    dir.join(name)
}

fn report(out: &Output) -> serde_json::Value {
    serde_json::from_slice(&out.stdout).expect("stdout is a JSON report")
}

const UNIT_DISK_ZERO: &str = r#"{
  "a": {"n": 1, "re": [[0.0]], "im": [[0.0]]},
  "disks": [{"kind": "disk", "center": [0.0, 0.0], "radius": 1.0}],
  "f": {"num": [[1.0, 0.0]], "den": [[1.0, 0.0]]}
}"#;

const NON_SPECTRAL: &str = r#"{
  "a": {"n": 2, "re": [[0.5, 1.5], [0.0, 0.5]], "im": [[0.0, 0.0], [0.0, 0.0]]},
  "disks": [{"kind": "disk", "center": [0.0, 0.0], "radius": 1.0}],
  "f": {"num": [[0.0, 0.0], [1.0, 0.0]], "den": [[1.0, 0.0]]}
}"#;

const POLE_IN_X: &str = r#"{
  "a": {"n": 1, "re": [[0.1]], "im": [[0.0]]},
  "disks": [{"kind": "disk", "center": [0.0, 0.0], "radius": 1.0}],
  "f": {"num": [[1.0, 0.0]], "den": [[-0.5, 0.0], [1.0, 0.0]]}
}"#;

#[test]
fn bounds_defaults_and_bad_range() {
    let out = run(&["bounds"]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    let rows: Vec<&str> = text.lines().skip(1).filter(|l| !l.starts_with('#')).collect();
    assert_eq!(rows.len(), 200);
    assert_eq!(text.lines().filter(|l| l.starts_with("# crossover")).count(), 3);
    let first: Vec<f64> = rows[0].split(',').map(|x| x.parse().unwrap()).collect();
    assert!((first[2] - (2.0 + 2.0 / 3f64.sqrt())).abs() < 1e-3);
    assert_eq!(run(&["bounds", "--rmin", "2", "--rmax", "2"]).status.code(), Some(2));
    assert_eq!(run(&["bounds", "--rmin", "0.5"]).status.code(), Some(2));
}

#[test]
fn bounds_file_is_deterministic() {
    let (a, b) = (scratch("a.csv"), scratch("b.csv"));
    for p in [&a, &b] {
        assert_eq!(run(&["bounds", "--steps", "40", "--out", p.to_str().unwrap()]).status.code(), Some(0));
    }
    assert_eq!(fs::read(a).unwrap(), fs::read(b).unwrap());
}

#[test]
fn verify_random_annulus_batch() {
    let out = run(&["verify", "--random", "annulus", "--seed", "7", "--count", "100"]);
    assert_eq!(out.status.code(), Some(0));
    let r = report(&out);
    assert_eq!(r["schema"], 1);
    assert_eq!(r["stats"]["instances"], 100);
    assert_eq!(r["summary"]["skipped"], 0);
    assert!(r["stats"]["max_defect"].as_f64().unwrap() < 1e-7);
    assert!(r.get("wall_time_s").is_none());
}

#[test]
fn verify_three_disks_respects_theorem() {
    let out = run(&["verify", "--random", "n_disks3", "--seed", "1", "--count", "50"]);
    assert_eq!(out.status.code(), Some(0));
    let r = report(&out);
    assert!(r["stats"]["max_ratio"].as_f64().unwrap() <= 3.0 + 2.0 * 3f64.sqrt());
}

#[test]
fn verify_reports_are_byte_identical() {
    let a = run(&["verify", "--random", "lens", "--seed", "3", "--count", "5"]);
    let b = run(&["verify", "--random", "lens", "--seed", "3", "--count", "5"]);
    assert_eq!(a.stdout, b.stdout);
    let c = run(&["verify", "--random", "lens", "--seed", "3", "--count", "5", "--timing"]);
    assert!(report(&c)["wall_time_s"].as_f64().is_some());
}

#[test]
fn verify_skips_pole_inside() {
    let p = scratch("pole.json");
    fs::write(&p, POLE_IN_X).unwrap();
    let out = run(&["verify", "--instance", p.to_str().unwrap()]);
    let r = report(&out);
    assert_eq!(r["summary"]["skipped"], 1);
    assert!(r["skipped"][0]["reason"].as_str().unwrap().contains("pole on X"));
}

#[test]
fn kernels_scalar_oracle_and_expected_failure() {
    let p = scratch("zero.json");
    fs::write(&p, UNIT_DISK_ZERO).unwrap();
    let out = run(&["kernels", "--instance", p.to_str().unwrap(), "--samples", "16"]);
    assert_eq!(out.status.code(), Some(0));
    let r = report(&out);
    let psd = r["checks"].as_array().unwrap().iter().find(|c| c["name"] == "psd_disk1").unwrap();
    assert!((psd["value"].as_f64().unwrap() - 1.0 / (2.0 * std::f64::consts::PI)).abs() < 1e-14);

    let q = scratch("nonspectral.json");
    fs::write(&q, NON_SPECTRAL).unwrap();
    let out = run(&["kernels", "--instance", q.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let r = report(&out);
    assert_eq!(r["summary"]["expected_failures"], 1);
    let psd = r["checks"].as_array().unwrap().iter().find(|c| c["name"] == "psd_disk1").unwrap();
    assert_eq!(psd["pass"], false);
    assert_eq!(psd["expected_fail"], true);
}

#[test]
fn kernels_on_random_instances() {
    let out = run(&["kernels", "--random", "sector", "--seed", "2", "--count", "5", "--dim", "3"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(report(&out)["summary"]["failed"], 0);
}

#[test]
fn tessellate_annulus_and_figures() {
    let (svg, json) = (scratch("ann.svg"), scratch("ann.json"));
    let out = run(&["tessellate", "--preset", "annulus", "--svg", svg.to_str().unwrap(), "--json", json.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let s = fs::read_to_string(&svg).unwrap();
    assert_eq!(s.matches("class=\"median\"").count(), 1);
    assert_eq!(s.matches("class=\"boundary\"").count(), 2);
    let j: serde_json::Value = serde_json::from_str(&fs::read_to_string(&json).unwrap()).unwrap();
    assert_eq!(j["arcs"][0]["j"], 1);
    assert_eq!(j["arcs"][0]["k"], 2);

    let out = run(&["tessellate", "--preset", "figure4", "--viewport", "-3,-2,3,2"]);
    assert_eq!(out.status.code(), Some(0));
    let r = report(&out);
    assert_eq!(r["stats"]["proper_median_arcs"], r["stats"]["median_arcs"]);
}

#[test]
fn tessellate_json_round_trip() {
    let first = scratch("rt1.json");
    run(&["tessellate", "--preset", "figure2", "--json", first.to_str().unwrap()]);
    let second = scratch("rt2.json");
    let out = run(&["tessellate", "--disks", first.to_str().unwrap(), "--json", second.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(fs::read(first).unwrap(), fs::read(second).unwrap());
}

#[test]
fn tessellate_degenerate_exits_three() {
    let p = scratch("nested.json");
    fs::write(
        &p,
        r#"[{"kind": "disk", "center": [0, 0], "radius": 2}, {"kind": "disk", "center": [0, 0], "radius": 1}]"#,
    )
    .unwrap();
    let out = run(&["tessellate", "--disks", p.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&out.stderr).contains("error"));
    let q = scratch("negative.json");
    fs::write(&q, r#"[{"kind": "disk", "center": [0, 0], "radius": -1}]"#).unwrap();
    assert_eq!(run(&["tessellate", "--disks", q.to_str().unwrap()]).status.code(), Some(3));
}

#[test]
fn usage_errors_exit_two() {
    assert_eq!(run(&["verify"]).status.code(), Some(2));
    assert_eq!(run(&["verify", "--random", "hexagon", "--seed", "1"]).status.code(), Some(2));
    assert_eq!(run(&["tessellate", "--preset", "figure9"]).status.code(), Some(2));
    assert_eq!(run(&["tessellate", "--preset", "annulus", "--viewport", "1,2,3"]).status.code(), Some(2));
    let out = bin().args(["verify", "--random", "strip", "--seed", "1"]).env("SPECSET_TOL", "-1").output().unwrap();
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn tolerance_override_changes_digest() {
    let a = run(&["verify", "--random", "strip", "--seed", "1"]);
    let b = bin().args(["verify", "--random", "strip", "--seed", "1"]).env("SPECSET_TOL", "1e-8").output().unwrap();
    assert_eq!(b.status.code(), Some(0));
    assert_ne!(report(&a)["digest"], report(&b)["digest"]);
}

#[test]
fn instance_command_round_trips_through_verify() {
    let p = scratch("inst.json");
    let out = run(&["instance", "--random", "sector", "--param", "0.9", "--seed", "4", "--dim", "3", "--out", p.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let out = run(&["verify", "--instance", p.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(report(&out)["seed"], 4);
}
