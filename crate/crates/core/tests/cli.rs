use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn lab(spec: &Path, out: &Path, extra: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_turret-lab"))
        .arg("--spec")
        .arg(spec)
        .arg("--out")
        .arg(out)
        .args(["--threads", "1"])
        .args(extra)
        .output()
        .expect("binary runs")
}

fn write(dir: &Path, name: &str, body: &str) -> std::path::PathBuf {
    let p = dir.join(name);
    fs::write(&p, body).unwrap();
    p
}

#[test]
fn region_run_writes_csv_svg_and_manifest() {
    let tmp = tempfile::tempdir().unwrap();
    let spec = write(tmp.path(), "r.toml", "subcommand = \"region2d\"\n[params]\nsvg = true\n");
    let out = tmp.path().join("out");
    let o = lab(&spec, &out, &[]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let dir = out.join("region2d");
    for f in ["region2d.csv", "region2d.svg", "manifest.json", "manifest.timestamp"] {
        assert!(dir.join(f).exists(), "missing {f}");
    }
    let manifest: serde_json::Value = serde_json::from_str(&fs::read_to_string(dir.join("manifest.json")).unwrap()).unwrap();
    assert_eq!(manifest["subcommand"], "region2d");
    assert!(manifest["crate_version"].is_string());

    // The widest point of the tangent region sits behind the turret.
    let mut rdr = csv::Reader::from_path(dir.join("region2d.csv")).unwrap();
    let tangent_max = rdr
        .deserialize::<std::collections::HashMap<String, f64>>()
        .map(|r| r.unwrap()["tangent_r"])
        .fold(0.0f64, f64::max);
    let g = turret_evasion::geometry2d::gamma_max();
    assert!((tangent_max - (1.0 + g * g).sqrt()).abs() < 1e-9);
}

#[test]
fn same_seed_gives_identical_csv() {
    let tmp = tempfile::tempdir().unwrap();
    let spec = write(
        tmp.path(),
        "s.json",
        r#"{"subcommand": "sweep2d", "params": {"n_max": 6, "trials": 40}}"#,
    );
    let a = tmp.path().join("a");
    let b = tmp.path().join("b");
    let c = tmp.path().join("c");
    assert_eq!(lab(&spec, &a, &["--seed", "4"]).status.code(), Some(0));
    assert_eq!(lab(&spec, &b, &["--seed", "4"]).status.code(), Some(0));
    assert_eq!(lab(&spec, &c, &["--seed", "5"]).status.code(), Some(0));
    let read = |d: &Path| fs::read(d.join("sweep2d/sweep2d_trials.csv")).unwrap();
    assert_eq!(read(&a), read(&b));
    assert_ne!(read(&a), read(&c));
    assert_eq!(
        fs::read(a.join("sweep2d/manifest.json")).unwrap(),
        fs::read(b.join("sweep2d/manifest.json")).unwrap()
    );

    let mut rdr = csv::Reader::from_path(a.join("sweep2d/sweep2d_trials.csv")).unwrap();
    for row in rdr.deserialize::<turret_evasion::placement2d::TrialResult>() {
        let t = row.unwrap();
        assert!(t.optimal_len <= t.greedy_len + 1e-12);
    }
}

#[test]
fn unknown_key_is_a_bad_spec_and_is_named() {
    let tmp = tempfile::tempdir().unwrap();
    let spec = write(tmp.path(), "bad.toml", "subcommand = \"duo2d\"\n[params]\nsamplez = 3\n");
    let out = tmp.path().join("out");
    let o = lab(&spec, &out, &[]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("samplez"));
    assert!(!out.join("duo2d").join("duo2d.csv").exists());
}

#[test]
fn unparseable_or_missing_spec_is_exit_2() {
    let tmp = tempfile::tempdir().unwrap();
    let spec = write(tmp.path(), "junk.toml", "subcommand = [\n");
    assert_eq!(lab(&spec, tmp.path(), &[]).status.code(), Some(2));
    assert_eq!(lab(&tmp.path().join("none.toml"), tmp.path(), &[]).status.code(), Some(2));
    let o = Command::new(env!("CARGO_BIN_EXE_turret-lab")).output().unwrap();
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn failed_run_leaves_no_partial_outputs() {
    let tmp = tempfile::tempdir().unwrap();
    let spec = write(
        tmp.path(),
        "p.toml",
        "subcommand = \"sphere_paths\"\n[params]\nsizes = [6, 8]\n",
    );
    let out = tmp.path().join("out");
    let dir = out.join("sphere_paths");
    fs::create_dir_all(&dir).unwrap();
    // A plain file where the TSPLIB directory should go makes the final move fail.
    fs::write(dir.join("tsplib"), "in the way").unwrap();
    let o = lab(&spec, &out, &[]);
    assert_ne!(o.status.code(), Some(0));
    let left: Vec<_> = fs::read_dir(&dir).unwrap().map(|e| e.unwrap().file_name()).collect();
    assert_eq!(left, vec![std::ffi::OsString::from("tsplib")], "left behind: {left:?}");
}

#[test]
fn engagement_grid_has_one_row_per_weight() {
    let tmp = tempfile::tempdir().unwrap();
    let spec = write(
        tmp.path(),
        "e.toml",
        "subcommand = \"engagement3d\"\n[params]\nn = 6\nxi = [0.0, 0.2, 0.4, 0.6, 0.8, 1.0]\n",
    );
    let out = tmp.path().join("out");
    let o = lab(&spec, &out, &[]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let text = fs::read_to_string(out.join("engagement3d/engagement3d.csv")).unwrap();
    assert_eq!(text.lines().count(), 7);
    assert!(text.starts_with("formation,strategy,xi,max_distance_m"));
}
