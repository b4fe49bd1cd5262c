use std::path::Path;
use std::process::{Command, Output};

use cmsdisc::bounds::CALIBRATED_K;
use cmsdisc::chebyshev::{cheb_zeros, ChebKind};
use cmsdisc::measures::{moments, DiscreteMeasure, Domain};
use serde_json::Value;

fn cmsdisc(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_cmsdisc"))
        .current_dir(dir)
        .args(args)
        .env("RUST_LOG", "warn")
        .env_remove("CMSDISC_THREADS")
        .output()
        .expect("binary runs")
}

fn json(path: &Path) -> Value {
    serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap()
}

fn csv_rows(path: &Path) -> Vec<Vec<f64>> {
    let mut r = csv::Reader::from_path(path).unwrap();
    r.records()
        .map(|rec| rec.unwrap().iter().map(|f| f.parse().unwrap()).collect())
        .collect()
}

fn headers(path: &Path) -> Vec<String> {
    let mut r = csv::Reader::from_path(path).unwrap();
    r.headers().unwrap().iter().map(String::from).collect()
}

#[test]
fn envelope_first_kind_two_nodes() {
    let dir = tempfile::tempdir().unwrap();
    let out = cmsdisc(dir.path(), &["envelope", "--kind", "t", "--n0", "2", "--k0", "2", "--out", "e.json"]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let v = json(&dir.path().join("e.json"));
    assert!((v["p0_minus_q0"].as_f64().unwrap() - 0.5).abs() < 1e-12);
    assert_eq!(v["envelope_check"]["passed"], Value::Bool(true));
    assert_eq!(v["nodes"].as_array().unwrap().len(), 2);
    assert_eq!(v["grid"].as_array().unwrap().len(), 201);
}

#[test]
fn envelope_single_node_is_trivial() {
    let dir = tempfile::tempdir().unwrap();
    let out = cmsdisc(dir.path(), &["envelope", "--kind", "t", "--n0", "1", "--k0", "1", "--out", "e.json"]);
    assert!(out.status.success());
    let v = json(&dir.path().join("e.json"));
    for s in v["grid"].as_array().unwrap() {
        assert_eq!(s["p"].as_f64().unwrap(), 1.0);
        assert_eq!(s["q"].as_f64().unwrap(), 0.0);
    }
}

#[test]
fn envelope_rejects_bad_indices() {
    let dir = tempfile::tempdir().unwrap();
    for args in [
        ["envelope", "--kind", "t", "--n0", "0", "--k0", "1", "--out", "e.json"],
        ["envelope", "--kind", "u", "--n0", "3", "--k0", "4", "--out", "e.json"],
        ["envelope", "--kind", "u", "--n0", "65", "--k0", "1", "--out", "e.json"],
        ["envelope", "--kind", "x", "--n0", "3", "--k0", "1", "--out", "e.json"],
    ] {
        assert_eq!(cmsdisc(dir.path(), &args).status.code(), Some(2), "{args:?}");
    }
    assert_eq!(cmsdisc(dir.path(), &["envelope", "--unknown"]).status.code(), Some(2));
}

#[test]
fn bound_on_point_mass() {
    let dir = tempfile::tempdir().unwrap();
    DiscreteMeasure::dirac(0.0).write_csv(&dir.path().join("d.csv")).unwrap();
    let out = cmsdisc(dir.path(), &["bound", "--measure", "d.csv", "--kind", "t", "--n0", "2", "--x0", "0", "--out", "b.csv"]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let path = dir.path().join("b.csv");
    assert_eq!(headers(&path), ["x0", "true_discrepancy", "et_bound", "cms_exact_bound"]);
    let rows = csv_rows(&path);
    assert_eq!(rows.len(), 1);
    assert!((rows[0][1] - 0.5).abs() < 1e-15);
    assert!((rows[0][2] - 1.0).abs() < 1e-15);
    assert!(rows[0][3] >= rows[0][1]);
    let cfg = json(&dir.path().join("b.csv.config.json"));
    assert_eq!(cfg["n0"], 2);
}

#[test]
fn bound_default_grid_and_zero_moments() {
    let dir = tempfile::tempdir().unwrap();
    let zeros = cheb_zeros(ChebKind::First, 16);
    DiscreteMeasure::uniform(Domain::Line, &zeros)
        .unwrap()
        .write_csv(&dir.path().join("z.csv"))
        .unwrap();
    let out = cmsdisc(dir.path(), &["bound", "--measure", "z.csv", "--kind", "t", "--n0", "8", "--K", "2", "--out", "b.csv"]);
    assert!(out.status.success());
    let rows = csv_rows(&dir.path().join("b.csv"));
    assert_eq!(rows.len(), 201);
    assert_eq!(rows[0][0], -1.2);
    for r in &rows {
        assert!((r[2] - 2.0 / 8.0).abs() < 1e-12, "{r:?}");
        assert!(r[3] + 1e-12 >= r[1], "{r:?}");
    }
}

#[test]
fn bound_input_errors() {
    let dir = tempfile::tempdir().unwrap();
    let out = cmsdisc(dir.path(), &["bound", "--measure", "nope.csv", "--kind", "u", "--n0", "4", "--out", "b.csv"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("nope.csv"));

    std::fs::write(dir.path().join("bad.csv"), "position,weight\n0.1,abc\n").unwrap();
    let out = cmsdisc(dir.path(), &["bound", "--measure", "bad.csv", "--kind", "u", "--n0", "4", "--out", "b.csv"]);
    assert_eq!(out.status.code(), Some(2));

    DiscreteMeasure::roots_of_unity(3).write_csv(&dir.path().join("c.csv")).unwrap();
    let out = cmsdisc(dir.path(), &["bound", "--measure", "c.csv", "--kind", "u", "--n0", "4", "--out", "b.csv"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn wigner_tiny_run() {
    let dir = tempfile::tempdir().unwrap();
    let args = ["wigner", "--N", "2", "--trials", "1", "--ensemble", "real_rademacher", "--seed", "7", "--out", "w.csv"];
    let out = cmsdisc(dir.path(), &args);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let path = dir.path().join("w.csv");
    assert_eq!(headers(&path), ["x0", "mean_count", "expected_count", "error", "bound_term", "variance"]);
    let rows = csv_rows(&path);
    assert_eq!(rows.len(), 201);
    let mut last = 2.0;
    for r in &rows {
        assert!([0.0, 1.0, 2.0].contains(&r[1]));
        assert!(r[1] <= last);
        last = r[1];
        assert_eq!(r[5], 0.0);
    }
    assert_eq!(rows[0][1], 2.0);
    assert_eq!(rows[200][1], 0.0);
    let m = dir.path().join("w.csv.moments.csv");
    assert_eq!(headers(&m), ["n", "u_moment_mean", "std_err"]);
    assert_eq!(csv_rows(&m).len(), 1);

    let first = std::fs::read(&path).unwrap();
    assert!(cmsdisc(dir.path(), &args).status.success());
    assert_eq!(first, std::fs::read(&path).unwrap());
}

#[test]
fn wigner_variance_output() {
    let dir = tempfile::tempdir().unwrap();
    let out = cmsdisc(
        dir.path(),
        &["wigner", "--N", "30", "--trials", "30", "--ensemble", "complex_gaussian", "--variance", "--out", "w.csv"],
    );
    assert!(out.status.success());
    let v = dir.path().join("w.csv.variance.csv");
    assert_eq!(headers(&v), ["x0", "variance", "reference", "ratio"]);
    let cfg = json(&dir.path().join("w.csv.config.json"));
    assert_eq!(cfg["config"]["ensemble"]["seed"], 0);
    assert_eq!(cfg["config"]["ensemble"]["diag_variance"], 2.0);
}

#[test]
fn wigner_validation() {
    let dir = tempfile::tempdir().unwrap();
    let base = |n: &'static str, trials: &'static str, ens: &'static str| {
        vec!["wigner", "--N", n, "--trials", trials, "--ensemble", ens, "--out", "w.csv"]
    };
    assert_eq!(cmsdisc(dir.path(), &base("4", "2", "goe")).status.code(), Some(2));
    assert_eq!(cmsdisc(dir.path(), &base("1001", "1", "real_gaussian")).status.code(), Some(2));
    assert_eq!(cmsdisc(dir.path(), &base("4", "0", "real_gaussian")).status.code(), Some(2));
    let mut v = base("4", "10", "real_gaussian");
    v.push("--variance");
    assert_eq!(cmsdisc(dir.path(), &v).status.code(), Some(2));

    let out = Command::new(env!("CARGO_BIN_EXE_cmsdisc"))
        .current_dir(dir.path())
        .args(base("4", "2", "real_gaussian"))
        .env("CMSDISC_THREADS", "0")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn witness_single_node_and_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let out = cmsdisc(dir.path(), &["witness", "--n0", "1", "--out", "w.csv"]);
    assert!(out.status.success());
    let rows = csv_rows(&dir.path().join("w.csv"));
    assert_eq!(rows.len(), 2);
    assert!((rows[0][0] + 0.5).abs() < 1e-15 && (rows[1][0] - 0.5).abs() < 1e-15);
    assert!((rows[0][1] - 0.5).abs() < 1e-15 && (rows[1][1] - 0.5).abs() < 1e-15);

    let out = cmsdisc(dir.path(), &["witness", "--n0", "9", "--out", "w9.csv"]);
    assert!(out.status.success());
    let report = json(&dir.path().join("w9.csv.report.json"));
    for m in report["umoments"].as_array().unwrap() {
        assert!(m.as_f64().unwrap().abs() < 1e-12);
    }
    assert!(report["discrepancy_at_extreme_node"].as_f64().unwrap() >= report["sharpness_reference"].as_f64().unwrap());

    let original = cmsdisc::measures::sharpness_witness(9);
    let (loaded, _) = DiscreteMeasure::read_csv(&dir.path().join("w9.csv")).unwrap();
    let a = moments(&original, ChebKind::Second, 30);
    let b = moments(&loaded, ChebKind::Second, 30);
    for n in 1..=30 {
        assert!((a.real(n) - b.real(n)).abs() <= 1e-14);
    }
    let out = cmsdisc(dir.path(), &["bound", "--measure", "w9.csv", "--kind", "u", "--n0", "9", "--out", "b.csv"]);
    assert!(out.status.success());
}

#[test]
fn calibrate_matches_shipped_constants() {
    let dir = tempfile::tempdir().unwrap();
    let out = cmsdisc(dir.path(), &["calibrate", "--corpus-seed", "0", "--out", "k.json"]);
    assert!(out.status.success());
    let v = json(&dir.path().join("k.json"));
    let k = [v["k1"].as_f64().unwrap(), v["k2"].as_f64().unwrap(), v["k3"].as_f64().unwrap()];
    let shipped = [CALIBRATED_K.k1, CALIBRATED_K.k2, CALIBRATED_K.k3];
    for (a, b) in k.iter().zip(shipped) {
        assert!(*a <= b && *a > 0.9 * b, "{k:?} vs {shipped:?}");
    }
}
