use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;
use tempfile::TempDir;

fn bin() -> Command {
    let mut c = Command::new(env!("CARGO_BIN_EXE_kdvscatter"));
    c.env_remove("KDVSCATTER_THREADS");
    c
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("spawn kdvscatter")
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exit code")
}

fn path(dir: &TempDir, name: &str) -> PathBuf {
    dir.path().join(name)
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

fn read(p: &Path) -> Value {
    serde_json::from_str(&std::fs::read_to_string(p).unwrap()).unwrap()
}

fn sample(dir: &TempDir, name: &str) -> PathBuf {
    let p = path(dir, &format!("{name}.json"));
    let out = run(&["sample", name, "-o", s(&p)]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    p
}

fn values(v: &Value) -> Vec<f64> {
    v["values"].as_array().unwrap().iter().map(|x| x.as_f64().unwrap()).collect()
}

fn l2_distance(a: &[f64], b: &[f64], half_width: f64) -> f64 {
    let h = 2.0 * half_width / a.len() as f64;
    (a.iter().zip(b).map(|(x, y)| (x - y).powi(2)).sum::<f64>() * h).sqrt()
}

#[test]
fn scatter_then_validate_and_invert() {
    let dir = TempDir::new().unwrap();
    let q = sample(&dir, "gaussian");
    let sd = path(&dir, "s.json");
    assert_eq!(code(&run(&["scatter", s(&q), "-o", s(&sd)])), 0);
    let file = read(&sd);
    assert_eq!(file["kgrid"]["n_k"], 1024);
    for column in ["S", "W", "r_plus", "r_minus", "t", "A", "I"] {
        assert_eq!(file[column].as_array().unwrap().len(), 1025, "{column}");
    }
    assert_eq!(file["certificate"]["passed"], true);
    assert!(file["report"]["ws_identity"].as_f64().unwrap() < 1e-7);

    let report = path(&dir, "v.json");
    assert_eq!(code(&run(&["validate", s(&sd), "-o", s(&report)])), 0);
    assert_eq!(read(&report)["passed"], true);

    let back = path(&dir, "back.json");
    assert_eq!(code(&run(&["invert", s(&sd), "-o", s(&back)])), 0);
    let rec = read(&back);
    assert!(rec["report"]["overlap_mismatch"].as_f64().unwrap() < 1e-3);
    assert!(l2_distance(&values(&rec), &values(&read(&q)), 20.0) < 1e-3);
}

#[test]
fn tampered_scattering_file_fails_validation() {
    let dir = TempDir::new().unwrap();
    let q = sample(&dir, "sech2-barrier");
    let sd = path(&dir, "s.json");
    assert_eq!(code(&run(&["scatter", s(&q), "-o", s(&sd)])), 0);
    let mut file = read(&sd);
    file["W"][700][0] = Value::from(file["W"][700][0].as_f64().unwrap() + 1e-3);
    std::fs::write(&sd, file.to_string()).unwrap();
    let out = run(&["validate", s(&sd)]);
    assert_eq!(code(&out), 4);
    let report: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(report["passed"], false);
}

#[test]
fn zero_potential_needs_the_override() {
    let dir = TempDir::new().unwrap();
    let q = sample(&dir, "gaussian");
    let mut file = read(&q);
    let n = file["values"].as_array().unwrap().len();
    file["values"] = Value::from(vec![0.0; n]);
    std::fs::write(&q, file.to_string()).unwrap();

    let sd = path(&dir, "s.json");
    assert_eq!(code(&run(&["scatter", s(&q), "-o", s(&sd)])), 3);
    assert!(!sd.exists());
    assert_eq!(code(&run(&["scatter", s(&q), "-o", s(&sd), "--allow-nongeneric"])), 0);
    let out = read(&sd);
    assert_eq!(out["certificate"]["passed"], false);
    let (k_max, n_k) = (16.0, 1024);
    for (j, (sv, wv)) in out["S"].as_array().unwrap().iter().zip(out["W"].as_array().unwrap()).enumerate() {
        let k = -k_max + j as f64 * 2.0 * k_max / n_k as f64;
        assert_eq!(sv[0].as_f64().unwrap(), 0.0);
        assert_eq!(sv[1].as_f64().unwrap(), 0.0);
        assert_eq!(wv[0].as_f64().unwrap(), 0.0);
        assert!((wv[1].as_f64().unwrap() - 2.0 * k).abs() < 1e-12);
    }
}

#[test]
fn malformed_input_exits_2_without_output() {
    let dir = TempDir::new().unwrap();
    let bad = path(&dir, "bad.json");
    std::fs::write(&bad, "{\"grid\": {\"L\": 20.0, \"n\": 2048}, \"values\": [0.0, ").unwrap();
    for cmd in ["scatter", "invert", "validate"] {
        let out_file = path(&dir, "out.json");
        let out = run(&[cmd, s(&bad), "-o", s(&out_file)]);
        assert_eq!(code(&out), 2, "{cmd}");
        assert!(!out_file.exists(), "{cmd}");
    }
    // Wrong length for the declared grid.
    std::fs::write(&bad, "{\"grid\": {\"L\": 20.0, \"n\": 8}, \"values\": [0.0], \"N\": 2, \"M\": 4}").unwrap();
    assert_eq!(code(&run(&["scatter", s(&bad)])), 2);
    assert_eq!(code(&run(&["scatter", s(&path(&dir, "missing.json"))])), 2);
}

#[test]
fn configuration_errors_exit_2() {
    let dir = TempDir::new().unwrap();
    let q = sample(&dir, "gaussian");
    assert_eq!(code(&run(&["scatter", s(&q), "--n-k", "1000"])), 2);
    assert_eq!(code(&run(&["scatter", s(&q), "--c-plus", "1", "--c", "0"])), 2);
    assert_eq!(code(&run(&["scatter", s(&q), "--no-such-flag"])), 2);
    assert_eq!(code(&run(&["evolve", s(&q), "--t", "0.1", "--method", "leapfrog"])), 2);
    let out = bin().env("KDVSCATTER_THREADS", "many").args(["scatter", s(&q)]).output().unwrap();
    assert_eq!(code(&out), 2);
    let out = bin().env("KDVSCATTER_THREADS", "1").args(["scatter", s(&q)]).output().unwrap();
    assert_eq!(code(&out), 0);
}

#[test]
fn inversion_gates() {
    let dir = TempDir::new().unwrap();
    let q = sample(&dir, "gaussian");
    let sd = path(&dir, "s.json");
    assert_eq!(code(&run(&["scatter", s(&q), "-o", s(&sd)])), 0);

    // σ(0) < 0 is outside the admissible class.
    let mut file = read(&sd);
    let flipped: Vec<Value> = file["S"]
        .as_array()
        .unwrap()
        .iter()
        .map(|p| Value::from(vec![-p[0].as_f64().unwrap(), -p[1].as_f64().unwrap()]))
        .collect();
    file["S"] = Value::from(flipped);
    let neg = path(&dir, "neg.json");
    std::fs::write(&neg, file.to_string()).unwrap();
    let out_file = path(&dir, "q.json");
    let out = run(&["invert", s(&neg), "-o", s(&out_file)]);
    assert_eq!(code(&out), 3);
    assert!(String::from_utf8_lossy(&out.stderr).contains("admissible class"));
    assert!(!out_file.exists());

    let out = run(&["invert", s(&sd), "-o", s(&out_file), "--overlap-tolerance", "1e-14"]);
    assert_eq!(code(&out), 4);
    assert!(!out_file.exists());
}

#[test]
fn outputs_are_byte_identical_across_runs() {
    let dir = TempDir::new().unwrap();
    let q = sample(&dir, "two-bump");
    let (a, b) = (path(&dir, "a.json"), path(&dir, "b.json"));
    assert_eq!(code(&run(&["scatter", s(&q), "-o", s(&a)])), 0);
    assert_eq!(code(&run(&["scatter", s(&q), "-o", s(&b)])), 0);
    assert_eq!(std::fs::read(&a).unwrap(), std::fs::read(&b).unwrap());
}

#[test]
fn evolution_at_time_zero() {
    let dir = TempDir::new().unwrap();
    let q = sample(&dir, "small-gaussian");
    let input = values(&read(&q));
    for method in ["airy", "spectral"] {
        let out = path(&dir, &format!("{method}.json"));
        assert_eq!(code(&run(&["evolve", s(&q), "--t", "0", "--method", method, "-o", s(&out)])), 0);
        assert_eq!(values(&read(&out)), input, "{method}");
    }
    let out = path(&dir, "scattering.json");
    assert_eq!(code(&run(&["evolve", s(&q), "--t", "0", "-o", s(&out)])), 0);
    assert!(l2_distance(&values(&read(&out)), &input, 20.0) < 1e-3);
    assert_eq!(code(&run(&["evolve", s(&q), "--t", "-1"])), 2);
}

#[test]
fn evolution_methods_agree() {
    let dir = TempDir::new().unwrap();
    let q = sample(&dir, "small-gaussian");
    let out = path(&dir, "kdv.json");
    assert_eq!(code(&run(&["evolve", s(&q), "--t", "0.1", "-o", s(&out)])), 0);
    let report = &read(&out)["report"];
    assert_eq!(report["method"], "scattering");
    assert!(report["l2_diff_vs_spectral"].as_f64().unwrap() < 1e-3);

    let airy = path(&dir, "airy.json");
    assert_eq!(code(&run(&["evolve", s(&q), "--t", "0.1", "--method", "airy", "-o", s(&airy)])), 0);
    let report = &read(&airy)["report"];
    let (before, after) = (report["l2_norm_in"].as_f64().unwrap(), report["l2_norm_torus"].as_f64().unwrap());
    assert!((before - after).abs() < 1e-12);
}

#[test]
fn verification_suites_on_a_fixture_corpus() {
    let dir = TempDir::new().unwrap();
    let corpus = TempDir::new().unwrap();
    for name in ["gaussian", "sech2-barrier"] {
        let p = sample(&dir, name);
        std::fs::copy(&p, corpus.path().join(format!("{name}.json"))).unwrap();
    }
    let out = run(&["verify", "--suite", "identities", "--corpus", s(corpus.path())]);
    assert_eq!(code(&out), 0);
    let report: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(report["passed"], true);
    assert_eq!(report["potentials"], 2);
    for key in ["gaussian/ws_identity", "gaussian/conjugate_symmetry", "sech2-barrier/ws_identity"] {
        assert!(report[key].as_f64().unwrap() < 1e-7, "{key}");
    }

    let out = run(&["verify", "--suite", "smoothing", "--corpus", s(corpus.path())]);
    assert_eq!(code(&out), 0);
    let report: Value = serde_json::from_slice(&out.stdout).unwrap();
    for key in ["gaussian/tail_slope_a", "gaussian/tail_slope_fourier", "gaussian/a_scaling_exponent_error"] {
        assert!(report.get(key).is_some(), "{key}");
    }

    for suite in ["unitarity", "actions", "roundtrip"] {
        let out = run(&["verify", "--suite", suite, "--corpus", s(corpus.path())]);
        assert_eq!(code(&out), 0, "{suite}: {}", String::from_utf8_lossy(&out.stderr));
    }

    let empty = TempDir::new().unwrap();
    assert_eq!(code(&run(&["verify", "--suite", "identities", "--corpus", s(empty.path())])), 2);
}

#[test]
fn attractive_well_is_rejected() {
    let dir = TempDir::new().unwrap();
    let q = sample(&dir, "attractive-well");
    let out = run(&["scatter", s(&q)]);
    assert_eq!(code(&out), 3);
    assert!(out.stdout.is_empty());
    let out = run(&["evolve", s(&q), "--t", "0.01"]);
    assert_eq!(code(&out), 3);
}
