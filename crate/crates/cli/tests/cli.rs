use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use tempfile::TempDir;

const SCALAR_HP: &str =
    r#"{"format": 1, "model": "hlc", "H": [[[0, 0]]], "L": [[[1, 0]]], "C": [[[1, 0]]]}"#;
const PLANTED: &str = r#"{"format": 1, "model": "hlc",
    "H": [[[0, 0], [0, 0]], [[0, 0], [0, 0]]],
    "L": [[[0, 0], [0, 0]], [[0, 0], [0, 0]]],
    "C": [[[1.5, 0], [0, 0]], [[0, 0], [1.5, 0]]]}"#;

fn qsc(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_qsc"))
        .args(args)
        .output()
        .expect("qsc runs")
}

fn write(dir: &TempDir, name: &str, text: &str) -> PathBuf {
    let p = dir.path().join(name);
    fs::write(&p, text).unwrap();
    p
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

fn build(dir: &TempDir, name: &str, spec: &str) -> PathBuf {
    let spec = write(dir, &format!("{name}.spec.json"), spec);
    let out = dir.path().join(format!("{name}.json"));
    let o = qsc(&["build", s(&spec), "--out", s(&out)]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    out
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn field(csv: &str, row: usize, col: usize) -> f64 {
    csv.lines()
        .nth(row)
        .unwrap()
        .split(',')
        .nth(col)
        .unwrap()
        .parse()
        .unwrap()
}

#[test]
fn build_oscillator_and_zero() {
    let dir = TempDir::new().unwrap();
    let osc = build(
        &dir,
        "osc",
        r#"{"format": 1, "model": "oscillator", "dim": 4,
            "lambda": [[0, 0], [1, 0], [1.4, 0], [1.7, 0], [2, 0]], "mu": [0, 1, 2, 3]}"#,
    );
    let text = fs::read_to_string(&osc).unwrap();
    assert!(text.contains("\"dim_h\": 4") && text.contains("\"dim_k\": 1"));

    let spec = write(
        &dir,
        "zero.json",
        r#"{"format": 1, "model": "zero", "dim_h": 2, "dim_k": 1}"#,
    );
    let o = qsc(&["build", s(&spec)]);
    assert!(o.status.success());
    let summary = String::from_utf8_lossy(&o.stderr);
    assert!(
        summary.contains("contractive") && summary.contains("isometric candidate"),
        "{summary}"
    );
}

#[test]
fn build_rejects_bad_specs() {
    let dir = TempDir::new().unwrap();
    let malformed = write(
        &dir,
        "m.json",
        r#"{"format": 1, "model": "zero", "dim_h": "two", "dim_k": 1}"#,
    );
    let o = qsc(&["build", s(&malformed)]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("dim_h"));

    let invalid = write(
        &dir,
        "v.json",
        r#"{"format": 1, "model": "birth_death", "dim": 3, "birth": [1, -1, 1], "death": [1, 1, 1]}"#,
    );
    assert_eq!(qsc(&["build", s(&invalid)]).status.code(), Some(3));
}

#[test]
fn check_exit_codes() {
    let dir = TempDir::new().unwrap();
    let hp = build(&dir, "hp", SCALAR_HP);
    let o = qsc(&["check", s(&hp)]);
    assert_eq!(o.status.code(), Some(0));
    let csv = stdout(&o);
    assert_eq!(field(&csv, 1, 1), 0.0);

    let twice = build(
        &dir,
        "c2",
        r#"{"format": 1, "model": "hlc", "H": [[[0, 0]]], "L": [[[0, 0]]], "C": [[[2, 0]]]}"#,
    );
    let o = qsc(&["check", s(&twice)]);
    assert_eq!(o.status.code(), Some(4));
    assert!(field(&stdout(&o), 1, 1) > 0.0);

    let missing = dir.path().join("missing.json");
    assert_eq!(qsc(&["check", s(&missing)]).status.code(), Some(2));
}

#[test]
fn evolve_scalar_model() {
    let dir = TempDir::new().unwrap();
    let zero = build(
        &dir,
        "zero",
        r#"{"format": 1, "model": "zero", "dim_h": 1, "dim_k": 1}"#,
    );
    let csv = stdout(&qsc(&["evolve", s(&zero), "--grid", "4"]));
    for row in 1..=5 {
        assert_eq!((field(&csv, row, 1), field(&csv, row, 2)), (1.0, 0.0));
    }

    let hp = build(&dir, "hp", SCALAR_HP);
    let o = qsc(&[
        "evolve",
        s(&hp),
        "--t",
        "1",
        "--grid",
        "1",
        "--oracle",
        "4096",
    ]);
    assert!(o.status.success());
    let csv = stdout(&o);
    assert_eq!(
        csv.lines().next().unwrap(),
        "t,re,im,oracle_re,oracle_im,abs_diff"
    );
    assert_eq!(field(&csv, 2, 0), 1.0);
    assert!((field(&csv, 2, 1) - (-0.5f64).exp()).abs() < 1e-12);
    assert!(field(&csv, 2, 5) <= 1e-2);
}

#[test]
fn evolve_rejects_invalid_steps() {
    let dir = TempDir::new().unwrap();
    let hp = build(&dir, "hp", SCALAR_HP);
    let step = write(
        &dir,
        "f.json",
        r#"{"format": 1, "breakpoints": [0, 1, 0.5], "values": [[1, 0], [1, 0], [1, 0]], "support_end": 2}"#,
    );
    assert_eq!(
        qsc(&["evolve", s(&hp), "--f", s(&step)]).status.code(),
        Some(3)
    );
    let wide = write(
        &dir,
        "w.json",
        r#"{"format": 1, "breakpoints": [0], "values": [[[1, 0], [0, 0]]], "support_end": 2}"#,
    );
    assert_eq!(
        qsc(&["evolve", s(&hp), "--g", s(&wide)]).status.code(),
        Some(3)
    );
}

#[test]
fn schur_screen() {
    let dir = TempDir::new().unwrap();
    let spec = r#"{"format": 1, "model": "random", "dim_h": 2, "dim_k": 2, "seed": 4, "mode": "unitary_c"}"#;
    let f = build(&dir, "rand", spec);
    let a = qsc(&["schur", s(&f), "--samples", "1000", "--seed", "9"]);
    assert_eq!(
        a.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&a.stderr)
    );
    let b = qsc(&["schur", s(&f), "--samples", "1000", "--seed", "9"]);
    assert_eq!(a.stdout, b.stdout);

    let planted = build(&dir, "planted", PLANTED);
    let o = qsc(&["schur", s(&planted), "--samples", "20"]);
    assert_eq!(o.status.code(), Some(4));
    assert!(String::from_utf8_lossy(&o.stderr).contains("worst probe"));
}

#[test]
fn tk_convergence_and_precondition() {
    let dir = TempDir::new().unwrap();
    let hp = build(&dir, "hp", SCALAR_HP);
    let o = qsc(&["tk", s(&hp), "--n-list", "10,100,1000", "--T", "2"]);
    assert_eq!(o.status.code(), Some(0));
    let csv = stdout(&o);
    assert!(field(&csv, 5, 2) <= field(&csv, 1, 2) / 5.0);

    let planted = build(&dir, "planted", PLANTED);
    assert_eq!(qsc(&["tk", s(&planted)]).status.code(), Some(3));
}

#[test]
fn coords_dual_and_oracle_norm() {
    let dir = TempDir::new().unwrap();
    let hp = build(&dir, "hp", SCALAR_HP);
    let csv = stdout(&qsc(&["coords", s(&hp)]));
    assert_eq!(csv.lines().count(), 5);
    // G^0_0 = K.
    assert_eq!(field(&csv, 1, 4), -0.5);

    let out = dir.path().join("dual.json");
    assert!(qsc(&["dual", s(&hp), "--out", s(&out)]).status.success());
    let dual_check = qsc(&["check", s(&out)]);
    assert_eq!(dual_check.status.code(), Some(0));

    let n12 = field(&stdout(&qsc(&["oracle-norm", s(&hp), "--n", "12"])), 1, 4).abs();
    let n16 = field(&stdout(&qsc(&["oracle-norm", s(&hp), "--n", "16"])), 1, 4).abs();
    assert!(n16 < n12 && n12 <= 0.05);

    let o = qsc(&["oracle-norm", s(&hp), "--n", "16", "--budget", "1000"]);
    assert_eq!(o.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&o.stderr).contains("budget"));
}
