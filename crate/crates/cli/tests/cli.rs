use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn diffshift(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_diffshift"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

fn write(dir: &Path, name: &str, text: &str) -> String {
    let p = dir.join(name);
    fs::write(&p, text).unwrap();
    p.to_str().unwrap().to_owned()
}

fn singer13(dir: &Path) -> String {
    let out = diffshift(&["construct", "singer", "--q", "3", "--d", "2"]);
    assert!(out.status.success());
    write(dir, "s13.json", std::str::from_utf8(&out.stdout).unwrap())
}

#[test]
fn construct_singer_gives_a_projective_plane() {
    let out = diffshift(&["construct", "singer", "--q", "3", "--d", "2"]);
    assert_eq!(out.status.code(), Some(0));
    let doc = json(&out);
    assert_eq!(doc["params"]["v"], 13);
    assert_eq!(doc["params"]["k"], 4);
    assert_eq!(doc["params"]["lambda"], 1);
    // Count differences directly.
    let els: Vec<i64> = doc["elements"]
        .as_array()
        .unwrap()
        .iter()
        .map(|e| e[0].as_i64().unwrap())
        .collect();
    let mut counts = [0; 13];
    for a in &els {
        for b in &els {
            counts[(a - b).rem_euclid(13) as usize] += 1;
        }
    }
    assert_eq!(counts[0], 4);
    assert!(counts[1..].iter().all(|&c| c == 1));
}

#[test]
fn verify_rejects_non_difference_set_with_witness() {
    let dir = tempfile::tempdir().unwrap();
    let bad = write(dir.path(), "bad.json", r#"{"group":{"moduli":[4]},"elements":[[0],[1]]}"#);
    let out = diffshift(&["verify", "--in", &bad]);
    assert_eq!(out.status.code(), Some(1));
    let doc = json(&out);
    assert_eq!(doc["valid"], false);
    // {0,1} in Z_4: difference 1 occurs once, 2 never.
    let w = &doc["witness"];
    assert_ne!(w["first_count"], w["second_count"]);
}

#[test]
fn verify_accepts_constructed_set() {
    let dir = tempfile::tempdir().unwrap();
    let s13 = singer13(dir.path());
    let out = diffshift(&["verify", "--in", &s13]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json(&out)["valid"], true);
}

#[test]
fn malformed_json_exits_two() {
    let dir = tempfile::tempdir().unwrap();
    let broken = write(dir.path(), "broken.json", r#"{"group": {"moduli": [4]"#);
    for cmd in ["verify", "spectrum", "simulate-shift", "dihedral-solve"] {
        let out = diffshift(&[cmd, "--in", &broken]);
        assert_eq!(out.status.code(), Some(2), "{cmd}");
        assert!(out.stdout.is_empty());
        assert!(!out.stderr.is_empty());
    }
}

#[test]
fn usage_errors_exit_two() {
    assert_eq!(diffshift(&["no-such-command"]).status.code(), Some(2));
    assert_eq!(diffshift(&["verify"]).status.code(), Some(2));
    assert_eq!(diffshift(&["construct", "singer", "--q", "3", "--d", "2", "--cap", "12"]).status.code(), Some(2));
}

#[test]
fn simulate_shift_reports_exact_and_empirical_rates() {
    let dir = tempfile::tempdir().unwrap();
    let s13 = singer13(dir.path());
    let out = diffshift(&["simulate-shift", "--in", &s13, "--secret", "5", "--trials", "100", "--seed", "7"]);
    assert_eq!(out.status.code(), Some(0));
    let doc = json(&out);
    assert_eq!(doc["secret"][0], 5);
    assert_eq!(doc["recovery"]["recovered"][0], 5);
    // (2√(k-λ) - c0)²/v with c0 = 1 - 2(k - √(k-λ))/v for (13,4,1).
    let (v, k, r) = (13.0f64, 4.0, 3f64.sqrt());
    let c0 = 1.0 - 2.0 * (k - r) / v;
    let want = (2.0 * r - c0).powi(2) / v;
    assert!((doc["exact_peak_probability"].as_f64().unwrap() - want).abs() < 1e-9);
    assert_eq!(doc["formula"], "12/13");
    let rate = doc["empirical_rate"].as_f64().unwrap();
    assert_eq!(rate, doc["empirical_hits"].as_f64().unwrap() / 100.0);
    assert!((rate - want).abs() < 0.2);
}

#[test]
fn repeated_runs_are_byte_identical() {
    let dir = tempfile::tempdir().unwrap();
    let s13 = singer13(dir.path());
    let runs = [
        vec!["simulate-shift", "--in", &s13, "--trials", "50", "--seed", "3"],
        vec!["injectivize", "--in", &s13, "--seed", "9"],
        vec!["dihedral-make", "--d", "3", "--seed", "5"],
        vec!["sweep", "--singer-q", "2,3", "--singer-d", "2", "--hadamard", "2", "--trials", "20"],
    ];
    for args in runs {
        let a = diffshift(&args);
        let b = diffshift(&args);
        assert!(a.status.success(), "{args:?}");
        assert_eq!(a.stdout, b.stdout, "{args:?}");
    }
}

#[test]
fn out_flag_writes_the_document() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("plane.json");
    let out = diffshift(&["construct", "singer", "--q", "2", "--d", "2", "--out", path.to_str().unwrap()]);
    assert!(out.status.success());
    assert!(out.stdout.is_empty());
    let doc: Value = serde_json::from_str(&fs::read_to_string(path).unwrap()).unwrap();
    assert_eq!(doc["params"]["v"], 7);
}

#[test]
fn spectrum_flags_non_flat_subsets() {
    let dir = tempfile::tempdir().unwrap();
    let s13 = singer13(dir.path());
    let good = diffshift(&["spectrum", "--in", &s13]);
    assert_eq!(good.status.code(), Some(0));
    assert_eq!(json(&good)["trivial_value"], 4.0);
    let bad = write(dir.path(), "bad.json", r#"{"group":{"moduli":[4]},"elements":[[0],[1]]}"#);
    let out = diffshift(&["spectrum", "--in", &bad]);
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(json(&out)["pass"], false);
}

#[test]
fn dihedral_round_trip_and_perturbation() {
    let dir = tempfile::tempdir().unwrap();
    let made = diffshift(&["dihedral-make", "--d", "2", "--seed", "4"]);
    assert!(made.status.success());
    let mut doc = json(&made);
    let path = write(dir.path(), "d7.json", &doc.to_string());

    let solved = diffshift(&["dihedral-solve", "--in", &path]);
    assert_eq!(solved.status.code(), Some(0));
    let sol = json(&solved);
    assert_eq!(sol["matches_planted"], true);
    assert_eq!(sol["recovered"]["a"], doc["hidden_generator"][0]);

    // The planted generator is -e for β = α^e.
    let e = doc["whitebox"]["exponent"].as_u64().unwrap();
    assert_eq!(doc["hidden_generator"][0][0].as_u64().unwrap(), (7 - e % 7) % 7);

    let h = doc["hidden_generator"][0][0].as_u64().unwrap();
    doc["hidden_generator"][0][0] = ((h + 1) % 7).into();
    let wrong = write(dir.path(), "wrong.json", &doc.to_string());
    let out = diffshift(&["verify", "--in", &wrong]);
    assert_eq!(out.status.code(), Some(1));
    let verdict = json(&out);
    assert_eq!(verdict["valid"], false);
    assert!(verdict["witness"]["kind"].is_string());
}

#[test]
fn gauss_check_over_gf64() {
    let out = diffshift(&["gauss-check", "--n", "6"]);
    assert_eq!(out.status.code(), Some(0));
    let doc = json(&out);
    assert_eq!(doc["magnitudes"]["pairs"], 63 * 62);
    assert_eq!(doc["magnitudes"]["target"], 8.0);
    assert_eq!(doc["singer_relation"]["consistent"], true);
}

#[test]
fn empty_sweep_is_an_empty_table() {
    let out = diffshift(&["sweep"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json(&out)["rows"], Value::Array(vec![]));
}

#[test]
fn sweep_records_row_failures_and_continues() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(
        dir.path(),
        "cfg.json",
        r#"{"singer":[{"q":2,"d":2},{"q":6,"d":2}],"hadamard":[2,3],"trials":10,"seed":1}"#,
    );
    let out = diffshift(&["sweep", "--in", &cfg]);
    assert_eq!(out.status.code(), Some(0));
    let rows = json(&out)["rows"].as_array().unwrap().clone();
    assert_eq!(rows.len(), 4);
    assert!(rows[1]["error"].is_string());
    let p2 = rows[2]["exact_peak_probability"].as_f64().unwrap();
    let p3 = rows[3]["exact_peak_probability"].as_f64().unwrap();
    assert!(p3 > p2);
}
