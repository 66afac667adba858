use std::process::{Command, Output};

use serde_json::Value;

fn qhankel(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_qhankel")).args(args).env_remove("QHANKEL_TOL").output().expect("binary runs")
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

#[test]
fn identities_report_has_eleven_blocks() {
    let out = qhankel(&["identities", "--q", "0.5", "--grid", "100", "--tol", "1e-10", "--out", "json"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["schema"], 1);
    assert_eq!(v["data"].as_array().unwrap().len(), 11);
    assert_eq!(v["summary"]["pass"], 11);
}

#[test]
fn spectrum_reports_interval_and_extremes() {
    let out = qhankel(&["spectrum", "--family", "asc", "--a", "0.3", "--b", "0.2", "--q", "0.5", "--N", "50,100,200"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    let data = &v["data"];
    let [lo, hi] = [data["interval"][0].as_f64().unwrap(), data["interval"][1].as_f64().unwrap()];
    let truncs = data["truncations"].as_array().unwrap();
    assert_eq!(truncs.len(), 3);
    for t in truncs {
        assert!(t["min_eigenvalue"].as_f64().unwrap() >= lo - 1e-8);
        assert!(t["max_eigenvalue"].as_f64().unwrap() <= hi + 1e-8);
    }
}

#[test]
fn build_tildeh_csv() {
    let out = qhankel(&["build", "--family", "tildeh", "--alpha", "0", "--q", "0.5", "--N", "4", "--out", "csv"]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    let rows: Vec<Vec<f64>> = text.lines().map(|l| l.split(',').map(|c| c.parse().unwrap()).collect()).collect();
    assert_eq!(rows.len(), 4);
    assert!(rows.iter().all(|r| r.len() == 4));
    assert!((rows[0][0] - 1.0).abs() < 1e-15);
    assert_eq!(rows[1][2], rows[2][1]);
}

#[test]
fn build_hex_csv_round_trips_first_entry() {
    let out = qhankel(&["build", "--family", "gcal", "--q", "0.5", "--N", "2", "--out", "csv", "--hex"]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.starts_with("0x1p+1,"), "{text}");
}

#[test]
fn exit_codes() {
    assert_eq!(qhankel(&["nonsense"]).status.code(), Some(2));
    assert_eq!(
        qhankel(&["build", "--family", "asc", "--a", "2", "--b", "0", "--q", "0.5", "--N", "3"]).status.code(),
        Some(2)
    );
    assert_eq!(qhankel(&["spectrum", "--family", "hilbert", "--nu", "1"]).status.code(), Some(2));
    // an impossible tolerance makes the check fail rather than error
    assert_eq!(qhankel(&["commute", "--family", "gcal", "--q", "0.5", "--tol", "1e-300"]).status.code(), Some(1));
    assert_eq!(qhankel(&["commute", "--family", "gcal", "--q", "0.5"]).status.code(), Some(0));
    assert_eq!(qhankel(&["--help"]).status.code(), Some(0));
}

#[test]
fn tolerance_from_environment() {
    let out = Command::new(env!("CARGO_BIN_EXE_qhankel"))
        .args(["commute", "--family", "gcal", "--q", "0.5"])
        .env("QHANKEL_TOL", "1e-300")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(json(&out)["records"][0]["tolerance"], 1e-300);
}

#[test]
fn reports_are_deterministic() {
    let strip = |out: &Output| {
        let mut v = json(out);
        v.as_object_mut().unwrap().remove("wall_time_seconds");
        v
    };
    let args = ["identities", "--grid", "20", "--seed", "7"];
    assert_eq!(strip(&qhankel(&args)), strip(&qhankel(&args)));
    let other = qhankel(&["identities", "--grid", "20", "--seed", "8"]);
    assert_ne!(strip(&qhankel(&args))["data"], strip(&other)["data"]);
}

#[test]
fn output_file_and_integrals_csv() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("integrals.csv");
    let out = qhankel(&[
        "integrals",
        "--identity",
        "big-hermite",
        "--mmax",
        "3",
        "--out",
        "csv",
        "--output",
        path.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0));
    assert!(out.stdout.is_empty());
    let text = std::fs::read_to_string(&path).unwrap();
    assert_eq!(text.lines().count(), 1 + 16);
    assert!(text.lines().skip(1).all(|l| l.contains(",pass,")));
}

#[test]
fn hilbert_explore_and_selected_criteria() {
    let out = qhankel(&["hilbert-explore", "--q", "0.5", "--N", "20,40"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json(&out)["data"].as_array().unwrap().len(), 2);
    let out = qhankel(&["selftest", "--criterion", "2,5"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert!(v["records"].as_array().unwrap().iter().all(|r| {
        let n = r["name"].as_str().unwrap();
        n.starts_with("criterion 02") || n.starts_with("criterion 05")
    }));
}
