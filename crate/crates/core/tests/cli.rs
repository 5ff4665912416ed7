use std::process::{Command, Output};

use serde_json::Value;

fn cquant(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_cquant"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn json(args: &[&str]) -> Value {
    let out = cquant(args);
    assert_eq!(
        out.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    serde_json::from_slice(&out.stdout).expect("valid JSON")
}

fn assert_solve_schema(v: &Value) {
    let obj = v.as_object().unwrap();
    let keys: Vec<&str> = obj.keys().map(String::as_str).collect();
    assert_eq!(
        keys,
        [
            "n",
            "method",
            "constraint_index",
            "points",
            "breakpoints",
            "distortion",
            "excess",
            "scaled_excess"
        ]
    );
    let n = v["n"].as_u64().unwrap() as usize;
    let points = v["points"].as_array().unwrap();
    assert_eq!(points.len(), n);
    for p in points {
        assert!(p["j"].is_u64());
        assert!(p["x"].is_f64());
        assert_eq!(p["plane"].as_array().unwrap().len(), 2);
        assert!(p["foot"].is_f64());
    }
    let bps = v["breakpoints"].as_array().unwrap();
    assert_eq!(bps.len(), n + 1);
    assert_eq!(bps[0].as_f64(), Some(0.0));
    assert_eq!(bps[n].as_f64(), Some(1.0));
    for key in ["distortion", "excess", "scaled_excess"] {
        assert!(v[key].is_f64(), "{key}");
    }
}

#[test]
fn solve_schema_for_every_method() {
    for method in ["closed-form", "lloyd", "brute-force"] {
        for n in ["1", "2", "3"] {
            let v = json(&["solve", "--n", n, "--method", method]);
            assert_solve_schema(&v);
            assert_eq!(v["method"], method);
            assert_eq!(v["constraint_index"].as_u64().unwrap().to_string(), n);
        }
    }
}

#[test]
fn lloyd_matches_closed_form_through_cli() {
    let a = json(&["solve", "--n", "9", "--method", "lloyd"]);
    let b = json(&["solve", "--n", "9"]);
    for (p, q) in a["points"]
        .as_array()
        .unwrap()
        .iter()
        .zip(b["points"].as_array().unwrap())
    {
        assert!((p["foot"].as_f64().unwrap() - q["foot"].as_f64().unwrap()).abs() < 1e-9);
    }
    let (da, db) = (
        a["distortion"].as_f64().unwrap(),
        b["distortion"].as_f64().unwrap(),
    );
    assert!((da - db).abs() < 1e-12);
}

#[test]
fn identical_invocations_are_byte_identical() {
    for args in [
        &["solve", "--n", "5", "--method", "lloyd"][..],
        &[
            "solve",
            "--n",
            "3",
            "--method",
            "brute-force",
            "--format",
            "csv",
        ],
        &[
            "curve",
            "--n-max",
            "100",
            "--spacing",
            "linear",
            "--format",
            "json",
        ],
        &["dimension", "--format", "csv"],
        &["verify", "--n-max", "8"],
    ] {
        let (a, b) = (cquant(args), cquant(args));
        assert_eq!(a.stdout, b.stdout, "{args:?}");
        assert_eq!(a.status.code(), b.status.code());
    }
}

#[test]
fn curve_csv_layout() {
    let out = cquant(&["curve", "--n-max", "1024", "--format", "csv"]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(!text.contains('\r'));
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("n,v_n,excess,scaled_excess,dim_direct"));
    let rows: Vec<Vec<&str>> = lines.map(|l| l.split(',').collect()).collect();
    assert_eq!(rows.len(), 11);
    assert_eq!(rows[0][0], "1");
    assert_eq!(rows[0][4], "");
    let scaled: Vec<f64> = rows.iter().map(|r| r[3].parse().unwrap()).collect();
    assert!(scaled.windows(2).all(|w| w[1] < w[0]));
    assert!(scaled.iter().all(|&s| s > 0.5));
    for r in &rows[1..] {
        let d: f64 = r[4].parse().unwrap();
        assert!(d > 1.0 && d < 2.0);
    }
}

#[test]
fn curve_json_marks_missing_dimension() {
    let v = json(&["curve", "--n-max", "4", "--format", "json"]);
    let rows = v.as_array().unwrap();
    assert_eq!(rows.len(), 3);
    assert!(rows[0]["dim_direct"].is_null());
    assert!(rows[1]["dim_direct"].is_f64());
    let keys: Vec<&str> = rows[0]
        .as_object()
        .unwrap()
        .keys()
        .map(String::as_str)
        .collect();
    assert_eq!(keys, ["n", "v_n", "excess", "scaled_excess", "dim_direct"]);
}

#[test]
fn dimension_outputs() {
    let v = json(&["dimension"]);
    let d = v["dimension"].as_f64().unwrap();
    assert!((1.98..=2.02).contains(&d));
    let small = json(&["dimension", "--n-min", "2", "--n-max", "8"]);
    assert!(small["residual"].as_f64().unwrap() > 0.0);
    assert!((small["dimension"].as_f64().unwrap() - 2.0).abs() > (d - 2.0).abs());
    assert_eq!(
        cquant(&["dimension", "--n-min", "100", "--n-max", "100"])
            .status
            .code(),
        Some(2)
    );
}

#[test]
fn out_flag_writes_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("solve.json");
    let out = cquant(&["solve", "--n", "2", "--out", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    assert!(out.stdout.is_empty());
    let written = std::fs::read(&path).unwrap();
    assert_eq!(written, cquant(&["solve", "--n", "2"]).stdout);
}

#[test]
fn exit_codes() {
    assert_eq!(cquant(&["solve", "--n", "0"]).status.code(), Some(2));
    assert_eq!(
        cquant(&["solve", "--n", "2", "--format", "xml"])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(
        cquant(&["curve", "--n-max", "8", "--spacing", "cubic"])
            .status
            .code(),
        Some(2)
    );
    let out = cquant(&[
        "solve",
        "--n",
        "40",
        "--method",
        "lloyd",
        "--max-iter",
        "10",
    ]);
    assert_eq!(out.status.code(), Some(3));
    assert!(!out.stderr.is_empty());
    assert_eq!(cquant(&["verify", "--n-max", "16"]).status.code(), Some(0));
}

#[test]
fn verify_with_oracle_row() {
    let out = cquant(&["verify", "--n-max", "1", "--oracle-n-max", "1"]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    let row: Vec<&str> = text.lines().nth(1).unwrap().split(',').collect();
    assert_eq!(row[0], "1");
    assert_eq!(row[3], "true");
    assert_eq!(row[6], "ok");
}
