//! End-to-end tests of the `prelog` binary.

use std::collections::BTreeSet;
use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn prelog(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_prelog")).args(args).output().expect("binary runs")
}

fn json(args: &[&str]) -> Value {
    let out = prelog(args);
    assert!(out.status.success(), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).unwrap()
}

fn type_name(v: &Value) -> &'static str {
    match v {
        Value::Null => "null",
        Value::Bool(_) => "bool",
        Value::Number(_) => "number",
        Value::String(_) => "string",
        Value::Array(_) => "array",
        Value::Object(_) => "object",
    }
}

/// Every `path: type` pair, arrays collapsed to `[]`.
fn schema(v: &Value, path: &str, out: &mut BTreeSet<String>) {
    out.insert(format!("{path}: {}", type_name(v)));
    match v {
        Value::Object(m) => {
            for (k, child) in m {
                let p = if path.is_empty() { k.clone() } else { format!("{path}.{k}") };
                schema(child, &p, out);
            }
        }
        Value::Array(items) => {
            for child in items {
                schema(child, &format!("{path}[]"), out);
            }
        }
        _ => {}
    }
}

fn golden(name: &str) -> String {
    let path = Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/golden").join(name);
    std::fs::read_to_string(&path).unwrap_or_else(|e| panic!("{}: {e}", path.display()))
}

fn schema_text(v: &Value) -> String {
    let mut set = BTreeSet::new();
    schema(v, "", &mut set);
    set.into_iter().map(|l| l + "\n").collect()
}

const SCHEMA_CASES: &[(&str, &[&str])] = &[
    ("bounds", &["bounds", "--T", "2", "--R", "3", "--L", "4"]),
    ("index-sets", &["index-sets", "--T", "2", "--R", "3", "--L", "4"]),
    ("jacobian-check", &["jacobian-check", "--T", "1", "--R", "2", "--L", "3", "--seed", "1", "--trials", "10"]),
    ("witness", &["witness", "--T", "1", "--R", "2", "--L", "2", "--seed", "1"]),
    ("bezout", &["bezout", "--T", "1", "--R", "2", "--L", "3"]),
    ("mc-logdet", &["mc-logdet", "--T", "1", "--R", "1", "--L", "2", "--seed", "1", "--samples", "100"]),
    ("mc-mi", &["mc-mi", "--T", "1", "--R", "1", "--L", "2", "--seed", "1", "--samples", "400"]),
    ("hyx-growth", &["hyx-growth", "--T", "1", "--R", "1", "--L", "2", "--seed", "1", "--samples", "10"]),
];

#[test]
fn schemas_match_golden_files() {
    for (name, args) in SCHEMA_CASES {
        let v = json(args);
        assert_eq!(schema_text(&v), golden(&format!("{name}.schema")), "schema drift in {name}");
    }
}

#[test]
fn every_report_carries_the_envelope() {
    for (name, args) in SCHEMA_CASES {
        let v = json(args);
        assert_eq!(v["subcommand"], *name);
        assert_eq!(v["tool_version"], env!("CARGO_PKG_VERSION"));
        assert!(v["dims"].is_object());
        assert!(v.get("seed").is_some());
        let stochastic = args.contains(&"--seed");
        assert_eq!(v["seed"].is_u64(), stochastic, "{name}");
    }
}

#[test]
fn worked_example_output_is_pinned() {
    let out = prelog(&["index-sets", "--T", "3", "--R", "3", "--L", "6", "--Q", "1"]);
    assert!(out.status.success());
    assert_eq!(String::from_utf8(out.stdout).unwrap(), golden("index-sets-T3R3L6Q1.json"));
}

#[test]
fn antenna_family_bound_output_is_pinned() {
    let out = prelog(&["bounds", "--T", "5", "--R", "25", "--L", "6", "--Q", "1"]);
    assert!(out.status.success());
    assert_eq!(String::from_utf8(out.stdout).unwrap(), golden("bounds-T5R25L6Q1.json"));
}

fn csv_rows(args: &[&str]) -> Vec<csv::StringRecord> {
    let out = prelog(args);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let mut r = csv::Reader::from_reader(out.stdout.as_slice());
    r.records().map(|x| x.unwrap()).collect()
}

fn with_csv<'a>(args: &[&'a str]) -> Vec<&'a str> {
    let mut v = args.to_vec();
    v.extend(["--format", "csv"]);
    v
}

fn num(s: &str) -> f64 {
    s.parse().unwrap()
}

#[test]
fn bounds_csv_matches_json() {
    let args = ["bounds", "--T", "3", "--R", "5", "--L", "5", "--Q", "1"];
    let v = json(&args);
    let rows = csv_rows(&with_csv(&args));
    let mut seen = 0;
    for row in &rows {
        let (quantity, tp, exact, approx) = (&row[0], &row[1], &row[2], num(&row[3]));
        let (json_exact, json_approx) = match quantity {
            "chi_low" | "chi_low_clamped" => {
                let k: usize = tp.parse().unwrap();
                let entry = &v["chi_low"][k - 1];
                assert_eq!(entry["t_prime"], k);
                let key = if quantity == "chi_low" { "raw" } else { "clamped" };
                (entry[key].clone(), entry[format!("{key}_f64")].as_f64().unwrap())
            }
            other => {
                match other {
                    "zheng_tse" => assert_eq!(v["m_star"].to_string(), tp),
                    "best_chi" => assert_eq!(v["best_t"].to_string(), tp),
                    _ => assert!(tp.is_empty()),
                }
                (v[other].clone(), v[format!("{other}_f64")].as_f64().unwrap())
            }
        };
        assert_eq!(json_exact, exact, "{quantity}");
        assert_eq!(json_approx.to_bits(), approx.to_bits(), "{quantity}");
        seen += 1;
    }
    assert_eq!(seen, 2 * 5 + 6);
}

#[test]
fn mc_csv_matches_json() {
    let cases: [(&[&str], &[&str]); 2] = [
        (
            &["mc-mi", "--T", "1", "--R", "1", "--L", "2", "--seed", "3", "--samples", "2000"],
            &["snr_db", "rho", "h_y", "h_y_std_err", "h_y_given_x", "h_y_given_x_std_err", "mi", "mi_std_err"],
        ),
        (
            &["hyx-growth", "--T", "2", "--R", "2", "--L", "5", "--seed", "3", "--samples", "50", "--snr-points", "4"],
            &["snr_db", "rho", "h_y_given_x", "std_err"],
        ),
    ];
    for (args, columns) in cases {
        let v = json(args);
        let rows = csv_rows(&with_csv(args));
        let points = v["per_point"].as_array().unwrap();
        assert_eq!(rows.len(), points.len());
        for (row, p) in rows.iter().zip(points) {
            for (k, col) in columns.iter().enumerate() {
                assert_eq!(num(&row[k]).to_bits(), p[col].as_f64().unwrap().to_bits(), "{} {col}", args[0]);
            }
        }
    }
}

#[test]
fn witness_file_holds_z_s_and_certificate() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("w.json");
    let out = prelog(&["witness", "--T", "1", "--R", "2", "--L", "2", "--Q", "1", "--seed", "7", "--out", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    assert!(out.stdout.is_empty());
    let v: Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(v["Z"].as_array().unwrap().len(), 2);
    assert_eq!(v["s"][0].as_array().unwrap().len(), 2);
    assert!(v["certificate"]["sv_ratio"].as_f64().unwrap() > 1e-6);
    assert!(v["certificate"]["log_abs_det"].as_f64().unwrap().is_finite());
}

#[test]
fn relative_out_paths_follow_the_override() {
    let dir = tempfile::tempdir().unwrap();
    let out = Command::new(env!("CARGO_BIN_EXE_prelog"))
        .args(["bezout", "--T", "1", "--R", "1", "--L", "2", "--out", "b.json"])
        .env("PRELOG_OUT_DIR", dir.path())
        .output()
        .unwrap();
    assert!(out.status.success());
    let v: Value = serde_json::from_str(&std::fs::read_to_string(dir.path().join("b.json")).unwrap()).unwrap();
    assert_eq!(v["exponent"], 2);
}

#[test]
fn exit_codes() {
    let usage: &[&[&str]] = &[
        &["bounds", "--T", "1", "--R", "1"],
        &["bounds", "--T", "1", "--R", "1", "--L", "2", "--unknown"],
        &["frobnicate"],
        &["index-sets", "--T", "1", "--R", "1", "--L", "1"],
        &["witness", "--T", "1", "--R", "2", "--L", "2"],
        &["mc-mi", "--T", "1", "--R", "1", "--L", "2", "--seed", "1", "--samples", "10"],
        &["hyx-growth", "--T", "1", "--R", "1", "--L", "2", "--seed", "1", "--snr-points", "2"],
        &["mc-logdet", "--T", "1", "--R", "1", "--L", "2", "--seed", "x"],
    ];
    for args in usage {
        let out = prelog(args);
        assert_eq!(out.status.code(), Some(2), "{args:?}");
        let err = String::from_utf8(out.stderr).unwrap();
        assert_eq!(err.trim_end().lines().count(), 1, "{args:?}: {err}");
        assert!(out.stdout.is_empty());
    }
    let out = prelog(&["jacobian-check", "--T", "2", "--R", "2", "--L", "3", "--seed", "1", "--trials", "5", "--tol", "0.9999999"]);
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(prelog(&["--help"]).status.code(), Some(0));
}

#[test]
fn negative_snr_endpoints_parse() {
    let v = json(&["hyx-growth", "--T", "1", "--R", "1", "--L", "2", "--seed", "1", "--samples", "10", "--snr-start-db", "-10", "--snr-stop-db", "10"]);
    assert_eq!(v["per_point"][0]["snr_db"], -10.0);
}
