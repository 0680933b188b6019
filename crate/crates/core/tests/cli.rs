use std::fs;
use std::path::{Path, PathBuf};

use mecgrid::io::cli_main;
use mecgrid::io::fixtures::{CASE1_JSON, CASE2_JSON};

fn write_case(dir: &Path, name: &str, body: &str) -> PathBuf {
    let p = dir.join(name);
    fs::write(&p, body).unwrap();
    p
}

fn run(args: &[&str]) -> i32 {
    cli_main(std::iter::once("mecgrid").chain(args.iter().copied()))
}

#[test]
fn validate_bundled_case() {
    let dir = tempfile::tempdir().unwrap();
    let input = write_case(dir.path(), "case1.json", CASE1_JSON);
    assert_eq!(run(&["validate", "--input", input.to_str().unwrap()]), 0);
}

#[test]
fn usage_errors_exit_two() {
    assert_eq!(run(&["plan", "--out", "/tmp/never"]), 2);
    assert_eq!(run(&["sweep", "--input", "x.json", "--param", "a"]), 2);
    assert_eq!(run(&["validate", "--input", "/nonexistent/case.json"]), 2);
}

#[test]
fn invalid_case_exits_two() {
    let dir = tempfile::tempdir().unwrap();
    let mut v: serde_json::Value = serde_json::from_str(CASE1_JSON).unwrap();
    v["horizn"] = 24.into();
    let input = write_case(dir.path(), "bad.json", &v.to_string());
    assert_eq!(run(&["validate", "--input", input.to_str().unwrap()]), 2);
    let input = write_case(dir.path(), "broken.json", "{ \"schema\": 1,");
    assert_eq!(run(&["validate", "--input", input.to_str().unwrap()]), 2);
}

#[test]
fn bad_sweep_path_exits_two() {
    let dir = tempfile::tempdir().unwrap();
    let input = write_case(dir.path(), "case1.json", CASE1_JSON);
    let out = dir.path().join("sw");
    let code = run(&[
        "sweep",
        "--input",
        input.to_str().unwrap(),
        "--param",
        "inverters[9].p_max",
        "--values",
        "1",
        "--out",
        out.to_str().unwrap(),
    ]);
    assert_eq!(code, 2);
}

#[test]
fn plan_writes_expected_files() {
    let dir = tempfile::tempdir().unwrap();
    let input = write_case(dir.path(), "case2.json", CASE2_JSON);
    let out = dir.path().join("out");
    assert_eq!(run(&["plan", "--input", input.to_str().unwrap(), "--out", out.to_str().unwrap()]), 0);
    for f in ["schedule.csv", "flows.csv", "battery.csv", "metrics.json", "solve.json", "case.json"] {
        assert!(out.join(f).is_file(), "{f}");
    }
    let battery = fs::read_to_string(out.join("battery.csv")).unwrap();
    assert_eq!(battery.lines().count(), 25);
    assert!(battery.lines().all(|l| l.split(',').count() == 5));

    let metrics: serde_json::Value = serde_json::from_str(&fs::read_to_string(out.join("metrics.json")).unwrap()).unwrap();
    let keys: Vec<&str> = metrics.as_object().unwrap().keys().map(String::as_str).collect();
    for k in ["lost_load_kwh", "heat_served_fraction", "fuel_cost", "degradation_cost", "total_generation_kwh", "hourly"] {
        assert!(keys.contains(&k), "{k}");
    }
    assert!(metrics["lost_load_kwh"].as_f64().unwrap() > 0.0);

    // The copied case parses back to the same instance.
    assert_eq!(run(&["validate", "--input", out.join("case.json").to_str().unwrap()]), 0);

    assert_eq!(run(&["report", "--out", out.to_str().unwrap()]), 0);
    for f in ["electricity.csv", "gas.csv", "inverters.csv", "pipe_flows.csv", "plots.gp"] {
        assert!(out.join(f).is_file(), "{f}");
    }
    let inv = fs::read_to_string(out.join("inverters.csv")).unwrap();
    assert_eq!(inv.lines().next(), Some("hour,INV1,INV2"));
    assert_eq!(inv.lines().count(), 25);
}

#[test]
fn report_without_plan_exits_two() {
    let dir = tempfile::tempdir().unwrap();
    assert_eq!(run(&["report", "--out", dir.path().to_str().unwrap()]), 2);
}

#[test]
fn sweep_table_has_one_row_per_value() {
    let dir = tempfile::tempdir().unwrap();
    let input = write_case(dir.path(), "case1.json", CASE1_JSON);
    let out = dir.path().join("sw");
    let code = run(&[
        "sweep",
        "--input",
        input.to_str().unwrap(),
        "--param",
        "inverters[0].p_max",
        "--values",
        "120,100,80",
        "--out",
        out.to_str().unwrap(),
    ]);
    assert_eq!(code, 0);
    let table = fs::read_to_string(out.join("sweep.csv")).unwrap();
    let rows: Vec<&str> = table.lines().skip(1).collect();
    assert_eq!(rows.len(), 3);
    let values: Vec<&str> = rows.iter().map(|r| r.split(',').next().unwrap()).collect();
    assert_eq!(values, ["120", "100", "80"]);
    assert!(rows.iter().all(|r| r.split(',').nth(1) == Some("optimal")));
}

#[test]
fn node_limit_without_incumbent_exits_one() {
    let dir = tempfile::tempdir().unwrap();
    let input = write_case(dir.path(), "case1.json", CASE1_JSON);
    let out = dir.path().join("out");
    let code = run(&[
        "plan",
        "--input",
        input.to_str().unwrap(),
        "--out",
        out.to_str().unwrap(),
        "--node-limit",
        "1",
    ]);
    assert_eq!(code, 1);
}

#[test]
fn unknown_backend_is_usage_error() {
    let dir = tempfile::tempdir().unwrap();
    let input = write_case(dir.path(), "case1.json", CASE1_JSON);
    let out = dir.path().join("out");
    let code = run(&[
        "plan",
        "--input",
        input.to_str().unwrap(),
        "--out",
        out.to_str().unwrap(),
        "--backend",
        "nope",
    ]);
    assert_eq!(code, 2);
}
