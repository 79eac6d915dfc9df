use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

use sbt_core::orthogonal::charlier_recurrence;
use sbt_core::rational::{parse_rational, rat};
use sbt_core::{ModelParams, Poly, Rational};

fn sbt(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_sbt"))
        .args(args)
        .output()
        .expect("run sbt")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("valid JSON on stdout")
}

fn temp_file(name: &str, contents: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("sbt-cli-tests-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join(name);
    std::fs::write(&path, contents).unwrap();
    path
}

fn grid_file(name: &str, alpha: &str, sigma: &str, values: &[f64]) -> PathBuf {
    let values: Vec<[f64; 2]> = values.iter().map(|v| [*v, 0.0]).collect();
    let body = serde_json::json!({ "alpha": alpha, "sigma": sigma, "values": values });
    temp_file(name, &serde_json::to_string_pretty(&body).unwrap())
}

fn rational_of(v: &Value) -> Rational {
    let num = v["num"].as_str().unwrap();
    let den = v["den"].as_str().unwrap();
    parse_rational(&format!("{num}/{den}")).unwrap()
}

#[test]
fn charlier_csv_row() {
    let out = sbt(&["coeffs", "charlier", "--degree", "2", "--format", "csv"]);
    assert!(out.status.success());
    let text = stdout(&out);
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], r#""n","z^0","z^1","z^2""#);
    assert_eq!(lines[3], r#"2,"1/1","-3/1","1/1""#);
}

#[test]
fn touchard_and_hermite_rows() {
    let out = sbt(&["coeffs", "touchard", "--cap", "3", "--format", "csv"]);
    assert_eq!(stdout(&out).lines().last().unwrap(), r#"3,"0/1","1/1","3/1","1/1""#);

    let out = sbt(&["coeffs", "hermite", "--sigma", "1", "--cap", "2", "--format", "csv"]);
    assert_eq!(stdout(&out).lines().last().unwrap(), r#"2,"-1/1","0/1","1/1""#);

    let out = sbt(&["coeffs", "hermite-tilde", "--sigma", "1", "--cap", "2"]);
    let row = &json(&out)["rows"][2]["coeffs"];
    let coeffs: Vec<Rational> = row.as_array().unwrap().iter().map(rational_of).collect();
    assert_eq!(coeffs, vec![rat(1, 1), rat(0, 1), rat(1, 1)]);
}

#[test]
fn json_table_round_trips() {
    let out = sbt(&["coeffs", "charlier", "--alpha", "1/2", "--sigma", "0.75", "--degree", "8"]);
    assert!(out.status.success());
    let table = json(&out);
    assert_eq!(rational_of(&table["alpha"]), rat(1, 2));
    assert_eq!(rational_of(&table["sigma"]), rat(3, 4));
    let params = ModelParams::new(rat(1, 2), rat(3, 4)).unwrap();
    let basis = charlier_recurrence(&params, 8);
    let points = [rat(0, 1), rat(1, 3), rat(-5, 2), rat(7, 4), rat(12, 1)];
    for row in table["rows"].as_array().unwrap() {
        let n = row["n"].as_u64().unwrap() as usize;
        let poly = Poly::new(row["coeffs"].as_array().unwrap().iter().map(rational_of).collect());
        for x in &points {
            assert_eq!(poly.eval(x), basis.poly(n).eval(x), "n={n} x={x}");
        }
    }
}

#[test]
fn usage_errors_exit_2() {
    assert_eq!(sbt(&["coeffs", "legendre"]).status.code(), Some(2));
    assert_eq!(sbt(&["coeffs", "charlier", "--cap", "65"]).status.code(), Some(2));
    assert_eq!(sbt(&["coeffs", "charlier", "--alpha", "0"]).status.code(), Some(2));
    assert_eq!(sbt(&["coeffs", "charlier", "--sigma", "NaN"]).status.code(), Some(2));
    assert_eq!(sbt(&["verify", "everything"]).status.code(), Some(2));
    assert_eq!(sbt(&["verify", "series", "--tol", "quadrature=inf"]).status.code(), Some(2));
    assert_eq!(sbt(&["verify", "series", "--tol", "nonsense=1"]).status.code(), Some(2));
    assert_eq!(sbt(&["converge", "--ys", "1,inf"]).status.code(), Some(2));
}

#[test]
fn katriel_suite_report() {
    let out = sbt(&["verify", "katriel", "--cap", "20"]);
    assert_eq!(out.status.code(), Some(0));
    let report = json(&out);
    let checks = report["checks"].as_array().unwrap();
    assert_eq!(checks.len(), 27);
    for c in checks {
        assert_eq!(c["status"], "pass");
        assert_eq!(c["mode"], "exact");
        assert!(c["anchor"].as_str().unwrap().contains("U^k V^k"));
        assert!(c["elapsed_ms"].as_f64().unwrap() >= 0.0);
    }
}

#[test]
fn orthogonality_suite_for_one_parameter_set() {
    let out = sbt(&["verify", "orthogonality", "--alpha", "1", "--sigma", "1"]);
    assert_eq!(out.status.code(), Some(0));
    let report = json(&out);
    let names: Vec<&str> = report["checks"]
        .as_array()
        .unwrap()
        .iter()
        .map(|c| c["name"].as_str().unwrap())
        .collect();
    assert!(names.iter().any(|n| n.contains("Gram matrix") && n.contains("alpha=1, sigma=1")));
    assert_eq!(names.iter().filter(|n| n.contains("Gram matrix")).count(), 1);
}

#[test]
fn failed_check_exits_1_with_report() {
    let out = sbt(&["verify", "series", "--tol", "moment_relative=1e-300", "--format", "csv"]);
    assert_eq!(out.status.code(), Some(1));
    let text = stdout(&out);
    assert!(text.starts_with(r#""suite","name","anchor","status","mode","elapsed_ms","detail""#));
    assert_eq!(text.lines().filter(|l| l.contains(r#""fail""#)).count(), 1);
}

#[test]
fn seed_changes_random_cases_but_not_the_verdict() {
    for seed in ["1", "99"] {
        let out = sbt(&["verify", "series", "--seed", seed]);
        assert_eq!(out.status.code(), Some(0));
        assert_eq!(json(&out)["seed"].as_u64().unwrap(), seed.parse::<u64>().unwrap());
    }
}

#[test]
fn transform_of_constant_function() {
    let path = grid_file("ones.json", "1", "1", &[1.0; 41]);
    let out = sbt(&["transform", "--input", path.to_str().unwrap(), "--points", "0.5,-0.3+0.4i,1-i"]);
    assert!(out.status.success());
    let table = json(&out);
    assert_eq!(table["support"], 40);
    for row in table["rows"].as_array().unwrap() {
        assert!((row["value"][0].as_f64().unwrap() - 1.0).abs() < 1e-12);
        assert!(row["value"][1].as_f64().unwrap().abs() < 1e-12);
        assert!(row["tail_bound"].as_f64().unwrap() < 1e-12);
    }
}

#[test]
fn transform_of_first_charlier_polynomial() {
    let values: Vec<f64> = (0..=60).map(|n| n as f64 - 1.0).collect();
    let path = grid_file("c1.json", "1", "1", &values);
    let out = sbt(&["transform", "--input", path.to_str().unwrap(), "--points", "0.5", "--format", "csv"]);
    assert!(out.status.success());
    let text = stdout(&out);
    let row: Vec<f64> = text.lines().nth(1).unwrap().split(',').map(|c| c.parse().unwrap()).collect();
    assert!((row[2] - 0.5).abs() < 1e-9);
}

#[test]
fn transform_with_no_points() {
    let path = grid_file("empty-points.json", "1/2", "3/4", &[1.0, 2.0]);
    let out = sbt(&["transform", "--input", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json(&out)["rows"].as_array().unwrap().len(), 0);
}

#[test]
fn malformed_grid_file_reports_line() {
    let path = temp_file("bad.json", "{\n  \"alpha\": \"1\",\n  \"sigma\": \"1\",\n  \"values\": [[1, 0],\n    [1, oops]]\n}\n");
    let out = sbt(&["transform", "--input", path.to_str().unwrap(), "--points", "1"]);
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8(out.stderr).unwrap();
    assert!(err.contains("line 5"), "{err}");
}

#[test]
fn grid_parameters_must_match_flags() {
    let path = grid_file("mismatch.json", "1", "1", &[1.0]);
    let out = sbt(&["transform", "--input", path.to_str().unwrap(), "--sigma", "2"]);
    assert_eq!(out.status.code(), Some(2));
    let out = sbt(&["transform", "--input", path.to_str().unwrap(), "--sigma", "1", "--points", "1+i"]);
    assert_eq!(out.status.code(), Some(0));
    let out = sbt(&["transform", "--input", path.to_str().unwrap(), "--points", "1+zi"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn converge_table() {
    let out = sbt(&["converge", "--alphas", "1/10", "--ys", "0,1"]);
    assert!(out.status.success());
    let table = json(&out);
    let rows = table["rows"].as_array().unwrap();
    assert_eq!(rows[0]["modulus_gap"], 0.0);
    assert_eq!(rows[0]["gap"], 0.0);
    assert!((rows[1]["phi_modulus"].as_f64().unwrap() - 0.60678).abs() < 1e-5);
    assert!((rows[1]["gaussian"].as_f64().unwrap() - 0.60653).abs() < 1e-5);
    assert!((rows[1]["modulus_gap"].as_f64().unwrap() - 2.5e-4).abs() < 1e-5);
}

#[test]
fn converge_summary_is_monotone() {
    let out = sbt(&["converge"]);
    let summary = json(&out)["summary"].as_array().unwrap().clone();
    assert_eq!(summary.len(), 4);
    let gaps: Vec<f64> = summary.iter().map(|s| s["max_gap"].as_f64().unwrap()).collect();
    assert!(gaps.windows(2).all(|w| w[1] <= w[0]), "{gaps:?}");
    let moduli: Vec<f64> = summary.iter().map(|s| s["max_modulus_gap"].as_f64().unwrap()).collect();
    assert!(moduli.windows(2).all(|w| w[1] <= w[0]), "{moduli:?}");
}

#[test]
fn out_flag_writes_file() {
    let path = std::env::temp_dir().join(format!("sbt-out-{}.csv", std::process::id()));
    let out = sbt(&["coeffs", "factorial", "--cap", "3", "--format", "csv", "--out", path.to_str().unwrap()]);
    assert!(out.status.success());
    assert!(out.stdout.is_empty());
    let text = std::fs::read_to_string(&path).unwrap();
    assert_eq!(text.lines().last().unwrap(), r#"3,"0/1","2/1","-3/1","1/1""#);
    std::fs::remove_file(path).ok();
}
