use std::path::PathBuf;
use std::process::{Command, Output};

use cso_cli::config::TermConfig;
use cso_cli::{parse_config, ConfigError, OperatorConfig, EXIT_CONVERGENCE, EXIT_PRECONDITION};
use proptest::prelude::*;
use serde_json::Value;

fn config_path(name: &str) -> String {
    let root = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../configs").join(name);
    root.to_str().unwrap().to_owned()
}

fn cso(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_cso")).args(args).output().expect("binary runs")
}

fn report(args: &[&str]) -> Value {
    let out = cso(args);
    assert!(out.status.success(), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).unwrap()
}

fn f(v: &Value) -> f64 {
    v.as_f64().unwrap()
}

#[test]
fn shipped_golden_config_is_m() {
    let text = std::fs::read_to_string(config_path("golden_m.json")).unwrap();
    let config = parse_config(&text).unwrap();
    let op = config.operator().unwrap();
    let m = cso_core::golden::make_m();
    for (a, b) in op.terms().iter().zip(m.terms()) {
        assert!((a.coeff - b.coeff).norm() < 1e-15);
        assert!((a.map.rate() - b.map.rate()).norm() < 1e-15);
        assert!((a.map.fixed_point() - b.map.fixed_point()).norm() < 1e-15);
    }
}

#[test]
fn zero_coefficient_error_names_term() {
    let text = r#"{"terms": [{"a": [1, 0], "s": [0.5, 0], "fix": [0, 0]}, {"a": [0, 0], "s": [0.5, 0], "fix": [1, 0]}], "radius": 2}"#;
    let err = parse_config(text).unwrap_err();
    assert!(matches!(&err, ConfigError::Field { field, .. } if field == "terms[1].a"), "{err}");
}

#[test]
fn missing_radius_is_an_error() {
    assert!(parse_config(r#"{"terms": [{"a": [1, 0], "s": [0.5, 0], "fix": [0, 0]}]}"#).is_err());
}

fn term() -> impl Strategy<Value = TermConfig> {
    let pair = |h: f64| [-h..h, -h..h];
    (pair(2.0), (0.01..0.95f64, -3.1..3.1f64), pair(3.0)).prop_filter_map("zero coefficient", |(a, (r, t), fix)| {
        (a[0] != 0.0 || a[1] != 0.0).then(|| TermConfig { a, s: [r * t.cos(), r * t.sin()], fix })
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn config_round_trips(
        terms in prop::collection::vec(term(), 1..4),
        radius in 0.1..10.0f64,
        mu in 0.5..=1.0f64,
        truncation in 1usize..500,
    ) {
        let config = OperatorConfig { terms, radius, mu, truncation };
        prop_assume!(config.validate().is_ok());
        prop_assert_eq!(parse_config(&config.to_json()).unwrap(), config);
    }
}

#[test]
fn diagnose_m_shows_the_constant_obstruction() {
    let r = report(&["diagnose", "--config", &config_path("golden_m.json")]);
    let c = &r["outputs"]["contraction"];
    let ratios = c["ratios"].as_array().unwrap();
    assert_eq!(f(&ratios[0]), 2.0);
    assert!(ratios[1..=100].iter().all(|v| f(v) < 1.0));
    assert_eq!(c["is_contraction"], false);
    assert_eq!(r["outputs"]["polynomial_fixed_point_degrees"]["degrees"], serde_json::json!([]));
}

#[test]
fn diagnose_pinned_m_contracts() {
    let r = report(&["diagnose", "--config", &config_path("golden_m.json"), "--pinned", "0.6180339887498949"]);
    let ratios = r["outputs"]["contraction"]["ratios"].as_array().unwrap().clone();
    assert!(ratios.iter().all(|v| f(v) < 1.0));
    assert_eq!(r["outputs"]["contraction"]["is_contraction"], true);
}

#[test]
fn diagnose_pole_operator() {
    let r = report(&["diagnose", "--config", &config_path("pole_test.json"), "--radius", "4"]);
    let o = &r["outputs"];
    assert_eq!(o["polynomial_fixed_point_degrees"]["degrees"], serde_json::json!([]));
    assert!(o["independence"].as_array().unwrap().iter().all(|v| v["independent"] == true));
}

#[test]
fn fixpoint_pole_operator() {
    let r = report(&[
        "fixpoint",
        "--config",
        &config_path("pole_test.json"),
        "--seed",
        "pole",
        "--at",
        "0",
        "--tol",
        "1e-8",
    ]);
    let o = &r["outputs"];
    assert!(f(&o["residual_norm"]) < 1e-8);
    assert_eq!(o["fixed_point"]["terms"][0]["kind"], "pole");
    assert!(!o["fixed_point"]["regular"]["coeffs"].as_array().unwrap().is_empty());
}

#[test]
fn fixpoint_m_log_at_one_gives_f2() {
    let path = config_path("golden_m.json");
    let r = report(&[
        "fixpoint",
        "--config",
        &path,
        "--at",
        "1",
        "--radius",
        "2",
        "--route",
        "generalized",
        "--tol",
        "1e-8",
    ]);
    let o = &r["outputs"];
    assert!(f(&o["residual_norm"]) <= 1e-8);
    assert!(f(&o["parent_residual_norm"]) <= 1e-8);
    let logs: Vec<&Value> = o["fixed_point"]["terms"].as_array().unwrap().iter().collect();
    assert!(logs.iter().any(|t| t["location"] == serde_json::json!([1.0, 0.0])));
}

#[test]
fn inadmissible_seed_exits_with_precondition_code() {
    let out = cso(&["fixpoint", "--config", &config_path("golden_m.json"), "--seed", "pole", "--at", "0"]);
    assert_eq!(out.status.code(), Some(EXIT_PRECONDITION));
    assert!(String::from_utf8_lossy(&out.stderr).contains("a = s^1"));
}

#[test]
fn unreachable_tolerance_exits_with_convergence_code() {
    let out =
        cso(&["fixpoint", "--config", &config_path("pole_test.json"), "--seed", "pole", "--at", "0", "--tol", "1e-18"]);
    assert_eq!(out.status.code(), Some(EXIT_CONVERGENCE));
}

#[test]
fn bad_inputs_exit_with_precondition_code() {
    assert_eq!(cso(&["diagnose", "--config", "/nonexistent.json"]).status.code(), Some(EXIT_PRECONDITION));
    assert_eq!(
        cso(&["fixpoint", "--config", &config_path("golden_m.json"), "--at", "1", "--route", "nope"]).status.code(),
        Some(EXIT_PRECONDITION)
    );
    assert_eq!(cso(&["golden", "sfs", "--n", "0"]).status.code(), Some(EXIT_PRECONDITION));
}

#[test]
fn reports_are_byte_identical_across_runs() {
    let path = config_path("pole_test.json");
    for args in [
        vec!["diagnose", "--config", &path],
        vec!["fixpoint", "--config", &path, "--seed", "pole", "--at", "0"],
        vec!["golden", "identity"],
    ] {
        let a = cso(&args);
        let b = cso(&args);
        assert!(a.status.success());
        assert_eq!(a.stdout, b.stdout, "{args:?}");
    }
}

#[test]
fn golden_identity_and_sfs() {
    let r = report(&["golden", "identity", "--depth", "16"]);
    let last = r["outputs"]["partial_products"].as_array().unwrap().last().unwrap().clone();
    assert!((f(&last["product"]) - 1.6180339887).abs() < 1e-4);

    let r = report(&["golden", "sfs", "--n", "3"]);
    let mut eig: Vec<f64> = r["outputs"]["numeric_eigenvalues"].as_array().unwrap().iter().map(|z| f(&z[0])).collect();
    eig.sort_by(|a, b| b.partial_cmp(a).unwrap());
    let want = [1.0, 0.25, 0.0625, 0.0, 0.0, 0.0];
    assert!(eig.iter().zip(want).all(|(a, b)| (a - b).abs() < 1e-12), "{eig:?}");
}

#[test]
fn golden_figure_csv() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("figure.csv");
    let r = report(&["golden", "figure", "--out", path.to_str().unwrap()]);
    assert_eq!(r["outputs"]["rows"], 401);
    let csv = std::fs::read_to_string(&path).unwrap();
    let mut lines = csv.lines();
    assert_eq!(lines.next(), Some("x,re_exp_f1,re_exp_f2,ratio_dev"));
    let rows: Vec<Vec<f64>> = lines.map(|l| l.split(',').map(|v| v.parse().unwrap()).collect()).collect();
    assert_eq!(rows.len(), 401);
    assert_eq!(rows[0][0], -1.5);
    assert_eq!(rows[400][0], 1.5);
    assert!(rows.iter().all(|r| r[3] < 1e-9));
    assert!(!csv.contains('\r'));
}

#[test]
fn report_echoes_command_and_digests_inputs() {
    let path = config_path("dyadic.json");
    let r = report(&["polyfix", "--config", &path]);
    assert_eq!(r["command"], serde_json::json!(["polyfix", "--config", path]));
    assert_eq!(r["inputs_digest"].as_str().unwrap().len(), 64);
    assert_eq!(r["outputs"]["degrees"], serde_json::json!([1]));
    assert!(r.get("wall_time_seconds").is_none());
    let timed = report(&["polyfix", "--config", &path, "--timing"]);
    assert!(timed["wall_time_seconds"].is_number());
}
