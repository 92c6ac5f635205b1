use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_classicality"))
        .args(args)
        .env_remove("CLASSICALITY_WORKERS")
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn json(args: &[&str]) -> Value {
    let out = run(args);
    assert!(
        out.status.success(),
        "{args:?}: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    let value: Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_schema(&value);
    value
}

fn assert_schema(value: &Value) {
    let path = Path::new(env!("CARGO_MANIFEST_DIR")).join("schemas/output.schema.json");
    let schema: Value = serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap();
    let validator = jsonschema::validator_for(&schema).expect("schema compiles");
    if let Err(e) = validator.validate(value) {
        panic!("output does not match schema: {e}\n{value:#}");
    }
}

fn csv_rows(text: &str) -> Vec<Vec<String>> {
    text.lines()
        .map(|l| l.split(',').map(String::from).collect())
        .collect()
}

#[test]
fn qubit_hs_indicator() {
    let v = json(&["indicator", "--n", "2", "--metric", "hs"]);
    let value = v["value"].as_f64().unwrap();
    assert!((value - 1.0 / (3.0 * 3f64.sqrt())).abs() < 1e-9);
    assert_eq!(v["method"], "quadrature");
    assert_eq!(v["N"], 2);
}

#[test]
fn qutrit_indicator_at_decimal_zeta() {
    let v = json(&[
        "indicator",
        "--n",
        "3",
        "--metric",
        "hs",
        "--zeta",
        "0.5235988",
    ]);
    assert!((v["value"].as_f64().unwrap() - 0.000675).abs() < 5e-7);
    assert_eq!(v["moduli"]["kind"], "qutrit");
}

#[test]
fn pi_literal_matches_closed_form() {
    let v = json(&[
        "indicator",
        "--n",
        "3",
        "--zeta",
        "pi/6",
        "--method",
        "closed",
    ]);
    assert_eq!(v["value"].as_f64().unwrap(), 21.0 / 31104.0);
}

#[test]
fn monte_carlo_is_deterministic() {
    let args = [
        "indicator",
        "--n",
        "2",
        "--metric",
        "hs",
        "--method",
        "mc",
        "--seed",
        "42",
        "--samples",
        "20000",
    ];
    let a = run(&args);
    let b = run(&args);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
    let c = run(&[
        "indicator",
        "--n",
        "2",
        "--metric",
        "hs",
        "--method",
        "mc",
        "--seed",
        "43",
        "--samples",
        "20000",
    ]);
    assert_ne!(a.stdout, c.stdout);
    assert_schema(&serde_json::from_slice(&a.stdout).unwrap());
}

#[test]
fn mcmc_is_deterministic_and_sequential_matches() {
    let base = [
        "indicator",
        "--n",
        "3",
        "--zeta",
        "pi/6",
        "--metric",
        "bkm",
        "--method",
        "mcmc",
        "--samples",
        "5000",
    ];
    let a = run(&base);
    let b = run(&base);
    let mut seq = base.to_vec();
    seq.push("--sequential");
    let c = run(&seq);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
    assert_eq!(a.stdout, c.stdout);
}

#[test]
fn worker_count_comes_from_environment() {
    let args = [
        "indicator",
        "--n",
        "2",
        "--method",
        "mc",
        "--samples",
        "5000",
        "--format",
        "csv",
    ];
    let with_env = |w: &str| {
        Command::new(env!("CARGO_BIN_EXE_classicality"))
            .args(args)
            .env("CLASSICALITY_WORKERS", w)
            .output()
            .unwrap()
    };
    let flag = |w: &str| {
        let mut a = args.to_vec();
        a.extend(["--workers", w]);
        run(&a)
    };
    assert_eq!(with_env("3").stdout, flag("3").stdout);
    assert_ne!(with_env("3").stdout, with_env("5").stdout);
}

#[test]
fn bkm_mc_falls_back_to_mcmc() {
    let out = run(&[
        "indicator",
        "--n",
        "2",
        "--metric",
        "bkm",
        "--method",
        "mc",
        "--samples",
        "2000",
    ]);
    assert!(out.status.success());
    assert!(String::from_utf8_lossy(&out.stderr).contains("MCMC"));
    let v: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["method"], "mcmc");
    assert_schema(&v);
}

#[test]
fn average_table_in_csv() {
    let out = run(&["average", "--n", "3", "--format", "csv"]);
    assert!(out.status.success());
    let rows = csv_rows(&stdout(&out));
    assert_eq!(rows[0], ["value", "error", "method", "metric", "N", "zeta"]);
    assert_eq!(rows.len(), 4);
    let targets = [
        ("hs", 0.00136368, 1e-4),
        ("bures", 0.00019165, 1e-2),
        ("bkm", 0.00002762, 1e-2),
    ];
    for (row, (metric, target, tol)) in rows[1..].iter().zip(targets) {
        assert_eq!(row[3], metric);
        assert_eq!(row[5], "averaged");
        let value: f64 = row[0].parse().unwrap();
        assert!(((value - target) / target).abs() < tol, "{metric}: {value}");
    }
}

#[test]
fn average_single_metric_json() {
    let v = json(&["average", "--n", "3", "--metric", "hs"]);
    assert!(((v["value"].as_f64().unwrap() - 0.00136368) / 0.00136368).abs() < 1e-4);
    assert_eq!(v["averaged"], true);
    assert!(v["moduli"].is_null());
    let all = json(&["average", "--method", "closed", "--metric", "hs"]);
    assert_eq!(all["method"], "closed-form");
}

#[test]
fn minimize_finds_pi_over_six() {
    for method in ["closed", "quad"] {
        let v = json(&["minimize", "--n", "3", "--metric", "hs", "--method", method]);
        assert!(
            (v["zeta"].as_f64().unwrap() - std::f64::consts::FRAC_PI_6).abs() < 1e-4,
            "{method}"
        );
        assert!((v["value"].as_f64().unwrap() - 21.0 / 31104.0).abs() < 1e-10);
    }
}

#[test]
fn curve_file_is_monotone() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("fig1.csv");
    let out = run(&["curve", "--points", "200", "--out", path.to_str().unwrap()]);
    assert!(out.status.success());
    assert!(out.stdout.is_empty());
    let rows = csv_rows(&std::fs::read_to_string(&path).unwrap());
    assert_eq!(rows[0], ["R", "Q_HS", "Q_Bures", "Q_BKM"]);
    assert_eq!(rows.len(), 201);
    let data: Vec<Vec<f64>> = rows[1..]
        .iter()
        .map(|r| r.iter().map(|x| x.parse().unwrap()).collect())
        .collect();
    for w in data.windows(2) {
        assert!(w[1][1..]
            .iter()
            .zip(&w[0][1..])
            .all(|(next, prev)| next <= prev));
    }
    for r in &data {
        if r[0] <= 0.5774 {
            assert_eq!(&r[1..], &[1.0, 1.0, 1.0]);
        }
        assert!(r[1] >= r[2] && r[2] >= r[3]);
    }
    // Twelve significant digits: one leading digit, eleven after the point.
    let mantissa = rows[200][1].split('e').next().unwrap();
    assert_eq!(mantissa.len(), 13, "{}", rows[200][1]);
}

#[test]
fn curve_json_matches_schema() {
    let v = json(&["curve", "--points", "11", "--format", "json"]);
    assert_eq!(v.as_array().unwrap().len(), 11);
}

#[test]
fn sample_writes_spectra() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("spectra.json");
    let args = [
        "sample",
        "--n",
        "3",
        "--metric",
        "bures",
        "--samples",
        "50",
        "--seed",
        "7",
        "--out",
        path.to_str().unwrap(),
    ];
    assert!(run(&args).status.success());
    let first = std::fs::read(&path).unwrap();
    assert!(run(&args).status.success());
    assert_eq!(first, std::fs::read(&path).unwrap());
    let v: Value = serde_json::from_slice(&first).unwrap();
    assert_schema(&v);
    let spectra = v["spectra"].as_array().unwrap();
    assert_eq!(spectra.len(), 50);
    for s in spectra {
        let s: Vec<f64> = s
            .as_array()
            .unwrap()
            .iter()
            .map(|x| x.as_f64().unwrap())
            .collect();
        assert!((s.iter().sum::<f64>() - 1.0).abs() < 1e-12);
        assert!(s.windows(2).all(|w| w[0] >= w[1]));
    }
    let csv = run(&[
        "sample",
        "--n",
        "4",
        "--method",
        "mcmc",
        "--samples",
        "10",
        "--format",
        "csv",
    ]);
    let rows = csv_rows(&stdout(&csv));
    assert_eq!(rows[0], ["r1", "r2", "r3", "r4"]);
    assert_eq!(rows.len(), 11);
}

#[test]
fn reproduce_paper_without_sampling() {
    let v = json(&["reproduce-paper", "--skip-sampling"]);
    assert_eq!(v["passed"], true);
    assert!(v["checks"].as_array().unwrap().len() >= 10);
}

#[test]
fn usage_errors_exit_with_two() {
    let cases: [&[&str]; 9] = [
        &["indicator", "--n", "3"],
        &["indicator", "--n", "2", "--zeta", "0.1"],
        &["indicator", "--n", "3", "--zeta", "2"],
        &["indicator", "--n", "3", "--zeta", "banana"],
        &["indicator", "--n", "2", "--metric", "fisher"],
        &[
            "indicator",
            "--n",
            "3",
            "--zeta",
            "0.2",
            "--metric",
            "bures",
            "--method",
            "closed",
        ],
        &["average", "--n", "4"],
        &["minimize", "--method", "mc"],
        &["curve", "--points", "1"],
    ];
    for args in cases {
        let out = run(args);
        assert_eq!(
            out.status.code(),
            Some(2),
            "{args:?}: {}",
            String::from_utf8_lossy(&out.stderr)
        );
        assert!(out.stdout.is_empty());
    }
}

#[test]
fn numerical_failure_exits_with_one() {
    let out = run(&[
        "indicator",
        "--n",
        "3",
        "--zeta",
        "0.3",
        "--metric",
        "bkm",
        "--rel-tol",
        "1e-15",
    ]);
    assert_eq!(
        out.status.code(),
        Some(1),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    assert!(String::from_utf8_lossy(&out.stderr).contains("converge"));
}
