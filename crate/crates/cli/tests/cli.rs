use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn lidstone(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_lidstone"))
        .args(args)
        .env_remove("LIDSTONE_CONFIG")
        .output()
        .unwrap()
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap()
}

fn complex(v: &Value) -> (f64, f64) {
    (v[0].as_f64().unwrap(), v[1].as_f64().unwrap())
}

fn scratch(name: &str, body: &str) -> PathBuf {
    let path = std::env::temp_dir().join(format!("lidstone-cli-{}-{name}", std::process::id()));
    std::fs::write(&path, body).unwrap();
    path
}

#[test]
fn basis_latex_lists_coefficients() {
    let out = lidstone(&["basis", "--max-t", "4", "--format", "latex"]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains(r"\Lambda_{4,1}"));
    assert!(text.contains(r"\frac{1}{120}"));
    assert!(text.contains(r"\frac{7}{360}"));
}

#[test]
fn basis_csv_has_header_and_exact_entries() {
    let out = lidstone(&["basis", "--max-t", "2", "--format", "csv"]);
    let text = String::from_utf8(out.stdout).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("t,index,power,numerator,denominator"));
    assert!(text.lines().any(|l| l == "2,1,1,-1,6"));
    assert!(text.lines().any(|l| l == "2,0,2,1,2"));
}

#[test]
fn output_is_deterministic() {
    let args = ["basis", "--max-t", "12", "--format", "json"];
    assert_eq!(lidstone(&args).stdout, lidstone(&args).stdout);
    let args = ["check-bounds", "--t", "4", "--r", "2", "--samples", "200"];
    assert_eq!(lidstone(&args).stdout, lidstone(&args).stdout);
}

#[test]
fn expand_polynomial_is_exact() {
    let out = lidstone(&[
        "expand",
        "--function",
        r#"poly:[1, 0, "-1/2", 3]"#,
        "--z",
        "-0.5",
    ]);
    assert!(out.status.success());
    let v = json(&out);
    assert_eq!(v["exact"], true);
    let (re, im) = complex(&v["value"]);
    let z = -0.5f64;
    assert!((re - (1.0 - z * z / 2.0 + 3.0 * z.powi(3))).abs() < 1e-15 && im == 0.0);
}

#[test]
fn expand_exponential_matches() {
    let out = lidstone(&["expand", "--function", "exp:1.5", "--z", "0.3,0.2"]);
    assert!(out.status.success());
    let (re, im) = complex(&json(&out)["evaluation"]["value"]);
    let w = num_exp(0.45, 0.3);
    assert!((re - w.0).abs() < 1e-12 && (im - w.1).abs() < 1e-12);
}

fn num_exp(re: f64, im: f64) -> (f64, f64) {
    (re.exp() * im.cos(), re.exp() * im.sin())
}

#[test]
fn interpolate_divergence_exits_three() {
    let b: Vec<f64> = (0..=30)
        .map(|j| (-std::f64::consts::PI.powi(2)).powi(j))
        .collect();
    let b = serde_json::to_string(&b).unwrap();
    let out = lidstone(&["interpolate", "--a", "[0]", "--b", &b, "--z", "0.5"]);
    assert_eq!(out.status.code(), Some(3));
    assert_eq!(json(&out)["converged"], false);
    assert!(!out.stderr.is_empty());
}

#[test]
fn check_integral_agrees_with_basis() {
    let out = lidstone(&["check-integral", "--t", "2", "--z", "0.4", "--K", "2"]);
    assert!(out.status.success());
    let v = json(&out);
    for r in v["results"].as_array().unwrap() {
        assert!(r["abs_error"].as_f64().unwrap() < 1e-9);
    }
}

#[test]
fn buck_recovers_exponential() {
    let out = lidstone(&["buck", "--function", "exp:2", "--K", "1", "--z", "-0.3,0.2"]);
    assert!(out.status.success());
    let v = json(&out);
    assert!(v["residual"].as_f64().unwrap() < 1e-10);
}

#[test]
fn schoenberg_sine_mix_from_file() {
    let path = scratch("mix.json", r#"{"sine_mix": [[1, 2.0], [3, -1.5]]}"#);
    let arg = format!("@{}", path.display());
    let out = lidstone(&["schoenberg", "--function", &arg]);
    std::fs::remove_file(&path).ok();
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let v = json(&out);
    assert_eq!(v["K"], 3);
    let c: Vec<_> = v["C"].as_array().unwrap().iter().map(complex).collect();
    for (got, want) in c.iter().zip([2.0, 0.0, -1.5]) {
        assert!((got.0 - want).abs() < 1e-7 && got.1.abs() < 1e-7);
    }
}

#[test]
fn schoenberg_rejects_exponential() {
    let out = lidstone(&["schoenberg", "--function", "exp:1"]);
    assert_eq!(out.status.code(), Some(4));
    assert!(json(&out)["violations"]
        .as_array()
        .is_some_and(|v| !v.is_empty()));
}

#[test]
fn counterexample_has_exact_coefficients() {
    let out = lidstone(&["counterexample", "--indices", "2:1"]);
    assert!(out.status.success());
    let v = json(&out);
    assert_eq!(v["terms"][0]["t"], 2);
    assert_eq!(v["terms"][0]["degree"], 3);
}

#[test]
fn bad_input_exits_two() {
    for args in [
        &["frobnicate"][..],
        &["expand", "--function", "cos", "--z", "0"],
        &["check-integral", "--t", "3", "--z", "0.1", "--K", "1"],
        &["basis", "--max-t", "2", "--format", "xml"],
    ] {
        assert_eq!(lidstone(args).status.code(), Some(2), "{args:?}");
    }
}

#[test]
fn config_file_sets_defaults_and_flags_win() {
    let path = scratch("cfg.json", r#"{"nodes": 2048}"#);
    let run = |extra: &[&str]| {
        let mut args = vec!["check-integral", "--t", "0", "--z", "0.4", "--K", "1"];
        args.extend_from_slice(extra);
        let out = Command::new(env!("CARGO_BIN_EXE_lidstone"))
            .args(&args)
            .env("LIDSTONE_CONFIG", &path)
            .output()
            .unwrap();
        json(&out)["results"][0]["nodes"].as_u64().unwrap()
    };
    let from_config = run(&[]);
    let from_flag = run(&["--nodes", "32"]);
    std::fs::remove_file(&path).ok();
    assert!(from_config >= 2048);
    assert!(from_flag < 2048);

    let bad = scratch("bad.json", r#"{"nodez": 64}"#);
    let out = Command::new(env!("CARGO_BIN_EXE_lidstone"))
        .args(["basis", "--max-t", "2"])
        .env("LIDSTONE_CONFIG", &bad)
        .output()
        .unwrap();
    std::fs::remove_file(&bad).ok();
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn reproduce_single_criterion() {
    let out = lidstone(&["reproduce", "--criterion", "1"]);
    assert!(out.status.success());
    let v = json(&out);
    assert_eq!(v[0]["id"], 1);
    assert_eq!(v[0]["passed"], true);
}
