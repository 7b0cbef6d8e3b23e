use std::process::{Command, Output};

fn hf(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_hardyforge"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exit code")
}

fn json(o: &Output) -> serde_json::Value {
    serde_json::from_slice(&o.stdout).expect("valid JSON on stdout")
}

#[test]
fn verify_single_case_passes_with_schema() {
    let o = hf(&["verify", "--case", "T3.1", "--dims", "3,4,5", "--b", "1", "--profile", "bump:c=1.5,w=1.0", "--tol", "1e-8"]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let v = json(&o);
    assert_eq!(v["schema"], "1");
    let results = v["results"].as_array().unwrap();
    assert_eq!(results.len(), 3);
    for r in results {
        assert_eq!(r["meta"]["case"], "T3.1");
        assert!(r["rel_residual"].as_f64().unwrap() <= 1e-8);
        for key in ["lhs", "rhs", "abs_residual", "pass", "terms"] {
            assert!(r.get(key).is_some(), "missing {key}");
        }
        for t in r["terms"].as_array().unwrap() {
            for key in ["name", "side", "value", "err_est"] {
                assert!(t.get(key).is_some());
            }
        }
    }
}

#[test]
fn alpha_out_of_range_is_a_config_error() {
    let o = hf(&["verify", "--case", "T3.3", "--alpha", "3", "--dims", "4"]);
    assert_eq!(code(&o), 2);
    assert!(o.stdout.is_empty());
}

#[test]
fn bad_inputs_exit_two() {
    for args in [
        &["verify", "--case", "nope"][..],
        &["verify", "--case", "T3.1", "--b", "0.5"],
        &["verify", "--case", "C2", "--profile", "bump:c=0.8,w=0.5"],
        &["verify", "--profile", "ring:c=1"],
        &["verify", "--dims", "2", "--case", "C1"],
        &["verify", "--tol", "-1"],
        &["sharpness", "--target", "nope", "--N", "4"],
        &["sharpness", "--target", "poincare", "--N", "4", "--kmax", "2"],
        &["pair", "--V", "1", "--W", "1"],
        &["pair", "--V", "ln(r - 2)", "--W", "1", "--N", "3", "--R", "1"],
        &["frobnicate"],
    ] {
        assert_eq!(code(&hf(args)), 2, "{args:?}");
    }
}

#[test]
fn too_tight_tolerance_is_a_math_failure_with_report() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("r.json");
    let o = hf(&["verify", "--case", "C3-global", "--dims", "3", "--b", "1", "--tol", "1e-18", "--out", out.to_str().unwrap()]);
    assert_eq!(code(&o), 1);
    let v: serde_json::Value = serde_json::from_slice(&std::fs::read(out).unwrap()).unwrap();
    assert!(v["summary"]["failed"].as_u64().unwrap() > 0);
}

#[test]
fn pair_verdicts_set_exit_codes() {
    let ok = hf(&["pair", "--V", "1", "--W", "((N-2)/2)^2 / r^2", "--N", "4", "--R", "1"]);
    assert_eq!(code(&ok), 0);
    assert_eq!(json(&ok)["is_pair"], true);
    let bad = hf(&["pair", "--V", "1", "--W", "1.5*((N-2)/2)^2 / r^2", "--N", "4", "--R", "1"]);
    assert_eq!(code(&bad), 1);
    assert!(json(&bad)["first_zero"].as_f64().unwrap() < 1.0);
    let syntax = hf(&["pair", "--V", "r^-(2)", "--W", "bogus("]);
    assert_eq!(code(&syntax), 2);
    let err = String::from_utf8_lossy(&syntax.stderr);
    assert!(err.contains("offset 0") && err.contains('^'), "{err}");
    let syntax = hf(&["pair", "--V", "1 +", "--W", "1", "--N", "3", "--R", "1"]);
    assert!(String::from_utf8_lossy(&syntax.stderr).contains("offset 3"));
}

#[test]
fn pair_writes_solution_csv() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("phi.csv");
    let o = hf(&["pair", "--V", "r^(-lambda)", "--W", "((N-lambda-2)/2)^2 * r^(-lambda-2)", "--lambda", "1", "--N", "5", "--R", "2", "--csv", path.to_str().unwrap()]);
    assert_eq!(code(&o), 0);
    let text = std::fs::read_to_string(path).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("r,phi,flux"));
    assert!(lines.count() > 10);
}

#[test]
fn sharpness_emits_csv_series() {
    let o = hf(&["sharpness", "--target", "hardy-hyperbolic", "--N", "5", "--kmax", "64"]);
    assert_eq!(code(&o), 0);
    let text = String::from_utf8(o.stdout).unwrap();
    let last = text.lines().last().unwrap();
    let cols: Vec<f64> = last.split(',').map(|c| c.parse().unwrap()).collect();
    assert_eq!(cols[0], 64.0);
    assert!(cols[2] <= 1.02);
    let o = hf(&["sharpness", "--target", "poincare", "--N", "4", "--format", "json"]);
    let v = json(&o);
    assert_eq!(v["target_constant"], 2.25);
}

#[test]
fn catalog_lists_every_case() {
    let o = hf(&["catalog", "--format", "json"]);
    assert_eq!(code(&o), 0);
    let v = json(&o);
    assert!(v["cases"].as_array().unwrap().len() >= 17);
    assert_eq!(v["pairs"].as_array().unwrap().len(), 7);
}

#[test]
fn config_file_fills_missing_flags() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.cfg");
    std::fs::write(&cfg, "# verify one case\n[verify]\ncase = T3.2\ndims = 3,4\nformat = csv\n").unwrap();
    let o = hf(&["--config", cfg.to_str().unwrap(), "verify", "--dims", "5"]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let text = String::from_utf8(o.stdout).unwrap();
    let rows: Vec<&str> = text.lines().skip(1).collect();
    assert_eq!(rows.len(), 9);
    assert!(rows.iter().all(|r| r.starts_with("T3.2,5,")));
    std::fs::write(&cfg, "[verify]\nthis is not a pair\n").unwrap();
    assert_eq!(code(&hf(&["--config", cfg.to_str().unwrap(), "verify"])), 2);
    assert_eq!(code(&hf(&["--config", "/nonexistent/x.cfg", "verify"])), 2);
}

#[test]
fn thread_count_does_not_change_reports() {
    let run = |threads: &str| {
        Command::new(env!("CARGO_BIN_EXE_hardyforge"))
            .args(["verify", "--case", "T1-generic,C4-stability,V2-hyperbolic", "--dims", "3,5"])
            .env("HARDYFORGE_THREADS", threads)
            .output()
            .unwrap()
    };
    let a = run("1");
    let b = run("3");
    assert_eq!(code(&a), 0);
    assert_eq!(a.stdout, b.stdout);
    assert_eq!(code(&run("zero")), 2);
}
