use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn lstx(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_lstx"))
        .args(args)
        .env_remove("LS_MAX_N")
        .output()
        .expect("binary runs")
}

fn json(out: &Output) -> Value {
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    serde_json::from_slice(&out.stdout).expect("json report")
}

fn scratch(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("lstx-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir.join(name)
}

fn without_timing(mut v: Value) -> Value {
    v.as_object_mut().unwrap().remove("timing");
    v
}

#[test]
fn kernel_half_order() {
    let v = json(&lstx(&[
        "kernel", "--alpha", "0.5", "--tau", "0", "--x", "1.0", "--kind", "re-k",
    ]));
    let value = v["results"][0]["value"].as_f64().unwrap();
    assert!((value - 0.461_068_504_447_894_4).abs() < 1e-12);
    for key in ["command", "params", "results", "warnings", "timing"] {
        assert!(v.get(key).is_some(), "missing {key}");
    }
}

#[test]
fn oracle_alias_and_limit() {
    let v = json(&lstx(&[
        "oracle",
        "--identity",
        "eq113",
        "--alpha",
        "0.5",
        "--tau",
        "0",
        "--u",
        "0",
    ]));
    let r = &v["results"][0];
    let half_pi = std::f64::consts::FRAC_PI_2;
    assert!((r["lhs"].as_f64().unwrap() - half_pi).abs() < 1e-9);
    assert!((r["rhs"].as_f64().unwrap() - half_pi).abs() < 1e-12);
    assert!(r["residual"].as_f64().unwrap() <= 1e-9);
    assert_eq!(r["identity"], "laplace-k");
}

#[test]
fn roundtrip_unit_sequence() {
    let v = json(&lstx(&[
        "roundtrip",
        "--scheme",
        "complete",
        "--variant",
        "re",
        "--seq",
        "0,1,0",
    ]));
    let results = v["results"].as_array().unwrap();
    assert_eq!(results.len(), 3);
    for (r, want) in results.iter().zip([0.0, 1.0, 0.0]) {
        assert!(
            (r["recovered"].as_f64().unwrap() - want).abs() <= 1e-6,
            "{r}"
        );
    }
    assert!(v["warnings"].as_array().unwrap().is_empty());
}

#[test]
fn roundtrip_im_ignores_constant_term() {
    let v = json(&lstx(&[
        "roundtrip",
        "--scheme",
        "incomplete",
        "--variant",
        "im",
        "--seq",
        "0.5,1",
    ]));
    let results = v["results"].as_array().unwrap();
    assert_eq!(results.len(), 1);
    assert!((results[0]["recovered"].as_f64().unwrap() - 1.0).abs() <= 1e-6);
    let warnings = v["warnings"].as_array().unwrap();
    assert!(warnings.iter().any(|w| w.as_str().unwrap().contains("a_0")));
}

#[test]
fn envelope_warning_is_surfaced() {
    let out = lstx(&["invert", "--u0", "0.4", "--n", "14"]);
    let v = json(&out);
    let warnings = v["warnings"].as_array().unwrap();
    assert!(
        warnings
            .iter()
            .any(|w| w.as_str().unwrap().contains("cosh(pi n)")),
        "{warnings:?}"
    );
    assert!(warnings
        .iter()
        .any(|w| w.as_str().unwrap().contains("N_max = 12")));
    assert!(String::from_utf8_lossy(&out.stderr).contains("warning:"));
}

#[test]
fn ceiling_follows_environment() {
    let out = Command::new(env!("CARGO_BIN_EXE_lstx"))
        .args([
            "invert",
            "--u0",
            "0.4",
            "--n",
            "14",
            "--coefficient-tol",
            "1e3",
        ])
        .env("LS_MAX_N", "20")
        .output()
        .unwrap();
    let v = json(&out);
    assert!(
        v["warnings"].as_array().unwrap().is_empty(),
        "{}",
        v["warnings"]
    );
}

#[test]
fn validation_errors_exit_one_without_output() {
    let path = scratch("invalid.json");
    let cases: [&[&str]; 4] = [
        &["kernel", "--alpha", "0.5", "--tau", "0", "--x", "abc"],
        &[
            "kernel",
            "--alpha",
            "0.5",
            "--tau",
            "0",
            "--x",
            "1",
            "--abs-tol",
            "0",
        ],
        &["kernel", "--alpha", "1.5", "--tau", "0", "--x", "1"],
        &["frobnicate"],
    ];
    for args in cases {
        let mut full: Vec<&str> = args.to_vec();
        full.extend(["--output", path.to_str().unwrap()]);
        let out = lstx(&full);
        assert_eq!(out.status.code(), Some(1), "{args:?}");
        assert!(!path.exists(), "{args:?} left a report behind");
    }
}

#[test]
fn non_convergence_exits_two() {
    let path = scratch("diverged.json");
    let out = lstx(&[
        "oracle",
        "--identity",
        "laplace-re",
        "--alpha",
        "0.5",
        "--tau",
        "3",
        "--u",
        "1",
        "--max-subdivisions",
        "2",
        "--abs-tol",
        "1e-14",
        "--rel-tol",
        "1e-14",
        "--output",
        path.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(2));
    assert!(!path.exists());
}

#[test]
fn reports_are_deterministic() {
    let args = [
        "kernel", "--alpha", "-0.5,0.3", "--tau", "0,2.5", "--x", "0.5,2",
    ];
    let a = without_timing(json(&lstx(&args)));
    let b = without_timing(json(&lstx(&args)));
    assert_eq!(a, b);
}

#[test]
fn golden_kernel_table_row_counts() {
    let args = [
        "golden",
        "--table",
        "kernel",
        "--alpha",
        "0,0.5,-0.5",
        "--n",
        "0..8",
        "--x",
        "0.5,1,2",
    ];
    let v = json(&lstx(&args));
    assert_eq!(v["schema_version"], 1);
    let rows = v["rows"].as_array().unwrap();
    let count = |kind: &str| rows.iter().filter(|r| r["kind"] == kind).count();
    assert_eq!(count("re_k"), 81);
    assert_eq!(count("im_k"), 81);
    let keys: Vec<(String, f64, u64, f64)> = rows
        .iter()
        .map(|r| {
            (
                r["kind"].as_str().unwrap().to_string(),
                r["alpha"].as_f64().unwrap(),
                r["n"].as_u64().unwrap(),
                r["x"].as_f64().unwrap(),
            )
        })
        .collect();
    let mut sorted = keys.clone();
    sorted.sort_by(|p, q| p.partial_cmp(q).unwrap());
    assert_eq!(keys, sorted);

    let path = scratch("golden.csv");
    let mut with_file = args.to_vec();
    with_file.extend(["--format", "csv", "--output", path.to_str().unwrap()]);
    assert!(lstx(&with_file).status.success());
    let text = std::fs::read_to_string(&path).unwrap();
    assert_eq!(text.lines().count(), 2 + 162);
}

#[test]
fn golden_empty_grid_has_header() {
    let out = lstx(&["golden", "--table", "kernel", "--format", "csv"]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    assert_eq!(
        text,
        "# lstx golden table, schema 1\nkind,alpha,n,x,value,error_estimate,provenance\n"
    );
    let v = json(&lstx(&["golden", "--table", "kernel"]));
    assert!(v["rows"].as_array().unwrap().is_empty());
}

#[test]
fn golden_identity_residuals() {
    let v = json(&lstx(&[
        "golden",
        "--table",
        "identity",
        "--identity",
        "eq114",
        "--alpha",
        "0.5",
        "--n",
        "0..4",
        "--u",
        "0.5,1",
    ]));
    let rows = v["rows"].as_array().unwrap();
    assert_eq!(rows.len(), 10);
    for r in rows {
        assert!(r["residual"].as_f64().unwrap() <= 1e-8, "{r}");
    }
}

#[test]
fn golden_refuses_grid_beyond_envelope() {
    let out = lstx(&[
        "golden", "--table", "kernel", "--alpha", "0.5", "--n", "0..13", "--x", "1",
    ]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("precision envelope"));
}

#[test]
fn csv_report_has_full_precision() {
    let out = lstx(&[
        "kernel", "--alpha", "0.5", "--tau", "0", "--x", "1", "--kind", "re-k", "--format", "csv",
    ]);
    let text = String::from_utf8(out.stdout).unwrap();
    let mut lines = text.lines();
    let header: Vec<&str> = lines.next().unwrap().split(',').collect();
    let row: Vec<&str> = lines.next().unwrap().split(',').collect();
    let value = row[header.iter().position(|h| *h == "value").unwrap()];
    let mantissa = value.split('e').next().unwrap().replace(['.', '-'], "");
    assert_eq!(mantissa.len(), 17, "{value}");
}

#[test]
fn forward_and_reconstruct_commands() {
    let v = json(&lstx(&[
        "forward", "--seq", "1", "--x", "1", "--alpha", "0.5",
    ]));
    assert!((v["results"][0]["value"].as_f64().unwrap() - 0.461_068_504_447_894_4).abs() < 1e-12);
    let v = json(&lstx(&[
        "reconstruct",
        "--profile",
        "cos",
        "--x",
        "0.5,2",
        "--order",
        "3",
    ]));
    for r in v["results"].as_array().unwrap() {
        assert!(r["abs_error"].as_f64().unwrap() < 1e-10, "{r}");
    }
    let v = json(&lstx(&[
        "continuous",
        "--u0",
        "0.7",
        "--x",
        "1",
        "--tau",
        "0.5",
    ]));
    for r in v["results"].as_array().unwrap() {
        assert!(r["abs_error"].as_f64().unwrap() < 1e-5, "{r}");
    }
}
