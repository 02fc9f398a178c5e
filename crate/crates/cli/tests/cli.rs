use std::io::Write;
use std::process::{Command, Output, Stdio};

use serde_json::{json, Value};

fn charp(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_charp"))
        .args(args)
        .output()
        .unwrap()
}

fn charp_stdin(args: &[&str], input: &str) -> Output {
    let mut child = Command::new(env!("CARGO_BIN_EXE_charp"))
        .args(args)
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .unwrap();
    child
        .stdin
        .take()
        .unwrap()
        .write_all(input.as_bytes())
        .unwrap();
    child.wait_with_output().unwrap()
}

fn json_of(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap()
}

fn line_pair(coeff: &str) -> Value {
    json!({
        "dimension": 2,
        "divisors": ["L"],
        "strata": [{"J": ["L"], "dim": 1, "contains_delta_component": false, "max_mult": coeff, "depends_on": []}],
        "delta": [{"name": "M", "coeff": coeff}],
    })
}

fn assert_report_shape(v: &Value, command: &str) {
    assert_eq!(v["schema"], "1");
    assert_eq!(v["command"], command);
    assert!(v.get("timings").is_none());
    let checks = v["checks"].as_array().unwrap();
    assert!(!checks.is_empty());
    for c in checks {
        assert!(
            ["paper", "derived", "trivial"].contains(&c["provenance"].as_str().unwrap()),
            "{c}"
        );
        for key in ["name", "expected", "computed", "pass", "informational"] {
            assert!(c.get(key).is_some(), "{key} missing in {c}");
        }
    }
    let binding: Vec<&Value> = checks
        .iter()
        .filter(|c| c["informational"] == false)
        .collect();
    let summary = &v["summary"];
    assert_eq!(summary["checks"], binding.len());
    assert_eq!(
        summary["passed"],
        binding.iter().filter(|c| c["pass"] == true).count()
    );
    let mismatches = checks
        .iter()
        .filter(|c| c["informational"] == true && c["pass"] == false)
        .count();
    assert_eq!(summary["informational_mismatches"], mismatches);
    let status = if summary["failed"] == 0 {
        "pass"
    } else {
        "fail"
    };
    assert_eq!(v["status"], status);
}

#[test]
fn verify_claims_passes_for_each_prime() {
    for p in ["2", "3", "5"] {
        let out = charp(&["verify-claims", "--p", p]);
        assert_eq!(
            out.status.code(),
            Some(0),
            "{}",
            String::from_utf8_lossy(&out.stderr)
        );
        let v = json_of(&out);
        assert_report_shape(&v, "verify-claims");
        assert_eq!(v["summary"]["failed"], 0);
        let names: Vec<&str> = v["checks"]
            .as_array()
            .unwrap()
            .iter()
            .map(|c| c["name"].as_str().unwrap())
            .collect();
        for expected in [
            "claim2.h0(pD)",
            "non_cm.thickened_h1(pD)",
            "pencil.basepoint_free(pD)",
        ] {
            assert!(names.contains(&expected), "{expected} missing for p = {p}");
        }
    }
}

#[test]
fn json_output_is_deterministic_and_timings_are_opt_in() {
    let args = ["verify-claims", "--p", "3", "--curve", "0,0,0,-1,1"];
    let (a, b) = (charp(&args), charp(&args));
    assert_eq!(a.stdout, b.stdout);
    let timed = json_of(&charp(&[&args[..], &["--timings"]].concat()));
    assert!(timed["timings"].is_array());
}

#[test]
fn out_json_matches_stdout() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("report.json");
    let out = charp(&[
        "curve-info",
        "--p",
        "5",
        "--out-json",
        path.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(std::fs::read(&path).unwrap(), out.stdout);
    assert_report_shape(&json_of(&out), "curve-info");
}

#[test]
fn plurigenera_csv_has_one_row_per_multiple_of_the_step() {
    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("table.csv");
    let out = charp(&[
        "plurigenera",
        "--p",
        "2",
        "--m-max",
        "8",
        "--out-csv",
        csv.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0));
    assert_report_shape(&json_of(&out), "plurigenera");
    let text = std::fs::read_to_string(&csv).unwrap();
    let mut lines = text.lines();
    assert_eq!(
        lines.next(),
        Some("m,P_m_t0,P_m_generic,jump,threefold_P_m_t0,threefold_P_m_generic")
    );
    let ms: Vec<&str> = lines.map(|l| l.split(',').next().unwrap()).collect();
    assert_eq!(ms, ["2", "4", "6", "8"]);
}

#[test]
fn text_format_lists_every_check() {
    let out = charp(&[
        "plurigenera",
        "--p",
        "3",
        "--m-max",
        "6",
        "--format",
        "text",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.starts_with("plurigenera (pass)"));
    assert!(text.contains("PASS threefold_jump_equals_surface_jump.m=6"));
}

#[test]
fn dlt_check_verdicts_and_exit_codes() {
    let cases = [
        ("1/2", 0, "dlt"),
        ("1", 0, "lc"),
        ("3/2", 1, "condition-violated"),
    ];
    for (coeff, code, verdict) in cases {
        let out = charp_stdin(&["dlt-check", "-"], &line_pair(coeff).to_string());
        assert_eq!(out.status.code(), Some(code), "coefficient {coeff}");
        let v = json_of(&out);
        assert_report_shape(&v, "dlt-check");
        assert_eq!(v["results"]["verdict"], verdict, "coefficient {coeff}");
        let noted = v["notes"]
            .as_array()
            .unwrap()
            .iter()
            .any(|n| n.as_str().unwrap().contains("not dlt-strict"));
        assert_eq!(noted, verdict == "lc");
    }
}

#[test]
fn dlt_check_reads_files_and_explores_chains() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("pair.json");
    std::fs::write(&path, line_pair("1/2").to_string()).unwrap();
    let out = charp(&["dlt-check", path.to_str().unwrap(), "--chain-depth", "2"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json_of(&out);
    assert!(v["checks"]
        .as_array()
        .unwrap()
        .iter()
        .any(|c| c["name"].as_str().unwrap().starts_with("blowup_chains")));
}

#[test]
fn paper_config_is_dlt() {
    for p in ["2", "3", "5"] {
        let out = charp(&["dlt-check", "--paper-config", "--p", p, "--mbar", "2"]);
        assert_eq!(out.status.code(), Some(0));
        assert_eq!(json_of(&out)["results"]["verdict"], "dlt");
    }
}

#[test]
fn usage_and_input_errors_exit_with_two() {
    let dir = tempfile::tempdir().unwrap();
    let truncated = dir.path().join("truncated.json");
    let full = line_pair("1/2").to_string();
    std::fs::write(&truncated, &full[..full.len() / 2]).unwrap();
    let missing = dir.path().join("missing.json");
    let cases: Vec<Vec<&str>> = vec![
        vec![],
        vec!["verify-claims"],
        vec!["verify-claims", "--p", "4"],
        vec!["verify-claims", "--p", "7", "--curve", "0,0,0,0,0"],
        vec!["plurigenera", "--p", "5", "--m-max", "4"],
        vec!["plurigenera", "--p", "2", "--m-max", "4", "--mbar", "0"],
        vec!["dlt-check", truncated.to_str().unwrap()],
        vec!["dlt-check", missing.to_str().unwrap()],
        vec!["dlt-check", "--paper-config"],
        vec!["curve-info", "--p", "3", "--curve", "1,2"],
    ];
    for args in cases {
        let out = charp(&args);
        assert_eq!(
            out.status.code(),
            Some(2),
            "{args:?}: {}",
            String::from_utf8_lossy(&out.stdout)
        );
        assert!(!out.stderr.is_empty(), "{args:?}");
    }
    let out = charp_stdin(&["dlt-check", "-"], r#"{"dimension": 2}"#);
    assert_eq!(out.status.code(), Some(2));
}
