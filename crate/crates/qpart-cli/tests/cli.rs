//! End-to-end tests of the `qpart` binary: each test runs the real
//! executable and inspects its output and exit status.

use std::process::{Command, Output};

fn qpart(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_qpart"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).expect("utf-8 stdout")
}

fn stderr(out: &Output) -> String {
    String::from_utf8(out.stderr.clone()).expect("utf-8 stderr")
}

#[test]
fn stat_reports_rank_and_m2_rank() {
    let out = qpart(&["stat", "7+6+6+5+2"]);
    assert!(out.status.success());
    let text = stdout(&out);
    assert!(text.contains("rank                   2"), "{text}");
    assert!(text.contains("M2-rank                -1"), "{text}");
    assert!(text.contains("crank                  7"), "{text}");
    assert!(text.contains("weight                 26"), "{text}");
}

#[test]
fn stat_normalizes_part_order() {
    let sorted = qpart(&["stat", "7+6+6+5+2"]);
    let shuffled = qpart(&["stat", "2+6+7+5+6"]);
    assert!(shuffled.status.success());
    assert_eq!(stdout(&sorted), stdout(&shuffled));
}

#[test]
fn graph_mod2_prints_the_two_modular_grid() {
    let out = qpart(&["graph", "7+6+6+5+2", "--mod2"]);
    assert!(out.status.success());
    assert_eq!(stdout(&out), "2 2 2 1\n2 2 2\n2 2 2\n2 2 1\n2\n");
}

#[test]
fn graph_rejects_mod2_with_repeated_odd_parts() {
    let out = qpart(&["graph", "3+3", "--mod2"]);
    assert!(!out.status.success());
    assert!(stderr(&out).contains("error"), "{}", stderr(&out));
}

#[test]
fn enumerate_counts_match_the_partition_function() {
    let out = qpart(&["enumerate", "5"]);
    assert!(out.status.success());
    assert_eq!(stdout(&out).lines().count(), 7);
    assert!(stderr(&out).contains("7 partition(s)"));

    let constrained = qpart(&["enumerate", "5", "--max-part", "3", "--max-parts", "2"]);
    assert_eq!(stdout(&constrained), "3+2\n");
}

#[test]
fn bijection_inverse_round_trips() {
    let image = qpart(&["bijection", "dyson-adjoint", "5+4+4+2", "-m", "1"]);
    assert!(image.status.success());
    assert_eq!(stdout(&image).trim(), "3+3+3+2+2");
    let back = qpart(&["bijection", "dyson-adjoint-inverse", "3+3+3+2+2", "-m", "1"]);
    assert_eq!(stdout(&back).trim(), "5+4+4+2");
}

#[test]
fn bijection_without_its_parameter_fails_with_a_message() {
    let out = qpart(&["bijection", "crank-map", "4+3"]);
    assert!(!out.status.success());
    assert!(stderr(&out).contains("-k"), "{}", stderr(&out));
}

#[test]
fn bijection_trace_prints_step_diagrams() {
    let out = qpart(&["bijection", "dyson-adjoint", "5+4+4+2", "-m", "1", "--trace"]);
    assert!(out.status.success());
    let text = stdout(&out);
    assert!(text.contains("-- "), "{text}");
    assert!(text.contains("* *"), "{text}");
    assert!(text.trim_end().ends_with("3+3+3+2+2"), "{text}");
}

#[test]
fn series_prints_both_sides_in_agreement() {
    let out = qpart(&["series", "crank-at-most", "--k", "0", "--trunc", "10"]);
    assert!(out.status.success());
    let text = stdout(&out);
    assert!(text.contains("census"), "{text}");
    assert!(text.contains("agreement through q^10: yes"), "{text}");
}

#[test]
fn series_requires_the_family_parameters() {
    let out = qpart(&["series", "rank-equals", "--trunc", "10"]);
    assert!(!out.status.success());
    assert!(stderr(&out).contains("--m"), "{}", stderr(&out));
}

#[test]
fn verify_filtered_subset_passes_with_exit_zero() {
    let out = qpart(&["verify", "--filter", "N.2"]);
    assert!(out.status.success());
    let text = stdout(&out);
    assert_eq!(text.matches("ok    ").count(), 31, "{text}");
    assert!(text.contains("gating failures: 0"), "{text}");
}

#[test]
fn verify_unmatched_filter_is_empty_and_succeeds() {
    let out = qpart(&["verify", "--filter", "no.such.id"]);
    assert!(out.status.success());
    assert!(stdout(&out).contains("checks: 0"), "{}", stdout(&out));
}

#[test]
fn verify_json_matches_the_documented_schema() {
    let out = qpart(&["verify", "--filter", "1.27", "--json"]);
    assert!(out.status.success());
    let reports: serde_json::Value =
        serde_json::from_str(&stdout(&out)).expect("valid JSON report document");
    let reports = reports.as_array().expect("array of reports");
    assert_eq!(reports.len(), 13);
    for report in reports {
        for key in [
            "id",
            "params",
            "truncation",
            "mode",
            "gating",
            "pass",
            "verified_range",
            "first_mismatch",
            "elapsed_ms",
        ] {
            assert!(report.get(key).is_some(), "missing {key} in {report}");
        }
        assert_eq!(report["pass"], true);
        assert_eq!(report["mode"], "exact-polynomial");
    }
}

#[test]
fn verify_out_writes_the_report_file() {
    let dir = std::env::temp_dir().join("qpart-cli-test");
    std::fs::create_dir_all(&dir).expect("temp dir");
    let path = dir.join("report.json");
    let out = qpart(&["verify", "--filter", "2.16", "--json", "--out", path.to_str().unwrap()]);
    assert!(out.status.success());
    let body = std::fs::read_to_string(&path).expect("report file written");
    let reports: serde_json::Value = serde_json::from_str(&body).expect("valid JSON");
    assert_eq!(reports.as_array().expect("array").len(), 9);
    std::fs::remove_file(&path).ok();
}

#[test]
fn table_shows_uniform_residue_classes_at_a_congruence_point() {
    let out = qpart(&["table", "--modulus", "5", "--n", "24"]);
    assert!(out.status.success());
    let text = stdout(&out);
    assert!(text.contains("total 1575"), "{text}");
    assert!(text.contains("each residue class holds exactly 315"), "{text}");
}

#[test]
fn malformed_partition_text_is_a_clean_error() {
    for bad in ["4+x", "+", "4++3", "-2", "0+1"] {
        let out = qpart(&["stat", bad]);
        assert!(!out.status.success(), "{bad:?} should be rejected");
        assert!(stderr(&out).starts_with("error:"), "{bad:?}: {}", stderr(&out));
    }
}
