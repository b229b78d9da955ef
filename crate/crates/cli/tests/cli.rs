//! End-to-end tests of the `polyosc` binary: exit codes, output formats,
//! determinism, and JSON round-trips.

use std::process::{Command, Output};

use polyosc_cli::{EppsOutput, Report, RitzOutput};

fn polyosc(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_polyosc"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(output: &Output) -> String {
    String::from_utf8(output.stdout.clone()).expect("utf-8 stdout")
}

fn stderr(output: &Output) -> String {
    String::from_utf8(output.stderr.clone()).expect("utf-8 stderr")
}

#[test]
fn epps_succeeds_on_the_quartic() {
    let out = polyosc(&["epps", "--potential", "x^4", "--no-timestamp"]);
    assert_eq!(out.status.code(), Some(0), "stderr: {}", stderr(&out));
    let parsed: EppsOutput = serde_json::from_str(&stdout(&out)).expect("valid JSON");
    assert_eq!(parsed.potential, "x^4");
    assert_eq!(parsed.exponent_degree, 4);
    assert!((parsed.total - 1.072730764).abs() < 1e-8);
    assert!(parsed.generated_at.is_none());
}

#[test]
fn epps_json_round_trips_bit_for_bit() {
    let out = polyosc(&["epps", "--potential", "x^2+x^3+x^4", "--no-timestamp"]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    let parsed: EppsOutput = serde_json::from_str(&text).expect("valid JSON");
    let reserialized = serde_json::to_string_pretty(&parsed).expect("serializable");
    assert_eq!(reserialized.trim_end(), text.trim_end());
}

#[test]
fn epps_exit_code_2_on_parse_error() {
    let out = polyosc(&["epps", "--potential", "x^-2"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("error:"));
}

#[test]
fn epps_exit_code_3_on_solver_error() {
    // Degree-6 potential with a degree-4 exponent cannot satisfy the
    // annihilation conditions; the solver rejects it up front.
    let out = polyosc(&["epps", "--potential", "x^6", "--degree", "4"]);
    assert_eq!(out.status.code(), Some(3));
    assert!(stderr(&out).contains("error:"));
}

#[test]
fn epps_exit_code_4_on_quadrature_error() {
    let out = polyosc(&["epps", "--potential", "x^4", "--tol", "0"]);
    assert_eq!(out.status.code(), Some(4));
    assert!(stderr(&out).contains("error:"));
}

#[test]
fn ritz_succeeds_and_round_trips() {
    let out = polyosc(&["ritz", "--potential", "x^6", "--no-timestamp"]);
    assert_eq!(out.status.code(), Some(0), "stderr: {}", stderr(&out));
    let text = stdout(&out);
    let parsed: RitzOutput = serde_json::from_str(&text).expect("valid JSON");
    assert!((parsed.energy - 1.14480245380).abs() < 1e-7 * 1.14480245380);
    assert!(!parsed.trace.is_empty());
    let reserialized = serde_json::to_string_pretty(&parsed).expect("serializable");
    assert_eq!(reserialized.trim_end(), text.trim_end());
}

#[test]
fn ritz_exit_code_2_on_parse_error() {
    let out = polyosc(&["ritz", "--potential", "2y"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn ritz_exit_code_5_on_unbounded_potential() {
    // Odd-degree leading term: not bounded below, the benchmark rejects it.
    let out = polyosc(&["ritz", "--potential", "x^3"]);
    assert_eq!(out.status.code(), Some(5));
    assert!(stderr(&out).contains("error:"));
}

#[test]
fn ritz_exit_code_5_on_invalid_tolerance() {
    let out = polyosc(&["ritz", "--potential", "x^2", "--tol", "0"]);
    assert_eq!(out.status.code(), Some(5));
}

#[test]
fn reproduce_exits_1_and_reports_exactly_one_failed_row() {
    let out = polyosc(&["reproduce-paper", "--format", "json", "--no-timestamp"]);
    assert_eq!(out.status.code(), Some(1));
    let report: Report = serde_json::from_str(&stdout(&out)).expect("valid JSON");
    assert!(!report.all_passed);
    assert_eq!(report.rows.len(), 10);

    let failed: Vec<&str> = report
        .rows
        .iter()
        .filter(|r| !r.passed)
        .map(|r| r.potential.as_str())
        .collect();
    assert_eq!(failed, vec!["x^4-5*x^2"]);

    // On the failed row the computed energies disagree with the stored
    // references while the internal consistency check still holds.
    let row = report
        .rows
        .iter()
        .find(|r| r.potential == "x^4-5*x^2")
        .unwrap();
    let by_name = |name: &str| {
        row.checks
            .iter()
            .find(|c| c.name == name)
            .unwrap_or_else(|| panic!("check {name} present"))
    };
    assert!(!by_name("ritz-reference").passed);
    assert!(!by_name("epps-expected").passed);
    assert!(!by_name("percent-error").passed);
    assert!(by_name("variational-bound").passed);

    // Every other row passes every check.
    for other in report.rows.iter().filter(|r| r.potential != "x^4-5*x^2") {
        assert!(other.passed, "row {} should pass", other.potential);
        assert!(other.checks.iter().all(|c| c.passed));
    }
}

#[test]
fn reproduce_report_round_trips_bit_for_bit() {
    let out = polyosc(&["reproduce-paper", "--format", "json", "--no-timestamp"]);
    let text = stdout(&out);
    let report: Report = serde_json::from_str(&text).expect("valid JSON");
    let reserialized = serde_json::to_string_pretty(&report).expect("serializable");
    assert_eq!(reserialized.trim_end(), text.trim_end());
}

#[test]
fn runs_without_timestamps_are_byte_identical() {
    for args in [
        vec!["epps", "--potential", "x^4-x^2", "--no-timestamp"],
        vec!["ritz", "--potential", "x^2+x^6", "--no-timestamp"],
        vec![
            "reproduce-paper",
            "--format",
            "json",
            "--no-timestamp",
        ],
        vec!["reproduce-paper", "--no-timestamp"],
    ] {
        let first = polyosc(&args);
        let second = polyosc(&args);
        assert_eq!(first.stdout, second.stdout, "args: {args:?}");
        assert_eq!(first.status.code(), second.status.code());
    }
}

#[test]
fn timestamped_runs_carry_a_timestamp() {
    let out = polyosc(&["epps", "--potential", "x^2"]);
    assert_eq!(out.status.code(), Some(0));
    let parsed: EppsOutput = serde_json::from_str(&stdout(&out)).expect("valid JSON");
    let ts = parsed.generated_at.expect("timestamp present by default");
    assert!(ts.ends_with('Z'), "RFC 3339 UTC timestamp, got {ts}");
}

#[test]
fn table_and_csv_formats_render() {
    let table = polyosc(&[
        "epps",
        "--potential",
        "x^4",
        "--format",
        "table",
        "--no-timestamp",
    ]);
    assert_eq!(table.status.code(), Some(0));
    let table_text = stdout(&table);
    assert!(table_text.contains("total            1.072730765"));

    let csv = polyosc(&[
        "epps",
        "--potential",
        "x^4",
        "--format",
        "csv",
        "--no-timestamp",
    ]);
    assert_eq!(csv.status.code(), Some(0));
    let csv_text = stdout(&csv);
    assert!(csv_text.starts_with("potential,exponent_degree,e0,e1,total"));
    assert!(csv_text.lines().count() >= 2);

    let report_csv = polyosc(&["reproduce-paper", "--format", "csv", "--no-timestamp"]);
    assert_eq!(report_csv.status.code(), Some(1));
    let report_text = stdout(&report_csv);
    assert_eq!(report_text.lines().count(), 11, "header plus ten rows");

    let ritz_table = polyosc(&[
        "ritz",
        "--potential",
        "x^2",
        "--format",
        "table",
        "--no-timestamp",
    ]);
    assert_eq!(ritz_table.status.code(), Some(0));
    assert!(stdout(&ritz_table).contains("energy      1.000000000"));
}

#[test]
fn exact_harmonic_row_is_flagged() {
    let out = polyosc(&["reproduce-paper", "--format", "json", "--no-timestamp"]);
    let report: Report = serde_json::from_str(&stdout(&out)).expect("valid JSON");
    let row = report.rows.iter().find(|r| r.potential == "x^2").unwrap();
    assert_eq!(row.note.as_deref(), Some("exact — residual vanishes"));
    assert_eq!(row.epps_e1, Some(0.0));
    assert_eq!(row.epps_total, Some(1.0));
}
