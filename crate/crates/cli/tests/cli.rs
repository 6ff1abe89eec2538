//! Black-box tests of the `ekr` binary: exit codes, JSON contracts, error
//! messages, and the verify round trip.

use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn ekr() -> Command {
    Command::new(env!("CARGO_BIN_EXE_ekr"))
}

fn run(args: &[&str]) -> Output {
    ekr().args(args).output().expect("binary runs")
}

fn stdout_of(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).into_owned()
}

fn stderr_of(out: &Output) -> String {
    String::from_utf8_lossy(&out.stderr).into_owned()
}

fn json_of(out: &Output) -> Value {
    serde_json::from_str(&stdout_of(out)).unwrap_or_else(|e| {
        panic!("stdout is not JSON ({e}): {}", stdout_of(out));
    })
}

fn tmp_path(name: &str) -> PathBuf {
    std::env::temp_dir().join(format!("ekr-test-{}-{name}", std::process::id()))
}

#[test]
fn paper_case_single_passes() {
    let out = run(&["paper-case", "sl2even:2"]);
    assert!(out.status.success(), "stderr: {}", stderr_of(&out));
    let text = stdout_of(&out);
    assert!(text.contains("[PASS]"));
    assert!(!text.contains("[FAIL]"), "unexpected failure:\n{text}");
    assert!(text.contains("case sl2even:2: PASS"));
}

#[test]
fn paper_case_all_reports_every_case() {
    let out = run(&["paper-case", "--all", "--json", "-"]);
    assert!(out.status.success(), "stderr: {}", stderr_of(&out));
    let v = json_of(&out);
    let cases = v.as_array().expect("array of case reports");
    assert_eq!(cases.len(), 11);
    for case in cases {
        let id = case["case"].as_str().unwrap();
        let status = case["status"].as_str().unwrap();
        match id {
            "m22" => assert_eq!(status, "unavailable"),
            _ => assert_eq!(status, "pass", "case {id}"),
        }
    }
}

#[test]
fn paper_case_unavailable_input_is_not_an_error() {
    let out = run(&["paper-case", "m22"]);
    assert!(out.status.success(), "stderr: {}", stderr_of(&out));
    let text = stdout_of(&out);
    assert!(text.to_lowercase().contains("unavailable"), "got:\n{text}");
}

#[test]
fn paper_case_unknown_id_lists_known_ones() {
    let out = run(&["paper-case", "nope"]);
    assert!(!out.status.success());
    let err = stderr_of(&out);
    assert!(err.contains("nope"));
    assert!(err.contains("sl2even:2"), "should list known ids: {err}");
}

#[test]
fn coclique_json_has_exactly_the_contract_fields() {
    let out = run(&["coclique", "--family", "psl2pairs:7", "--json", "-"]);
    assert!(out.status.success(), "stderr: {}", stderr_of(&out));
    let v = json_of(&out);
    let obj = v.as_object().unwrap();
    let mut keys: Vec<&str> = obj.keys().map(|k| k.as_str()).collect();
    keys.sort_unstable();
    assert_eq!(keys, ["alpha", "exact", "witness"]);
    assert_eq!(v["alpha"], 12);
    assert_eq!(v["exact"], true);
    assert_eq!(v["witness"].as_array().unwrap().len(), 12);
}

#[test]
fn verify_round_trip_and_tamper_detection() {
    let cert_path = tmp_path("a7.json");
    let out = run(&[
        "ratio",
        "--family",
        "a7-triples",
        "--json",
        cert_path.to_str().unwrap(),
    ]);
    assert!(out.status.success(), "stderr: {}", stderr_of(&out));

    let out = run(&["verify", cert_path.to_str().unwrap()]);
    assert!(out.status.success(), "stderr: {}", stderr_of(&out));
    assert!(stdout_of(&out).contains("certificate OK"));

    let mut cert: Value =
        serde_json::from_str(&std::fs::read_to_string(&cert_path).unwrap()).unwrap();
    assert_eq!(cert["alpha_upper"], "72");
    cert["alpha_upper"] = Value::String("71".into());
    let tampered = tmp_path("a7-tampered.json");
    std::fs::write(&tampered, serde_json::to_string(&cert).unwrap()).unwrap();

    let out = run(&["verify", tampered.to_str().unwrap()]);
    assert!(!out.status.success(), "tampered certificate must be rejected");
    let combined = format!("{}{}", stdout_of(&out), stderr_of(&out));
    assert!(combined.contains("FAILED") || combined.contains("failed"), "{combined}");

    let _ = std::fs::remove_file(cert_path);
    let _ = std::fs::remove_file(tampered);
}

#[test]
fn verify_rechecks_wrapped_reports() {
    let report_path = tmp_path("report.json");
    let out = run(&[
        "paper-case",
        "psl27-cosets",
        "--json",
        report_path.to_str().unwrap(),
    ]);
    assert!(out.status.success(), "stderr: {}", stderr_of(&out));

    let out = run(&["verify", report_path.to_str().unwrap()]);
    assert!(out.status.success(), "stderr: {}", stderr_of(&out));
    let text = stdout_of(&out);
    assert!(text.matches("certificate OK").count() >= 2, "{text}");
    let _ = std::fs::remove_file(report_path);
}

#[test]
fn blocks_classifies_the_order_21_group() {
    let out = run(&["blocks", "--family", "f21", "--json", "-"]);
    assert!(out.status.success(), "stderr: {}", stderr_of(&out));
    let v = json_of(&out);
    assert_eq!(v["systems"].as_array().unwrap().len(), 8);
    assert_eq!(v["classification"]["label"], "case-iii-a");
}

#[test]
fn spectrum_reads_generators_from_a_file() {
    let group_path = tmp_path("s5.txt");
    std::fs::write(&group_path, "(1 2 3 4 5)\n(1 2)\n").unwrap();
    let out = run(&["spectrum", "--group", group_path.to_str().unwrap(), "--json", "-"]);
    assert!(out.status.success(), "stderr: {}", stderr_of(&out));
    let v = json_of(&out);
    assert_eq!(v["degree"], 5);
    assert_eq!(v["spectrum"]["row_sum"], "44");
    assert_eq!(v["spectrum"]["exact"], true);
    let _ = std::fs::remove_file(group_path);
}

#[test]
fn element_cap_is_enforced_from_the_environment() {
    let group_path = tmp_path("s5cap.txt");
    std::fs::write(&group_path, "(1 2 3 4 5)\n(1 2)\n").unwrap();
    let out = ekr()
        .args(["spectrum", "--group", group_path.to_str().unwrap()])
        .env("EKR_ELEMENT_CAP", "10")
        .output()
        .expect("binary runs");
    assert!(!out.status.success());
    assert!(stderr_of(&out).contains("element cap"), "{}", stderr_of(&out));
    let _ = std::fs::remove_file(group_path);
}

#[test]
fn regular_finds_a_subgroup_in_the_coset_action() {
    let out = run(&["regular", "--family", "psl27-cosets", "--json", "-"]);
    assert!(out.status.success(), "stderr: {}", stderr_of(&out));
    let v = json_of(&out);
    assert_eq!(v["found"], true);
    assert_eq!(v["certificate"]["kind"], "regular-subgroup");
    assert_eq!(v["certificate"]["rho_upper"], "1");
}

#[test]
fn lp_reports_tau_and_a_certificate() {
    let out = run(&["lp", "--family", "psl27-cosets", "--json", "-"]);
    assert!(out.status.success(), "stderr: {}", stderr_of(&out));
    let v = json_of(&out);
    assert_eq!(v["certificate"]["kind"], "weighted-ratio");
    assert_eq!(v["certificate"]["alpha_upper"], "8");
    assert_eq!(v["tau"], "-1/20");
}

#[test]
fn chartable_prints_one_row_per_partition() {
    let out = run(&["chartable", "16"]);
    assert!(out.status.success(), "stderr: {}", stderr_of(&out));
    let text = stdout_of(&out);
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines.len(), 232, "header plus p(16) = 231 rows");
    assert!(lines[0].starts_with("lambda\t"));
    for line in &lines[1..] {
        for field in line.split('\t').skip(1) {
            let v: i64 = field.parse().expect("integer character value");
            assert!((-1..=1).contains(&v), "value {v} outside {{-1,0,1}}");
        }
    }
}

#[test]
fn unknown_family_is_a_clean_error() {
    let out = run(&["spectrum", "--family", "nope"]);
    assert!(!out.status.success());
    assert!(stderr_of(&out).contains("nope"));
}
