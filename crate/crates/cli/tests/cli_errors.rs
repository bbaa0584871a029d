//! CLI failure paths: diagnostics and exit codes for malformed input,
//! unknown flags, and tampered certificates.

use std::path::PathBuf;
use std::process::Command;

fn corpus_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("../..")
        .join("corpus")
}

fn carnot(args: &[&str]) -> (String, String, i32) {
    let out = Command::new(env!("CARGO_BIN_EXE_carnot"))
        .current_dir(corpus_dir().join(".."))
        .args(args)
        .output()
        .expect("spawn carnot");
    (
        String::from_utf8_lossy(&out.stdout).into_owned(),
        String::from_utf8_lossy(&out.stderr).into_owned(),
        out.status.code().unwrap_or(-1),
    )
}

#[test]
fn unknown_flag_is_usage_failure() {
    let (_, err, code) = carnot(&["decide", "corpus/engel1.json", "--frobnicate"]);
    assert_eq!(code, 1);
    assert!(err.contains("frobnicate"), "stderr: {err}");
}

#[test]
fn unknown_subcommand_is_usage_failure() {
    let (_, _, code) = carnot(&["transmogrify"]);
    assert_eq!(code, 1);
}

#[test]
fn malformed_file_reports_diagnostics() {
    let dir = std::env::temp_dir().join("carnot-cli-err");
    std::fs::create_dir_all(&dir).unwrap();
    let bad_json = dir.join("broken.json");
    std::fs::write(&bad_json, "{ \"schema\": 1, \"name\": ").unwrap();
    let (_, err, code) = carnot(&["validate", bad_json.to_str().unwrap()]);
    assert_eq!(code, 1);
    assert!(err.contains("broken.json"), "stderr: {err}");

    // a rational parse failure names the entry and field
    let bad_rat = dir.join("badrat.json");
    std::fs::write(
        &bad_rat,
        r#"{"schema":1,"name":"x","layers":[2,1],"basis":["A","B","C"],
           "brackets":[{"left":"A","right":"B","result":{"C":"7/0"}}]}"#,
    )
    .unwrap();
    let (_, err, code) = carnot(&["validate", bad_rat.to_str().unwrap()]);
    assert_eq!(code, 1);
    assert!(err.contains('C') && err.contains("0"), "stderr: {err}");
}

#[test]
fn bad_lambda_arity_is_usage_failure() {
    let (_, err, code) = carnot(&["decide", "corpus/engel2.json", "--lambda", "1,0"]);
    assert_eq!(code, 1);
    assert!(err.contains("coordinates"), "stderr: {err}");
}

#[test]
fn tampered_certificate_is_rejected() {
    let dir = std::env::temp_dir().join("carnot-cli-err");
    std::fs::create_dir_all(&dir).unwrap();
    let cert = dir.join("cert.json");
    let (json, _, code) = carnot(&["decide", "corpus/engel1.json", "--lambda", "1,0", "--json"]);
    assert_eq!(code, 0);
    // flip the claimed verdict without touching the certificate body
    let tampered = json.replace("\"not_semigenerated\"", "\"semigenerated\"");
    std::fs::write(&cert, &tampered).unwrap();
    let (_, err, code) = carnot(&["verify", "corpus/engel1.json", cert.to_str().unwrap()]);
    assert_eq!(code, 1);
    assert!(!err.is_empty());
    // the untouched certificate still verifies
    std::fs::write(&cert, &json).unwrap();
    let (out, _, code) = carnot(&["verify", "corpus/engel1.json", cert.to_str().unwrap()]);
    assert_eq!(code, 0);
    assert!(out.contains("CERTIFICATE OK"));
}

#[test]
fn verdicts_decide_exit_codes() {
    let (_, _, definite) = carnot(&["decide", "corpus/heisenberg.json"]);
    assert_eq!(definite, 0);
    let (out, _, unknown) = carnot(&["decide", "corpus/engel1.json", "--lambda", "1,1"]);
    assert_eq!(unknown, 2);
    assert!(out.contains("UNKNOWN"));
}
