//! Bundle loading, serialization roundtrips, and binary-level behaviour:
//! exit codes and report determinism.

use std::path::{Path, PathBuf};
use std::process::Command;

use corrcheck_cli::bundle::Bundle;
use corrcheck_core::fincat::terminal_object;
use corrcheck_core::Caps;

fn fixture_path(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("fixtures").join(name)
}

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_corrcheck"))
}

#[test]
fn shipped_bundle_loads_with_terminal_12() {
    let caps = Caps::default();
    let bundle = Bundle::load(&fixture_path("d12.bundle"), &caps).unwrap();
    assert_eq!(bundle.categories.len(), 1);
    let d12 = &bundle.categories["D12"];
    assert!(d12.validate().is_valid());
    let t = terminal_object(d12).unwrap();
    assert_eq!(d12.object_name(t), "12");
    assert_eq!(bundle.spans.len(), 1);
    assert_eq!(bundle.squares.len(), 1);
}

#[test]
fn empty_bundle_is_empty() {
    let caps = Caps::default();
    let bundle = Bundle::parse("{}", &caps).unwrap();
    assert!(bundle.categories.is_empty());
    assert!(bundle.spans.is_empty());
}

#[test]
fn serialization_roundtrip_is_structural_identity() {
    let caps = Caps::default();
    let bundle = Bundle::load(&fixture_path("d12.bundle"), &caps).unwrap();
    let text = bundle.serialize();
    let again = Bundle::parse(&text, &caps).unwrap();
    assert_eq!(bundle.categories["D12"], again.categories["D12"]);
    assert_eq!(bundle.spans["two-between-tops"].1, again.spans["two-between-tops"].1);
    // Serialization itself is deterministic.
    assert_eq!(text, again.serialize());
}

#[test]
fn broken_composition_table_is_rejected_citing_the_pair() {
    let caps = Caps::default();
    let text = r#"{
        "categories": {
            "bad": {
                "objects": ["a", "b", "c"],
                "morphisms": [
                    { "id": "f", "src": "a", "tgt": "b" },
                    { "id": "g", "src": "b", "tgt": "c" },
                    { "id": "h", "src": "a", "tgt": "b" }
                ],
                "composition": [["g", "f", "h"]]
            }
        }
    }"#;
    let err = Bundle::parse(text, &caps).unwrap_err();
    let msg = err.to_string();
    assert!(msg.contains("bad"), "message: {msg}");
}

#[test]
fn dangling_reference_is_reported() {
    let caps = Caps::default();
    let text = r#"{ "spans": { "s": { "cat": "nowhere", "left_leg": "f", "right_leg": "g" } } }"#;
    let err = Bundle::parse(text, &caps).unwrap_err();
    assert!(err.to_string().contains("nowhere"));
}

#[test]
fn parse_errors_carry_position() {
    let caps = Caps::default();
    let err = Bundle::parse("{ not json", &caps).unwrap_err();
    assert!(err.to_string().contains("line"));
}

// ---------------------------------------------------------------------------
// binary behaviour
// ---------------------------------------------------------------------------

#[test]
fn validate_fixture_exits_zero() {
    let out = bin().args(["validate", "--fixture", "d12"]).output().unwrap();
    assert!(out.status.success(), "stderr: {}", String::from_utf8_lossy(&out.stderr));
}

#[test]
fn validate_bundle_category() {
    let out = bin()
        .args(["validate", "--bundle"])
        .arg(fixture_path("d12.bundle"))
        .args(["--cat", "D12"])
        .output()
        .unwrap();
    assert!(out.status.success());
}

#[test]
fn negative_verdict_exits_one() {
    // The 3 -> 1 <- 3 cospan has no pullback in finset3.
    let out = bin()
        .args(["pullback", "--fixture", "finset3", "--left", "3>1:000", "--right", "3>1:000"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(1));
    let stdout = String::from_utf8_lossy(&out.stdout);
    assert!(stdout.contains("no object carries a universal cone"));
}

#[test]
fn input_errors_exit_two() {
    let out = bin().args(["validate", "--fixture", "no-such-fixture"]).output().unwrap();
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn cap_violations_exit_three() {
    let out = bin().args(["segal", "--fixture", "d12", "--n", "9"]).output().unwrap();
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn positive_pullback_reports_the_apex() {
    let out = bin()
        .args(["pullback", "--fixture", "d12", "--left", "4->12", "--right", "6->12"])
        .output()
        .unwrap();
    assert!(out.status.success());
    let stdout = String::from_utf8_lossy(&out.stdout);
    assert!(stdout.contains("apex 2"), "stdout: {stdout}");
}

#[test]
fn classify_fib_is_byte_deterministic() {
    let run = || {
        bin().args(["classify-fib", "--fib", "span:d12"]).output().unwrap()
    };
    let a = run();
    let b = run();
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn subcommands_cover_the_span_calculus() {
    let compose = bin()
        .args([
            "compose-spans",
            "--fixture",
            "d12",
            "--first",
            "12,4,12",
            "--second",
            "12,6,12",
        ])
        .output()
        .unwrap();
    assert!(compose.status.success());
    assert!(String::from_utf8_lossy(&compose.stdout).contains("2"));

    let adjoint =
        bin().args(["adjoint", "--fixture", "d12", "--span", "12,2,12"]).output().unwrap();
    assert!(adjoint.status.success());

    let dual = bin().args(["dual", "--fixture", "d12", "--span", "12,2,12"]).output().unwrap();
    assert!(dual.status.success());

    let zigzag = bin().args(["zigzag", "--fixture", "d12", "--object", "4"]).output().unwrap();
    assert!(zigzag.status.success());

    let square =
        bin().args(["bc-square", "--fixture", "d12", "--square", "2,4,6,12"]).output().unwrap();
    assert!(square.status.success());

    let segal = bin().args(["segal", "--fixture", "d12", "--n", "2"]).output().unwrap();
    assert!(segal.status.success());

    let segal_neg = bin().args(["segal", "--fixture", "finset3", "--n", "2"]).output().unwrap();
    assert_eq!(segal_neg.status.code(), Some(1));

    let groth = bin().args(["groth", "--hom-of", "d12"]).output().unwrap();
    assert!(groth.status.success());

    let bc = bin().args(["bc", "--fib", "span:walking-square"]).output().unwrap();
    assert!(bc.status.success(), "stderr: {}", String::from_utf8_lossy(&bc.stderr));
}

#[test]
fn report_flag_writes_a_file() {
    let dir = std::env::temp_dir().join("corrcheck-report-test");
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("report.json");
    let out = bin()
        .args(["validate", "--fixture", "z2", "--report"])
        .arg(&path)
        .output()
        .unwrap();
    assert!(out.status.success());
    let text = std::fs::read_to_string(&path).unwrap();
    assert!(text.contains("\"verdict\": \"pass\""));
    std::fs::remove_file(&path).ok();
}
