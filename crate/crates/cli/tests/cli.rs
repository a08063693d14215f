//! End-to-end checks of the `sinc-certify` binary: exit codes, exact parsing of
//! decimal input, determinism and the file round trip between `envelope` and
//! `check-sign`.

use std::path::PathBuf;
use std::process::{Command, Output};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_sinc-certify"))
        .args(args)
        .env_remove("SINC_CERTIFY_PRECISION")
        .output()
        .expect("binary runs")
}

fn code(args: &[&str]) -> i32 {
    run(args).status.code().expect("exit code")
}

fn stdout(args: &[&str]) -> String {
    let out = run(args);
    assert!(
        out.status.success(),
        "{args:?}: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    String::from_utf8(out.stdout).expect("utf-8")
}

/// A scratch file unique to this test process.
fn scratch(name: &str) -> PathBuf {
    std::env::temp_dir().join(format!("sinc-certify-{}-{name}", std::process::id()))
}

#[test]
fn exit_codes() {
    let touch = scratch("touch.json");
    // x^2 - x^4 vanishes at x = 1, so positivity on [0, 1] can be neither proven nor refuted
    std::fs::write(
        &touch,
        r#"{"precision_bits":128,"side":"LOWER","target":"touch","terms":[[2,"0x1p0","0x1p0"],[4,"-0x1p0","-0x1p0"]],"validity_c":["0x1p0","0x1p0"]}"#,
    )
    .unwrap();
    let t = touch.to_str().unwrap();
    let cases: &[(&[&str], i32)] = &[
        (&["--help"], 0),
        (&["--version"], 0),
        (&["xa", "1.75"], 0),
        (&["ma", "1.6"], 0),
        (&["check-sign", t, "0", "1/2", "positive"], 0),
        (&["check-sign", t, "1/2", "1", "negative"], 1),
        (&["check-sign", t, "0", "1", "positive"], 2),
        (&["xa", "1.5"], 3),
        (&["xa", "2"], 3),
        (&["ma", "1.4"], 3),
        (&["xa", "1.75", "--tol", "0"], 3),
        (&["--precision", "32", "xa", "1.75"], 3),
        (&["envelope", "lnsinc", "--c", "3.2"], 3),
        (&["envelope", "fa"], 3),
        (&["prove", "9"], 3),
        (&["frobnicate"], 3),
        (&["check-sign", "/nonexistent/poly.json", "0", "1", "positive"], 3),
        (&["check-sign", t, "0", "1", "sideways"], 3),
    ];
    for (args, expected) in cases {
        assert_eq!(code(args), *expected, "{args:?}");
    }
    std::fs::remove_file(touch).ok();
}

#[test]
fn decimal_and_fraction_input_agree() {
    assert_eq!(stdout(&["xa", "1.75"]), stdout(&["xa", "7/4"]));
    assert_eq!(stdout(&["--json", "ma", "1.6"]), stdout(&["--json", "ma", "8/5"]));
}

#[test]
fn output_is_deterministic() {
    let first = stdout(&["--json", "prove", "7"]);
    assert_eq!(first, stdout(&["--json", "prove", "7"]));
    assert_eq!(stdout(&["xa", "1.9"]), stdout(&["xa", "1.9"]));
}

#[test]
fn x_a_brackets_the_zero() {
    let doc: serde_json::Value = serde_json::from_str(&stdout(&["--json", "xa", "1.75"])).unwrap();
    let lo: f64 = doc["lo_decimal"].as_str().unwrap().parse().unwrap();
    let hi: f64 = doc["hi_decimal"].as_str().unwrap().parse().unwrap();
    assert!(lo < hi && hi - lo <= 1e-6);
    assert!((lo - 3.0345).abs() < 1e-3);
}

#[test]
fn small_envelope_pair() {
    let doc: serde_json::Value = serde_json::from_str(&stdout(&[
        "--json", "envelope", "lnsinc", "--m", "2", "--n", "2", "--c", "1",
    ]))
    .unwrap();
    for side in ["lower", "upper"] {
        let poly = &doc[side];
        assert_eq!(poly["target"], "ln_sinc");
        assert_eq!(poly["side"], side.to_uppercase());
        let powers: Vec<u64> = poly["terms"]
            .as_array()
            .unwrap()
            .iter()
            .map(|t| t[0].as_u64().unwrap())
            .collect();
        assert_eq!(powers, [2, 4]);
    }
    // both envelopes share the exact x^2 coefficient -1/6
    assert_eq!(doc["lower"]["terms"][0], doc["upper"]["terms"][0]);
}

#[test]
fn envelope_file_feeds_check_sign() {
    let file = scratch("pair.json");
    let f = file.to_str().unwrap();
    stdout(&["envelope", "fa", "--a", "1.6", "--n", "4", "--c", "3", "--out", f]);
    assert_eq!(code(&["check-sign", f, "0", "2", "negative"]), 3, "a pair needs --side");
    assert_eq!(code(&["check-sign", f, "0", "2", "negative", "--side", "lower"]), 0);
    // the lower envelope turns positive after x_a, so a negative claim on (0, 3) fails
    assert_eq!(code(&["check-sign", f, "0", "3", "negative", "--side", "lower"]), 1);
    let cert: serde_json::Value = serde_json::from_str(&stdout(&[
        "--json",
        "check-sign",
        f,
        "0",
        "2",
        "negative",
        "--side",
        "lower",
    ]))
    .unwrap();
    assert_eq!(cert["status"], "PROVEN");
    std::fs::remove_file(file).ok();
}

#[test]
fn proofs_succeed() {
    for theorem in ["4", "5", "7", "8"] {
        let out = stdout(&["prove", theorem]);
        assert!(out.contains("PROVEN"), "theorem {theorem}: {out}");
    }
}

#[test]
fn proof_certificate_file() {
    let file = scratch("t7.json");
    stdout(&["prove", "7", "--out", file.to_str().unwrap()]);
    let doc: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&file).unwrap()).unwrap();
    let report = &doc["reports"][0];
    assert_eq!(report["status"], "PROVEN");
    assert_eq!(report["certificates"].as_array().unwrap().len(), 2);
    std::fs::remove_file(file).ok();
}

#[test]
fn table_flags_disagreements() {
    let out = stdout(&["table1"]);
    let flagged: Vec<&str> = out
        .lines()
        .filter(|l| l.contains("MISMATCH"))
        .map(|l| l.split_whitespace().next().unwrap())
        .collect();
    assert_eq!(flagged, ["1.59", "1.60", "1.65", "1.98"]);
    let doc: serde_json::Value = serde_json::from_str(&stdout(&["--json", "table1"])).unwrap();
    let rows = doc.as_array().or_else(|| doc["rows"].as_array()).expect("row array");
    assert_eq!(rows.len(), 30);
}
