use std::io::Write;
use std::process::{Command, Output, Stdio};

use serde_json::Value;

const EVEN_TRIANGLE: &str = r#"{"n":2,"exponents":[[2,0],[0,2],[2,2]]}"#;

fn vdm(args: &[&str], stdin: &str) -> Output {
    let mut child = Command::new(env!("CARGO_BIN_EXE_vdm"))
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
        .write_all(stdin.as_bytes())
        .unwrap();
    child.wait_with_output().unwrap()
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap()
}

#[test]
fn decide_even_triangle_in_char_two() {
    let out = vdm(&["decide", "--char", "2"], EVEN_TRIANGLE);
    assert_eq!(out.status.code(), Some(0));
    let doc = json(&out);
    assert_eq!(doc["result"]["verdict"], "PowerOfIrreducible");
    assert_eq!(doc["result"]["power_r"], 1);
    assert_eq!(
        doc["result"]["reduced_support"]["exponents"],
        serde_json::json!([[1, 0], [0, 1], [1, 1]])
    );
    let reasons = doc["result"]["reasons"].as_array().unwrap();
    assert_eq!(reasons.len(), 3);
    assert_eq!(reasons[2]["condition"], "char(k) does not divide d_Γ");
    assert_eq!(reasons[2]["holds"], false);
}

#[test]
fn negative_exponent_is_an_input_error() {
    let out = vdm(&["decide"], r#"{"n":2,"exponents":[[2,0],[-1,2]]}"#);
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8(out.stderr).unwrap();
    assert!(err.contains("exponents[1][0]"), "{err}");
    assert!(out.stdout.is_empty());
}

#[test]
fn caps_and_bad_characteristics_are_input_errors() {
    assert_eq!(
        vdm(&["expand", "--max-n", "2"], EVEN_TRIANGLE)
            .status
            .code(),
        Some(2)
    );
    assert_eq!(
        vdm(&["decide", "--char", "9"], EVEN_TRIANGLE).status.code(),
        Some(2)
    );
    // Collinear supports have no Newton polygon.
    let out = vdm(
        &["oracle", "polygon"],
        r#"{"n":2,"exponents":[[0,0],[1,1],[2,2]]}"#,
    );
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn input_file_and_inline_json() {
    let dir = std::env::temp_dir().join(format!("vdm-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("support.json");
    std::fs::write(&path, EVEN_TRIANGLE).unwrap();
    let from_file = vdm(&["expand", "--input", path.to_str().unwrap()], "");
    let inline = vdm(&["expand", "--json", EVEN_TRIANGLE], "");
    let piped = vdm(&["expand"], EVEN_TRIANGLE);
    assert_eq!(from_file.status.code(), Some(0));
    assert_eq!(from_file.stdout, inline.stdout);
    assert_eq!(from_file.stdout, piped.stdout);
    assert_eq!(json(&piped)["result"]["num_terms"], 6);
    std::fs::remove_dir_all(dir).ok();
}

#[test]
fn tropical_reports_seed_and_multiplicities() {
    let out = vdm(&["tropical", "--seed", "42"], EVEN_TRIANGLE);
    assert_eq!(out.status.code(), Some(0));
    let doc = json(&out);
    assert_eq!(doc["seed"], 42);
    assert_eq!(doc["result"]["verdict"], "Reducible");
    assert_eq!(doc["result"]["multiplicity_gcd"], 2);
    let facets = doc["result"]["witness"]["combinatorics"]["facets"]
        .as_array()
        .unwrap();
    assert!(facets.iter().all(|f| f["multiplicity"] == 2));
}

#[test]
fn verify_runs_the_whole_suite() {
    for input in [
        EVEN_TRIANGLE,
        r#"{"n":1,"exponents":[[1],[2],[4]]}"#,
        r#"{"n":2,"exponents":[[1,1],[2,2],[3,3]]}"#,
        r#"{"n":2,"exponents":[[0,0],[1,0],[0,1],[1,1]]}"#,
        r#"{"n":3,"exponents":[[0,0,0],[1,0,0],[0,1,0],[0,0,1],[1,1,1]]}"#,
    ] {
        let out = vdm(&["verify"], input);
        assert_eq!(
            out.status.code(),
            Some(0),
            "{}",
            String::from_utf8_lossy(&out.stdout)
        );
        let doc = json(&out);
        assert_eq!(doc["result"]["passed"], true);
        let checks = doc["result"]["checks"].as_array().unwrap();
        assert!(checks.iter().all(|c| c["status"] != "fail"));
    }
}
