use std::io::Write;
use std::process::{Command, Output, Stdio};

fn invshift(args: &[&str], stdin: &str) -> Output {
    let mut child = Command::new(env!("CARGO_BIN_EXE_invshift"))
        .args(args)
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .expect("binary runs");
    child.stdin.take().unwrap().write_all(stdin.as_bytes()).unwrap();
    child.wait_with_output().unwrap()
}

const FIXED: &str = r#"{
  "group": {"cyclic_orders": [12]},
  "distributions": {
    "X": {"probs": {"[0]": "1/4", "[4]": "1/4", "[8]": "1/4", "[1]": "1/12", "[5]": "1/12", "[9]": "1/12"}},
    "Y": {"probs": {"[0]": "1/2", "[4]": "1/2"}}
  },
  "command": "analyze"
}"#;

const NOT_FIXED: &str = r#"{
  "group": {"cyclic_orders": [4]},
  "distributions": {
    "X": {"probs": {"[0]": "1"}},
    "Y": {"probs": {"[1]": "1"}}
  },
  "command": "analyze"
}"#;

fn json(out: &Output) -> serde_json::Value {
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

#[test]
fn analyze_reports_fixed_point_and_subgroup() {
    let out = invshift(&["analyze", "--oracle"], FIXED);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let v = json(&out);
    assert_eq!(v["verdicts"]["is_fixed_point"], true);
    assert_eq!(v["a_subgroup"], serde_json::json!([[0], [4], [8]]));
    assert_eq!(v["fixed_point_basis"]["dimension"], 4);
    assert_eq!(v["fixed_point_basis"]["oracle"]["agrees"], true);
}

#[test]
fn output_is_byte_stable() {
    let a = invshift(&["analyze"], FIXED);
    let b = invshift(&["analyze"], FIXED);
    assert_eq!(a.stdout, b.stdout);
    let s1 = invshift(&["sample", "--n", "5000", "--seed", "11"], FIXED);
    let s2 = invshift(&["sample", "--n", "5000", "--seed", "11"], FIXED);
    assert_eq!(s1.status.code(), Some(0));
    assert_eq!(s1.stdout, s2.stdout);
}

#[test]
fn independence_without_fixed_point_is_a_precondition_failure() {
    let out = invshift(&["independence"], NOT_FIXED);
    assert_eq!(out.status.code(), Some(1));
    let text = String::from_utf8_lossy(&out.stdout).into_owned() + &String::from_utf8_lossy(&out.stderr);
    assert!(text.contains("precondition not met"), "{text}");
}

#[test]
fn invalid_document_exits_one_with_field() {
    let bad = NOT_FIXED.replace("\"[1]\": \"1\"", "\"[7]\": \"1\"");
    let out = invshift(&["analyze"], &bad);
    assert_eq!(out.status.code(), Some(1));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("distributions.Y") && err.contains("out of range"), "{err}");
}

#[test]
fn circle_subcommand() {
    let out = invshift(&["circle", "--support", "1/4,1/6"], "{}");
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let v = json(&out);
    assert_eq!(v["circle"]["n"], 12);
    let out = invshift(&["circle", "--support", "1/3", "--nonrational"], "{}");
    assert_eq!(json(&out)["circle"]["kind"], "haar_forced");
}
