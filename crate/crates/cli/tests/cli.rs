use std::io::Write;
use std::process::{Command, Output, Stdio};

use serde_json::Value;

fn hurwitz(args: &[&str], stdin: &str) -> Output {
    let mut child = Command::new(env!("CARGO_BIN_EXE_hurwitz"))
        .args(args)
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .expect("binary runs");
    child.stdin.take().unwrap().write_all(stdin.as_bytes()).unwrap();
    child.wait_with_output().unwrap()
}

fn json_out(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

const TWOS: &str = r#"{"n":3,"entries":[["2","2","2"],["2","2","2"],["2","2","2"]]}"#;
const A2: &str = r#"{"n":2,"entries":[["2","1"],["1","2"]]}"#;

#[test]
fn classify_all_twos_is_finite() {
    let out = hurwitz(&["classify", "-"], TWOS);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json_out(&out)["verdict"], "Finite");
}

#[test]
fn classify_indefinite_triangle() {
    let m = r#"{"n":3,"entries":[["2","-2","-2"],["-2","2","-2"],["-2","-2","2"]]}"#;
    let out = hurwitz(&["classify", "-"], m);
    assert_eq!(json_out(&out)["verdict"], "Infinite");
}

#[test]
fn charpoly_of_a2() {
    let out = hurwitz(&["charpoly", "-"], A2);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json_out(&out)["cyclotomic"], serde_json::json!([[3, 1]]));
}

#[test]
fn verify_dn_orbits_four() {
    let out = hurwitz(&["verify", "dn-orbits", "--n", "4"], "");
    assert_eq!(out.status.code(), Some(0));
    let v = json_out(&out);
    assert_eq!(v["pass"], true);
    assert!(v["rows"][0]["detail"].as_str().unwrap().starts_with("2 "));
}

#[test]
fn verify_text_lists_rows() {
    let out = hurwitz(&["verify", "classify-3x3", "--format", "text"], "");
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    assert_eq!(text.lines().filter(|l| l.starts_with("PASS")).count(), 5);
}

#[test]
fn orbit_report_of_a2() {
    let out = hurwitz(&["orbit", "-"], A2);
    let v = json_out(&out);
    assert_eq!(v["verdict"], "Finite");
    assert_eq!(v["size"], 1);
}

#[test]
fn hurwitz_tuple_orbit_h3() {
    let out = hurwitz(&["hurwitz", "-", "--limit", "3"], r#"{"group":"H3","reflections":[0,1,3]}"#);
    assert_eq!(out.status.code(), Some(0));
    let v = json_out(&out);
    assert_eq!(v["verdict"], "Finite");
    assert_eq!(v["generating"], true);
    assert_eq!(v["tuples"].as_array().unwrap().len(), 3);
    assert!(v["size"].as_u64().unwrap() > 3);
}

#[test]
fn output_independent_of_threads() {
    let tuple = r#"{"group":"F4","reflections":[0,2,12,16]}"#;
    let one = hurwitz(&["--threads", "1", "hurwitz", "-"], tuple);
    let eight = hurwitz(&["--threads", "8", "hurwitz", "-"], tuple);
    assert_eq!(one.status.code(), Some(0));
    assert_eq!(one.stdout, eight.stdout);
}

#[test]
fn catalog_type_and_family() {
    let v = json_out(&hurwitz(&["catalog", "E8"], ""));
    assert_eq!(v["roots"], 240);
    assert_eq!(v["coxeter_fingerprint"], "Φ30");
    let f = json_out(&hurwitz(&["catalog", "D8-ext2(p=1,q=0)"], ""));
    assert_eq!(f["displayed_det"], 0);
    let dot = hurwitz(&["catalog", "A3", "--dot"], "");
    assert!(String::from_utf8(dot.stdout).unwrap().starts_with("graph"));
}

#[test]
fn realize_minimal_and_general() {
    let v = json_out(&hurwitz(&["realize", "-"], TWOS));
    assert_eq!(v["dim"], 1);
    let g = json_out(&hurwitz(&["realize", "-", "--rows", "1,2", "--cols", "1,2", "--constants", "3,5"], TWOS));
    assert_eq!(g["dim"], 3);
    assert_eq!(g["minimal"], true);
}

#[test]
fn input_errors_exit_two_with_json() {
    for (args, stdin) in [
        (vec!["orbit", "-"], "not json"),
        (vec!["classify", "-"], A2),
        (vec!["verify", "no-such-suite"], ""),
        (vec!["catalog", "X9"], ""),
        (vec!["--cap", "0", "orbit", "-"], A2),
        (vec!["hurwitz", "-"], r#"{"group":"H3","reflections":[99]}"#),
    ] {
        let out = hurwitz(&args, stdin);
        assert_eq!(out.status.code(), Some(2), "{args:?}");
        let err: Value = serde_json::from_slice(&out.stderr).expect("stderr is JSON");
        assert!(err["error"]["message"].is_string(), "{args:?}");
    }
}

#[test]
fn non_symmetric_matrix_rejected() {
    let m = r#"{"n":2,"entries":[["2","1"],["0","2"]]}"#;
    let out = hurwitz(&["charpoly", "-"], m);
    assert_eq!(out.status.code(), Some(2));
    let err: Value = serde_json::from_slice(&out.stderr).unwrap();
    assert_eq!(err["error"]["kind"], "matrix");
}
