use std::path::{Path, PathBuf};
use std::process::Command;

use serde_json::Value;

fn problems() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../problems")
}

fn run(args: &[&str]) -> (i32, String, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_dsalg"))
        .args(args)
        .output()
        .expect("binary runs");
    (
        out.status.code().unwrap_or(-1),
        String::from_utf8(out.stdout).unwrap(),
        String::from_utf8(out.stderr).unwrap(),
    )
}

fn input(name: &str) -> String {
    problems().join(name).to_string_lossy().into_owned()
}

fn json(args: &[&str]) -> (i32, Value) {
    let mut a = args.to_vec();
    a.push("--json");
    let (code, out, err) = run(&a);
    let v = serde_json::from_str(&out).unwrap_or_else(|e| panic!("{e}: {out} {err}"));
    (code, v)
}

fn strip_timing(mut v: Value) -> Value {
    v.as_object_mut().unwrap().remove("timing_ms");
    v
}

#[test]
fn bs_poly_worked_example() {
    let (code, v) = json(&["bs-poly", "--input", &input("ex_x2x2yz.json")]);
    assert_eq!(code, 0);
    assert_eq!(v["result"]["factored"], "(s+1)^3*(3*s+4)*(3*s+5)/9");
    let roots: Vec<(String, u64)> = v["result"]["roots"]
        .as_array()
        .unwrap()
        .iter()
        .map(|r| (r["root"].as_str().unwrap().to_string(), r["multiplicity"].as_u64().unwrap()))
        .collect();
    assert_eq!(
        roots,
        vec![("-1".into(), 3), ("-4/3".into(), 1), ("-5/3".into(), 1)]
    );
}

#[test]
fn hyperplane_on_three_lines() {
    let (code, v) = json(&[
        "hyperplane",
        "--input",
        &input("arr_xy_xplusy.json"),
        "--form",
        "s1+s2+s3+2",
    ]);
    assert_eq!(code, 0);
    assert_eq!(v["result"]["contained"], true);
}

#[test]
fn nabla_with_certificate() {
    let (code, v) = json(&["nabla", "--input", &input("ex_xy.json"), "--point", "1,1"]);
    assert_eq!(code, 0);
    assert_eq!(v["result"]["report"]["surjective"], true);
    assert_eq!(v["result"]["report"]["certificate"].as_array().unwrap().len(), 3);
    let (_, v0) = json(&["nabla", "--input", &input("ex_xy.json"), "--point", "0,0"]);
    assert_eq!(v0["result"]["report"]["surjective"], false);
    assert_eq!(v0["result"]["shifted_point_in_bs_variety"], true);
}

#[test]
fn text_and_json_agree() {
    let args = ["regularity", "--input", &input("ex_x2x2yz.json")];
    let (_, v) = json(&args);
    let (_, text, _) = run(&args);
    let lines: Vec<&str> = text.lines().filter(|l| l.starts_with("result.")).collect();
    assert!(lines.contains(&"result.regular = true"));
    assert!(lines.contains(&"result.steps.1.variable = s2"));
    assert_eq!(v["result"]["regular"], true);
    assert_eq!(v["result"]["steps"][1]["variable"], "s2");
    assert_eq!(lines.len(), 6);
}

#[test]
fn deterministic_json() {
    for args in [
        vec!["bs-ideal", "--input", &input("ex_x2x2yz.json")],
        vec!["spencer", "--input", &input("ex_xy_xplusy_single.json")],
        vec!["appendix-check", "--count", "4", "--seed", "3"],
    ] {
        let (_, a) = json(&args);
        let (_, b) = json(&args);
        assert_eq!(strip_timing(a), strip_timing(b));
    }
}

#[test]
fn report_round_trips() {
    let (_, out, _) = run(&["gr-check", "--input", &input("ex_xy.json"), "--json"]);
    let v: Value = serde_json::from_str(&out).unwrap();
    let again = serde_json::to_string_pretty(&v).unwrap();
    assert_eq!(again.trim(), out.trim());
}

#[test]
fn golden_text() {
    let (code, text, _) = run(&["bs-poly", "--input", &input("ex_x2x2yz.json")]);
    assert_eq!(code, 0);
    let body: String = text
        .lines()
        .filter(|l| !l.starts_with("timing_ms"))
        .map(|l| format!("{l}\n"))
        .collect();
    let golden = Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/golden/bs_poly_x2x2yz.txt");
    let want = std::fs::read_to_string(golden).unwrap();
    assert_eq!(body, want);
}

#[test]
fn exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.json");
    std::fs::write(&bad, r#"{"variables": ["x","y"], "factors": ["x", "2*x^^2"]}"#).unwrap();
    let (code, _, err) = run(&["theta", "--input", bad.to_str().unwrap()]);
    assert_eq!(code, 1);
    assert!(err.contains("factor 2"), "{err}");
    assert!(err.contains('^'));

    let unknown = dir.path().join("unknown.json");
    std::fs::write(&unknown, r#"{"variables": ["x"], "factors": ["x*q"]}"#).unwrap();
    assert_eq!(run(&["theta", "--input", unknown.to_str().unwrap()]).0, 1);

    assert_eq!(run(&["no-such-command"]).0, 1);
    assert_eq!(run(&["--help"]).0, 0);

    let (code, _, err) = run(&["spencer", "--input", &input("ex_x2x2yz.json")]);
    assert_eq!(code, 2);
    assert!(err.contains("not free"));

    let (code, _, _) = run(&["bs-ideal", "--input", &input("ex_x2x2yz.json"), "--max-degree", "2"]);
    assert_eq!(code, 3);

    let mismatch = dir.path().join("mismatch.json");
    std::fs::write(
        &mismatch,
        r#"{"variables": ["x","y"], "factors": ["x","y"], "arrangement": {"forms": ["x","x+y"]}}"#,
    )
    .unwrap();
    assert_eq!(run(&["hypotheses", "--input", mismatch.to_str().unwrap()]).0, 1);
}

#[test]
fn hypothesis_gate() {
    // not quasi-homogeneous: strong Euler-homogeneity stays unknown
    let dir = tempfile::tempdir().unwrap();
    let p = dir.path().join("nonqh.json");
    std::fs::write(&p, r#"{"variables": ["x","y"], "factors": ["x^5+y^4+x^2*y^2"]}"#).unwrap();
    let (_, h) = json(&["hypotheses", "--input", p.to_str().unwrap()]);
    assert_eq!(h["result"]["annihilator_by_derivations"], false);
    assert_eq!(h["hypotheses"]["free"]["verdict"], "unknown");
    let (code, v) = json(&["theta", "--input", p.to_str().unwrap()]);
    assert_eq!(code, 2);
    assert!(!v["caveats"].as_array().unwrap().is_empty());
    let (code, v) = json(&["theta", "--input", p.to_str().unwrap(), "--assume-hypotheses"]);
    assert_eq!(code, 0);
    assert!(v["caveats"][0].as_str().unwrap().contains("ASSUMED"));
}

#[test]
fn order_flag_does_not_change_b() {
    let a = json(&["bs-ideal", "--input", &input("ex_xy.json")]).1;
    let b = json(&["bs-ideal", "--input", &input("ex_xy.json"), "--order", "elim-weighted"]).1;
    assert_eq!(a["result"]["generators"], b["result"]["generators"]);
    assert_eq!(run(&["bs-ideal", "--input", &input("ex_xy.json"), "--order", "bogus"]).0, 1);
}
