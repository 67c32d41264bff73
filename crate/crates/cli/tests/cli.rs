use std::process::{Command, Output};

use serde_json::Value;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_rootlattice"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exited normally")
}

fn json(o: &Output) -> Value {
    serde_json::from_slice(&o.stdout).unwrap_or_else(|e| {
        panic!("stdout is not JSON ({e}): {}", String::from_utf8_lossy(&o.stdout))
    })
}

fn temp_file(name: &str, contents: &str) -> std::path::PathBuf {
    let dir = std::env::temp_dir().join(format!("rootlattice-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join(name);
    std::fs::write(&path, contents).unwrap();
    path
}

#[test]
fn validate_exit_codes() {
    assert_eq!(code(&run(&["validate", "SC(A1)"])), 0);

    let bad = temp_file("pairing-one.json", r#"{"rank":1,"roots":[[1],[-1]],"coroots":[[1],[-1]]}"#);
    let o = run(&["--text", "validate", bad.to_str().unwrap()]);
    assert_eq!(code(&o), 1);
    assert!(String::from_utf8_lossy(&o.stdout).contains("index 0"));

    let broken = temp_file("broken.json", "{not json");
    assert_eq!(code(&run(&["validate", broken.to_str().unwrap()])), 2);
    assert_eq!(code(&run(&["validate", "XY(A1)"])), 2);
    assert_eq!(code(&run(&["no-such-command"])), 2);
}

fn pretty_good_at(reports: &Value, p: u64) -> bool {
    reports
        .as_array()
        .unwrap()
        .iter()
        .find(|r| r["p"] == p)
        .unwrap_or_else(|| panic!("no row for {p}"))["pretty_good"]
        .as_bool()
        .unwrap()
}

#[test]
fn primes_reports() {
    let gl2 = json(&run(&["primes", "GL(2)"]));
    assert!(pretty_good_at(&gl2, 2));
    let sl2 = json(&run(&["primes", "SC(A1)", "--max-prime", "11"]));
    assert!(!pretty_good_at(&sl2, 2));
    assert!(pretty_good_at(&sl2, 11));
    let torus = json(&run(&["primes", "Torus(4)"]));
    assert!(torus.as_array().unwrap().iter().all(|r| r["pretty_good"] == true));
    for row in torus.as_array().unwrap() {
        assert_eq!(row.as_object().unwrap().len(), 7);
    }
}

#[test]
fn primes_rows_are_ordered_and_cover_the_bound() {
    // the failing-prime bound of SC(A6) is 7, above --max-prime 3
    let rows = json(&run(&["primes", "SC(A6)", "--max-prime", "3"]));
    let ps: Vec<u64> = rows.as_array().unwrap().iter().map(|r| r["p"].as_u64().unwrap()).collect();
    assert_eq!(ps, vec![2, 3, 5, 7]);
    assert!(!pretty_good_at(&rows, 7));
}

#[test]
fn primes_text_lines_end_with_the_verdict() {
    let o = run(&["--text", "primes", "SC(A1)", "--max-prime", "5"]);
    let text = String::from_utf8(o.stdout).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines.len(), 3);
    assert!(lines[0].ends_with("non-smooth centralizer exists"));
    assert!(lines[1].ends_with("all centralizers smooth"));
}

#[test]
fn primes_output_is_deterministic() {
    let a = run(&["primes", "Sum(GL(3), AD(B2))", "--max-prime", "40"]).stdout;
    let b = run(&["primes", "Sum(GL(3), AD(B2))", "--max-prime", "40"]).stdout;
    let c = run(&["--sequential", "primes", "Sum(GL(3), AD(B2))", "--max-prime", "40"]).stdout;
    assert_eq!(a, b);
    assert_eq!(a, c);
}

#[test]
fn certificates_and_verification() {
    let cases = [
        ("SC(A1)", "2", "center-torsion"),
        ("SC(G2)", "2", "bad-prime-subsystem"),
        ("GL(3)", "5", "pretty-good-proof"),
        ("AD(A1)", "2", "coxeter-torsion"),
    ];
    for (datum, p, kind) in cases {
        let o = run(&["certificate", datum, "-p", p]);
        assert_eq!(code(&o), 0, "{datum}");
        let cert = json(&o);
        assert_eq!(cert["kind"], kind, "{datum}");
        let path = temp_file(&format!("cert-{kind}.json"), &String::from_utf8(o.stdout).unwrap());
        assert_eq!(code(&run(&["verify", path.to_str().unwrap()])), 0, "{datum}");
    }
}

#[test]
fn tampered_certificate_is_rejected() {
    let mut cert = json(&run(&["certificate", "SC(A1)", "-p", "2"]));
    cert["p"] = Value::from(3);
    let path = temp_file("tampered.json", &cert.to_string());
    assert_eq!(code(&run(&["verify", path.to_str().unwrap()])), 1);
    assert_eq!(code(&run(&["certificate", "SC(A1)", "-p", "4"])), 2);
}

#[test]
fn classify_verdicts() {
    let o = run(&["classify", "GL(4)", "-p", "2"]);
    assert_eq!(code(&o), 0);
    assert_eq!(json(&o)["verdict"], "essentially standard");
    let o = run(&["classify", "SC(A1)", "-p", "2"]);
    assert_eq!(code(&o), 1);
    assert_eq!(json(&o)["verdict"], "not essentially standard");
    assert_eq!(code(&run(&["classify", "SC(A1)", "-p", "0"])), 0);
}

#[test]
fn decompose_output() {
    let d = json(&run(&["decompose", "GL(3)", "-p", "3"]));
    assert_eq!(d["a_blocks"], serde_json::json!([2]));
    assert_eq!(d["torus_rank"], 1);
    assert_eq!(d["witness_ok"], true);
    assert_eq!(code(&run(&["decompose", "SC(G2)", "-p", "3"])), 1);
}

#[test]
fn dual_and_sum() {
    let dual = run(&["dual", "SC(B3)"]);
    let path = temp_file("dual.json", &String::from_utf8(dual.stdout).unwrap());
    let back = json(&run(&["dual", path.to_str().unwrap()]));
    let original = json(&run(&["sum", "SC(B3)"]));
    assert_eq!(back, original);

    let s = json(&run(&["sum", "SC(A1)", "GL(2)", "Torus(1)"]));
    assert_eq!(s["rank"], 4);
    assert_eq!(s["roots"].as_array().unwrap().len(), 4);
}

#[test]
fn snf_command() {
    let s = json(&run(&["snf", "[[2,4],[6,8]]"]));
    assert_eq!(s["divisors"], serde_json::json!([2, 4]));
    assert_eq!(code(&run(&["snf", "[[1,2],[3]]"])), 2);
}

#[test]
fn selftest_passes() {
    let o = run(&["selftest"]);
    let text = String::from_utf8_lossy(&o.stdout);
    assert_eq!(code(&o), 0, "{text}");
    assert!(text.lines().all(|l| l.starts_with("PASS")));
}
