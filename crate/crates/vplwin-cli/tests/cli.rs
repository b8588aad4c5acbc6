use std::fs;
use std::path::PathBuf;
use std::process::{Command, Output};

fn corpus(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../corpus").join(name)
}

fn vplwin(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_vplwin")).args(args).output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn run_prints_one_line_per_operation() {
    let dir = tempfile::tempdir().unwrap();
    let stream = dir.path().join("ops.txt");
    fs::write(&stream, "a b pop pop b a\n").unwrap();
    let la = corpus("la.dfa");
    let o = vplwin(&["run", "--machine", la.to_str().unwrap(), "--algo", "counter-la", "--stream", stream.to_str().unwrap()]);
    assert!(o.status.success());
    let text = stdout(&o);
    let bits: Vec<&str> = text.lines().map(|l| l.split(' ').nth(1).unwrap()).collect();
    // windows: a, ab, b, ε, b, ba
    assert_eq!(bits, ["1", "1", "0", "0", "0", "1"]);
    let lens: Vec<usize> = text.lines().map(|l| l.split(' ').nth(3).unwrap().parse().unwrap()).collect();
    assert_eq!(lens, [1, 2, 1, 0, 1, 2]);
}

#[test]
fn run_rejects_a_mismatched_algorithm() {
    let dir = tempfile::tempdir().unwrap();
    let stream = dir.path().join("ops.txt");
    fs::write(&stream, "a\n").unwrap();
    let o = vplwin(&["run", "--machine", corpus("wm.vpa").to_str().unwrap(), "--algo", "path-summary", "--stream", stream.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn classify_json_round_trips() {
    let o = vplwin(&["classify", "--machine", corpus("first-a.dfa").to_str().unwrap(), "--json"]);
    assert!(o.status.success());
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["klass"], "linear");
    assert_eq!(v["confidence"], "proved");
    assert_eq!(v["evidence"][0]["kind"], "critical-tuple");
    let o = vplwin(&["classify", "--machine", corpus("la.vpa").to_str().unwrap()]);
    assert!(stdout(&o).starts_with("class: logarithmic"));
}

#[test]
fn exit_codes() {
    assert_eq!(vplwin(&["classify"]).status.code(), Some(1));
    assert_eq!(vplwin(&["--help"]).status.code(), Some(0));
    let shallow = vplwin(&["classify", "--machine", corpus("la.dfa").to_str().unwrap(), "--census-depth", "3"]);
    assert_eq!(shallow.status.code(), Some(2));
    let wrong = vplwin(&["verify", "--machine", corpus("la.dfa").to_str().unwrap(), "--witness", corpus("first-a.ct").to_str().unwrap()]);
    assert_eq!(wrong.status.code(), Some(3));
}

#[test]
fn verify_a_fooling_scheme_file() {
    let dir = tempfile::tempdir().unwrap();
    let w = dir.path().join("scheme.fs");
    fs::write(&w, "@fooling-scheme\nu2: a\nv2: c\nu: a\nv: c\nz: 0 _\n").unwrap();
    let o = vplwin(&["verify", "--machine", corpus("toplast.vpa").to_str().unwrap(), "--witness", w.to_str().unwrap(), "--n-max", "5"]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    assert!(stdout(&o).contains("[1, 2, 4, 8, 16, 32]"));
}

#[test]
fn flatten_reproduces_the_factorization() {
    let o = vplwin(&["flatten", "--machine", corpus("wm.vpa").to_str().unwrap(), "--word", "bcabbcabaabcaaababba"]);
    assert!(o.status.success());
    assert!(stdout(&o).contains("factors: bcabb | cab | a | abc | a | aababb | a"));
}

#[test]
fn space_profile_and_growth_tables() {
    let o = vplwin(&["space-profile", "--machine", corpus("la.dfa").to_str().unwrap(), "--max-n", "2"]);
    assert_eq!(stdout(&o), "n classes bits\n0 1 0\n1 3 1\n2 6 2\n");
    let o = vplwin(&["growth", "--grammar", corpus("anbn.cfg").to_str().unwrap(), "--max-n", "6", "--json"]);
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["kind"], "Polynomial");
    assert_eq!(v["census"][6], 4);
}
