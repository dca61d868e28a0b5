use std::process::{Command, Output};

fn fsing(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_fsing")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn fixture(name: &str) -> String {
    format!("{}/../core/fixtures/{name}", env!("CARGO_MANIFEST_DIR"))
}

#[test]
fn frob_root_of_a_binomial() {
    let o = fsing(&["frob-root", "-p", "3", "-e", "1", "x0^4x1^2 + x1^6"]);
    assert!(o.status.success());
    let mut lines: Vec<_> = stdout(&o).lines().map(str::to_owned).collect();
    lines.sort();
    assert_eq!(lines, ["x0", "x1^2"]);
}

#[test]
fn monomial_test_ideal() {
    let o = fsing(&["test-ideal", "-p", "5", "--lambda", "1/2", "x0^2x1^3"]);
    assert!(o.status.success());
    assert!(stdout(&o).lines().any(|l| l == "x0x1"));
    // Non-homogeneous chain members cannot be compared.
    let o = fsing(&["test-ideal", "-p", "5", "--lambda", "5/6", "x0^2 + x1^3"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn supersingular_fermat_cubic() {
    let o = fsing(&["hasse-witt", "-p", "5", "--json", "x0^3 + x1^3 + x2^3"]);
    assert!(o.status.success());
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["bijective"], false);
    let o = fsing(&["hasse-witt", "-p", "7", "--json", "x0^3 + x1^3 + x2^3"]);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["bijective"], true);
}

#[test]
fn model_file_input_for_hasse_witt() {
    let o = fsing(&["hasse-witt", "-p", "13", &fixture("elliptic_quartic.model")]);
    assert!(o.status.success());
    assert!(stdout(&o).contains("bijective = true"));
}

#[test]
fn profile_table() {
    let o = fsing(&["profile", "-N", "3", "-r", "3"]);
    assert!(o.status.success());
    let text = stdout(&o);
    assert!(text.contains("[0, 2)") && text.contains("m^2"));
}

#[test]
fn scan_is_reproducible_across_jobs() {
    let model = fixture("elliptic_quartic.model");
    let one = fsing(&["scan", "--primes", "30", "--format", "json", &model]);
    let four = fsing(&["scan", "--primes", "30", "--jobs", "4", "--format", "json", &model]);
    assert!(one.status.success());
    assert_eq!(one.stdout, four.stdout);
    let v: serde_json::Value = serde_json::from_slice(&one.stdout).unwrap();
    assert_eq!(v["summary"]["implication_failures"], 0);
}

#[test]
fn scan_csv_header() {
    let o = fsing(&["scan", "--primes", "3", "--format", "csv", &fixture("elliptic_quartic.model")]);
    assert!(stdout(&o).starts_with("p,good,reason,A,B,C_Y,C_pts,a_p,implication_ok,partial\n"));
}

#[test]
fn exit_codes() {
    assert_eq!(fsing(&["fedder", "-p", "5", "x0^^2"]).status.code(), Some(2));
    assert_eq!(fsing(&["fedder", "-p", "4", "x0"]).status.code(), Some(2));
    assert_eq!(fsing(&["check-prop", "-p", "5", "x0^2 + x1^2 + x2^2"]).status.code(), Some(2));
    assert_eq!(fsing(&["test-ideal", "-p", "5", "--lambda", "0.5", "x0"]).status.code(), Some(2));
    assert_eq!(fsing(&["scan", "--primes", "10", "/nonexistent.model"]).status.code(), Some(2));
    // Dense matrices past the cap are refused.
    let o = fsing(&["hasse-witt", "-p", "9973", "x0^2x1^2x2^2x3^2x4^2x5^2x6^2x7^2 + x8^16"]);
    assert_eq!(o.status.code(), Some(3), "{}", String::from_utf8_lossy(&o.stderr));
}
