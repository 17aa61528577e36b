use std::path::PathBuf;
use std::process::{Command, Output};

fn k3fib(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_k3fib")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

/// Write `text` to a fresh file under the target temp dir.
fn scratch(name: &str, text: &str) -> PathBuf {
    let dir = PathBuf::from(env!("CARGO_TARGET_TMPDIR"));
    let path = dir.join(format!("{}-{name}", std::process::id()));
    std::fs::write(&path, text).unwrap();
    path
}

fn divisor(name: &str) -> String {
    format!("{}/../core/data/divisors/{name}", env!("CARGO_MANIFEST_DIR"))
}

const FIB1: &str = "a2 = 2(t^3+1)\na4 = t^6\na6 = 0\n";
const FIB5: &str = "a2 = -t^3\na4 = t^3\na6 = 0\n";

#[test]
fn classify_text_and_json() {
    let m = scratch("fib1.model", FIB1);
    let o = k3fib(&["classify", m.to_str().unwrap()]);
    assert!(o.status.success());
    let text = stdout(&o);
    assert!(text.contains("A11"), "{text}");
    assert!(text.contains("D7"), "{text}");

    let o = k3fib(&["--format", "json", "classify", m.to_str().unwrap()]);
    assert!(o.status.success());
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["sum_v_delta"], 24);
    assert_eq!(v["shioda_tate_rank"], 0);
}

#[test]
fn torsion_and_height() {
    let m = scratch("fib5.model", FIB5);
    let o = k3fib(&["torsion", m.to_str().unwrap(), "(0,0)"]);
    assert!(o.status.success());
    assert!(stdout(&o).contains('2'));

    let o = k3fib(&["--format", "json", "height", m.to_str().unwrap(), "(1,1)"]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    assert!(stdout(&o).contains("3/2"), "{}", stdout(&o));
}

#[test]
fn neighbor_step_matches_target() {
    let src = scratch("n-fib1.model", FIB1);
    let dst = scratch("n-fib5.model", FIB5);
    let o = k3fib(&["neighbor", src.to_str().unwrap(), &divisor("fib5_from_1.div"), "--target", dst.to_str().unwrap()]);
    assert!(o.status.success(), "{}{}", stdout(&o), String::from_utf8_lossy(&o.stderr));
}

#[test]
fn lattice_tables() {
    let o = k3fib(&["lattice", "det", "E7"]);
    assert!(o.status.success());
    assert!(stdout(&o).contains("-2"));
    let o = k3fib(&["--format", "json", "lattice", "niemeier"]);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v.as_array().map(|a| a.len()), Some(23));
}

#[test]
fn corpus_verify_single_record() {
    let o = k3fib(&["corpus", "verify", "--id", "5"]);
    assert!(o.status.success(), "{}", stdout(&o));
    assert!(stdout(&o).contains("5/2"));
}

#[test]
fn exit_codes() {
    let bad = scratch("bad.model", "a2 = t^\n");
    assert_eq!(k3fib(&["classify", bad.to_str().unwrap()]).status.code(), Some(2));
    assert_eq!(k3fib(&["classify", "/nonexistent/model"]).status.code(), Some(2));
    assert_eq!(k3fib(&["no-such-command"]).status.code(), Some(2));
    // a model with zero discriminant that is not of the form y² = x³ + f
    let degenerate = scratch("deg.model", "a2 = 1\na4 = 0\na6 = 0\n");
    assert_eq!(k3fib(&["classify", degenerate.to_str().unwrap()]).status.code(), Some(1));
}
