use std::io::Write;
use std::process::{Command, Output, Stdio};

use algid::{encode, GroupParams, UtElement};
use num_bigint::BigUint;

fn algid(args: &[&str]) -> Output {
    algid_with(args, None, &[])
}

fn algid_with(args: &[&str], stdin: Option<&[u8]>, env: &[(&str, &str)]) -> Output {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_algid"));
    cmd.args(args)
        .env_remove("ALGID_VERSION")
        .env_remove("ALGID_STORE")
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped());
    for (k, v) in env {
        cmd.env(k, v);
    }
    let mut child = cmd.spawn().unwrap();
    {
        let mut input = child.stdin.take().unwrap();
        if let Some(bytes) = stdin {
            input.write_all(bytes).unwrap();
        }
    }
    child.wait_with_output().unwrap()
}

fn stdout(o: &Output) -> String {
    assert!(o.status.success(), "stderr: {}", String::from_utf8_lossy(&o.stderr));
    String::from_utf8(o.stdout.clone()).unwrap().trim_end().to_owned()
}

fn code(o: &Output) -> i32 {
    o.status.code().unwrap()
}

#[test]
fn reserved_identifiers() {
    assert_eq!(stdout(&algid(&["reserved", "rho"])), format!("{}0", "-".repeat(39)));
    assert_eq!(
        stdout(&algid(&["reserved", "delta", "--index", "2"])),
        format!("{}{}2", "-".repeat(20), ".".repeat(19))
    );
    assert_eq!(stdout(&algid(&["reserved", "theta", "0"])), format!("{}1", "-".repeat(39)));
    assert_eq!(code(&algid(&["reserved", "theta", "63"])), 1);
}

#[test]
fn inverse_cancels() {
    let a = stdout(&algid_with(&["hash", "--kind", "function"], Some(b"f"), &[]));
    let inv = stdout(&algid(&["inv", &a]));
    assert_eq!(stdout(&algid(&["op", &a, &inv])), "0".repeat(40));
}

#[test]
fn import_example() {
    let out = stdout(&algid(&["import", "--base", "16", "--mode", "ordered", &"f".repeat(40)]));
    let params = GroupParams::UT40;
    let rank = params.p_pow(4) + (BigUint::from(1u8) << 160u32) - 1u32;
    assert_eq!(out, encode(&UtElement::from_rank(params, &rank).unwrap()).unwrap().as_str());
}

#[test]
fn hash_file_and_stdin_agree() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("content");
    std::fs::write(&path, b"some content").unwrap();
    let from_file = stdout(&algid(&["hash", "--kind", "value", path.to_str().unwrap()]));
    let from_stdin = stdout(&algid_with(&["hash", "--kind", "value", "-"], Some(b"some content"), &[]));
    assert_eq!(from_file, from_stdin);
    assert!(from_file.contains('_'));
    assert_eq!(code(&algid(&["hash", "--kind", "value", "/nonexistent/file"])), 1);
}

#[test]
fn pipes_compose_like_the_planner() {
    let x = stdout(&algid_with(&["hash", "--kind", "value"], Some(b"f1"), &[]));
    let g = stdout(&algid_with(&["hash", "--kind", "function"], Some(b"g"), &[]));
    let product = stdout(&algid(&["op", &x, &g]));
    let dir = tempfile::tempdir().unwrap();
    let plan = dir.path().join("plan.json");
    std::fs::write(
        &plan,
        format!(
            r#"{{"version":"ut40.4","steps":[{{"kind":"value","digest":"{x}"}},{{"kind":"function","digest":"{g}"}}]}}"#
        ),
    )
    .unwrap();
    let report = stdout(&algid(&["plan", plan.to_str().unwrap(), "--json"]));
    assert!(report.contains(&format!("\"final_digest\": \"{product}\"")), "{report}");
    let text = stdout(&algid(&["plan", plan.to_str().unwrap()]));
    assert!(text.contains(&product));
}

#[test]
fn leading_dash_digests() {
    let rho = stdout(&algid(&["reserved", "rho"]));
    let classified = stdout(&algid(&["classify", &format!("@{rho}")]));
    assert!(classified.starts_with("ordered "));
    assert_eq!(stdout(&algid(&["classify", "--", &rho])), classified);
}

#[test]
fn exit_codes() {
    assert_eq!(code(&algid(&["bogus"])), 2);
    assert_eq!(code(&algid(&["op", "--frobnicate", "x", "y"])), 2);
    assert_eq!(code(&algid(&["inv", "zz"])), 1);
    assert_eq!(code(&algid(&["--version", "ut99.4", "key", "x"])), 1);
    let v = stdout(&algid_with(&["hash", "--kind", "value"], Some(b"v"), &[]));
    let w = stdout(&algid_with(&["hash", "--kind", "value"], Some(b"w"), &[]));
    let f = stdout(&algid_with(&["hash", "--kind", "function"], Some(b"f"), &[]));
    let commutes = algid(&["commutes", &v, &w]);
    assert_eq!(code(&commutes), 0);
    assert_eq!(stdout(&commutes), "true");
    assert_eq!(code(&algid(&["commutes", &v, &f])), 1);
}

#[test]
fn version_selection() {
    let default = stdout(&algid(&["key", "x"]));
    assert_eq!(default.len(), 40);
    let from_env = stdout(&algid_with(&["key", "x"], None, &[("ALGID_VERSION", "ut32.4")]));
    assert_eq!(from_env.len(), 32);
    let flag_wins = stdout(&algid_with(&["--version", "ut64.4", "key", "x"], None, &[("ALGID_VERSION", "ut32.4")]));
    assert_eq!(flag_wins.len(), 64);
}

#[test]
fn classify_and_pow() {
    let f = stdout(&algid_with(&["hash", "--kind", "function"], Some(b"f"), &[]));
    assert!(stdout(&algid(&["classify", &f])).starts_with("ordered "));
    let p = GroupParams::UT40.p().to_string();
    assert_eq!(stdout(&algid(&["pow", &f, &p])), "0".repeat(40));
    assert_eq!(stdout(&algid(&["pow", &f, "1"])), f);
    assert!(stdout(&algid(&["classify", &"0".repeat(40)])).starts_with("identity 0"));
}

#[test]
fn analyze_is_deterministic() {
    let a = stdout(&algid(&["analyze", "--length", "10000000", "--length", "100"]));
    assert_eq!(a, stdout(&algid(&["analyze", "--length", "10000000", "--length", "100"])));
    assert!(a.contains("2.764e15"), "{a}");
    let table = stdout(&algid(&["analyze", "--table1", "--tsv"]));
    assert_eq!(table.lines().count(), 11);
}

#[test]
fn store_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let root = dir.path().to_str().unwrap();
    let d = stdout(&algid_with(&["hash", "--kind", "value"], Some(b"payload"), &[]));
    let e = stdout(&algid_with(&["hash", "--kind", "value"], Some(b"other"), &[]));
    assert_eq!(code(&algid(&["store", "--root", root, "has", &d])), 1);
    stdout(&algid_with(&["store", "--root", root, "put", &d], Some(b"payload"), &[]));
    assert_eq!(code(&algid(&["store", "--root", root, "has", &d])), 0);
    let got = algid_with(&["store", "get", &d], None, &[("ALGID_STORE", root)]);
    assert_eq!(got.stdout, b"payload");
    let conflict = algid_with(&["store", "--root", root, "put", &d], Some(b"different"), &[]);
    assert_eq!(code(&conflict), 1);
    assert_eq!(code(&algid(&["store", "--root", root, "get", &e])), 1);
    stdout(&algid(&["store", "--root", root, "alias", &e, &d]));
    assert_eq!(stdout(&algid(&["store", "--root", root, "resolve", &e])), d);
}

#[test]
fn selftest_small_primes() {
    let out = algid(&["selftest", "--prime", "7"]);
    let text = stdout(&out);
    assert!(text.ends_with("selftest passed"), "{text}");
    assert_eq!(text.lines().filter(|l| l.starts_with("PASS")).count(), 9);
    assert_eq!(code(&algid(&["selftest", "--prime", "17"])), 1);
    assert_eq!(code(&algid(&["selftest", "--prime", "5", "--budget-seconds", "0"])), 1);
}

#[test]
fn selftest_default_prime() {
    let text = stdout(&algid(&["selftest"]));
    assert!(text.contains("PASS commuting pairs: 4140625 (enumerated and by centralizers)"), "{text}");
}
