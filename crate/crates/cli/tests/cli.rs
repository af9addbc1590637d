//! The `eqs` binary end to end: exit codes, diagnostics, replay and the report cache.

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;

fn fixture(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures").join(name)
}

fn eqs(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_eqs")).args(args).output().expect("binary runs")
}

fn eqs_on(command: &str, file: &Path, extra: &[&str]) -> Output {
    let mut args = vec![command, file.to_str().unwrap()];
    args.extend_from_slice(extra);
    eqs(&args)
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap_or_else(|e| panic!("{}: {}", e, String::from_utf8_lossy(&out.stdout)))
}

fn stderr(out: &Output) -> String {
    String::from_utf8_lossy(&out.stderr).into_owned()
}

fn write(dir: &Path, name: &str, text: &str) -> PathBuf {
    let path = dir.join(name);
    std::fs::write(&path, text).unwrap();
    path
}

#[test]
fn exit_codes_follow_the_verdict() {
    let holds = eqs_on("check-tr", &fixture("cone.eqs"), &[]);
    assert_eq!(holds.status.code(), Some(0), "{}", stderr(&holds));
    assert_eq!(json(&holds)["verdict"], "Holds");

    let fails = eqs_on("check-tr", &fixture("cone_bad.eqs"), &[]);
    assert_eq!(fails.status.code(), Some(10), "{}", stderr(&fails));
    assert_eq!(json(&fails)["verdict"], "Fails");

    let w = eqs_on("check-w", &fixture("parabola.eqs"), &[]);
    assert_eq!(w.status.code(), Some(10));

    let numeric = eqs_on("milnor", &fixture("cusp.eqs"), &[]);
    assert_eq!(numeric.status.code(), Some(0), "{}", stderr(&numeric));
    assert!(json(&numeric)["verdict"].is_null());
}

#[test]
fn indeterminate_exits_with_twenty() {
    let dir = tempfile::tempdir().unwrap();
    let f = write(
        dir.path(),
        "mu.eqs",
        "[ring]\nxvars = x, y\nyvars = z\n\n[map]\nF = x^3 + y^3 + z^3\n\n[family]\nf = c*y\nuvars = c\n",
    );
    let out = eqs_on("check-mu", &f, &["-K", "2"]);
    let code = out.status.code();
    let verdict = json(&out)["verdict"].as_str().unwrap().to_string();
    match verdict.as_str() {
        "Holds" => assert_eq!(code, Some(0)),
        "Indeterminate" => assert_eq!(code, Some(20)),
        other => panic!("check-mu returned {}", other),
    }
}

#[test]
fn problem_file_errors_exit_with_one() {
    let dir = tempfile::tempdir().unwrap();
    let cases = [
        ("[ring]\nxvars = x\n[map]\nF = x^2\n[frobnicate]\n", "unknown section [frobnicate]"),
        ("[ring]\nxvars = x\ncolour = red\n[map]\nF = x^2\n", "unknown key `colour`"),
        ("[ring]\nxvars = x\n", "missing [map] section"),
        ("[ring]\nxvars = x\n[map]\nF = x^2 + 1\n", "vanish at the origin"),
    ];
    for (i, (text, needle)) in cases.iter().enumerate() {
        let f = write(dir.path(), &format!("bad{}.eqs", i), text);
        let out = eqs_on("milnor", &f, &[]);
        assert_eq!(out.status.code(), Some(1), "{}", text);
        assert!(stderr(&out).contains(needle), "expected `{}` in `{}`", needle, stderr(&out));
        assert!(out.stdout.is_empty());
    }
    let out = eqs_on("frobnicate", &fixture("cone.eqs"), &[]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stderr(&out).contains("unknown command"));
    let out = eqs_on("milnor", &dir.path().join("missing.eqs"), &[]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn report_keys_come_in_a_fixed_order() {
    let out = eqs_on("check-tr", &fixture("cone_bad.eqs"), &[]);
    let text = String::from_utf8(out.stdout).unwrap();
    let keys = ["command", "version", "spec_hash", "verdict", "confidence", "criterion", "evidence", "witnesses", "samples", "timings"];
    let positions: Vec<usize> = keys
        .iter()
        .map(|k| text.find(&format!("\n  \"{}\":", k)).unwrap_or_else(|| panic!("no top-level `{}`", k)))
        .collect();
    assert!(positions.windows(2).all(|w| w[0] < w[1]), "{:?}", positions);
}

#[test]
fn replay_reproduces_a_refutation() {
    let dir = tempfile::tempdir().unwrap();
    let report = dir.path().join("report.json");
    let out = eqs_on("check-w", &fixture("parabola.eqs"), &["-o", report.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(10));
    let original = json(&out);
    let again = eqs_on("replay", &report, &[]);
    assert_eq!(again.status.code(), Some(10), "{}", stderr(&again));
    let r = json(&again);
    assert_eq!(r["criterion"], "witness-replay");
    assert_eq!(r["spec_hash"], original["spec_hash"]);
    let n = original["witnesses"][0]["n"].as_u64().unwrap();
    assert_eq!(r["witnesses"][0]["n"].as_u64(), Some(2 * n));
    assert_eq!(r["witnesses"][0]["curve"], original["witnesses"][0]["curve"]);
}

#[test]
fn replay_rejects_reports_it_cannot_trust() {
    let dir = tempfile::tempdir().unwrap();
    let holds = dir.path().join("holds.json");
    eqs_on("check-tr", &fixture("cone.eqs"), &["-o", holds.to_str().unwrap()]);
    let out = eqs_on("replay", &holds, &[]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stderr(&out).contains("no witness"), "{}", stderr(&out));

    let out = eqs_on("check-w", &fixture("parabola.eqs"), &[]);
    let good = json(&out);

    let mut tampered = good.clone();
    tampered["spec_hash"] = Value::String("0".repeat(64));
    let f = write(dir.path(), "hash.json", &serde_json::to_string_pretty(&tampered).unwrap());
    let out = eqs_on("replay", &f, &[]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stderr(&out).contains("spec_hash"), "{}", stderr(&out));

    let mut moved = good.clone();
    moved["witnesses"][0]["curve"] = Value::String("x = 0; y = t".into());
    let f = write(dir.path(), "curve.json", &serde_json::to_string_pretty(&moved).unwrap());
    let out = eqs_on("replay", &f, &[]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stderr(&out).contains("integrity error"), "{}", stderr(&out));

    let f = write(dir.path(), "garbage.json", "{ not json");
    assert_eq!(eqs_on("replay", &f, &[]).status.code(), Some(1));
}

#[test]
fn cache_returns_the_stored_report() {
    let dir = tempfile::tempdir().unwrap();
    let cache = dir.path().join("cache");
    let args = ["--cache", cache.to_str().unwrap()];
    let first = eqs_on("analyze-family", &fixture("pencil.eqs"), &args);
    assert_eq!(first.status.code(), Some(0), "{}", stderr(&first));
    let stored: Vec<_> = std::fs::read_dir(&cache).unwrap().collect();
    assert_eq!(stored.len(), 1);
    let second = eqs_on("analyze-family", &fixture("pencil.eqs"), &args);
    assert_eq!(first.stdout, second.stdout, "cached report differs, timings included");

    let other = eqs_on("analyze-family", &fixture("pencil.eqs"), &["--cache", cache.to_str().unwrap(), "--seed", "11"]);
    assert_eq!(other.status.code(), Some(0));
    assert_eq!(std::fs::read_dir(&cache).unwrap().count(), 2);
}

#[test]
fn flags_override_the_file_and_are_recorded() {
    let out = eqs_on("check-w", &fixture("parabola.eqs"), &["-N", "30", "--seed", "5"]);
    let r = json(&out);
    assert_eq!(r["witnesses"][0]["n"], 30);
    assert_eq!(r["evidence"]["flags"]["seed"], 5);
    let out = eqs_on("check-tr", &fixture("cone_bad.eqs"), &["--tie", "middle"]);
    assert_eq!(out.status.code(), Some(1));
}
