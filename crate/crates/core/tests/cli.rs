use std::path::Path;

use serde_json::Value;

fn run(out: &Path, args: &[&str]) -> i32 {
    let mut argv = vec!["nonarch", "--out", out.to_str().unwrap()];
    argv.extend_from_slice(args);
    nonarch::cli::main_with_args(argv)
}

fn artifact(out: &Path, name: &str) -> Value {
    serde_json::from_str(&std::fs::read_to_string(out.join(format!("{name}.json"))).unwrap()).unwrap()
}

#[test]
fn exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    assert_eq!(run(d, &["pth-root", "--prime", "2", "--target", "4"]), 0);
    assert_eq!(run(d, &["tower", "--prime", "2", "--base", "3"]), 2);
    assert_eq!(run(d, &["nonintegral-cert", "--series", "T"]), 2);
    assert_eq!(run(d, &["pbasis-cert", "--series", "u1^2*T^2"]), 2);
    assert_eq!(run(d, &["gauss-norm", "--radius", "nope"]), 1);
    assert_eq!(run(d, &["pth-root", "--prime", "2"]), 1);
    assert_eq!(run(d, &["no-such-command"]), 1);
}

#[test]
fn artifacts_are_deterministic_and_replayable() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    assert_eq!(run(d, &["unbounded-demo", "--terms", "4"]), 0);
    let path = d.join("unbounded-demo.json");
    let first = std::fs::read(&path).unwrap();
    assert_eq!(run(d, &["unbounded-demo", "--terms", "4"]), 0);
    assert_eq!(std::fs::read(&path).unwrap(), first);

    let art = artifact(d, "unbounded-demo");
    assert_eq!(art["schema"], "nonarch-artifact/1");
    assert_eq!(art["status"], "pass");
    assert_eq!(run(d, &["--check", path.to_str().unwrap()]), 0);

    let mut tampered = art.clone();
    tampered["result"]["certificate"]["verdict"] = "NOT_SHOWN".into();
    let bad = d.join("tampered.json");
    std::fs::write(&bad, serde_json::to_string_pretty(&tampered).unwrap()).unwrap();
    assert_eq!(run(d, &["--check", bad.to_str().unwrap()]), 2);

    std::fs::write(&bad, "{").unwrap();
    assert_eq!(run(d, &["--check", bad.to_str().unwrap()]), 1);
}

#[test]
fn zero_series_has_zero_norm() {
    let dir = tempfile::tempdir().unwrap();
    assert_eq!(run(dir.path(), &["gauss-norm", "--series", "0"]), 0);
    let art = artifact(dir.path(), "gauss-norm");
    assert!(art["result"].to_string().contains("ZERO"), "{}", art["result"]);
}

#[test]
fn every_command_writes_an_artifact() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    assert_eq!(run(d, &["spectral-radius", "--series", "1 + 3*T"]), 0);
    for cmd in ["sparse-series", "ffinite-decompose", "sz-check", "pbasis-cert"] {
        assert_eq!(run(d, &[cmd]), 0, "{cmd}");
        assert_eq!(artifact(d, cmd)["command"], cmd);
    }
}
