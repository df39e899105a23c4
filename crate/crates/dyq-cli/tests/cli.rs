use std::process::Command;

fn dyq(args: &[&str]) -> (i32, String, String) {
    let o = Command::new(env!("CARGO_BIN_EXE_dyq")).args(args).output().expect("binary runs");
    (o.status.code().unwrap_or(-1), String::from_utf8_lossy(&o.stdout).into_owned(), String::from_utf8_lossy(&o.stderr).into_owned())
}

fn body(json: &str) -> String {
    let mut v: serde_json::Value = serde_json::from_str(json).unwrap();
    v.as_object_mut().unwrap().remove("total_runtime_ms");
    for e in v["entries"].as_array_mut().unwrap() {
        e.as_object_mut().unwrap().remove("runtime_ms");
    }
    v.to_string()
}

fn tmp(name: &str) -> std::path::PathBuf {
    std::env::temp_dir().join(format!("dyq-cli-{}-{}", std::process::id(), name))
}

#[test]
fn list_suites() {
    let (code, out, _) = dyq(&["--list-suites"]);
    assert_eq!(code, 0);
    for s in ["catalog", "heisenberg", "main_dy", "heisenberg_perturbed"] {
        assert!(out.contains(s), "{}", out);
    }
}

#[test]
fn empty_selection_exits_zero() {
    let (code, out, _) = dyq(&["--suite", "none"]);
    assert_eq!(code, 0);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["entries"].as_array().unwrap().len(), 0);
}

#[test]
fn perturbed_control_exits_one() {
    let (code, out, _) = dyq(&["--suite", "heisenberg_perturbed", "--report", "md"]);
    assert_eq!(code, 1);
    assert!(out.contains("| fail |"), "{}", out);
}

#[test]
fn configuration_errors_exit_two() {
    assert_eq!(dyq(&["--gcm", "B2"]).0, 2);
    assert_eq!(dyq(&["--level", "one"]).0, 2);
    assert_eq!(dyq(&["--hbar-order", "0"]).0, 2);
    assert_eq!(dyq(&["--suite", "nope"]).0, 2);
    let p = tmp("bad.json");
    std::fs::write(&p, "{\n  \"window\": 5,\n  \"depth\": -1\n}\n").unwrap();
    let (code, _, err) = dyq(&["--config", p.to_str().unwrap()]);
    assert_eq!(code, 2);
    assert!(err.contains("`depth`") && err.contains("line 3"), "{}", err);
    let _ = std::fs::remove_file(p);
}

#[test]
fn config_file_flags_and_cache_agree() {
    let p = tmp("cfg.json");
    std::fs::write(&p, r#"{"gcm": "A2", "level": "3/2", "hbar_order": 2, "window": 4, "suites": ["catalog", "serre"]}"#).unwrap();
    let (c1, a, _) = dyq(&["--config", p.to_str().unwrap()]);
    let (c2, b, _) = dyq(&["--gcm", "A2", "--level", "3/2", "--hbar-order", "2", "--window", "4", "--suite", "catalog", "--suite", "serre", "--no-cache"]);
    assert_eq!((c1, c2), (0, 0));
    assert_eq!(body(&a), body(&b));
    let out = tmp("out.json");
    let (c3, stdout, _) = dyq(&["--config", p.to_str().unwrap(), "--out", out.to_str().unwrap()]);
    assert_eq!(c3, 0);
    assert!(stdout.is_empty());
    assert_eq!(body(&std::fs::read_to_string(&out).unwrap()), body(&a));
    let _ = std::fs::remove_file(p);
    let _ = std::fs::remove_file(out);
}

#[test]
fn gcm_from_file() {
    let p = tmp("gcm.json");
    std::fs::write(&p, r#"{"labels": ["a", "b"], "matrix": [[2, 0], [0, 2]]}"#).unwrap();
    let (code, out, err) = dyq(&["--gcm", p.to_str().unwrap(), "--suite", "serre", "--hbar-order", "2"]);
    assert_eq!(code, 0, "{}", err);
    assert!(out.contains("\"source\""));
    std::fs::write(&p, r#"{"labels": ["a"], "matrix": [[3]]}"#).unwrap();
    assert_eq!(dyq(&["--gcm", p.to_str().unwrap()]).0, 2);
    let _ = std::fs::remove_file(p);
}
