use dyq_core::report::Status;
use dyq_core::suites::*;

fn cfg(suites: &[&str]) -> RunConfig {
    RunConfig { suites: suites.iter().map(|s| s.to_string()).collect(), ..RunConfig::default() }
}

#[test]
fn empty_selection_gives_empty_passing_report() {
    let r = run(&cfg(&[])).unwrap();
    assert!(r.entries.is_empty());
    assert_eq!(exit_code(&r), 0);
}

#[test]
fn perturbed_control_suite_fails() {
    let r = run(&cfg(&["heisenberg_perturbed"])).unwrap();
    assert!(r.entries.iter().any(|e| e.status == Status::Fail && e.witness.is_some()));
    assert_eq!(exit_code(&r), 1);
}

#[test]
fn cache_is_transparent_and_runs_are_deterministic() {
    let c = cfg(&["catalog", "sing_res", "serre", "main_dy"]);
    let a = run(&c).unwrap();
    let b = run(&RunConfig { cache: false, ..c.clone() }).unwrap();
    let dir = std::env::temp_dir().join(format!("dyq-suite-cache-{}", std::process::id()));
    let d1 = run(&RunConfig { cache_dir: Some(dir.clone()), ..c.clone() }).unwrap();
    let d2 = run(&RunConfig { cache_dir: Some(dir.clone()), ..c.clone() }).unwrap();
    let _ = std::fs::remove_dir_all(&dir);
    assert_eq!(a.body_json(), b.body_json());
    assert_eq!(a.body_json(), d1.body_json());
    assert_eq!(a.body_json(), d2.body_json());
    assert_eq!(exit_code(&a), 0);
}

#[test]
fn entries_are_sorted_and_anchored() {
    let r = run(&cfg(&["catalog", "sing_res", "serre", "classical", "heisenberg_perturbed"])).unwrap();
    let keys: Vec<_> = r.entries.iter().map(|e| (&e.suite, &e.check)).collect();
    let mut sorted = keys.clone();
    sorted.sort();
    assert_eq!(keys, sorted);
    for e in &r.entries {
        assert!(dyq_core::anchors::is_known(&e.anchor), "{}: {}", e.check, e.anchor);
        if e.status != Status::Pass {
            assert!(e.witness.is_some(), "{}", e.check);
        }
    }
}

#[test]
fn seed_changes_only_random_cases() {
    let a = run(&cfg(&["sing_res"])).unwrap();
    let b = run(&RunConfig { seed: 11, ..cfg(&["sing_res"]) }).unwrap();
    assert_eq!(a.entries.len(), 80);
    assert_ne!(a.body_json(), b.body_json());
    assert_eq!(exit_code(&b), 0);
}

#[test]
fn registry_names_are_unique() {
    let names: std::collections::BTreeSet<_> = registry().iter().map(|s| s.name).collect();
    assert_eq!(names.len(), registry().len());
    assert!(!default_suites().contains(&"heisenberg_perturbed".to_string()));
}
