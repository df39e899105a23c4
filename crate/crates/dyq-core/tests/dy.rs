use dyq_core::report::Check;
use dyq_core::rewrite::dy::*;
use dyq_core::scalar::{q, qf};
use dyq_core::Gcm;

fn params(g: &str, n: i64) -> DyParams {
    DyParams { gcm: Gcm::preset(g).unwrap(), level: q(1), n, half: 5 }
}

fn assert_all(cs: &[Check]) {
    let bad: Vec<String> = cs.iter().filter(|c| !c.outcome.is_pass()).map(|c| format!("{}: {:?} {:?}", c.name, c.outcome.status, c.outcome.witness)).collect();
    assert!(bad.is_empty(), "{:#?}", bad);
}

#[test]
fn a1_both_directions() {
    let p = params("A1", 3);
    for r in [Route::OldToNew, Route::NewToOld] {
        let cs = verify_main_dy(&p, r).unwrap();
        assert!(cs.iter().filter(|c| c.name.contains("[1,1]")).count() >= 10);
        assert_all(&cs);
    }
}

#[test]
fn a2_both_directions() {
    let p = params("A2", 2);
    for r in [Route::OldToNew, Route::NewToOld] {
        let cs = verify_main_dy(&p, r).unwrap();
        assert!(cs.iter().any(|c| c.name == "serre_nob_transfer[1,2]"));
        assert_all(&cs);
    }
}

#[test]
fn half_integer_level() {
    let mut p = params("A1", 2);
    p.level = qf(3, 2);
    for r in [Route::OldToNew, Route::NewToOld] {
        assert_all(&verify_main_dy(&p, r).unwrap());
    }
}

#[test]
fn orthogonal_pair_needs_its_rule() {
    let p = params("D4", 3);
    for r in [Route::OldToNew, Route::NewToOld] {
        let cs = orthogonal_control(&p, r).unwrap();
        assert_eq!(cs.len(), 2);
        assert_all(&cs);
    }
    let cs = orthogonal_control(&params("A2", 2), Route::OldToNew).unwrap();
    assert!(!cs[0].outcome.is_pass());
}

#[test]
fn substitutions_are_inverse() {
    assert_all(&involution(&params("A2", 3)).unwrap());
}

#[test]
fn classical_layer_matches_lie_algebra_relations() {
    for g in ["A1", "A2", "D4"] {
        let cs = classical_layer(&params(g, 3)).unwrap();
        assert_all(&cs);
    }
    let cs = classical_layer(&params("A2", 3)).unwrap();
    for l in ["L1", "L2p", "L3", "L4p", "L5m", "L6"] {
        assert!(cs.iter().any(|c| c.name.starts_with(l)), "{}", l);
    }
}

#[test]
fn wrong_level_substitution_is_caught() {
    let cs = verify_main_dy(&params("A1", 2), Route::OldToNew).unwrap();
    let c = cs.iter().find(|c| c.name.starts_with("control_level")).unwrap();
    assert!(c.outcome.is_pass());
    assert!(!c.outcome.info["failing_relations"].as_array().unwrap().is_empty());
}
