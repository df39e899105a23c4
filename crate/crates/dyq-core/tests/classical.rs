use dyq_core::fock::classical::*;
use dyq_core::scalar::q;
use dyq_core::Gcm;

fn pbw(g: &str, d: usize) -> Vec<usize> {
    let vac = Vacuum::new(&Gcm::preset(g).unwrap(), &q(1)).unwrap();
    (0..=d).map(|k| vac.layer(k).len()).collect()
}

#[test]
fn graded_dimensions_are_colored_partitions() {
    assert_eq!(pbw("A1", 4), vec![1, 3, 9, 22, 51]);
    assert_eq!(pbw("A2", 2), vec![1, 8, 44]);
    let vac = Vacuum::new(&Gcm::preset("A1").unwrap(), &q(1)).unwrap();
    assert_eq!(chevalley_dims(&vac, 4), vec![1, 3, 9, 22, 51]);
}

#[test]
fn a1_relations_hold_to_depth_three() {
    let p = ClassicalParams { gcm: Gcm::preset("A1").unwrap(), level: q(2), depth: 3, modes: 2 };
    let cs = classical_suite(&p).unwrap();
    let bad: Vec<_> = cs.iter().filter(|c| !c.outcome.is_pass()).map(|c| &c.name).collect();
    assert!(bad.is_empty(), "{:?}", bad);
    assert!(cs.iter().any(|c| c.name.starts_with("L3")));
}

#[test]
fn non_type_a_is_rejected() {
    assert!(Vacuum::new(&Gcm::preset("D4").unwrap(), &q(1)).is_err());
}
