use dyq_core::rewrite::serre;
use dyq_core::scalar::q;

#[test]
fn serre_characterizations_hold() {
    for nu in [q(1), q(-1)] {
        for c in serre::serre_checks(&nu, 5, 3).unwrap() {
            assert!(c.outcome.is_pass(), "nu={} {}: {:?}", nu, c.name, c.outcome);
        }
    }
}
