use dyq_core::fock::checks::*;
use dyq_core::fock::heis::gamma_oracle;
use dyq_core::report::Check;
use dyq_core::scalar::{q, qf};
use dyq_core::Gcm;

fn params(g: &str, level: dyq_core::Q) -> FockParams {
    FockParams { gcm: Gcm::preset(g).unwrap(), level, n: 3, depth: 3, xwin: 2 }
}

fn failures(cs: &[Check]) -> Vec<String> {
    cs.iter().filter(|c| !c.outcome.is_pass()).map(|c| format!("{}: {:?}", c.name, c.outcome.witness)).collect()
}

#[test]
fn derived_gamma_matches_closed_form() {
    let p = params("A2", qf(3, 2));
    let h = p.model().unwrap();
    for (i, j) in [(0, 0), (0, 1)] {
        for m in 1..6 {
            for n in 1..6 {
                assert_eq!(h.gamma(i, j, m, n), gamma_oracle(p.gcm.a(i, j), &p.level, 3, m, n), "{} {} {} {}", i, j, m, n);
            }
        }
    }
}

#[test]
fn a1_suite_passes_at_both_levels() {
    for l in [q(1), qf(3, 2)] {
        let cs = heisenberg_suite(&params("A1", l)).unwrap();
        for key in ["bracket_fidelity", "zero_mode_sing", "exp_cal_constant_modes", "iterate_exp_L", "C_explicit_expression", "s_jacobi"] {
            assert!(cs.iter().any(|c| c.name.starts_with(key)), "{}", key);
        }
        assert!(failures(&cs).is_empty(), "{:#?}", failures(&cs));
    }
}

#[test]
fn perturbed_gamma_breaks_the_bracket() {
    let p = params("A1", q(1));
    let bad = p.model().unwrap().perturbed();
    let cs = bracket_fidelity(&p, &bad);
    let c = cs.iter().find(|c| c.name == "bracket_fidelity[1,1]").unwrap();
    assert!(!c.outcome.is_pass());
    assert!(c.outcome.witness.as_deref().unwrap().starts_with("on "));
}
