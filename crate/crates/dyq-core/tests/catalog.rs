use dyq_core::kernels::catalog::{self, CatalogParams};
use dyq_core::scalar::{q, qf};

fn run(name: &str, p: &CatalogParams) -> dyq_core::report::Outcome {
    (catalog::lookup(name).unwrap().run)(p).unwrap()
}

#[test]
fn log_two_terms_all_m() {
    for m in [-1, 0, 1, 2] {
        let p = CatalogParams { m: q(m), ..Default::default() };
        let o = run("log_two_terms", &p);
        assert!(o.is_pass(), "m={} {:?}", m, o);
    }
}

#[test]
fn log_two_terms_leading_coefficients() {
    let s = catalog::log_ratio_series(&q(1), 6).unwrap();
    assert_eq!(s.coeff(1, &[-1]), q(2));
    assert_eq!(s.coeff(3, &[-3]), qf(2, 3));
    assert_eq!(s.coeff(2, &[-2]), q(0));
}

#[test]
fn log_four_terms_cases() {
    for (m, k) in [(2, 1), (2, 3), (-1, 2)] {
        let p = CatalogParams { m: q(m), kappa: q(k), ..Default::default() };
        let o = run("log_four_terms", &p);
        assert!(o.is_pass(), "({},{}) {:?}", m, k, o);
    }
}

#[test]
fn operator_relations() {
    for name in ["GL_relation", "FG_inverse", "serre_kernel"] {
        let o = run(name, &CatalogParams::default());
        assert!(o.is_pass(), "{} {:?}", name, o);
    }
    for l in [q(1), qf(3, 2), q(2)] {
        let o = run("GqL_level", &CatalogParams { kappa: l, ..Default::default() });
        assert!(o.is_pass(), "{:?}", o);
    }
}

#[test]
fn delta_decomposition_orders() {
    for j in 0..3 {
        let o = run("delta_decomp", &CatalogParams { j, ..Default::default() });
        assert!(o.is_pass(), "j={} {:?}", j, o);
    }
}

#[test]
fn sing_res_default() {
    for b in [-2, -1, 1, 2] {
        let o = run("sing_res_fact", &CatalogParams { b: q(b), n: 5, ..Default::default() });
        assert!(o.is_pass(), "{:?}", o);
    }
}

#[test]
fn perturbed_serre_kernel_fails() {
    let o = catalog::serre_kernel_with(&q(1)).unwrap();
    assert!(!o.is_pass());
    assert!(o.witness.unwrap().contains("residual"));
}

#[test]
fn catalog_checks_are_not_vacuous() {
    let p = CatalogParams { m: q(2), kappa: q(3), ..Default::default() };
    let o = run("log_four_terms", &p);
    // hbar^2 x^-2 and hbar^4 x^-4 survive below hbar^6
    assert_eq!(o.info["terms"].as_u64().unwrap(), 2, "{}", o.info);
    let o = run("log_two_terms", &CatalogParams { m: q(2), ..Default::default() });
    assert!(o.info["terms"].as_u64().unwrap() >= 3, "{}", o.info);
}
