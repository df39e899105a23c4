//! One line per acceptance criterion. Every comparison is exact over Q;
//! the tolerance column records the truncation and window each check uses.

mod common;

use dyq_core::kernels::catalog::serre_kernel_identities;
use dyq_core::kernels::rational_identity_check;
use dyq_core::report::{Entry, Report, Status};
use dyq_core::scalar::{q, qf, Q};
use dyq_core::suites::{run, RunConfig};
use dyq_core::Gcm;
use num::Zero;

struct Line {
    pass: bool,
    what: &'static str,
    tolerance: &'static str,
    detail: String,
}

fn cfg(g: &str, level: Q, n: i64, window: i64, depth: usize, suites: &[&str]) -> RunConfig {
    RunConfig {
        gcm_source: g.into(),
        gcm: Gcm::preset(g).unwrap(),
        level,
        n,
        window,
        depth,
        suites: suites.iter().map(|s| s.to_string()).collect(),
        ..RunConfig::default()
    }
}

fn report(c: &RunConfig) -> Report {
    run(c).unwrap_or_else(|e| panic!("engine error: {}", e))
}

fn bad(es: &[&Entry]) -> Vec<String> {
    es.iter().filter(|e| e.status != Status::Pass).map(|e| format!("{}/{}: {:?}", e.suite, e.check, e.witness)).collect()
}

fn named<'a>(r: &'a Report, prefix: &str) -> Vec<&'a Entry> {
    r.entries.iter().filter(|e| e.check.starts_with(prefix)).collect()
}

fn summary(fails: &[String], count: usize) -> String {
    if fails.is_empty() {
        format!("{} checks", count)
    } else {
        format!("{} of {} failing, first {}", fails.len(), count, fails[0])
    }
}

fn catalog() -> Line {
    let r = report(&cfg("A1", q(1), 3, 5, 3, &["catalog"]));
    let mut es = named(&r, "log_two_terms[");
    let four = named(&r, "log_four_terms[");
    let lead = named(&r, "log_two_terms_leading");
    let counts_ok = es.len() == 4 && four.len() == 3 && lead.len() == 1;
    let pinned = r.entries.iter().filter(|e| e.check.starts_with("log_")).all(|e| e.params["N"] == 6);
    es.extend(four);
    es.extend(lead);
    let fails = bad(&es);
    Line {
        pass: counts_ok && pinned && fails.is_empty(),
        what: "identity catalog: log_two_terms m in {-1,0,1,2}, log_four_terms (m,k) in {(2,1),(2,3),(-1,2)}, leading 2h/x, (2/3)h^3/x^3",
        tolerance: "exact, N=6, window [-8,-1]",
        detail: summary(&fails, es.len()),
    }
}

fn kernel_identities() -> Line {
    let ids = serre_kernel_identities(&Q::zero());
    let residuals: Vec<bool> = ids.iter().map(|(l, r)| rational_identity_check(l, r).is_ok()).collect();
    let r = report(&cfg("A1", q(1), 3, 5, 3, &["catalog"]));
    let entry = named(&r, "serre_kernel");
    Line {
        pass: residuals.len() == 2 && residuals.iter().all(|x| *x) && bad(&entry).is_empty() && entry.len() == 1,
        what: "both order-2 Serre kernel identities have zero residual polynomial",
        tolerance: "exact rational, no truncation",
        detail: format!("residual zero: {:?}", residuals),
    }
}

fn sing_res() -> Line {
    let r = report(&cfg("A1", q(1), 3, 5, 3, &["sing_res"]));
    let es: Vec<&Entry> = r.entries.iter().collect();
    let fails = bad(&es);
    Line {
        pass: es.len() == 80 && fails.is_empty() && es.iter().all(|e| e.params["N"] == 5),
        what: "Sing/Res of (x - b h)^-1 F for b in {+-1,+-2} and 20 seeded F of degree <= 4",
        tolerance: "exact, N=5, seed 0",
        detail: summary(&fails, es.len()),
    }
}

fn heisenberg() -> Line {
    let mut fails = Vec::new();
    let mut count = 0;
    let mut missing = Vec::new();
    for g in ["A1", "A2"] {
        for l in [q(1), qf(3, 2)] {
            let r = report(&cfg(g, l.clone(), 3, 5, 3, &["heisenberg"]));
            for key in [
                "bracket_fidelity",
                "zero_mode_sing",
                "zero_mode_delta",
                "exp_cal_half_currents",
                "exp_cal_constant_modes",
                "iterate_exp_L",
                "iterate_four_exponentials",
                "C_explicit_expression",
            ] {
                if named(&r, key).is_empty() {
                    missing.push(format!("{} l={} {}", g, l, key));
                }
            }
            let es: Vec<&Entry> = r.entries.iter().collect();
            count += es.len();
            fails.extend(bad(&es).into_iter().map(|f| format!("{} l={}: {}", g, l, f)));
        }
    }
    Line {
        pass: fails.is_empty() && missing.is_empty(),
        what: "Heisenberg suite A1, A2 at l in {1, 3/2}: bracket fidelity, zero-mode formula, exp calculus with E_gamma, iterate, C_i expression",
        tolerance: "exact mod h^3, D=3, x-window 2",
        detail: if missing.is_empty() { summary(&fails, count) } else { format!("missing {:?}", missing) },
    }
}

fn show(v: &Option<serde_json::Value>) -> String {
    v.as_ref().map(|x| x.to_string()).unwrap_or_else(|| "missing".into())
}

fn classical() -> Line {
    let a1 = report(&cfg("A1", q(1), 3, 5, 4, &["classical"]));
    let a2 = report(&cfg("A2", q(1), 3, 5, 3, &["classical"]));
    let dims = |r: &Report| named(r, "graded_dimensions").first().map(|e| e.params["pbw"].clone());
    let d1 = dims(&a1);
    let d2 = dims(&a2);
    let dims_ok = d1 == Some(serde_json::json!([1, 3, 9, 22, 51])) && d2 == Some(serde_json::json!([1, 8, 44]));
    let rel = |r: &Report, ls: &[&str]| ls.iter().all(|l| !named(r, l).is_empty());
    let present = rel(&a1, &["L1", "L2p", "L2m", "L3", "L4p", "L4m"]) && rel(&a2, &["L1", "L3", "L4p", "L5p", "L5m", "L6p", "L6m"]);
    let es: Vec<&Entry> = a1.entries.iter().chain(a2.entries.iter()).collect();
    let fails = bad(&es);
    Line {
        pass: dims_ok && present && fails.is_empty(),
        what: "vacuum module: A1 dims (1,3,9,22,51), A2 dims (1,8,44), (L1)-(L6) on every PBW vector",
        tolerance: "exact, A1 D=4, A2 D=3",
        detail: format!("A1 {}, A2 {}, {}", show(&d1), show(&d2), summary(&fails, es.len())),
    }
}

fn main_dy() -> Line {
    let a1 = report(&cfg("A1", q(1), 3, 5, 3, &["main_dy", "classical"]));
    let a2 = report(&cfg("A2", q(1), 2, 4, 3, &["main_dy", "classical"]));
    let routes = |r: &Report| ["old_to_new/", "new_to_old/"].iter().all(|p| named(r, p).len() > 5);
    let dy7 = named(&a2, "old_to_new/D4_control_").len() + named(&a2, "new_to_old/D4_control_").len();
    let layer = named(&a1, "hbar0_").len() + named(&a2, "hbar0_").len();
    let es: Vec<&Entry> = a1.entries.iter().chain(a2.entries.iter()).filter(|e| e.suite == "main_dy" || e.check.starts_with("hbar0_")).collect();
    let fails = bad(&es);
    Line {
        pass: routes(&a1) && routes(&a2) && dy7 == 4 && layer > 0 && fails.is_empty(),
        what: "presentation equivalence both directions, A1 and A2, orthogonal D4 pair, h=0 layer",
        tolerance: "exact mod h^N: A1 N=3 window 5, A2 N=2 window 4",
        detail: format!("{}, {} orthogonal controls, {} h=0 checks", summary(&fails, es.len()), dy7, layer),
    }
}

fn serre() -> Line {
    let r = report(&cfg("A1", q(1), 3, 5, 3, &["serre"]));
    let es: Vec<&Entry> = r.entries.iter().collect();
    let fails = bad(&es);
    let control = named(&r, "control_serre_kernel_plus_hbar");
    let located = control.first().map(|e| e.params["caught"].as_str().unwrap_or("").contains("residual")).unwrap_or(false);
    let a0a0b = !named(&r, "serre_sum_reduces_to_a0a0b").is_empty();
    Line {
        pass: fails.is_empty() && located && a0a0b,
        what: "Serre equivalence and evaluation criterion, a(w)_0 a(w)_0 b(w) = 0, +h perturbed kernel fails with a witness",
        tolerance: "exact rational identities, delta check mod h^3 window 5",
        detail: summary(&fails, es.len()),
    }
}

fn properties() -> Line {
    let res = common::run_all();
    let fails: Vec<String> = res.iter().filter_map(|(n, r)| r.as_ref().err().map(|e| format!("{}: {}", n, e))).collect();
    Line {
        pass: res.len() == 5 && fails.is_empty(),
        what: "engine properties: window soundness, shift group law, log/exp, YE k-independence, strategy independence",
        tolerance: "200 deterministic cases each, exact",
        detail: summary(&fails, res.len() * common::CASES as usize),
    }
}

fn determinism() -> Line {
    let c = RunConfig::default();
    let a = report(&c);
    let b = report(&c);
    let same = a.body_json() == b.body_json();
    Line {
        pass: same && a.all_pass() && !a.entries.is_empty(),
        what: "two default runs give byte-identical JSON report bodies",
        tolerance: "byte equality, runtime_ms excluded",
        detail: format!("{} entries, sha256 {}", a.entries.len(), &a.body_sha256()[..16]),
    }
}

#[test]
fn acceptance() {
    let criteria: Vec<fn() -> Line> = vec![catalog, kernel_identities, sing_res, heisenberg, classical, main_dy, serre, properties, determinism];
    let mut lines = Vec::new();
    for (i, f) in criteria.iter().enumerate() {
        let t = std::time::Instant::now();
        let l = f();
        println!(
            "criterion {} {}: {} [{}] ({}; {:.1}s)",
            i + 1,
            if l.pass { "PASS" } else { "FAIL" },
            l.what,
            l.tolerance,
            l.detail,
            t.elapsed().as_secs_f64()
        );
        lines.push(l.pass);
    }
    let failed: Vec<usize> = lines.iter().enumerate().filter(|(_, p)| !**p).map(|(i, _)| i + 1).collect();
    assert!(failed.is_empty(), "failing criteria: {:?}", failed);
}
