//! Engine properties shared by the property tests and the acceptance run.
#![allow(dead_code)]

use std::collections::HashMap;
use std::sync::{Mutex, OnceLock};

use dyq_core::fock::field::{ye_series, Field};
use dyq_core::fock::{FVec, Heis, HQ};
use dyq_core::kernels::{expand, Direction, Kern};
use dyq_core::rewrite::decks::AbstractSerre;
use dyq_core::rewrite::{Engine, Expr, Letter, Order, Strategy as Pick, Sym};
use dyq_core::scalar::{q, qf, Q};
use dyq_core::{Gcm, HSeries, Poly, Window};
use proptest::prelude::*;
use proptest::test_runner::{Config, TestCaseError, TestRunner};

pub const CASES: u32 = 200;

type Case = std::result::Result<(), TestCaseError>;

fn kern_1v(factors: &[(i64, i64)]) -> Kern {
    let mut k = Kern::one(1);
    for &(c, e) in factors {
        k = k.mul(&Kern::lin(1, 0, None, q(c), e).unwrap());
    }
    k
}

fn factors() -> impl Strategy<Value = Vec<(i64, i64)>> {
    prop::collection::vec((-2i64..=2, prop::sample::select(vec![-2i64, -1, 1])), 1..=3)
}

fn poly_1v() -> impl Strategy<Value = Poly> {
    prop::collection::vec((0i64..=2, 0i64..=2, -3i64..=3), 1..=4).prop_map(|ts| {
        let mut p = Poly::zero(1);
        for (h, e, c) in ts {
            p.add_term(h, vec![e], q(c));
        }
        p
    })
}

fn series(k: &Kern, n: i64) -> HSeries {
    expand(k, &Direction::declared(1), &Window::new(&["x"], 0, 0, n)).unwrap()
}

fn agree(a: &HSeries, b: &HSeries) -> Case {
    let w = a.diff_witness(b).map_err(|e| TestCaseError::fail(e.to_string()))?;
    prop_assert!(w.is_none(), "mismatch {}", w.unwrap());
    Ok(())
}

pub type WindowArgs = (Vec<(i64, i64)>, Poly, i64, i64, i64, i64);

pub fn window_args() -> impl Strategy<Value = WindowArgs> {
    (factors(), poly_1v(), -8i64..=-3, -2i64..=3, 2i64..=5, -2i64..=2)
}

/// Coefficients inside a derived window are the true ones.
pub fn window_soundness((fs, p, lo, hi, n, c): WindowArgs) -> Case {
    let k = kern_1v(&fs);
    let w = Window::with_bounds(&["x"], vec![(lo, hi)], 0, n);
    let a = series(&k, n).restrict(&w).unwrap();
    let pk = Kern::from_poly(p.clone());

    // an empty derived window is a refusal, not a wrong coefficient
    let prod = match a.mul(&HSeries::exact(&["x"], p, n)) {
        Ok(x) => x,
        Err(dyq_core::Error::Window(_)) => return Ok(()),
        Err(e) => return Err(TestCaseError::fail(e.to_string())),
    };
    let full = series(&k.mul(&pk), n).restrict(&prod.window).unwrap();
    prop_assert_eq!(&full.window, &prod.window);
    agree(&prod, &full)?;

    let d = a.derive("x").unwrap();
    agree(&d, &series(&k.derive(0), n).restrict(&d.window).unwrap())?;

    let s = a.shift("x", &q(c)).unwrap();
    agree(&s, &series(&k.shift(0, &q(c)).unwrap(), n).restrict(&s.window).unwrap())
}

pub type ShiftArgs = (Vec<(i64, i64)>, i64, i64, i64, i64);

pub fn shift_args() -> impl Strategy<Value = ShiftArgs> {
    (factors(), -3i64..=3, -3i64..=3, -8i64..=-2, 2i64..=5)
}

/// e^{a hbar d} e^{b hbar d} = e^{(a + b) hbar d} on series and kernels.
pub fn shift_group_law((fs, a, b, lo, n): ShiftArgs) -> Case {
    let k = kern_1v(&fs);
    let w = Window::with_bounds(&["x"], vec![(lo, 4)], 0, n);
    let s = series(&k, n).restrict(&w).unwrap();
    let two = s.shift("x", &q(a)).unwrap().shift("x", &q(b)).unwrap();
    let one = s.shift("x", &q(a + b)).unwrap();
    agree(&two, &one)?;
    let kk = k.shift(0, &q(a)).unwrap().shift(0, &q(b)).unwrap();
    prop_assert!(kk.equals(&k.shift(0, &q(a + b)).unwrap()));
    Ok(())
}

pub type LogExpArgs = (Vec<(i64, i64)>, Poly, i64);

pub fn log_exp_args() -> impl Strategy<Value = LogExpArgs> {
    (factors(), poly_1v(), 2i64..=6)
}

/// exp(log(1 + f)) = 1 + f and log(exp(f)) = f for f in hbar (...).
pub fn log_exp_round_trip((fs, p, n): LogExpArgs) -> Case {
    let f = series(&kern_1v(&fs), n).mul(&HSeries::exact(&["x"], p, n)).unwrap().mul_hbar(1);
    let f = f.restrict(&Window::complete(&["x".to_string()], 1, n)).unwrap();
    if f.is_zero() {
        return Ok(());
    }
    let one = HSeries::exact(&["x"], Poly::one(1), n);
    agree(&f.log1p().unwrap().exp0().unwrap(), &one.add(&f).unwrap())?;
    agree(&f.exp0().unwrap().sub(&one).unwrap().log1p().unwrap(), &f)
}

fn model(g: &str, level: (i64, i64)) -> Heis {
    static CACHE: OnceLock<Mutex<HashMap<(String, (i64, i64)), Heis>>> = OnceLock::new();
    let m = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    let mut m = m.lock().unwrap();
    m.entry((g.to_string(), level)).or_insert_with(|| Heis::derive(&Gcm::preset(g).unwrap(), &qf(level.0, level.1), 3, 32).unwrap()).clone()
}

pub type YeArgs = (&'static str, (i64, i64), usize, usize, usize, usize, i64);

pub fn ye_args() -> impl Strategy<Value = YeArgs> {
    (prop::sample::select(vec!["A1", "A2"]), prop::sample::select(vec![(1i64, 1i64), (3, 2)]), 0usize..2, 0usize..2, 0usize..8, 1usize..=2, -2i64..=2)
}

/// Y_E computed with any admissible k agrees.
pub fn ye_k_independence((g, level, i, j, wv, extra, ca): YeArgs) -> Case {
    let h = model(g, level);
    let r = h.rank();
    let (i, j) = (i % r, j % r);
    let vs = dyq_core::fock::space::basis(r, 2);
    let v = FVec::basis(vs[wv % vs.len()].clone(), 3);
    let mut c = HQ::one(3);
    if ca != 0 {
        c = c.add(&HQ::constant(q(ca), 3).mul_hbar(1));
    }
    let a = Field::current(i, &c);
    let b = Field::current(j, &HQ::one(3));
    let (k0, y0) = ye_series(&h, &a, &b, &v, 2, 1, None).unwrap();
    let (_, y1) = ye_series(&h, &a, &b, &v, 2, 1, Some(k0 + extra)).unwrap();
    prop_assert_eq!(y0, y1);
    Ok(())
}

pub type RewriteArgs = (Vec<([usize; 3], i64)>, (i64, i64), u64);

pub fn rewrite_args() -> impl Strategy<Value = RewriteArgs> {
    let words = prop::sample::select(vec![[0usize, 1, 2], [0, 2, 1], [2, 0, 1], [1, 0, 2], [1, 2, 0], [2, 1, 0]]);
    (prop::collection::vec((words, -3i64..=3), 1..=4), prop::sample::select(vec![(1i64, 1i64), (-1, 1), (1, 2)]), any::<u64>())
}

/// Normal forms do not depend on which inversion is rewritten first.
pub fn rewrite_strategy_independence((words, nu, seed): RewriteArgs) -> Case {
    let deck = AbstractSerre::new(qf(nu.0, nu.1));
    let names = ["z1", "z2", "w"];
    let letter = |v: usize| Letter::new(v, Sym::field(if v == 2 { "b" } else { "a" }, None, Q::from_integer(0.into())));
    let mut e = Expr::new(&names, 8);
    for (w, c) in &words {
        e = e.with_term(w.iter().map(|v| letter(*v)).collect(), Kern::constant(3, q(*c))).unwrap();
    }
    let nf = |s: Pick| {
        let first = Engine::new(&deck).with_strategy(s).with_order(Order::Ranked(Default::default()));
        Engine::new(&deck).with_strategy(s).normal_order(&first.normal_order(&e).unwrap()).unwrap()
    };
    let l = nf(Pick::Leftmost);
    for s in [Pick::Rightmost, Pick::Seeded(seed)] {
        let d = l.sub(&nf(s)).unwrap();
        prop_assert!(d.is_zero(), "{:?}: {}", s, d);
    }
    Ok(())
}

fn run_one<S: Strategy>(s: S, f: fn(S::Value) -> Case) -> std::result::Result<(), String>
where
    S::Value: std::fmt::Debug,
{
    let mut r = TestRunner::new_with_rng(
        Config { cases: CASES, failure_persistence: None, ..Config::default() },
        proptest::test_runner::TestRng::deterministic_rng(proptest::test_runner::RngAlgorithm::ChaCha),
    );
    r.run(&s, f).map_err(|e| e.to_string())
}

/// Every property on a deterministic stream of `CASES` inputs.
pub fn run_all() -> Vec<(&'static str, std::result::Result<(), String>)> {
    vec![
        ("window soundness", run_one(window_args(), window_soundness)),
        ("shift group law", run_one(shift_args(), shift_group_law)),
        ("log/exp round trip", run_one(log_exp_args(), log_exp_round_trip)),
        ("YE k-independence", run_one(ye_args(), ye_k_independence)),
        ("rewrite strategy independence", run_one(rewrite_args(), rewrite_strategy_independence)),
    ]
}
