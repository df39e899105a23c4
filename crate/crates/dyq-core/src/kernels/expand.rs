//! Iota-expansion of kernels into windowed series.

use num::{One, Zero};

use crate::error::{Error, Result};
use crate::hseries::HSeries;
use crate::kernels::kern::{Kern, Lin};
use crate::poly::Poly;
use crate::scalar::{binom, q, Q};
use crate::window::{Window, INF, NEG_INF};

/// Expansion direction: variables listed from large to small.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Direction(pub Vec<usize>);

impl Direction {
    pub fn declared(nv: usize) -> Self {
        Direction((0..nv).collect())
    }

    fn rank(&self, v: usize) -> usize {
        self.0.iter().position(|x| *x == v).expect("variable in direction")
    }
}

/// `(L + c hbar)^{-e}` with `L` the large variable and `s` the small one, or a
/// single variable, expanded up to `nmax` terms.
fn factor_series(nv: usize, l: &Lin, e: u32, dir: &Direction, nmax: i64, hcap: i64) -> Poly {
    let me = -(e as i64);
    let mut out = Poly::zero(nv);
    match l.b {
        None => {
            // v^{-e} (1 + c hbar / v)^{-e}
            for n in 0..=nmax.min(hcap.max(0)) {
                let mut ex = vec![0; nv];
                ex[l.a] = me - n;
                let c = binom(&q(me), n) * crate::scalar::pow_q(&l.c, n);
                if !c.is_zero() {
                    out.add_term(n, ex, c);
                }
            }
        }
        Some(b) => {
            // large variable big, (big - small + c' hbar) with sign
            let (big, small, c, sign) = if dir.rank(l.a) < dir.rank(b) {
                (l.a, b, l.c.clone(), Q::one())
            } else {
                let s = if e % 2 == 1 { -Q::one() } else { Q::one() };
                (b, l.a, -l.c.clone(), s)
            };
            // big^{-e} sum_n binom(-e,n) big^{-n} (c hbar - small)^n
            for n in 0..=nmax {
                let bn = binom(&q(me), n) * &sign;
                for k in 0..=n {
                    let hk = n - k;
                    if hk > hcap {
                        continue;
                    }
                    let coef = &bn * binom(&q(n), k) * crate::scalar::pow_q(&-Q::one(), k) * crate::scalar::pow_q(&c, hk);
                    if coef.is_zero() {
                        continue;
                    }
                    let mut ex = vec![0; nv];
                    ex[big] = me - n;
                    ex[small] = k;
                    out.add_term(hk, ex, coef);
                }
            }
        }
    }
    out
}

/// Expand `k` on the window, large-to-small in `dir`.
pub fn expand(k: &Kern, dir: &Direction, w: &Window) -> Result<HSeries> {
    let nv = k.nv;
    if w.nv() != nv {
        return Err(Error::VariableMismatch("window arity differs from kernel".into()));
    }
    if w.is_empty() {
        return Err(Error::Window("expand on empty window".into()));
    }
    let n = match k.prec {
        Some(p) => p.min(w.n),
        None => w.n,
    };
    if n >= INF {
        return Err(Error::Window("expand needs a finite hbar order".into()));
    }
    let hnum = k.num.hval().unwrap_or(0);
    let hcap = n - 1 - hnum;
    if hcap < 0 {
        let mut zw = Window { n, omin: hnum, ..w.clone() };
        if k.den.keys().all(|l| l.b.is_none()) {
            zw.bounds = vec![(NEG_INF, INF); nv];
        }
        return Ok(HSeries::zero(zw));
    }
    let pairs: Vec<(&Lin, u32)> = k.den.iter().filter(|(l, _)| l.b.is_some()).map(|(l, e)| (l, *e)).collect();
    let singles: Vec<(&Lin, u32)> = k.den.iter().filter(|(l, _)| l.b.is_none()).map(|(l, e)| (l, *e)).collect();

    // bound the expansion order of each pair factor, smallest variables first
    let mut bound = vec![0i64; pairs.len()];
    let order: Vec<usize> = dir.0.iter().rev().cloned().collect();
    let small_of = |l: &Lin| if dir.rank(l.a) < dir.rank(l.b.unwrap()) { l.b.unwrap() } else { l.a };
    let big_of = |l: &Lin| if dir.rank(l.a) < dir.rank(l.b.unwrap()) { l.a } else { l.b.unwrap() };
    for v in order {
        let as_small: Vec<usize> = (0..pairs.len()).filter(|i| small_of(pairs[*i].0) == v).collect();
        if as_small.is_empty() {
            continue;
        }
        let hi = w.bounds[v].1;
        if hi >= INF {
            return Err(Error::Window(format!("variable {} is expanded in but has no upper window bound", w.vars[v])));
        }
        let minnum = k.num.min_exp(v).unwrap_or(0);
        let mut s = hi - minnum;
        for (i, (l, e)) in pairs.iter().enumerate() {
            if big_of(l) == v {
                s += *e as i64 + bound[i];
            }
        }
        for (l, e) in &singles {
            if l.a == v {
                s += *e as i64 + hcap;
            }
        }
        for i in as_small {
            bound[i] = (s + hcap).max(0);
        }
    }

    let mut acc = k.num.truncate(Some(n));
    for (i, (l, e)) in pairs.iter().enumerate() {
        let f = factor_series(nv, l, *e, dir, bound[i], hcap);
        acc = acc.mul_trunc(&f, Some(n));
    }
    for (l, e) in &singles {
        let f = factor_series(nv, l, *e, dir, hcap, hcap);
        acc = acc.mul_trunc(&f, Some(n));
    }
    let mut out_w = Window { n, omin: hnum, ..w.clone() };
    if pairs.is_empty() {
        out_w.bounds = vec![(NEG_INF, INF); nv];
    }
    Ok(HSeries::new(out_w, acc))
}
