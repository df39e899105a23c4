//! Operator series `sum c_{k,j} hbar^k d^j` in one derivation.
//!
//! All operators here are functions of `d`, so composition is the
//! commutative product of the tables.

use std::collections::BTreeMap;

use num::{One, Zero};

use crate::error::{Error, Result};
use crate::hseries::HSeries;
use crate::poly::Poly;
use crate::scalar::{as_i64, factorial, pow_q, q, Q};
use crate::window::{Window, INF};

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct OpSeries {
    /// (hbar offset k, derivative order j) -> coefficient
    pub terms: BTreeMap<(i64, i64), Q>,
    /// Offsets `k >= trunc` are unknown.
    pub trunc: i64,
    /// Lowest offset that may occur.
    pub kmin: i64,
}

/// Coefficients of a power series in u (u^j) times hbar^s, as an operator in u = hbar d.
fn from_u_series(coeffs: &[Q], s: i64, trunc: i64) -> OpSeries {
    let mut terms = BTreeMap::new();
    for (j, c) in coeffs.iter().enumerate() {
        let k = s + j as i64;
        if k < trunc && !c.is_zero() {
            terms.insert((k, j as i64), c.clone());
        }
    }
    OpSeries { terms, trunc, kmin: s }
}

/// exp(c u) coefficients up to u^len-1.
fn exp_u(c: &Q, len: usize) -> Vec<Q> {
    (0..len).map(|j| pow_q(c, j as i64) / factorial(j as u64)).collect()
}

/// Power series inverse of `a` (a[0] != 0) up to len terms.
fn inv_u(a: &[Q], len: usize) -> Vec<Q> {
    let mut b = vec![Q::zero(); len];
    b[0] = a[0].recip();
    for n in 1..len {
        let mut s = Q::zero();
        for i in 1..=n.min(a.len() - 1) {
            s += &a[i] * &b[n - i];
        }
        b[n] = -s * &b[0];
    }
    b
}

/// Coefficients g with G_m(d) = hbar * sum g_j u^j.
fn gm_u(m: &Q, len: usize) -> Vec<Q> {
    // (e^{mu}-e^{-mu})/u = sum_{n odd} 2 m^n u^{n-1}/n!
    (0..len)
        .map(|j| {
            let n = j as i64 + 1;
            if n % 2 == 1 {
                q(2) * pow_q(m, n) / factorial(n as u64)
            } else {
                Q::zero()
            }
        })
        .collect()
}

impl OpSeries {
    pub fn zero(trunc: i64) -> Self {
        OpSeries { terms: BTreeMap::new(), trunc, kmin: 0 }
    }

    pub fn identity(trunc: i64) -> Self {
        let mut terms = BTreeMap::new();
        if trunc > 0 {
            terms.insert((0, 0), Q::one());
        }
        OpSeries { terms, trunc, kmin: 0 }
    }

    pub fn scalar(c: Q, trunc: i64) -> Self {
        OpSeries::identity(trunc).scale(&c)
    }

    /// G(d) = (q^d - q^{-d})/d.
    pub fn g(trunc: i64) -> Self {
        OpSeries::g_m(&Q::one(), trunc)
    }

    pub fn g_m(m: &Q, trunc: i64) -> Self {
        let len = (trunc.max(1)) as usize;
        from_u_series(&gm_u(m, len), 1, trunc)
    }

    /// F(d) = 1/G(d), carrying the 1/(2 hbar) prefactor.
    pub fn f(trunc: i64) -> Self {
        let len = (trunc + 2).max(1) as usize;
        let g = gm_u(&Q::one(), len);
        from_u_series(&inv_u(&g, len), -1, trunc)
    }

    /// L(c hbar d) with L(x) = (e^x - 1)/x.
    pub fn l(c: &Q, trunc: i64) -> Self {
        let len = trunc.max(1) as usize;
        let co: Vec<Q> = (0..len).map(|j| pow_q(c, j as i64) / factorial(j as u64 + 1)).collect();
        from_u_series(&co, 0, trunc)
    }

    /// q^{c d} = e^{c hbar d}.
    pub fn qpow(c: &Q, trunc: i64) -> Self {
        let len = trunc.max(1) as usize;
        from_u_series(&exp_u(c, len), 0, trunc)
    }

    /// The q-bracket [m] evaluated at q^d.
    pub fn qbracket(m: &Q, trunc: i64) -> Self {
        if let Some(mi) = as_i64(m) {
            let mut acc = OpSeries::zero(trunc);
            let a = mi.abs();
            for j in 0..a {
                acc = acc.add(&OpSeries::qpow(&q(a - 1 - 2 * j), trunc));
            }
            if mi < 0 {
                acc = acc.scale(&-Q::one());
            }
            acc
        } else {
            // one extra order so the 1/(2hbar) in F does not lose precision
            let f = OpSeries::f(trunc + 1);
            let g = OpSeries::g_m(m, trunc + 1);
            let mut r = f.compose(&g);
            r.trunc = r.trunc.min(trunc);
            r.terms.retain(|(k, _), _| *k < trunc);
            r
        }
    }

    pub fn scale(&self, c: &Q) -> OpSeries {
        let mut r = self.clone();
        if c.is_zero() {
            r.terms.clear();
            return r;
        }
        for v in r.terms.values_mut() {
            *v *= c;
        }
        r
    }

    pub fn neg(&self) -> OpSeries {
        self.scale(&-Q::one())
    }

    pub fn add(&self, o: &OpSeries) -> OpSeries {
        let trunc = self.trunc.min(o.trunc);
        let mut terms = self.terms.clone();
        for (k, v) in &o.terms {
            let e = terms.entry(*k).or_insert_with(Q::zero);
            *e += v;
        }
        terms.retain(|(k, _), v| !v.is_zero() && *k < trunc);
        OpSeries { terms, trunc, kmin: self.kmin.min(o.kmin) }
    }

    pub fn compose(&self, o: &OpSeries) -> OpSeries {
        let trunc = (self.trunc + o.kmin).min(o.trunc + self.kmin);
        let mut terms: BTreeMap<(i64, i64), Q> = BTreeMap::new();
        for ((k1, j1), c1) in &self.terms {
            for ((k2, j2), c2) in &o.terms {
                if k1 + k2 >= trunc {
                    continue;
                }
                let e = terms.entry((k1 + k2, j1 + j2)).or_insert_with(Q::zero);
                *e += c1 * c2;
            }
        }
        terms.retain(|_, v| !v.is_zero());
        OpSeries { terms, trunc, kmin: self.kmin + o.kmin }
    }

    /// `self` composed with `q^{c d}`.
    pub fn then_qpow(&self, c: &Q) -> OpSeries {
        let t = self.trunc - self.kmin;
        self.compose(&OpSeries::qpow(c, t.max(1)))
    }

    /// First differing table entry below the common truncation.
    pub fn diff(&self, o: &OpSeries) -> Option<((i64, i64), Q, Q)> {
        let t = self.trunc.min(o.trunc);
        let keys: std::collections::BTreeSet<(i64, i64)> = self.terms.keys().chain(o.terms.keys()).filter(|(k, _)| *k < t).cloned().collect();
        for key in keys {
            let a = self.terms.get(&key).cloned().unwrap_or_else(Q::zero);
            let b = o.terms.get(&key).cloned().unwrap_or_else(Q::zero);
            if a != b {
                return Some((key, a, b));
            }
        }
        None
    }

    pub fn max_deriv(&self) -> i64 {
        self.terms.keys().map(|(_, j)| *j).max().unwrap_or(0)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Apply to a series in variable `v`.
    pub fn apply(&self, a: &HSeries, v: &str) -> Result<HSeries> {
        let i = a.idx(v)?;
        let na = a.window.n;
        let prec = (self.trunc.saturating_add(a.window.omin)).min(na.saturating_add(self.kmin));
        if prec <= a.window.omin + self.kmin {
            return Err(Error::Window("operator application underflows the hbar window".into()));
        }
        let used: Vec<(&(i64, i64), &Q)> = self.terms.iter().filter(|((k, _), _)| k + a.window.omin < prec).collect();
        let jmax = used.iter().map(|((_, j), _)| *j).max().unwrap_or(0);
        let jmin = used.iter().map(|((_, j), _)| *j).min().unwrap_or(0);
        let mut w: Window = a.window.clone();
        let (lo, hi) = w.bounds[i];
        w.bounds[i] = (crate::window::sat_add(lo, -jmin), crate::window::sat_add(hi, -jmax));
        w.omin = a.window.omin + self.kmin;
        w.n = if prec >= INF / 2 { INF } else { prec };
        let mut derivs: Vec<Poly> = vec![a.poly.clone()];
        let mut acc = Poly::zero(a.poly.nv);
        for ((k, j), c) in used {
            while derivs.len() <= *j as usize {
                let nx = derivs.last().unwrap().derive(i);
                derivs.push(nx);
            }
            acc = acc.add(&derivs[*j as usize].mul_hbar(*k).scale(c));
        }
        Ok(HSeries::new(w, acc))
    }

    /// Compact text form for witnesses.
    pub fn describe(&self) -> String {
        let parts: Vec<String> = self.terms.iter().map(|((k, j), c)| format!("{}*h^{}*d^{}", crate::scalar::fmt_q(c), k, j)).collect();
        if parts.is_empty() {
            "0".into()
        } else {
            parts.join(" + ")
        }
    }
}
