//! Fields on the Fock space, evaluated on a vector as an `x`-series of
//! vectors that is exact for every exponent `<= hi`.

use std::collections::BTreeMap;
use std::fmt;

use num::{One, Zero};

use crate::error::{Error, Result};
use crate::fock::heis::Heis;
use crate::fock::hq::HQ;
use crate::fock::space::FVec;
use crate::opseries::OpSeries;
use crate::scalar::{binom, factorial, pow_q, q, Q};

/// Largest `k` tried for `(x1 - x)^k a(x1) b(x)`.
pub const KMAX_EXTRA: usize = 5;

/// `sum c_{k,j} hbar^k d^j` with `j >= -1`; `d^{-1}` is the antiderivative
/// without constant term.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Op(pub BTreeMap<(i64, i64), Q>);

impl Op {
    pub fn one() -> Op {
        Op(BTreeMap::from([((0, 0), Q::one())]))
    }

    pub fn from_opseries(o: &OpSeries) -> Op {
        Op(o.terms.clone())
    }

    /// `sum coeffs[j] hbar^{s+j} d^{j+joff}`.
    pub fn from_u(coeffs: &[Q], s: i64, joff: i64) -> Op {
        let mut t = BTreeMap::new();
        for (j, c) in coeffs.iter().enumerate() {
            if !c.is_zero() {
                t.insert((s + j as i64, j as i64 + joff), c.clone());
            }
        }
        Op(t)
    }

    /// `e^{c hbar d}`.
    pub fn shift(c: &Q, n: usize) -> Op {
        Op::from_u(&crate::fock::useries::exp(c, n), 0, 0)
    }

    /// `(e^{c hbar d} - 1) d^{-1}`.
    pub fn shift_minus_one_int(c: &Q, n: usize) -> Op {
        let co: Vec<Q> = (1..=n).map(|j| pow_q(c, j as i64) / factorial(j as u64)).collect();
        Op::from_u(&co, 1, 0)
    }

    /// `d^{-1}`.
    pub fn antiderivative() -> Op {
        Op(BTreeMap::from([((0, -1), Q::one())]))
    }

    pub fn scale(&self, c: &Q) -> Op {
        Op(self.0.iter().map(|(k, v)| (*k, v * c)).filter(|(_, v)| !v.is_zero()).collect())
    }

    /// Product of tables, dropping `hbar^k` for `k >= n`.
    pub fn compose(&self, o: &Op, n: usize) -> Op {
        let mut t: BTreeMap<(i64, i64), Q> = BTreeMap::new();
        for ((k1, j1), c1) in &self.0 {
            for ((k2, j2), c2) in &o.0 {
                let k = k1 + k2;
                if k >= n as i64 {
                    continue;
                }
                let j = j1 + j2;
                *t.entry((k, j)).or_insert_with(Q::zero) += c1 * c2;
            }
        }
        t.retain(|_, v| !v.is_zero());
        if t.keys().any(|(_, j)| *j < -1) {
            // d^{-1} d^{-1} does not occur in the fields used here
            t.retain(|(_, j), _| *j >= -1);
        }
        Op(t)
    }

    pub fn jmax(&self) -> i64 {
        self.0.keys().map(|(_, j)| *j).max().unwrap_or(0)
    }

    /// `hbar^k d^j x^e` as `(k, exponent, coefficient)` terms.
    pub fn on_power(&self, e: i64, n: usize) -> Result<Vec<(usize, i64, Q)>> {
        let mut out = Vec::new();
        for ((k, j), c) in &self.0 {
            if *k >= n as i64 {
                continue;
            }
            if *k < 0 {
                return Err(Error::Unsupported("negative hbar power in a field operator".into()));
            }
            if *j == -1 {
                if e == -1 {
                    return Err(Error::Unsupported("antiderivative of x^-1".into()));
                }
                out.push((*k as usize, e + 1, c / q(e + 1)));
                continue;
            }
            let mut f = Q::one();
            for t in 0..*j {
                f *= q(e - t);
            }
            if !f.is_zero() {
                out.push((*k as usize, e - j, c * f));
            }
        }
        Ok(out)
    }
}

/// `sum_e v_e x^e`, exact for `e <= hi`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct XSer {
    pub terms: BTreeMap<i64, FVec>,
    pub hi: i64,
}

impl XSer {
    pub fn zero(hi: i64) -> XSer {
        XSer { terms: BTreeMap::new(), hi }
    }

    pub fn add_at(&mut self, e: i64, v: &FVec, c: &HQ) {
        if e > self.hi || v.is_zero() {
            return;
        }
        let n = v.n;
        let slot = self.terms.entry(e).or_insert_with(|| FVec::zero(n));
        slot.add_scaled(v, c);
        if slot.is_zero() {
            self.terms.remove(&e);
        }
    }

    pub fn add_scaled(&mut self, o: &XSer, c: &HQ) {
        for (e, v) in &o.terms {
            self.add_at(*e, v, c);
        }
        self.hi = self.hi.min(o.hi);
        let hi = self.hi;
        self.terms.retain(|e, _| *e <= hi);
    }

    pub fn lo(&self) -> i64 {
        self.terms.keys().next().copied().unwrap_or(0)
    }

    pub fn truncate(&self, hi: i64) -> XSer {
        XSer { terms: self.terms.iter().filter(|(e, _)| **e <= hi).map(|(e, v)| (*e, v.clone())).collect(), hi: hi.min(self.hi) }
    }

    /// First exponent `<= hi` where the series differ.
    pub fn diff(&self, o: &XSer, hi: i64) -> Option<(i64, FVec)> {
        let keys: std::collections::BTreeSet<i64> = self.terms.keys().chain(o.terms.keys()).copied().filter(|e| *e <= hi).collect();
        let n = self.terms.values().chain(o.terms.values()).next().map(|v| v.n).unwrap_or(1);
        for e in keys {
            let a = self.terms.get(&e).cloned().unwrap_or_else(|| FVec::zero(n));
            let b = o.terms.get(&e).cloned().unwrap_or_else(|| FVec::zero(n));
            let d = a.sub(&b);
            if !d.is_zero() {
                return Some((e, d));
            }
        }
        None
    }
}

impl fmt::Display for XSer {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.terms.iter().map(|(e, v)| format!("x^{}: {}", e, v)).collect();
        write!(f, "{} (exact to x^{})", parts.join("; "), self.hi)
    }
}

/// Two-variable series `(p, q) -> v` for `x1^p x^q`, exact for `p <= h1, q <= h2`.
#[derive(Clone, Debug)]
pub struct X2Ser {
    pub terms: BTreeMap<(i64, i64), FVec>,
    pub h1: i64,
    pub h2: i64,
}

impl X2Ser {
    pub fn add_at(&mut self, p: i64, q: i64, v: &FVec, c: &HQ) {
        if p > self.h1 || q > self.h2 || v.is_zero() {
            return;
        }
        let n = v.n;
        let slot = self.terms.entry((p, q)).or_insert_with(|| FVec::zero(n));
        slot.add_scaled(v, c);
        if slot.is_zero() {
            self.terms.remove(&(p, q));
        }
    }

    /// Multiply by `(x1 - x + c hbar)`.
    pub fn times_diff(&self, c: &Q, n: usize) -> X2Ser {
        let mut out = X2Ser { terms: BTreeMap::new(), h1: self.h1, h2: self.h2 };
        let one = HQ::one(n);
        let ch = HQ::hbar(1, c.clone(), n);
        for ((p, q), v) in &self.terms {
            out.add_at(p + 1, *q, v, &one);
            out.add_at(*p, q + 1, v, &one.neg());
            if !c.is_zero() {
                out.add_at(*p, *q, v, &ch);
            }
        }
        out
    }

    pub fn diff(&self, o: &X2Ser, h1: i64, h2: i64) -> Option<((i64, i64), FVec)> {
        let keys: std::collections::BTreeSet<(i64, i64)> = self.terms.keys().chain(o.terms.keys()).copied().filter(|(p, q)| *p <= h1 && *q <= h2).collect();
        let n = self.terms.values().chain(o.terms.values()).next().map(|v| v.n).unwrap_or(1);
        for k in keys {
            let a = self.terms.get(&k).cloned().unwrap_or_else(|| FVec::zero(n));
            let b = o.terms.get(&k).cloned().unwrap_or_else(|| FVec::zero(n));
            let d = a.sub(&b);
            if !d.is_zero() {
                return Some((k, d));
            }
        }
        None
    }
}

#[derive(Clone, Debug)]
pub enum Field {
    /// `1_W`.
    Identity,
    /// `op(d) Y^+(h_i, x) = sum_{n>=1} h_i(-n) op(d) x^{n-1}` (creation) or
    /// `op(d) Y^-(h_i, x) = sum_{m>=1} h_i(m) op(d) x^{-m-1}`.
    Half {
        node: usize,
        cre: bool,
        op: Op,
    },
    /// `sum c h_i(m) x^e`.
    Modes(Vec<(usize, i64, i64, HQ)>),
    Sum(Vec<(HQ, Field)>),
    /// `a(x) b(x)`; `a` must not lower weight, or neither factor raises it.
    Product(Box<Field>, Box<Field>),
    /// `exp(f(x))` of a field of pure creation or pure annihilation type.
    Exp(Box<Field>),
    /// `e^{c hbar d_x} f(x)`.
    Shift(Box<Field>, Q),
    /// `a(x)_m b(x) = Res_z z^m Y_E(a(x), z) b(x)`; `a` is a field of the other kinds.
    YMode {
        a: Box<Field>,
        b: Box<Field>,
        m: i64,
        k: Option<usize>,
    },
}

impl Field {
    /// `h_i(x) = Y^+(h_i, x) + Y^-(h_i, x)`.
    pub fn current(i: usize, c: &HQ) -> Field {
        Field::Sum(vec![(c.clone(), Field::Half { node: i, cre: true, op: Op::one() }), (c.clone(), Field::Half { node: i, cre: false, op: Op::one() })])
    }

    pub fn ymode(a: Field, b: Field, m: i64) -> Field {
        Field::YMode { a: Box::new(a), b: Box::new(b), m, k: None }
    }

    pub fn raises(&self) -> bool {
        match self {
            Field::Identity => false,
            Field::Half { cre, .. } => *cre,
            Field::Modes(t) => t.iter().any(|(_, m, _, _)| *m < 0),
            Field::Sum(t) => t.iter().any(|(_, f)| f.raises()),
            Field::Product(a, b) => a.raises() || b.raises(),
            Field::Exp(f) | Field::Shift(f, _) => f.raises(),
            Field::YMode { .. } => true,
        }
    }

    pub fn lowers(&self) -> bool {
        match self {
            Field::Identity => false,
            Field::Half { cre, .. } => !*cre,
            Field::Modes(t) => t.iter().any(|(_, m, _, _)| *m > 0),
            Field::Sum(t) => t.iter().any(|(_, f)| f.lowers()),
            Field::Product(a, b) => a.lowers() || b.lowers(),
            Field::Exp(f) | Field::Shift(f, _) => f.lowers(),
            Field::YMode { .. } => true,
        }
    }

    /// Lower bound for the exponents of `f(x) w` over vectors of weight `<= wt`.
    pub fn lo(&self, h: &Heis, wt: usize) -> i64 {
        let n = h.n as i64;
        match self {
            Field::Identity => 0,
            Field::Half { cre: true, .. } => 0,
            Field::Half { cre: false, op, .. } => {
                let mut lo = 0;
                for (k, j) in op.0.keys() {
                    let mtop = wt as i64 + n - 1 - k;
                    if mtop >= 1 {
                        lo = lo.min(-mtop - 1 - j);
                    }
                }
                lo
            }
            Field::Modes(t) => t.iter().map(|(_, _, e, _)| (*e).min(0)).min().unwrap_or(0),
            Field::Sum(t) => t.iter().map(|(_, f)| f.lo(h, wt)).min().unwrap_or(0),
            Field::Product(a, b) => a.lo(h, wt) + b.lo(h, wt),
            Field::Exp(f) => {
                if f.lowers() {
                    (wt as i64) * f.lo(h, wt).min(0)
                } else {
                    0
                }
            }
            Field::Shift(f, _) => {
                let l = f.lo(h, wt);
                if l >= 0 {
                    0
                } else {
                    l - (n - 1)
                }
            }
            Field::YMode { a, b, m, .. } => a.lo(h, wt).min(0) + b.lo(h, wt) - kmax(h) as i64 + m + 1,
        }
    }

    /// `f(x) v`, exact through `x^hi`.
    pub fn act(&self, h: &Heis, v: &FVec, hi: i64) -> Result<XSer> {
        let n = h.n;
        let mut out = XSer::zero(hi);
        if v.is_zero() {
            return Ok(out);
        }
        match self {
            Field::Identity => out.add_at(0, v, &HQ::one(n)),
            Field::Half { node, cre: true, op } => {
                let top = hi + 1 + op.jmax().max(0);
                for nn in 1..=top.max(0) {
                    let w = h.mode(*node, -nn, v)?;
                    if w.is_zero() {
                        continue;
                    }
                    for (k, e, c) in op.on_power(nn - 1, n)? {
                        out.add_at(e, &w, &HQ::hbar(k, c, n));
                    }
                }
            }
            Field::Half { node, cre: false, op } => {
                for m in 1..=h.mmax(v.max_weight()) as i64 {
                    let w = h.mode(*node, m, v)?;
                    if w.is_zero() {
                        continue;
                    }
                    for (k, e, c) in op.on_power(-m - 1, n)? {
                        out.add_at(e, &w, &HQ::hbar(k, c, n));
                    }
                }
            }
            Field::Modes(t) => {
                for (i, m, e, c) in t {
                    if *e <= hi {
                        let w = h.mode(*i, *m, v)?;
                        out.add_at(*e, &w, c);
                    }
                }
            }
            Field::Sum(t) => {
                for (c, f) in t {
                    let s = f.act(h, v, hi)?;
                    out.add_scaled(&s, c);
                }
                out.hi = hi;
            }
            Field::Product(a, b) => {
                if a.lowers() && (a.raises() || b.raises()) {
                    return Err(Error::Unsupported("product of fields that is not normally ordered".into()));
                }
                let la = a.lo(h, v.max_weight()).min(0);
                let bs = b.act(h, v, hi - la)?;
                for (qe, w) in &bs.terms {
                    let s = a.act(h, w, hi - qe)?;
                    for (p, u) in &s.terms {
                        out.add_at(p + qe, u, &HQ::one(n));
                    }
                }
            }
            Field::Exp(f) => {
                if f.raises() && f.lowers() {
                    return Err(Error::Unsupported("exponential of a field of mixed type".into()));
                }
                let wt = v.max_weight();
                // annihilation series are finite, so any target is exact
                let target = if f.lowers() { hi.max(0) - f.lo(h, wt) * (wt as i64 + 1) } else { hi };
                let mut term = XSer::zero(target);
                term.add_at(0, v, &HQ::one(n));
                out.add_scaled(&term, &HQ::one(n));
                out.hi = hi;
                let mut k = 1;
                while !term.terms.is_empty() {
                    if k > 4 * (n + wt) + 4 * (hi.max(0) as usize) + 8 {
                        return Err(Error::Unsupported("exponential of a field does not terminate".into()));
                    }
                    let mut next = XSer::zero(target);
                    for (qe, w) in &term.terms {
                        let s = f.act(h, w, target - qe)?;
                        for (p, u) in &s.terms {
                            next.add_at(p + qe, u, &HQ::constant(Q::new(1.into(), (k as i64).into()), n));
                        }
                    }
                    out.add_scaled(&next, &HQ::one(n));
                    out.hi = hi;
                    term = next;
                    k += 1;
                }
            }
            Field::Shift(f, c) => {
                let s = f.act(h, v, hi + n as i64 - 1)?;
                for (e, w) in &s.terms {
                    for j in 0..n as i64 {
                        let co = binom(&q(*e), j) * pow_q(c, j);
                        if !co.is_zero() {
                            out.add_at(e - j, w, &HQ::hbar(j as usize, co, n));
                        }
                    }
                }
            }
            Field::YMode { a, b, m, k } => {
                let kmx = kmax(h);
                let jtop = kmx as i64 - m - 1;
                if jtop < 0 {
                    return Ok(out);
                }
                let (k, t) = ye_core(h, a, b, v, hi + jtop, *k)?;
                if *m >= k as i64 {
                    return Ok(out);
                }
                let j = k as i64 - m - 1;
                for ((p, qe), w) in &t.terms {
                    let e = p + qe - j;
                    if e <= hi {
                        let c = binom(&q(*p), j);
                        if !c.is_zero() {
                            out.add_at(e, w, &HQ::constant(c, n));
                        }
                    }
                }
            }
        }
        Ok(out)
    }
}

pub fn kmax(h: &Heis) -> usize {
    h.n + KMAX_EXTRA
}

/// `a(x1) b(x) v` exact on `p <= h1`, `q <= h2`.
pub fn product2(h: &Heis, a: &Field, b: &Field, v: &FVec, h1: i64, h2: i64) -> Result<X2Ser> {
    let bs = b.act(h, v, h2)?;
    let mut s = X2Ser { terms: BTreeMap::new(), h1, h2 };
    let one = HQ::one(h.n);
    for (qe, w) in &bs.terms {
        let aw = a.act(h, w, h1)?;
        for (p, u) in &aw.terms {
            s.add_at(*p, *qe, u, &one);
        }
    }
    Ok(s)
}

/// `b(x) a(x1) v` exact on `p <= h1`, `q <= h2`.
pub fn product2_rev(h: &Heis, a: &Field, b: &Field, v: &FVec, h1: i64, h2: i64) -> Result<X2Ser> {
    let as_ = a.act(h, v, h1)?;
    let mut s = X2Ser { terms: BTreeMap::new(), h1, h2 };
    let one = HQ::one(h.n);
    for (p, w) in &as_.terms {
        let bw = b.act(h, w, h2)?;
        for (qe, u) in &bw.terms {
            s.add_at(*p, *qe, u, &one);
        }
    }
    Ok(s)
}

/// `T = (x1 - x)^k a(x1) b(x) v` with the smallest valid `k` (or the given
/// one), exact on the region needed for `z^j x^e` with `e + j <= budget`.
/// Valid means no exponent of `x1` below that of `a` on the weight of `v`.
pub fn ye_core(h: &Heis, a: &Field, b: &Field, v: &FVec, budget: i64, kpol: Option<usize>) -> Result<(usize, X2Ser)> {
    let wt = v.max_weight();
    let p0 = a.lo(h, wt).min(0);
    let qlo = b.lo(h, wt).min(0);
    let (h1, h2) = (budget - qlo, budget - p0);
    let mut t = product2(h, a, b, v, h1, h2)?;
    let kmx = kmax(h);
    for k in 0..=kmx {
        let valid = t.terms.keys().all(|(p, _)| *p >= p0);
        match kpol {
            Some(k0) if k0 == k => {
                if !valid {
                    return Err(Error::Unsupported(format!("k = {} leaves poles in x1 - x", k0)));
                }
                return Ok((k, t));
            }
            None if valid => return Ok((k, t)),
            _ => {}
        }
        t = t.times_diff(&Q::zero(), h.n);
    }
    Err(Error::Unsupported(format!("no k <= {} clears the poles of x1 - x", kmx)))
}

/// `Y_E(a, z) b(x) v` as `(s, e) -> v` for `z^s x^e`, `s <= smax`, `e <= hi`.
pub fn ye_series(h: &Heis, a: &Field, b: &Field, v: &FVec, smax: i64, hi: i64, kpol: Option<usize>) -> Result<(usize, BTreeMap<(i64, i64), FVec>)> {
    let kmx = kmax(h) as i64;
    let (k, t) = ye_core(h, a, b, v, hi + kmx + smax, kpol)?;
    let mut out: BTreeMap<(i64, i64), FVec> = BTreeMap::new();
    let n = h.n;
    for ((p, qe), w) in &t.terms {
        for j in 0..=(k as i64 + smax) {
            let e = p + qe - j;
            if e > hi {
                continue;
            }
            let c = binom(&q(*p), j);
            if c.is_zero() {
                continue;
            }
            let s = j - k as i64;
            let slot = out.entry((s, e)).or_insert_with(|| FVec::zero(n));
            slot.add_scaled(w, &HQ::constant(c, n));
        }
    }
    out.retain(|_, v| !v.is_zero());
    Ok((k, out))
}

/// `c` as a truncated scalar.
pub fn hq(c: Q, n: usize) -> HQ {
    HQ::constant(c, n)
}
