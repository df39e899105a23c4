//! Sparse Laurent polynomials in `hbar` and a fixed list of variables.

use std::collections::BTreeMap;

use num::{One, Zero};

use crate::scalar::{pow_q, Q};

/// Monomial key: (hbar power, variable exponents).
pub type Mono = (i64, Vec<i64>);

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Poly {
    pub nv: usize,
    pub terms: BTreeMap<Mono, Q>,
}

impl Poly {
    pub fn zero(nv: usize) -> Self {
        Poly { nv, terms: BTreeMap::new() }
    }

    pub fn constant(nv: usize, c: Q) -> Self {
        let mut p = Poly::zero(nv);
        p.add_term(0, vec![0; nv], c);
        p
    }

    pub fn one(nv: usize) -> Self {
        Poly::constant(nv, Q::one())
    }

    pub fn var(nv: usize, v: usize) -> Self {
        let mut e = vec![0; nv];
        e[v] = 1;
        Poly::monomial(nv, 0, e, Q::one())
    }

    pub fn hbar(nv: usize, k: i64) -> Self {
        Poly::monomial(nv, k, vec![0; nv], Q::one())
    }

    pub fn monomial(nv: usize, h: i64, e: Vec<i64>, c: Q) -> Self {
        let mut p = Poly::zero(nv);
        p.add_term(h, e, c);
        p
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add_term(&mut self, h: i64, e: Vec<i64>, c: Q) {
        if c.is_zero() {
            return;
        }
        let key = (h, e);
        let slot = self.terms.entry(key.clone()).or_insert_with(Q::zero);
        *slot += c;
        if slot.is_zero() {
            self.terms.remove(&key);
        }
    }

    pub fn coeff(&self, h: i64, e: &[i64]) -> Q {
        self.terms.get(&(h, e.to_vec())).cloned().unwrap_or_else(Q::zero)
    }

    pub fn add(&self, o: &Poly) -> Poly {
        let mut r = self.clone();
        for ((h, e), c) in &o.terms {
            r.add_term(*h, e.clone(), c.clone());
        }
        r
    }

    pub fn sub(&self, o: &Poly) -> Poly {
        self.add(&o.neg())
    }

    pub fn neg(&self) -> Poly {
        self.scale(&-Q::one())
    }

    pub fn scale(&self, c: &Q) -> Poly {
        if c.is_zero() {
            return Poly::zero(self.nv);
        }
        Poly { nv: self.nv, terms: self.terms.iter().map(|(k, v)| (k.clone(), v * c)).collect() }
    }

    pub fn mul(&self, o: &Poly) -> Poly {
        let mut r = Poly::zero(self.nv);
        for ((h1, e1), c1) in &self.terms {
            for ((h2, e2), c2) in &o.terms {
                let e: Vec<i64> = e1.iter().zip(e2).map(|(a, b)| a + b).collect();
                r.add_term(h1 + h2, e, c1 * c2);
            }
        }
        r
    }

    /// Product keeping only hbar powers below `prec`.
    pub fn mul_trunc(&self, o: &Poly, prec: Option<i64>) -> Poly {
        let Some(p) = prec else { return self.mul(o) };
        let mut r = Poly::zero(self.nv);
        for ((h1, e1), c1) in &self.terms {
            for ((h2, e2), c2) in &o.terms {
                if h1 + h2 >= p {
                    continue;
                }
                let e: Vec<i64> = e1.iter().zip(e2).map(|(a, b)| a + b).collect();
                r.add_term(h1 + h2, e, c1 * c2);
            }
        }
        r
    }

    pub fn pow(&self, n: u32) -> Poly {
        let mut r = Poly::one(self.nv);
        for _ in 0..n {
            r = r.mul(self);
        }
        r
    }

    pub fn mul_hbar(&self, k: i64) -> Poly {
        Poly { nv: self.nv, terms: self.terms.iter().map(|((h, e), c)| ((h + k, e.clone()), c.clone())).collect() }
    }

    pub fn truncate(&self, prec: Option<i64>) -> Poly {
        match prec {
            None => self.clone(),
            Some(p) => Poly { nv: self.nv, terms: self.terms.iter().filter(|((h, _), _)| *h < p).map(|(k, v)| (k.clone(), v.clone())).collect() },
        }
    }

    /// Lowest hbar power present.
    pub fn hval(&self) -> Option<i64> {
        self.terms.keys().map(|(h, _)| *h).min()
    }

    pub fn hmax(&self) -> Option<i64> {
        self.terms.keys().map(|(h, _)| *h).max()
    }

    pub fn derive(&self, v: usize) -> Poly {
        let mut r = Poly::zero(self.nv);
        for ((h, e), c) in &self.terms {
            if e[v] != 0 {
                let mut e2 = e.clone();
                e2[v] -= 1;
                r.add_term(*h, e2, c * Q::from_integer(e[v].into()));
            }
        }
        r
    }

    /// Replace variable `v` by the polynomial `lin`. Requires nonnegative exponents in `v`.
    pub fn substitute(&self, v: usize, lin: &Poly) -> Poly {
        let mut cache: Vec<Poly> = vec![Poly::one(self.nv)];
        let mut r = Poly::zero(self.nv);
        for ((h, e), c) in &self.terms {
            let k = e[v];
            assert!(k >= 0, "substitution into a negative power");
            while cache.len() <= k as usize {
                let next = cache.last().unwrap().mul(lin);
                cache.push(next);
            }
            let mut e2 = e.clone();
            e2[v] = 0;
            let m = Poly::monomial(self.nv, *h, e2, c.clone());
            r = r.add(&m.mul(&cache[k as usize]));
        }
        r
    }

    /// Set `hbar` to a number (only used for hbar-free checks and classical limits).
    pub fn hbar_coeff(&self, k: i64) -> Poly {
        let mut r = Poly::zero(self.nv);
        for ((h, e), c) in &self.terms {
            if *h == k {
                r.add_term(0, e.clone(), c.clone());
            }
        }
        r
    }

    pub fn eval_var(&self, v: usize, x: &Q) -> Poly {
        let mut r = Poly::zero(self.nv);
        for ((h, e), c) in &self.terms {
            let mut e2 = e.clone();
            e2[v] = 0;
            r.add_term(*h, e2, c * pow_q(x, e[v]));
        }
        r
    }

    pub fn min_exp(&self, v: usize) -> Option<i64> {
        self.terms.keys().map(|(_, e)| e[v]).min()
    }

    pub fn max_exp(&self, v: usize) -> Option<i64> {
        self.terms.keys().map(|(_, e)| e[v]).max()
    }

    /// Coefficient list in powers of `v` (nonnegative exponents).
    pub fn coeffs_in(&self, v: usize) -> Vec<Poly> {
        let d = self.max_exp(v).unwrap_or(-1);
        let mut out = vec![Poly::zero(self.nv); (d + 1).max(0) as usize];
        for ((h, e), c) in &self.terms {
            let mut e2 = e.clone();
            let k = e2[v];
            e2[v] = 0;
            out[k as usize].add_term(*h, e2, c.clone());
        }
        out
    }

    /// Extend with extra trailing variables.
    pub fn widen(&self, nv: usize) -> Poly {
        let mut r = Poly::zero(nv);
        for ((h, e), c) in &self.terms {
            let mut e2 = e.clone();
            e2.resize(nv, 0);
            r.add_term(*h, e2, c.clone());
        }
        r
    }

    /// Permute variables: new variable index of old `i` is `map[i]`.
    pub fn remap(&self, nv: usize, map: &[usize]) -> Poly {
        let mut r = Poly::zero(nv);
        for ((h, e), c) in &self.terms {
            let mut e2 = vec![0; nv];
            for (i, x) in e.iter().enumerate() {
                e2[map[i]] += x;
            }
            r.add_term(*h, e2, c.clone());
        }
        r
    }

    pub fn is_const(&self) -> Option<Q> {
        if self.is_zero() {
            return Some(Q::zero());
        }
        if self.terms.len() == 1 {
            let ((h, e), c) = self.terms.iter().next().unwrap();
            if *h == 0 && e.iter().all(|x| *x == 0) {
                return Some(c.clone());
            }
        }
        None
    }
}
