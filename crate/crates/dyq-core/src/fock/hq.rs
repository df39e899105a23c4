//! Scalars modulo `hbar^n`.

use std::fmt;

use num::{One, Zero};

use crate::scalar::{fmt_q, Q};

/// `sum c_k hbar^k`, `k < n`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct HQ(pub Vec<Q>);

impl HQ {
    pub fn zero(n: usize) -> Self {
        HQ(vec![Q::zero(); n])
    }

    pub fn one(n: usize) -> Self {
        HQ::constant(Q::one(), n)
    }

    pub fn constant(c: Q, n: usize) -> Self {
        HQ::hbar(0, c, n)
    }

    /// `c hbar^k`.
    pub fn hbar(k: usize, c: Q, n: usize) -> Self {
        let mut v = vec![Q::zero(); n];
        if k < n {
            v[k] = c;
        }
        HQ(v)
    }

    pub fn n(&self) -> usize {
        self.0.len()
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|c| c.is_zero())
    }

    pub fn add_assign(&mut self, o: &HQ) {
        for (a, b) in self.0.iter_mut().zip(&o.0) {
            *a += b;
        }
    }

    pub fn add(&self, o: &HQ) -> HQ {
        let mut r = self.clone();
        r.add_assign(o);
        r
    }

    pub fn sub(&self, o: &HQ) -> HQ {
        self.add(&o.neg())
    }

    pub fn neg(&self) -> HQ {
        HQ(self.0.iter().map(|c| -c).collect())
    }

    pub fn scale(&self, c: &Q) -> HQ {
        HQ(self.0.iter().map(|x| x * c).collect())
    }

    pub fn mul(&self, o: &HQ) -> HQ {
        let n = self.n().min(o.n());
        let mut r = vec![Q::zero(); n];
        for (i, a) in self.0.iter().enumerate().take(n) {
            if a.is_zero() {
                continue;
            }
            for (j, b) in o.0.iter().enumerate().take(n - i) {
                if !b.is_zero() {
                    r[i + j] += a * b;
                }
            }
        }
        HQ(r)
    }

    /// Multiply by `hbar^k`.
    pub fn mul_hbar(&self, k: usize) -> HQ {
        let n = self.n();
        let mut r = vec![Q::zero(); n];
        for i in 0..n.saturating_sub(k) {
            r[i + k] = self.0[i].clone();
        }
        HQ(r)
    }

    /// Lowest nonzero hbar power.
    pub fn val(&self) -> Option<usize> {
        self.0.iter().position(|c| !c.is_zero())
    }

    /// `exp(self)` for `self` in `hbar Q[hbar]`.
    pub fn exp(&self) -> Option<HQ> {
        if !self.0.first().map_or(true, |c| c.is_zero()) {
            return None;
        }
        let n = self.n();
        let mut acc = HQ::one(n);
        let mut term = HQ::one(n);
        for k in 1..n {
            term = term.mul(self).scale(&Q::new(1.into(), (k as i64).into()));
            acc.add_assign(&term);
        }
        Some(acc)
    }
}

impl fmt::Display for HQ {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .0
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(k, c)| match k {
                0 => fmt_q(c),
                1 => format!("{}h", fmt_q(c)),
                _ => format!("{}h^{}", fmt_q(c), k),
            })
            .collect();
        if parts.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", parts.join(" + "))
        }
    }
}
