//! The Fock space `Q[hbar]/hbar^N [x_{i,n} | n >= 1]`.

use std::collections::btree_map::Entry;
use std::collections::BTreeMap;
use std::fmt;

use crate::fock::hq::HQ;

/// Sorted multiset of generators `x_{i,n}` as `(i, n)`.
pub type Mono = Vec<(u16, u16)>;

pub fn weight(m: &Mono) -> usize {
    m.iter().map(|(_, n)| *n as usize).sum()
}

pub fn fmt_mono(m: &Mono) -> String {
    if m.is_empty() {
        return "1".into();
    }
    m.iter().map(|(i, n)| format!("x{}_{}", i + 1, n)).collect::<Vec<_>>().join("*")
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FVec {
    pub n: usize,
    pub terms: BTreeMap<Mono, HQ>,
}

impl FVec {
    pub fn zero(n: usize) -> Self {
        FVec { n, terms: BTreeMap::new() }
    }

    pub fn basis(m: Mono, n: usize) -> Self {
        let mut v = FVec::zero(n);
        v.terms.insert(m, HQ::one(n));
        v
    }

    pub fn vacuum(n: usize) -> Self {
        FVec::basis(Vec::new(), n)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add_term(&mut self, m: Mono, c: &HQ) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            Entry::Vacant(v) => {
                v.insert(c.clone());
            }
            Entry::Occupied(mut o) => {
                o.get_mut().add_assign(c);
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn add_assign(&mut self, o: &FVec) {
        for (m, c) in &o.terms {
            self.add_term(m.clone(), c);
        }
    }

    pub fn add_scaled(&mut self, o: &FVec, c: &HQ) {
        for (m, x) in &o.terms {
            self.add_term(m.clone(), &x.mul(c));
        }
    }

    pub fn scaled(&self, c: &HQ) -> FVec {
        let mut r = FVec::zero(self.n);
        r.add_scaled(self, c);
        r
    }

    pub fn sub(&self, o: &FVec) -> FVec {
        let mut r = self.clone();
        r.add_scaled(o, &HQ::one(self.n).neg());
        r
    }

    pub fn max_weight(&self) -> usize {
        self.terms.keys().map(weight).max().unwrap_or(0)
    }
}

impl fmt::Display for FVec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self.terms.iter().map(|(m, c)| format!("({}) {}", c, fmt_mono(m))).collect();
        write!(f, "{}", parts.join(" + "))
    }
}

/// Insert `x_{i,n}` into a monomial.
pub fn times(m: &Mono, i: u16, n: u16) -> Mono {
    let mut r = m.clone();
    let pos = r.partition_point(|x| *x < (i, n));
    r.insert(pos, (i, n));
    r
}

/// Monomials of weight `<= d` in `rank` colors.
pub fn basis(rank: usize, d: usize) -> Vec<Mono> {
    let gens: Vec<(u16, u16)> = (1..=d).flat_map(|n| (0..rank).map(move |i| (i as u16, n as u16))).collect();
    let mut gens = gens;
    gens.sort();
    let mut out = Vec::new();
    fn rec(gens: &[(u16, u16)], start: usize, left: usize, cur: &mut Mono, out: &mut Vec<Mono>) {
        out.push(cur.clone());
        for k in start..gens.len() {
            let w = gens[k].1 as usize;
            if w <= left {
                cur.push(gens[k]);
                rec(gens, k, left - w, cur, out);
                cur.pop();
            }
        }
    }
    rec(&gens, 0, d, &mut Vec::new(), &mut out);
    out.sort_by(|a, b| weight(a).cmp(&weight(b)).then(a.cmp(b)));
    out
}

/// Number of `colors`-colored partitions of each `d <= n`.
pub fn colored_partitions(colors: usize, n: usize) -> Vec<u64> {
    let mut p = vec![0u64; n + 1];
    p[0] = 1;
    for part in 1..=n {
        for _ in 0..colors {
            for s in part..=n {
                p[s] += p[s - part];
            }
        }
    }
    p
}
