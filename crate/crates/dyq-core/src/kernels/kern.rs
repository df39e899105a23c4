//! Rational kernels: polynomial numerators over products of linear factors
//! `v_a - v_b + c*hbar`.
//!
//! A kernel is either exact (`prec == None`) or known modulo `hbar^prec`.
//! Every linear factor with a variable part is a unit in the hbar-adic
//! completion, so truncating the numerator alone is faithful.

use std::collections::BTreeMap;
use std::fmt;

use num::{One, Zero};

use crate::error::{Error, Result};
use crate::opseries::OpSeries;
use crate::poly::Poly;
use crate::scalar::{fmt_q, pow_q, Q};

/// `v_a - v_b + c*hbar`, or `v_a + c*hbar` when `b` is `None`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Lin {
    pub a: usize,
    pub b: Option<usize>,
    pub c: Q,
}

impl Lin {
    pub fn poly(&self, nv: usize) -> Poly {
        let mut p = Poly::var(nv, self.a);
        if let Some(b) = self.b {
            p = p.sub(&Poly::var(nv, b));
        }
        p.add(&Poly::hbar(nv, 1).scale(&self.c))
    }

    pub fn involves(&self, v: usize) -> bool {
        self.a == v || self.b == Some(v)
    }

    /// Derivative of the factor with respect to `v`.
    pub fn dv(&self, v: usize) -> i64 {
        if self.a == v {
            1
        } else if self.b == Some(v) {
            -1
        } else {
            0
        }
    }
}

/// Result of normalizing a linear form: a canonical factor times a sign, or a
/// pure hbar multiple.
enum LinForm {
    Factor(Lin, bool),
    Hbar(Q),
}

fn normalize(a: usize, b: Option<usize>, c: Q) -> LinForm {
    match b {
        None => LinForm::Factor(Lin { a, b: None, c }, false),
        Some(b) if b == a => LinForm::Hbar(c),
        Some(b) if a < b => LinForm::Factor(Lin { a, b: Some(b), c }, false),
        Some(b) => LinForm::Factor(Lin { a: b, b: Some(a), c: -c }, true),
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Kern {
    pub nv: usize,
    pub num: Poly,
    pub den: BTreeMap<Lin, u32>,
    pub prec: Option<i64>,
}

fn min_prec(a: Option<i64>, b: Option<i64>) -> Option<i64> {
    match (a, b) {
        (None, x) | (x, None) => x,
        (Some(x), Some(y)) => Some(x.min(y)),
    }
}

impl Kern {
    pub fn zero(nv: usize) -> Self {
        Kern { nv, num: Poly::zero(nv), den: BTreeMap::new(), prec: None }
    }

    pub fn one(nv: usize) -> Self {
        Kern::constant(nv, Q::one())
    }

    pub fn constant(nv: usize, c: Q) -> Self {
        Kern { nv, num: Poly::constant(nv, c), den: BTreeMap::new(), prec: None }
    }

    pub fn from_poly(p: Poly) -> Self {
        Kern { nv: p.nv, num: p, den: BTreeMap::new(), prec: None }
    }

    pub fn hbar(nv: usize, k: i64) -> Self {
        Kern::from_poly(Poly::hbar(nv, k))
    }

    pub fn var(nv: usize, v: usize) -> Self {
        Kern::from_poly(Poly::var(nv, v))
    }

    /// `(v_a - v_b + c hbar)^e`.
    pub fn lin(nv: usize, a: usize, b: Option<usize>, c: Q, e: i64) -> Result<Self> {
        match normalize(a, b, c) {
            LinForm::Hbar(c) => {
                if c.is_zero() && e < 0 {
                    return Err(Error::Pole("zero linear factor".into()));
                }
                let mut p = Poly::zero(nv);
                p.add_term(e, vec![0; nv], pow_q(&c, e));
                Ok(Kern::from_poly(p))
            }
            LinForm::Factor(l, flip) => {
                let sign = if flip && e.rem_euclid(2) == 1 { -Q::one() } else { Q::one() };
                if e >= 0 {
                    Ok(Kern::from_poly(l.poly(nv).pow(e as u32).scale(&sign)))
                } else {
                    let mut den = BTreeMap::new();
                    den.insert(l, (-e) as u32);
                    Ok(Kern { nv, num: Poly::constant(nv, sign), den, prec: None })
                }
            }
        }
    }

    /// Shorthand for `(v_a - v_b + c hbar)^e` with a pair of variables.
    pub fn pair(nv: usize, a: usize, b: usize, c: Q, e: i64) -> Self {
        Kern::lin(nv, a, Some(b), c, e).expect("distinct variables")
    }

    pub fn is_exact(&self) -> bool {
        self.prec.is_none()
    }

    pub fn with_prec(&self, p: i64) -> Kern {
        let prec = min_prec(self.prec, Some(p));
        let mut k = self.clone();
        k.prec = prec;
        k.num = k.num.truncate(prec);
        k
    }

    fn lcm_den(a: &BTreeMap<Lin, u32>, b: &BTreeMap<Lin, u32>) -> BTreeMap<Lin, u32> {
        let mut r = a.clone();
        for (l, e) in b {
            let x = r.entry(l.clone()).or_insert(0);
            *x = (*x).max(*e);
        }
        r
    }

    /// Numerator over the given (larger) denominator.
    fn num_over(&self, den: &BTreeMap<Lin, u32>) -> Poly {
        let mut p = self.num.clone();
        for (l, e) in den {
            let have = self.den.get(l).cloned().unwrap_or(0);
            if *e > have {
                p = p.mul_trunc(&l.poly(self.nv).pow(*e - have), self.prec);
            }
        }
        p
    }

    pub fn add(&self, o: &Kern) -> Kern {
        assert_eq!(self.nv, o.nv);
        if o.num.is_zero() && o.prec.is_none() {
            return self.clone();
        }
        if self.num.is_zero() && self.prec.is_none() {
            return o.clone();
        }
        let prec = min_prec(self.prec, o.prec);
        let den = Kern::lcm_den(&self.den, &o.den);
        let num = self.num_over(&den).add(&o.num_over(&den)).truncate(prec);
        let mut k = Kern { nv: self.nv, num, den, prec };
        k.reduce();
        k
    }

    pub fn sub(&self, o: &Kern) -> Kern {
        self.add(&o.neg())
    }

    pub fn neg(&self) -> Kern {
        self.scale(&-Q::one())
    }

    pub fn scale(&self, c: &Q) -> Kern {
        if c.is_zero() {
            return Kern::zero(self.nv);
        }
        let mut k = self.clone();
        k.num = k.num.scale(c);
        k
    }

    /// Multiply by `hbar^k`; precision moves along.
    pub fn mul_hbar(&self, k: i64) -> Kern {
        let mut r = self.clone();
        r.num = r.num.mul_hbar(k);
        r.prec = r.prec.map(|p| p + k);
        r
    }

    pub fn hval(&self) -> Option<i64> {
        self.num.hval()
    }

    /// Lower bound for the hbar valuation (a truncated zero has valuation `prec`).
    pub fn valuation(&self) -> i64 {
        match (self.num.hval(), self.prec) {
            (Some(h), _) => h,
            (None, Some(p)) => p,
            (None, None) => 0,
        }
    }

    pub fn mul(&self, o: &Kern) -> Kern {
        assert_eq!(self.nv, o.nv);
        if (self.num.is_zero() && self.prec.is_none()) || (o.num.is_zero() && o.prec.is_none()) {
            return Kern::zero(self.nv);
        }
        let va = self.valuation();
        let vb = o.valuation();
        let prec = match (self.prec, o.prec) {
            (None, None) => None,
            (Some(p), None) => Some(p + vb),
            (None, Some(p)) => Some(p + va),
            (Some(p), Some(q)) => Some((p + vb).min(q + va)),
        };
        let num = self.num.mul_trunc(&o.num, prec);
        let mut den = self.den.clone();
        for (l, e) in &o.den {
            *den.entry(l.clone()).or_insert(0) += e;
        }
        let mut k = Kern { nv: self.nv, num, den, prec };
        k.reduce();
        k
    }

    pub fn pow(&self, n: u32) -> Kern {
        let mut r = Kern::one(self.nv);
        for _ in 0..n {
            r = r.mul(self);
        }
        r
    }

    /// Cancel linear factors that divide the numerator.
    pub fn reduce(&mut self) {
        if self.num.is_zero() {
            self.den.clear();
            return;
        }
        let lins: Vec<Lin> = self.den.keys().cloned().collect();
        for l in lins {
            loop {
                let e = *self.den.get(&l).unwrap_or(&0);
                if e == 0 {
                    break;
                }
                match divide_by_lin(&self.num, &l, self.prec) {
                    Some(qt) => {
                        self.num = qt;
                        if e == 1 {
                            self.den.remove(&l);
                        } else {
                            self.den.insert(l.clone(), e - 1);
                        }
                    }
                    None => break,
                }
            }
        }
    }

    pub fn is_zero(&self) -> bool {
        self.num.truncate(self.prec).is_zero()
    }

    /// Equality as elements of the localized, truncated ring.
    pub fn equals(&self, o: &Kern) -> bool {
        self.sub(o).is_zero()
    }

    /// Formal derivative in `v`.
    pub fn derive(&self, v: usize) -> Kern {
        let inv: Vec<(Lin, u32)> = self.den.iter().filter(|(l, _)| l.involves(v)).map(|(l, e)| (l.clone(), *e)).collect();
        let mut prod = Poly::one(self.nv);
        for (l, _) in &inv {
            prod = prod.mul(&l.poly(self.nv));
        }
        let mut num = self.num.derive(v).mul(&prod);
        for (i, (l, e)) in inv.iter().enumerate() {
            let mut rest = Poly::one(self.nv);
            for (j, (m, _)) in inv.iter().enumerate() {
                if i != j {
                    rest = rest.mul(&m.poly(self.nv));
                }
            }
            let c = Q::from_integer((*e as i64 * l.dv(v)).into());
            num = num.sub(&self.num.mul(&rest).scale(&c));
        }
        let mut den = self.den.clone();
        for (l, _) in &inv {
            *den.get_mut(l).unwrap() += 1;
        }
        let mut k = Kern { nv: self.nv, num: num.truncate(self.prec), den, prec: self.prec };
        k.reduce();
        k
    }

    /// Substitute `v := other + c hbar` (or `v := c hbar` when `other` is None).
    pub fn substitute(&self, v: usize, other: Option<usize>, c: &Q) -> Result<Kern> {
        if other == Some(v) {
            return self.shift(v, c);
        }
        let mut target = Poly::hbar(self.nv, 1).scale(c);
        if let Some(o) = other {
            target = target.add(&Poly::var(self.nv, o));
        }
        let mut out = Kern { nv: self.nv, num: self.num.substitute(v, &target).truncate(self.prec), den: BTreeMap::new(), prec: self.prec };
        for (l, e) in &self.den {
            let f = if l.a == v {
                let base = match (other, l.b) {
                    (Some(o), b) => Kern::lin(self.nv, o, b, &l.c + c, -(*e as i64)),
                    (None, Some(b)) => {
                        // c hbar - v_b + l.c hbar = -(v_b - (c + l.c) hbar)
                        Kern::lin(self.nv, b, None, -(&l.c + c), -(*e as i64)).map(|k| if e % 2 == 1 { k.neg() } else { k })
                    }
                    (None, None) => Kern::lin_hbar(self.nv, &l.c + c, -(*e as i64)),
                };
                base.map_err(|_| Error::Pole(format!("factor vanishes after substituting variable {}", v)))?
            } else if l.b == Some(v) {
                let base = match other {
                    Some(o) => Kern::lin(self.nv, l.a, Some(o), &l.c - c, -(*e as i64)),
                    None => Kern::lin(self.nv, l.a, None, &l.c - c, -(*e as i64)),
                };
                base.map_err(|_| Error::Pole(format!("factor vanishes after substituting variable {}", v)))?
            } else {
                let mut d = BTreeMap::new();
                d.insert(l.clone(), *e);
                Kern { nv: self.nv, num: Poly::one(self.nv), den: d, prec: None }
            };
            out = out.mul(&f);
        }
        out.reduce();
        Ok(out)
    }

    fn lin_hbar(nv: usize, c: Q, e: i64) -> Result<Kern> {
        if c.is_zero() && e < 0 {
            return Err(Error::Pole("zero constant factor".into()));
        }
        let mut p = Poly::zero(nv);
        p.add_term(e, vec![0; nv], pow_q(&c, e));
        Ok(Kern::from_poly(p))
    }

    /// Evaluate at `v + c hbar`.
    pub fn shift(&self, v: usize, c: &Q) -> Result<Kern> {
        if c.is_zero() {
            return Ok(self.clone());
        }
        let target = Poly::var(self.nv, v).add(&Poly::hbar(self.nv, 1).scale(c));
        let num = self.num.substitute(v, &target).truncate(self.prec);
        let mut den = BTreeMap::new();
        for (l, e) in &self.den {
            let mut l2 = l.clone();
            if l.a == v {
                l2.c = &l.c + c;
            } else if l.b == Some(v) {
                l2.c = &l.c - c;
            }
            *den.entry(l2).or_insert(0) += e;
        }
        let mut k = Kern { nv: self.nv, num, den, prec: self.prec };
        k.reduce();
        Ok(k)
    }

    fn truncated_check(&self, what: &str) -> Result<i64> {
        let p = self.prec.ok_or_else(|| Error::NotNilpotent(format!("{} needs a truncation order", what)))?;
        if let Some(h) = self.num.hval() {
            if h < 1 {
                return Err(Error::NotNilpotent(format!("{}: term of hbar order {}", what, h)));
            }
        }
        Ok(p)
    }

    /// `log(1 + self)` modulo the kernel's precision.
    pub fn log1p(&self) -> Result<Kern> {
        let p = self.truncated_check("log1p")?;
        let mut acc = Kern::zero(self.nv).with_prec(p);
        let mut pw = self.clone();
        let mut n = 1i64;
        while pw.valuation() < p {
            let c = if n % 2 == 1 { Q::one() } else { -Q::one() } / Q::from_integer(n.into());
            acc = acc.add(&pw.scale(&c));
            pw = pw.mul(self);
            n += 1;
        }
        Ok(acc)
    }

    /// `exp(self)` modulo the kernel's precision.
    pub fn exp0(&self) -> Result<Kern> {
        let p = self.truncated_check("exp0")?;
        let mut acc = Kern::one(self.nv).with_prec(p);
        let mut pw = self.clone();
        let mut n = 1u64;
        while pw.valuation() < p {
            acc = acc.add(&pw.scale(&crate::scalar::factorial(n).recip()));
            pw = pw.mul(self);
            n += 1;
        }
        Ok(acc)
    }

    /// Apply an operator series in `d/dv`.
    pub fn op_apply(&self, op: &OpSeries, v: usize) -> Kern {
        let va = self.valuation();
        let tr = op.trunc + va;
        let prec = match self.prec {
            None => tr,
            Some(p) => tr.min(p + op.kmin),
        };
        let mut acc = Kern::zero(self.nv).with_prec(prec);
        let mut derivs = vec![self.clone()];
        for ((k, j), c) in &op.terms {
            if k + va >= prec {
                continue;
            }
            while derivs.len() <= *j as usize {
                let nx = derivs.last().unwrap().derive(v);
                derivs.push(nx);
            }
            let mut t = derivs[*j as usize].mul_hbar(*k).scale(c);
            t.prec = None;
            acc = acc.add(&t.with_prec(prec));
        }
        acc
    }

    /// Reduction modulo hbar.
    pub fn classical(&self) -> Result<Kern> {
        if let Some(h) = self.num.hval() {
            if h < 0 {
                return Err(Error::Unsupported("negative hbar order in classical limit".into()));
            }
        }
        if self.prec == Some(0) {
            return Err(Error::Precision("classical limit needs precision >= 1".into()));
        }
        let mut den = BTreeMap::new();
        for (l, e) in &self.den {
            let mut l0 = l.clone();
            l0.c = Q::zero();
            *den.entry(l0).or_insert(0) += e;
        }
        let mut k = Kern { nv: self.nv, num: self.num.hbar_coeff(0), den, prec: None };
        k.reduce();
        Ok(k)
    }

    /// Rename variables: old variable `i` becomes `map[i]` in an `nv`-variable kernel.
    pub fn remap(&self, nv: usize, map: &[usize]) -> Result<Kern> {
        let mut out = Kern { nv, num: self.num.remap(nv, map), den: BTreeMap::new(), prec: self.prec };
        for (l, e) in &self.den {
            let f = Kern::lin(nv, map[l.a], l.b.map(|b| map[b]), l.c.clone(), -(*e as i64))?;
            out = out.mul(&f);
        }
        out.prec = self.prec;
        Ok(out)
    }

    pub fn fmt_with(&self, names: &[&str]) -> String {
        let mut s = format!("({})", fmt_poly(&self.num, names));
        for (l, e) in &self.den {
            s.push_str(&format!("/({})^{}", fmt_lin(l, names), e));
        }
        if let Some(p) = self.prec {
            s.push_str(&format!(" mod h^{}", p));
        }
        s
    }
}

impl fmt::Display for Kern {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let names: Vec<String> = (0..self.nv).map(|i| format!("v{}", i)).collect();
        let refs: Vec<&str> = names.iter().map(|s| s.as_str()).collect();
        write!(f, "{}", self.fmt_with(&refs))
    }
}

pub fn fmt_lin(l: &Lin, names: &[&str]) -> String {
    let mut s = names[l.a].to_string();
    if let Some(b) = l.b {
        s.push_str(&format!("-{}", names[b]));
    }
    if !l.c.is_zero() {
        let c = fmt_q(&l.c);
        if c.starts_with('-') {
            s.push_str(&format!("{}h", c));
        } else {
            s.push_str(&format!("+{}h", c));
        }
    }
    s
}

pub fn fmt_poly(p: &Poly, names: &[&str]) -> String {
    if p.is_zero() {
        return "0".into();
    }
    let mut parts = Vec::new();
    for ((h, e), c) in &p.terms {
        let mut t = fmt_q(c);
        if *h != 0 {
            t.push_str(&format!("*h^{}", h));
        }
        for (i, x) in e.iter().enumerate() {
            if *x != 0 {
                t.push_str(&format!("*{}^{}", names[i], x));
            }
        }
        parts.push(t);
    }
    parts.join(" + ")
}

/// Divide `num` by the linear factor when the remainder vanishes mod `hbar^prec`.
fn divide_by_lin(num: &Poly, l: &Lin, prec: Option<i64>) -> Option<Poly> {
    let nv = num.nv;
    // root of the factor in the variable l.a
    let mut r = Poly::hbar(nv, 1).scale(&-l.c.clone());
    if let Some(b) = l.b {
        r = r.add(&Poly::var(nv, b));
    }
    if num.min_exp(l.a).unwrap_or(0) < 0 {
        return None;
    }
    let cs = num.coeffs_in(l.a);
    if cs.is_empty() {
        return None;
    }
    let d = cs.len() - 1;
    // Horner: q_{d-1} = p_d, q_{k-1} = p_k + r q_k; remainder p_0 + r q_0
    let mut qs = vec![Poly::zero(nv); d];
    let mut carry = cs[d].clone();
    for k in (1..=d).rev() {
        qs[k - 1] = carry.clone();
        carry = cs[k - 1].add(&r.mul(&carry));
    }
    let rem = carry.truncate(prec);
    if !rem.is_zero() {
        return None;
    }
    if d == 0 {
        return None;
    }
    let mut out = Poly::zero(nv);
    for (k, qk) in qs.iter().enumerate() {
        let mut e = vec![0; nv];
        e[l.a] = k as i64;
        out = out.add(&qk.mul(&Poly::monomial(nv, 0, e, Q::one())));
    }
    Some(out.truncate(prec))
}

/// Exact cross-multiplication check of `sum lhs = sum rhs`.
pub fn rational_identity_check(lhs: &[Kern], rhs: &[Kern]) -> std::result::Result<(), Poly> {
    let nv = lhs.first().or(rhs.first()).map(|k| k.nv).unwrap_or(0);
    let mut all: Vec<Kern> = lhs.to_vec();
    all.extend(rhs.iter().map(|k| k.neg()));
    let mut den: BTreeMap<Lin, u32> = BTreeMap::new();
    for k in &all {
        den = Kern::lcm_den(&den, &k.den);
    }
    let mut diff = Poly::zero(nv);
    for k in &all {
        let exact = Kern { prec: None, ..k.clone() };
        diff = diff.add(&exact.num_over(&den));
    }
    if diff.is_zero() {
        Ok(())
    } else {
        let ((h, e), c) = diff.terms.iter().next().unwrap();
        Err(Poly::monomial(nv, *h, e.clone(), c.clone()))
    }
}
