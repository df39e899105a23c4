//! Linear combinations of words of currents with kernel coefficients, some
//! terms carrying delta-function supports.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use num::Zero;

use crate::error::{Error, Result};
use crate::kernels::Kern;
use crate::rewrite::symbol::{canon_op, Form, Sym};
use crate::scalar::{fmt_q, Q};

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Letter {
    pub var: usize,
    pub sym: Sym,
}

impl Letter {
    pub fn new(var: usize, sym: Sym) -> Self {
        Letter { var, sym }
    }
}

/// `z^{-1} delta((w + c hbar)/z)`; the variable `z` no longer occurs in the term.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Delta {
    pub z: usize,
    pub w: usize,
    pub c: Q,
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Key {
    pub word: Vec<Letter>,
    pub deltas: Vec<Delta>,
}

impl Key {
    pub fn word(word: Vec<Letter>) -> Self {
        Key { word, deltas: Vec::new() }
    }

    pub fn live_vars(&self) -> BTreeSet<usize> {
        self.word.iter().map(|l| l.var).collect()
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Expr {
    pub names: Vec<String>,
    pub terms: BTreeMap<Key, Kern>,
    /// Rules applied to a coefficient they do not divide: the result holds
    /// only after clearing those denominators.
    pub localized: BTreeSet<String>,
    /// Lowest precision of a coefficient dropped as a truncated zero.
    pub pruned_prec: Option<i64>,
    /// Truncation of operator tables in symbols.
    pub op_trunc: i64,
}

/// Substitute `z := w + d hbar` throughout a term and record the support.
pub fn eliminate(key: &Key, coef: &Kern, z: usize, w: usize, d: &Q) -> Result<(Key, Kern)> {
    let word = key.word.iter().map(|l| if l.var == z { Letter::new(w, l.sym.shifted(d)) } else { l.clone() }).collect();
    let mut deltas: Vec<Delta> = key.deltas.iter().map(|dl| if dl.w == z { Delta { z: dl.z, w, c: &dl.c + d } } else { dl.clone() }).collect();
    deltas.push(Delta { z, w, c: d.clone() });
    deltas.sort();
    let coef = coef.substitute(z, Some(w), d)?;
    Ok((Key { word, deltas }, coef))
}

/// Each class of delta-linked variables keeps its largest variable alive.
fn reroot(mut key: Key, mut coef: Kern) -> Result<(Key, Kern)> {
    loop {
        let Some(bad) = key.deltas.iter().find(|d| d.z > d.w).cloned() else {
            return Ok((key, coef));
        };
        let root = bad.w;
        let m = key.deltas.iter().filter(|d| d.w == root).map(|d| d.z).max().unwrap();
        let link = key.deltas.iter().find(|d| d.z == m && d.w == root).cloned().unwrap();
        let rest = Key { word: key.word.clone(), deltas: key.deltas.iter().filter(|d| **d != link).cloned().collect() };
        // m = root + c hbar, so root = m - c hbar
        let (k2, c2) = eliminate(&rest, &coef, root, m, &-link.c.clone())?;
        key = k2;
        coef = c2;
    }
}

/// Merge adjacent exponentials of one base at one point; drop trivial ones.
fn merge_letters(word: Vec<Letter>, trunc: i64) -> Option<Vec<Letter>> {
    let mut out: Vec<Letter> = Vec::new();
    for mut l in word {
        match &mut l.sym.form {
            Form::Add(op) => {
                *op = canon_op(op, trunc);
                if op.is_zero() {
                    return None;
                }
            }
            Form::Grp(op) => {
                *op = canon_op(op, trunc);
                if op.is_zero() {
                    continue;
                }
            }
            Form::Field => {}
        }
        if let Some(prev) = out.last_mut() {
            if prev.var == l.var && prev.sym.base == l.sym.base && prev.sym.shift == l.sym.shift {
                if let (Form::Grp(a), Form::Grp(b)) = (&prev.sym.form, &l.sym.form) {
                    let s = canon_op(&a.add(b), trunc);
                    if s.is_zero() {
                        out.pop();
                    } else {
                        prev.sym.form = Form::Grp(s);
                    }
                    continue;
                }
            }
        }
        out.push(l);
    }
    // a merge can expose a new adjacent pair
    Some(out)
}

pub fn canonical(key: Key, coef: Kern, trunc: i64) -> Result<Option<(Key, Kern)>> {
    let (mut key, coef) = reroot(key, coef)?;
    loop {
        let before = key.word.len();
        match merge_letters(key.word, trunc) {
            None => return Ok(None),
            Some(w) => key.word = w,
        }
        if key.word.len() == before {
            break;
        }
    }
    Ok(Some((key, coef)))
}

impl Expr {
    pub fn new(names: &[&str], op_trunc: i64) -> Self {
        Expr { names: names.iter().map(|s| s.to_string()).collect(), terms: BTreeMap::new(), localized: BTreeSet::new(), pruned_prec: None, op_trunc }
    }

    pub fn nv(&self) -> usize {
        self.names.len()
    }

    pub fn empty_like(&self) -> Expr {
        Expr { terms: BTreeMap::new(), localized: BTreeSet::new(), pruned_prec: None, ..self.clone() }
    }

    /// Add `coef * key` after canonicalization.
    pub fn insert(&mut self, key: Key, coef: Kern) -> Result<()> {
        if coef.num.is_zero() && coef.prec.is_none() {
            return Ok(());
        }
        let Some((key, coef)) = canonical(key, coef, self.op_trunc)? else {
            return Ok(());
        };
        let merged = match self.terms.remove(&key) {
            Some(c) => c.add(&coef),
            None => coef,
        };
        if merged.is_zero() {
            if let Some(p) = merged.prec {
                self.pruned_prec = Some(self.pruned_prec.map_or(p, |q| q.min(p)));
            }
        } else {
            self.terms.insert(key, merged);
        }
        Ok(())
    }

    pub fn with_term(mut self, word: Vec<Letter>, coef: Kern) -> Result<Expr> {
        self.insert(Key::word(word), coef)?;
        Ok(self)
    }

    pub fn with_delta_term(mut self, word: Vec<Letter>, deltas: Vec<Delta>, coef: Kern) -> Result<Expr> {
        let mut key = Key::word(word);
        let mut coef = coef;
        for d in deltas {
            let (k, c) = eliminate(&key, &coef, d.z, d.w, &d.c)?;
            key = k;
            coef = c;
        }
        self.insert(key, coef)?;
        Ok(self)
    }

    pub fn absorb(&mut self, o: &Expr) -> Result<()> {
        for (k, c) in &o.terms {
            self.insert(k.clone(), c.clone())?;
        }
        self.localized.extend(o.localized.iter().cloned());
        if let Some(p) = o.pruned_prec {
            self.pruned_prec = Some(self.pruned_prec.map_or(p, |q| q.min(p)));
        }
        Ok(())
    }

    pub fn add(&self, o: &Expr) -> Result<Expr> {
        let mut r = self.clone();
        r.absorb(o)?;
        Ok(r)
    }

    pub fn scale(&self, k: &Kern) -> Expr {
        let mut r = self.empty_like();
        r.localized = self.localized.clone();
        r.pruned_prec = self.pruned_prec;
        for (key, c) in &self.terms {
            let p = c.mul(k);
            if !p.is_zero() {
                r.terms.insert(key.clone(), p);
            }
        }
        r
    }

    pub fn neg(&self) -> Expr {
        self.scale(&Kern::constant(self.nv(), crate::scalar::q(-1)))
    }

    pub fn sub(&self, o: &Expr) -> Result<Expr> {
        self.add(&o.neg())
    }

    /// Concatenation of words; the factors must not share variables.
    pub fn mul(&self, o: &Expr) -> Result<Expr> {
        let mut r = self.empty_like();
        for (ka, ca) in &self.terms {
            for (kb, cb) in &o.terms {
                let va: BTreeSet<usize> = ka.live_vars().into_iter().chain(ka.deltas.iter().map(|d| d.z)).collect();
                let vb: BTreeSet<usize> = kb.live_vars().into_iter().chain(kb.deltas.iter().map(|d| d.z)).collect();
                if !va.is_disjoint(&vb) {
                    return Err(Error::Rewrite("product of words sharing a variable".into()));
                }
                let mut word = ka.word.clone();
                word.extend(kb.word.iter().cloned());
                let mut deltas = ka.deltas.clone();
                deltas.extend(kb.deltas.iter().cloned());
                deltas.sort();
                r.insert(Key { word, deltas }, ca.mul(cb))?;
            }
        }
        r.localized = self.localized.union(&o.localized).cloned().collect();
        Ok(r)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn fmt_key(&self, key: &Key) -> String {
        let mut s = String::new();
        for (i, l) in key.word.iter().enumerate() {
            if i > 0 {
                s.push(' ');
            }
            s.push_str(&format!("{}({})", l.sym, self.names[l.var]));
        }
        if key.word.is_empty() {
            s.push('1');
        }
        for d in &key.deltas {
            let c = if d.c.is_zero() { String::new() } else { format!("{:+}h", Fq(&d.c)) };
            s.push_str(&format!(" delta({}={}{})", self.names[d.z], self.names[d.w], c));
        }
        s
    }

    pub fn fmt_term(&self, key: &Key, coef: &Kern) -> String {
        let names: Vec<&str> = self.names.iter().map(|s| s.as_str()).collect();
        format!("{} * {}", coef.fmt_with(&names), self.fmt_key(key))
    }
}

struct Fq<'a>(&'a Q);

impl fmt::Display for Fq<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = fmt_q(self.0);
        if f.sign_plus() && !s.starts_with('-') {
            write!(f, "+{}", s)
        } else {
            write!(f, "{}", s)
        }
    }
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self.terms.iter().map(|(k, c)| self.fmt_term(k, c)).collect();
        write!(f, "{}", parts.join("\n  + "))
    }
}
