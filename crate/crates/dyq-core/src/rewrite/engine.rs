//! Normal ordering by adjacent transpositions.

use std::collections::BTreeMap;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::json;

use crate::error::{Error, Result};
use crate::kernels::Kern;
use crate::report::Outcome;
use crate::rewrite::deck::{ratio, Deck};
use crate::rewrite::expr::{eliminate, Expr, Key, Letter};
use crate::rewrite::symbol::{Kind, Sym};
use crate::scalar::Q;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Strategy {
    Leftmost,
    Rightmost,
    Seeded(u64),
}

/// Target arrangement of a word.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Order {
    /// Letters of one variable stay together; groups sorted by their rank
    /// sequence, then by variable.
    Grouped,
    /// Letters sorted by (rank, variable), with optional rank overrides by class.
    ClassMajor(BTreeMap<String, usize>),
    /// Only letters of strictly decreasing rank are exchanged; equal ranks stay put.
    Ranked(BTreeMap<String, usize>),
}

pub struct Engine<'a> {
    pub deck: &'a dyn Deck,
    pub strategy: Strategy,
    pub order: Order,
    pub max_steps: usize,
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Nature {
    Field,
    Add,
    Grp,
}

impl<'a> Engine<'a> {
    pub fn new(deck: &'a dyn Deck) -> Self {
        Engine { deck, strategy: Strategy::Leftmost, order: Order::Grouped, max_steps: 20_000 }
    }

    pub fn with_strategy(mut self, s: Strategy) -> Self {
        self.strategy = s;
        self
    }

    pub fn with_order(mut self, o: Order) -> Self {
        self.order = o;
        self
    }

    fn rank(&self, s: &Sym) -> Result<usize> {
        if let Order::ClassMajor(over) | Order::Ranked(over) = &self.order {
            if let Some(r) = over.get(&s.base.class) {
                return Ok(*r);
            }
        }
        self.deck.rank(&s.base)
    }

    fn nature(&self, s: &Sym) -> Result<Nature> {
        Ok(match (&s.form, self.deck.kind(&s.base)?) {
            (crate::rewrite::symbol::Form::Field, Kind::Field) => Nature::Field,
            (crate::rewrite::symbol::Form::Add(_), Kind::Grouplike | Kind::Additive) => Nature::Add,
            (crate::rewrite::symbol::Form::Grp(_), Kind::Grouplike | Kind::Additive) => Nature::Grp,
            _ => return Err(Error::Rewrite(format!("symbol {} does not fit its class", s))),
        })
    }

    /// Positions `i` where letters `i` and `i+1` must be exchanged.
    pub fn inversions(&self, word: &[Letter]) -> Result<Vec<usize>> {
        let mut out = Vec::new();
        match &self.order {
            Order::Grouped => {
                let mut seq: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
                for l in word {
                    seq.entry(l.var).or_default().push(self.rank(&l.sym)?);
                }
                for i in 0..word.len().saturating_sub(1) {
                    let (a, b) = (word[i].var, word[i + 1].var);
                    if a != b && (&seq[&a], a) > (&seq[&b], b) {
                        out.push(i);
                    }
                }
            }
            Order::ClassMajor(_) => {
                for i in 0..word.len().saturating_sub(1) {
                    let (a, b) = (&word[i], &word[i + 1]);
                    if a.var != b.var && (self.rank(&a.sym)?, a.var) > (self.rank(&b.sym)?, b.var) {
                        out.push(i);
                    }
                }
            }
            Order::Ranked(_) => {
                for i in 0..word.len().saturating_sub(1) {
                    let (a, b) = (&word[i], &word[i + 1]);
                    if a.var != b.var && self.rank(&a.sym)? > self.rank(&b.sym)? {
                        out.push(i);
                    }
                }
            }
        }
        Ok(out)
    }

    /// A two-variable kernel placed at the letters' variables and shifts.
    fn place(&self, k2: &Kern, nv: usize, l: &Letter, r: &Letter) -> Result<Kern> {
        k2.remap(nv, &[l.var, r.var])?.shift(l.var, &l.sym.shift)?.shift(r.var, &r.sym.shift)
    }

    /// Rewrite the pair at position `i`; returns new terms and any localized rule used.
    pub fn swap(&self, nv: usize, key: &Key, coef: &Kern, i: usize) -> Result<(Vec<(Key, Kern)>, Option<String>)> {
        let l = &key.word[i];
        let r = &key.word[i + 1];
        let mut swapped = key.word.clone();
        swapped.swap(i, i + 1);
        let sk = Key { word: swapped, deltas: key.deltas.clone() };
        let without = |drop: usize| {
            let mut w = key.word.clone();
            w.remove(drop);
            Key { word: w, deltas: key.deltas.clone() }
        };
        let (nl, nr) = (self.nature(&l.sym)?, self.nature(&r.sym)?);
        let mut out = Vec::new();
        let mut loc = None;
        match (nl, nr) {
            (Nature::Field, Nature::Field) => {
                let rule = self.deck.field_field(&l.sym.base, &r.sym.base)?;
                let k = self.place(&rule.kernel, nv, l, r)?;
                if let Some(f) = &rule.localizer {
                    let inv: Vec<(Q, i64)> = f.iter().map(|(c, e)| (c.clone(), -e)).collect();
                    let p = self.place(&ratio(&inv), nv, l, r)?;
                    let q = coef.mul(&p);
                    let grew = p.den.keys().any(|lin| q.den.get(lin).cloned().unwrap_or(0) > coef.den.get(lin).cloned().unwrap_or(0));
                    if grew && !coef.is_zero() {
                        loc = Some(rule.name.clone());
                    }
                }
                out.push((sk, coef.mul(&k)));
                for d in &rule.deltas {
                    let c = coef.mul(&self.place(&d.coef, nv, l, r)?);
                    let mut w: Vec<Letter> = key.word[..i].to_vec();
                    w.extend(d.repl.iter().map(|s| Letter::new(r.var, s.shifted(&r.sym.shift))));
                    w.extend(key.word[i + 2..].iter().cloned());
                    let dd = &r.sym.shift + &d.c - &l.sym.shift;
                    let (k2, c2) = eliminate(&Key { word: w, deltas: key.deltas.clone() }, &c, l.var, r.var, &dd)?;
                    out.push((k2, c2));
                }
            }
            (Nature::Field, _) => {
                // X(z) T(w) with T built on a non-field base
                if let (Some(p), Kind::Grouplike) = (r.sym.unit_power(), self.deck.kind(&r.sym.base)?) {
                    let f = self.deck.group_field(&r.sym.base, &l.sym.base)?;
                    let f = if p > 0 { f.inverse() } else { f };
                    let k = self.place(&f.kern(), nv, r, l)?;
                    out.push((sk, coef.mul(&k)));
                } else {
                    let c = self.place(&self.deck.log_field(&r.sym.base, &l.sym.base)?, nv, r, l)?;
                    let c = c.op_apply(r.sym.gen_op().unwrap(), r.var);
                    if nr == Nature::Add {
                        out.push((sk, coef.clone()));
                        out.push((without(i + 1), coef.mul(&c).neg()));
                    } else {
                        out.push((sk, coef.mul(&exp_kern(&c.neg())?)));
                    }
                }
            }
            (_, Nature::Field) => {
                if let (Some(p), Kind::Grouplike) = (l.sym.unit_power(), self.deck.kind(&l.sym.base)?) {
                    let f = self.deck.group_field(&l.sym.base, &r.sym.base)?;
                    let f = if p > 0 { f } else { f.inverse() };
                    let k = self.place(&f.kern(), nv, l, r)?;
                    out.push((sk, coef.mul(&k)));
                } else {
                    let c = self.place(&self.deck.log_field(&l.sym.base, &r.sym.base)?, nv, l, r)?;
                    let c = c.op_apply(l.sym.gen_op().unwrap(), l.var);
                    if nl == Nature::Add {
                        out.push((sk, coef.clone()));
                        out.push((without(i), coef.mul(&c)));
                    } else {
                        out.push((sk, coef.mul(&exp_kern(&c)?)));
                    }
                }
            }
            _ => {
                let both_units = match (l.sym.unit_power(), r.sym.unit_power()) {
                    (Some(a), Some(b)) if self.deck.kind(&l.sym.base)? == Kind::Grouplike && self.deck.kind(&r.sym.base)? == Kind::Grouplike => Some(a * b),
                    _ => None,
                };
                if let Some(p) = both_units {
                    let f = self.deck.group_exchange(&l.sym.base, &r.sym.base)?;
                    let f = if p > 0 { f } else { f.inverse() };
                    let k = self.place(&f.kern(), nv, l, r)?;
                    out.push((sk, coef.mul(&k)));
                } else {
                    let b = self.place(&self.deck.log_pair(&l.sym.base, &r.sym.base)?, nv, l, r)?;
                    let b = b.op_apply(l.sym.gen_op().unwrap(), l.var).op_apply(r.sym.gen_op().unwrap(), r.var);
                    match (nl, nr) {
                        (Nature::Add, Nature::Add) => {
                            out.push((sk, coef.clone()));
                            let mut w = key.word.clone();
                            w.drain(i..i + 2);
                            out.push((Key { word: w, deltas: key.deltas.clone() }, coef.mul(&b)));
                        }
                        (Nature::Add, Nature::Grp) => {
                            out.push((sk, coef.clone()));
                            out.push((without(i), coef.mul(&b)));
                        }
                        (Nature::Grp, Nature::Add) => {
                            out.push((sk, coef.clone()));
                            out.push((without(i + 1), coef.mul(&b)));
                        }
                        _ => out.push((sk, coef.mul(&exp_kern(&b)?))),
                    }
                }
            }
        }
        Ok((out, loc))
    }

    pub fn normal_order(&self, e: &Expr) -> Result<Expr> {
        let nv = e.nv();
        let mut pending = e.clone();
        let mut done = e.empty_like();
        done.localized = e.localized.clone();
        done.pruned_prec = e.pruned_prec;
        let mut rng = match self.strategy {
            Strategy::Seeded(s) => Some(ChaCha8Rng::seed_from_u64(s)),
            _ => None,
        };
        let mut steps = 0usize;
        while let Some((key, coef)) = pending.terms.pop_first() {
            let inv = self.inversions(&key.word)?;
            if inv.is_empty() {
                done.insert(key, coef)?;
                continue;
            }
            steps += 1;
            if steps > self.max_steps {
                return Err(Error::Rewrite(format!("termination bound of {} steps exceeded at {}", self.max_steps, e.fmt_term(&key, &coef))));
            }
            let i = match (&self.strategy, rng.as_mut()) {
                (Strategy::Leftmost, _) => inv[0],
                (Strategy::Rightmost, _) => *inv.last().unwrap(),
                (Strategy::Seeded(_), Some(g)) => *inv.choose(g).unwrap(),
                _ => inv[0],
            };
            let (terms, loc) = self.swap(nv, &key, &coef, i)?;
            if let Some(name) = loc {
                done.localized.insert(name);
            }
            for (k, c) in terms {
                pending.insert(k, c)?;
            }
        }
        if let Some(p) = pending.pruned_prec {
            done.pruned_prec = Some(done.pruned_prec.map_or(p, |q| q.min(p)));
        }
        Ok(done)
    }

    /// Normal form of `a - b`.
    pub fn difference(&self, a: &Expr, b: &Expr) -> Result<Expr> {
        self.normal_order(&a.sub(b)?)
    }
}

fn exp_kern(c: &Kern) -> Result<Kern> {
    if c.is_zero() && c.prec.is_none() {
        return Ok(Kern::one(c.nv));
    }
    if c.hval().map_or(false, |h| h < 1) {
        return Err(Error::NotNilpotent("exponent of an exchange factor has a term of hbar order below 1".into()));
    }
    match c.prec {
        Some(_) => c.exp0(),
        None => Err(Error::Precision("exponential of an exact kernel needs a truncation".into())),
    }
}

/// Pass when the normal form vanishes modulo `hbar^n`.
pub fn check_zero(e: &Expr, n: i64, exact: bool) -> Outcome {
    let info = json!({ "terms": e.terms.len() });
    for (k, c) in &e.terms {
        let t = c.with_prec(n);
        if !t.is_zero() {
            return Outcome::fail(format!("nonzero normal-form term {}", e.fmt_term(k, &t)), info);
        }
    }
    for (k, c) in &e.terms {
        if let Some(p) = c.prec {
            if p < n {
                return Outcome::out_of_window(format!("coefficient of {} known only modulo h^{} (< h^{})", e.fmt_key(k), p, n));
            }
        }
    }
    if let Some(p) = e.pruned_prec {
        if p < n {
            return Outcome::out_of_window(format!("a cancelled coefficient was known only modulo h^{} (< h^{})", p, n));
        }
    }
    if exact && !e.localized.is_empty() {
        let names: Vec<String> = e.localized.iter().cloned().collect();
        return Outcome::fail(format!("holds only after clearing denominators of localized rules {}", names.join(", ")), info);
    }
    Outcome::pass(info)
}
