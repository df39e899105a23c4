//! The DY-original, DY-new and abstract-Serre decks.

use num::Zero;
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::gcm::Gcm;
use crate::kernels::Kern;
use crate::opseries::OpSeries;
use crate::rewrite::deck::{fmt_kern2, fmt_rule, ratio, Deck, DeltaRule, FieldRule, LinRatio};
use crate::rewrite::symbol::{Base, Kind, Sym};
use crate::scalar::{as_i64, fmt_q, q, qf, Q};

/// `1/(2 hbar)` in two variables.
fn half_over_hbar() -> Kern {
    Kern::constant(2, qf(1, 2)).mul_hbar(-1)
}

/// `[m]_{q^{d_v}}` applied to `k`: a finite sum of shifts for integer `m`.
pub fn qbracket_apply(k: &Kern, m: &Q, v: usize, trunc: i64) -> Result<Kern> {
    match as_i64(m) {
        Some(mi) => {
            let a = mi.abs();
            let mut acc = Kern::zero(k.nv);
            for j in 0..a {
                acc = acc.add(&k.shift(v, &q(a - 1 - 2 * j))?);
            }
            Ok(if mi < 0 { acc.neg() } else { acc })
        }
        None => Ok(k.op_apply(&OpSeries::qbracket(m, trunc), v)),
    }
}

fn node(b: &Base) -> Result<usize> {
    b.node.ok_or_else(|| Error::Rewrite(format!("class {} needs a node index", b.class)))
}

fn sign_of(class: &str) -> i64 {
    if class.ends_with('+') {
        1
    } else {
        -1
    }
}

/// `(z - w - s a hbar) x_i(z) x_j(w) = (z - w + s a hbar) x_j(w) x_i(z)`.
pub fn same_sign_rule(sign: i64, a: i64, exact_commute: bool, tag: &str) -> FieldRule {
    let a = q(a * sign);
    if a.is_zero() && exact_commute {
        return FieldRule { name: format!("{}-commute", tag), kernel: Kern::one(2), localizer: None, deltas: vec![] };
    }
    FieldRule { name: format!("{}-exchange", tag), kernel: ratio(&[(a.clone(), 1), (-a.clone(), -1)]), localizer: Some(vec![(-a, 1)]), deltas: vec![] }
}

/// Relations of the double Yangian in terms of `H^\pm_i, X^\pm_i`.
pub struct DyOriginal {
    pub gcm: Gcm,
    pub kappa: Q,
    pub prec: i64,
    /// Keep the exact commutation for `a_ij = 0` pairs.
    pub dy7: bool,
}

impl DyOriginal {
    fn a(&self, a: &Base, b: &Base) -> Result<i64> {
        Ok(self.gcm.a(node(a)?, node(b)?))
    }

    fn four_factor(&self, a: i64) -> Vec<(Q, i64)> {
        let (a, k) = (q(a), self.kappa.clone());
        vec![(-&a - &k, 1), (&a + &k, 1), (&a - &k, -1), (-&a + &k, -1)]
    }
}

impl Deck for DyOriginal {
    fn name(&self) -> String {
        "DY-original".into()
    }

    fn kind(&self, b: &Base) -> Result<Kind> {
        match b.class.as_str() {
            "H+" | "H-" => Ok(Kind::Grouplike),
            "X+" | "X-" => Ok(Kind::Field),
            c => Err(Error::MissingRule(format!("class {} is not in the DY-original deck", c))),
        }
    }

    fn rank(&self, b: &Base) -> Result<usize> {
        Ok(match b.class.as_str() {
            "H-" => 0,
            "H+" => 1,
            "X-" => 2,
            "X+" => 3,
            c => return Err(Error::MissingRule(format!("class {} is not in the DY-original deck", c))),
        })
    }

    fn prec(&self) -> i64 {
        self.prec
    }

    fn group_exchange(&self, a: &Base, b: &Base) -> Result<LinRatio> {
        let aij = self.a(a, b)?;
        match (a.class.as_str(), b.class.as_str()) {
            ("H+", "H+") | ("H-", "H-") => Ok(LinRatio::one()),
            ("H+", "H-") => Ok(LinRatio::new(self.four_factor(aij))),
            ("H-", "H+") => Ok(LinRatio::rev(self.four_factor(aij)).inverse()),
            _ => Err(Error::MissingRule(format!("no exchange for {} and {}", a.class, b.class))),
        }
    }

    fn group_field(&self, g: &Base, x: &Base) -> Result<LinRatio> {
        let a = q(self.a(g, x)?);
        let s = sign_of(&x.class);
        let hk = &self.kappa * qf(s, 2);
        match g.class.as_str() {
            "H+" => Ok(LinRatio::new(vec![(&a + &hk, 1), (-&a + &hk, -1)]).pow(s)),
            "H-" => Ok(LinRatio::rev(vec![(-&a + &hk, 1), (&a + &hk, -1)]).pow(s)),
            c => Err(Error::MissingRule(format!("no grouplike-field exchange for {}", c))),
        }
    }

    fn field_field(&self, a: &Base, b: &Base) -> Result<FieldRule> {
        let (i, j) = (node(a)?, node(b)?);
        let aij = self.gcm.a(i, j);
        let k = self.kappa.clone();
        match (a.class.as_str(), b.class.as_str()) {
            ("X+", "X-") => {
                let mut deltas = vec![];
                if i == j {
                    deltas.push(DeltaRule {
                        coef: half_over_hbar(),
                        c: k.clone(),
                        repl: vec![Sym::grp("H+", Some(i), &k / q(2), OpSeries::identity(self.prec))],
                    });
                    deltas.push(DeltaRule {
                        coef: half_over_hbar().neg(),
                        c: -k.clone(),
                        repl: vec![Sym::grp("H-", Some(i), -&k / q(2), OpSeries::identity(self.prec))],
                    });
                }
                Ok(FieldRule { name: "X+X- commutator".into(), kernel: Kern::one(2), localizer: None, deltas })
            }
            ("X-", "X+") => {
                let mut deltas = vec![];
                if i == j {
                    deltas.push(DeltaRule {
                        coef: half_over_hbar().neg(),
                        c: -k.clone(),
                        repl: vec![Sym::grp("H+", Some(i), -&k / q(2), OpSeries::identity(self.prec))],
                    });
                    deltas.push(DeltaRule {
                        coef: half_over_hbar(),
                        c: k.clone(),
                        repl: vec![Sym::grp("H-", Some(i), &k / q(2), OpSeries::identity(self.prec))],
                    });
                }
                Ok(FieldRule { name: "X-X+ commutator".into(), kernel: Kern::one(2), localizer: None, deltas })
            }
            ("X+", "X+") => Ok(same_sign_rule(1, aij, self.dy7, "X+X+")),
            ("X-", "X-") => Ok(same_sign_rule(-1, aij, self.dy7, "X-X-")),
            _ => Err(Error::MissingRule(format!("no field rule for {} and {}", a.class, b.class))),
        }
    }

    fn describe(&self) -> Value {
        let mut rules = vec![];
        let n = self.gcm.size();
        for i in 0..n {
            for j in 0..n {
                for (ca, cb) in [("X+", "X-"), ("X+", "X+"), ("X-", "X-")] {
                    if let Ok(r) = self.field_field(&Base::new(ca, Some(i)), &Base::new(cb, Some(j))) {
                        rules.push(json!({ "pair": [format!("{}_{}", ca, i + 1), format!("{}_{}", cb, j + 1)], "rule": fmt_rule(&r) }));
                    }
                }
                for (ga, gb) in [("H+", "H-")] {
                    if let Ok(r) = self.group_exchange(&Base::new(ga, Some(i)), &Base::new(gb, Some(j))) {
                        rules.push(json!({ "pair": [format!("{}_{}", ga, i + 1), format!("{}_{}", gb, j + 1)], "kernel": fmt_kern2(&r.kern()) }));
                    }
                }
                for g in ["H+", "H-"] {
                    for x in ["X+", "X-"] {
                        if let Ok(r) = self.group_field(&Base::new(g, Some(i)), &Base::new(x, Some(j))) {
                            rules.push(json!({ "pair": [format!("{}_{}", g, i + 1), format!("{}_{}", x, j + 1)], "kernel": fmt_kern2(&r.kern()) }));
                        }
                    }
                }
            }
        }
        json!({
            "deck": self.name(),
            "order": ["H-", "H+", "X-", "X+"],
            "kappa": fmt_q(&self.kappa),
            "exact_commute_for_orthogonal_pairs": self.dy7,
            "rules": rules,
        })
    }
}

/// Relations of the new currents `h^\pm_i, x^\pm_i`.
pub struct DyNew {
    pub gcm: Gcm,
    pub kappa: Q,
    pub prec: i64,
    pub exact_commute: bool,
}

impl DyNew {
    /// `C_i(w)` as a word at one point.
    pub fn c_word(&self, i: usize) -> Vec<Sym> {
        let g = OpSeries::g(self.prec + 6).neg();
        vec![Sym::grp("h-", Some(i), -self.kappa.clone(), g.clone()), Sym::grp("h+", Some(i), -self.kappa.clone(), g)]
    }
}

impl Deck for DyNew {
    fn name(&self) -> String {
        "DY-new".into()
    }

    fn kind(&self, b: &Base) -> Result<Kind> {
        match b.class.as_str() {
            "h+" | "h-" => Ok(Kind::Additive),
            "x+" | "x-" => Ok(Kind::Field),
            c => Err(Error::MissingRule(format!("class {} is not in the DY-new deck", c))),
        }
    }

    fn rank(&self, b: &Base) -> Result<usize> {
        Ok(match b.class.as_str() {
            "h-" => 0,
            "h+" => 1,
            "x-" => 2,
            "x+" => 3,
            c => return Err(Error::MissingRule(format!("class {} is not in the DY-new deck", c))),
        })
    }

    fn prec(&self) -> i64 {
        self.prec
    }

    fn log_pair(&self, a: &Base, b: &Base) -> Result<Kern> {
        let aij = q(self.gcm.a(node(a)?, node(b)?));
        let t = self.prec + 2;
        match (a.class.as_str(), b.class.as_str()) {
            ("h+", "h+") | ("h-", "h-") => Ok(Kern::zero(2)),
            ("h+", "h-") => {
                let k = Kern::pair(2, 0, 1, self.kappa.clone(), -2);
                qbracket_apply(&qbracket_apply(&k, &self.kappa, 1, t)?, &aij, 1, t)
            }
            ("h-", "h+") => {
                let k = Kern::pair(2, 1, 0, self.kappa.clone(), -2);
                Ok(qbracket_apply(&qbracket_apply(&k, &self.kappa, 0, t)?, &aij, 0, t)?.neg())
            }
            _ => Err(Error::MissingRule(format!("no bracket for {} and {}", a.class, b.class))),
        }
    }

    fn log_field(&self, g: &Base, x: &Base) -> Result<Kern> {
        let aij = q(self.gcm.a(node(g)?, node(x)?));
        let s = q(sign_of(&x.class));
        let t = self.prec + 2;
        let k = match g.class.as_str() {
            "h+" => Kern::pair(2, 0, 1, self.kappa.clone(), -1),
            "h-" => Kern::pair(2, 1, 0, self.kappa.clone(), -1),
            c => return Err(Error::MissingRule(format!("no field bracket for {}", c))),
        };
        Ok(qbracket_apply(&k, &aij, 1, t)?.scale(&s))
    }

    fn field_field(&self, a: &Base, b: &Base) -> Result<FieldRule> {
        let (i, j) = (node(a)?, node(b)?);
        let aij = self.gcm.a(i, j);
        match (a.class.as_str(), b.class.as_str()) {
            ("x+", "x-") => {
                let qa = q(aij);
                let mut deltas = vec![];
                if i == j {
                    deltas.push(DeltaRule { coef: half_over_hbar(), c: Q::zero(), repl: vec![] });
                    deltas.push(DeltaRule { coef: half_over_hbar().neg(), c: -&self.kappa * q(2), repl: self.c_word(i) });
                }
                Ok(FieldRule { name: "x+x- exchange".into(), kernel: LinRatio::rev(vec![(qa.clone(), 1), (-qa, -1)]).kern(), localizer: None, deltas })
            }
            ("x+", "x+") => Ok(same_sign_rule(1, aij, self.exact_commute, "x+x+")),
            ("x-", "x-") => Ok(same_sign_rule(1, aij, self.exact_commute, "x-x-")),
            _ => Err(Error::MissingRule(format!("no field rule for {} and {}", a.class, b.class))),
        }
    }

    fn describe(&self) -> Value {
        let mut rules = vec![];
        let n = self.gcm.size();
        for i in 0..n {
            for j in 0..n {
                for (ca, cb) in [("x+", "x-"), ("x+", "x+"), ("x-", "x-")] {
                    if let Ok(r) = self.field_field(&Base::new(ca, Some(i)), &Base::new(cb, Some(j))) {
                        rules.push(json!({ "pair": [format!("{}_{}", ca, i + 1), format!("{}_{}", cb, j + 1)], "rule": fmt_rule(&r) }));
                    }
                }
                if let Ok(k) = self.log_pair(&Base::new("h+", Some(i)), &Base::new("h-", Some(j))) {
                    rules.push(json!({ "pair": [format!("h+_{}", i + 1), format!("h-_{}", j + 1)], "bracket": fmt_kern2(&k) }));
                }
            }
        }
        json!({ "deck": self.name(), "order": ["h-", "h+", "x-", "x+"], "kappa": fmt_q(&self.kappa), "rules": rules })
    }
}

/// Two currents `a`, `b` with the hypotheses of the Serre characterizations.
pub struct AbstractSerre {
    pub nu: Q,
    /// Use the rule moving `a` past `a_0 b`; otherwise a placeholder
    /// commutation that leaves the residual condition visible.
    pub a_a0b: bool,
    /// Added to the hbar offset of the `a`-`a_0 b` kernel numerator (negative control).
    pub perturb: Q,
    /// All kernels 1 and no delta terms.
    pub commuting: bool,
}

impl AbstractSerre {
    pub fn new(nu: Q) -> Self {
        AbstractSerre { nu, a_a0b: true, perturb: Q::zero(), commuting: false }
    }
}

impl Deck for AbstractSerre {
    fn name(&self) -> String {
        "abstract-Serre".into()
    }

    fn kind(&self, b: &Base) -> Result<Kind> {
        match b.class.as_str() {
            "a" | "b" | "a0b" | "a0a0b" => Ok(Kind::Field),
            c => Err(Error::MissingRule(format!("class {} is not in the abstract-Serre deck", c))),
        }
    }

    fn rank(&self, b: &Base) -> Result<usize> {
        Ok(match b.class.as_str() {
            "b" => 0,
            "a0b" => 1,
            "a0a0b" => 2,
            "a" => 3,
            c => return Err(Error::MissingRule(format!("class {} is not in the abstract-Serre deck", c))),
        })
    }

    fn prec(&self) -> i64 {
        8
    }

    fn field_field(&self, a: &Base, b: &Base) -> Result<FieldRule> {
        let nu = self.nu.clone();
        if self.commuting {
            return Ok(FieldRule { name: "commute".into(), kernel: Kern::one(2), localizer: None, deltas: vec![] });
        }
        match (a.class.as_str(), b.class.as_str()) {
            ("a", "a") => Ok(FieldRule {
                name: "a-a exchange".into(),
                kernel: ratio(&[(&nu * q(2), 1), (-&nu * q(2), -1)]),
                localizer: Some(vec![(-&nu * q(2), 1)]),
                deltas: vec![],
            }),
            ("a", "b") => Ok(FieldRule {
                name: "a-b exchange".into(),
                kernel: LinRatio::rev(vec![(nu.clone(), 1), (-nu.clone(), -1)]).kern(),
                localizer: None,
                deltas: vec![DeltaRule { coef: Kern::one(2), c: -nu.clone(), repl: vec![Sym::field("a0b", None, Q::zero())] }],
            }),
            ("a", "a0b") if self.a_a0b => Ok(FieldRule {
                name: "a-a0b exchange".into(),
                kernel: LinRatio::rev(vec![(-&nu * q(3) + &self.perturb, 1), (-nu.clone(), -1)]).kern(),
                localizer: None,
                deltas: vec![DeltaRule { coef: Kern::one(2), c: -nu, repl: vec![Sym::field("a0a0b", None, Q::zero())] }],
            }),
            ("a", "a0b") => Ok(FieldRule { name: "a-a0b placeholder".into(), kernel: Kern::one(2), localizer: None, deltas: vec![] }),
            _ => Err(Error::MissingRule(format!("no rule for {} and {}", a.class, b.class))),
        }
    }

    fn describe(&self) -> Value {
        let mut rules = vec![];
        for (x, y) in [("a", "a"), ("a", "b"), ("a", "a0b")] {
            if let Ok(r) = self.field_field(&Base::new(x, None), &Base::new(y, None)) {
                rules.push(json!({ "pair": [x, y], "rule": fmt_rule(&r) }));
            }
        }
        json!({ "deck": self.name(), "order": ["b", "a0b", "a0a0b", "a"], "nu": fmt_q(&self.nu), "rules": rules })
    }
}
