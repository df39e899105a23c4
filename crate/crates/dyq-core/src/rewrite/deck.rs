//! Rule decks. Kernels are two-variable kernels in `(x0, x1)`: `x0` is the
//! argument of the left symbol, `x1` that of the right one, both before
//! symbol shifts.

use num::One;
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::kernels::Kern;
use crate::rewrite::symbol::{Base, Kind, Sym};
use crate::scalar::{fmt_q, Q};

/// `S(x0) T(x1) = kernel T(x1) S(x0) + sum of delta terms`.
#[derive(Clone, Debug)]
pub struct FieldRule {
    pub name: String,
    pub kernel: Kern,
    /// Factors `(x0 - x1 + c hbar)^e` of the polynomial the rule holds after
    /// multiplying by; `None` for an exact rule.
    pub localizer: Option<Vec<(Q, i64)>>,
    pub deltas: Vec<DeltaRule>,
}

/// `coef(x0, x1) x0^{-1} delta((x1 + c hbar)/x0) repl(x1)`.
#[derive(Clone, Debug)]
pub struct DeltaRule {
    pub coef: Kern,
    pub c: Q,
    pub repl: Vec<Sym>,
}

/// `scale * prod (x0 - x1 + c hbar)^e`.
#[derive(Clone, Debug, PartialEq)]
pub struct LinRatio {
    pub scale: Q,
    pub facs: Vec<(Q, i64)>,
}

impl LinRatio {
    pub fn one() -> Self {
        LinRatio { scale: Q::one(), facs: Vec::new() }
    }

    pub fn new(facs: Vec<(Q, i64)>) -> Self {
        LinRatio { scale: Q::one(), facs }
    }

    /// From factors `(x1 - x0 + c hbar)^e`.
    pub fn rev(facs: Vec<(Q, i64)>) -> Self {
        let odd: i64 = facs.iter().map(|(_, e)| *e).sum::<i64>().rem_euclid(2);
        let scale = if odd == 1 { -Q::one() } else { Q::one() };
        LinRatio { scale, facs: facs.into_iter().map(|(c, e)| (-c, e)).collect() }
    }

    pub fn inverse(&self) -> Self {
        LinRatio { scale: self.scale.recip(), facs: self.facs.iter().map(|(c, e)| (c.clone(), -e)).collect() }
    }

    pub fn pow(&self, n: i64) -> Self {
        let base = if n < 0 { self.inverse() } else { self.clone() };
        let m = n.unsigned_abs() as i64;
        LinRatio { scale: crate::scalar::pow_q(&base.scale, m), facs: base.facs.iter().map(|(c, e)| (c.clone(), e * m)).collect() }
    }

    pub fn kern(&self) -> Kern {
        ratio(&self.facs).scale(&self.scale)
    }
}

pub trait Deck: Sync {
    fn name(&self) -> String;

    fn kind(&self, b: &Base) -> Result<Kind>;

    fn rank(&self, b: &Base) -> Result<usize>;

    /// Working precision for derived (logarithmic) kernels.
    fn prec(&self) -> i64;

    /// Exact kernel of `G1(x0) G2(x1) = K G2(x1) G1(x0)` for grouplike bases.
    fn group_exchange(&self, a: &Base, b: &Base) -> Result<LinRatio> {
        Err(Error::MissingRule(format!("no grouplike exchange for {:?}, {:?}", a.class, b.class)))
    }

    /// Exact kernel of `G(x0) X(x1) = K X(x1) G(x0)`.
    fn group_field(&self, g: &Base, x: &Base) -> Result<LinRatio> {
        Err(Error::MissingRule(format!("no grouplike-field exchange for {:?}, {:?}", g.class, x.class)))
    }

    /// Central bracket of the additive generators of two non-field bases.
    /// For grouplike bases this is `log` of the exchange kernel.
    fn log_pair(&self, a: &Base, b: &Base) -> Result<Kern> {
        derived_log(&self.group_exchange(a, b)?.kern(), self.prec())
    }

    /// `[gen(x0), X(x1)] = c X(x1)`; returns `c`.
    fn log_field(&self, g: &Base, x: &Base) -> Result<Kern> {
        derived_log(&self.group_field(g, x)?.kern(), self.prec())
    }

    fn field_field(&self, a: &Base, b: &Base) -> Result<FieldRule>;

    /// Audit listing of the deck: classes, order and sample kernels.
    fn describe(&self) -> Value {
        json!({ "deck": self.name() })
    }
}

/// `log K` for an exact kernel with constant term 1, modulo `hbar^prec`.
pub fn derived_log(k: &Kern, prec: i64) -> Result<Kern> {
    let one = Kern::one(k.nv);
    let d = k.sub(&one).with_prec(prec);
    if d.is_zero() {
        return Ok(Kern::zero(k.nv));
    }
    d.log1p().map_err(|e| Error::Rewrite(format!("exchange kernel is not of the form 1 + O(hbar): {}", e)))
}

/// `prod (x0 - x1 + c hbar)^e` in two variables.
pub fn ratio(facs: &[(Q, i64)]) -> Kern {
    let mut k = Kern::one(2);
    for (c, e) in facs {
        k = k.mul(&Kern::pair(2, 0, 1, c.clone(), *e));
    }
    k
}

/// `prod (x1 - x0 + c hbar)^e`.
pub fn ratio_rev(facs: &[(Q, i64)]) -> Kern {
    let mut k = Kern::one(2);
    for (c, e) in facs {
        k = k.mul(&Kern::pair(2, 1, 0, c.clone(), *e));
    }
    k
}

pub fn fmt_kern2(k: &Kern) -> String {
    k.fmt_with(&["z", "w"])
}

pub fn fmt_rule(r: &FieldRule) -> Value {
    json!({
        "name": r.name,
        "kernel": fmt_kern2(&r.kernel),
        "localizer": r.localizer.as_ref().map(|f| fmt_kern2(&ratio(f))),
        "deltas": r.deltas.iter().map(|d| json!({
            "coef": fmt_kern2(&d.coef),
            "shift": fmt_q(&d.c),
            "replacement": d.repl.iter().map(|s| s.to_string()).collect::<Vec<_>>(),
        })).collect::<Vec<_>>(),
    })
}
