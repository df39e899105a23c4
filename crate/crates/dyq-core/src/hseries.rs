//! Windowed, hbar-truncated multivariate Laurent series.

use std::collections::BTreeMap;

use num::{One, Zero};
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::poly::Poly;
use crate::scalar::{binom, factorial, fmt_q, parse_q, q, Q};
use crate::window::{window_after, Window, WindowOp, INF, NEG_INF};

#[derive(Clone, Debug, PartialEq)]
pub struct HSeries {
    pub window: Window,
    pub poly: Poly,
}

/// A coefficient mismatch between two series.
#[derive(Clone, Debug, PartialEq)]
pub struct Witness {
    pub hpow: i64,
    pub exps: Vec<i64>,
    pub left: Q,
    pub right: Q,
}

impl std::fmt::Display for Witness {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "hbar^{} x^{:?}: {} vs {}", self.hpow, self.exps, fmt_q(&self.left), fmt_q(&self.right))
    }
}

fn ext(p: &Poly, v: usize) -> (i64, i64) {
    match (p.min_exp(v), p.max_exp(v)) {
        (Some(a), Some(b)) => (a, b),
        _ => (0, 0),
    }
}

impl HSeries {
    /// Build a series; keys outside the window are dropped.
    pub fn new(window: Window, poly: Poly) -> Self {
        assert_eq!(window.nv(), poly.nv);
        let mut s = HSeries { window, poly };
        s.clip();
        s
    }

    pub fn zero(window: Window) -> Self {
        let nv = window.nv();
        HSeries { window, poly: Poly::zero(nv) }
    }

    /// A Laurent polynomial known exactly (complete window) up to `n`.
    pub fn exact(vars: &[&str], poly: Poly, n: i64) -> Self {
        let vars: Vec<String> = vars.iter().map(|s| s.to_string()).collect();
        let omin = poly.hval().unwrap_or(0).min(0);
        HSeries::new(Window::complete(&vars, omin, n), poly)
    }

    pub fn vars(&self) -> &[String] {
        &self.window.vars
    }

    pub fn idx(&self, v: &str) -> Result<usize> {
        self.window.index(v)
    }

    pub fn is_zero(&self) -> bool {
        self.poly.is_zero()
    }

    fn clip(&mut self) {
        let w = &self.window;
        if w.is_complete() && w.n >= INF {
            return;
        }
        self.poly.terms.retain(|(h, e), _| w.contains(*h, e));
    }

    pub fn restrict(&self, w: &Window) -> Result<HSeries> {
        let w2 = self.window.intersect(w)?;
        Ok(HSeries::new(w2, self.poly.clone()))
    }

    pub fn coeff(&self, h: i64, e: &[i64]) -> Q {
        self.poly.coeff(h, e)
    }

    pub fn add(&self, o: &HSeries) -> Result<HSeries> {
        let w = window_after(&WindowOp::Add, &self.window, Some(&o.window))?;
        Ok(HSeries::new(w, self.poly.add(&o.poly)))
    }

    pub fn sub(&self, o: &HSeries) -> Result<HSeries> {
        self.add(&o.neg())
    }

    pub fn neg(&self) -> HSeries {
        HSeries { window: self.window.clone(), poly: self.poly.neg() }
    }

    pub fn scale(&self, c: &Q) -> HSeries {
        HSeries { window: self.window.clone(), poly: self.poly.scale(c) }
    }

    pub fn mul_hbar(&self, k: i64) -> HSeries {
        let mut w = self.window.clone();
        w.omin += k;
        w.n = crate::window::sat_add(w.n, k);
        HSeries { window: w, poly: self.poly.mul_hbar(k) }
    }

    pub fn mul(&self, o: &HSeries) -> Result<HSeries> {
        let nv = self.window.nv();
        if self.vars() != o.vars() {
            return Err(Error::VariableMismatch(format!("{:?} vs {:?}", self.vars(), o.vars())));
        }
        let op = WindowOp::Mul {
            ext_a: (0..nv).map(|v| ext(&self.poly, v)).collect(),
            ext_b: (0..nv).map(|v| ext(&o.poly, v)).collect(),
            complete_a: self.window.is_complete(),
            complete_b: o.window.is_complete(),
        };
        let w = window_after(&op, &self.window, Some(&o.window))?;
        let prec = if w.n >= INF { None } else { Some(w.n) };
        // drop terms that cannot reach the window before multiplying
        let p = self.poly.mul_trunc(&o.poly, prec);
        Ok(HSeries::new(w, p))
    }

    pub fn derive(&self, v: &str) -> Result<HSeries> {
        let i = self.idx(v)?;
        let w = window_after(&WindowOp::Derive { var: i, d: 1 }, &self.window, None)?;
        Ok(HSeries::new(w, self.poly.derive(i)))
    }

    /// Evaluate at `v + c*hbar` via the exponential of the derivative.
    pub fn shift(&self, v: &str, c: &Q) -> Result<HSeries> {
        let i = self.idx(v)?;
        if c.is_zero() {
            return Ok(self.clone());
        }
        if self.window.n >= INF {
            return Err(Error::Window("shift needs a finite hbar order".into()));
        }
        let w = window_after(&WindowOp::Shift { var: i }, &self.window, None)?;
        let mut acc = self.poly.clone();
        let mut d = self.poly.clone();
        let mut k = 1i64;
        while self.window.omin + k < self.window.n {
            d = d.derive(i);
            if d.is_zero() {
                break;
            }
            let term = d.mul_hbar(k).scale(&(crate::scalar::pow_q(c, k) / factorial(k as u64)));
            acc = acc.add(&term);
            k += 1;
        }
        Ok(HSeries::new(w, acc))
    }

    /// Shift by an hbar-free amount is rejected.
    pub fn shift_plain(&self, _v: &str, _c: &Q) -> Result<HSeries> {
        Err(Error::HbarFreeShift)
    }

    pub fn residue(&self, v: &str) -> Result<HSeries> {
        let i = self.idx(v)?;
        let w = window_after(&WindowOp::Residue { var: i }, &self.window, None)?;
        let mut p = Poly::zero(w.nv());
        for ((h, e), c) in &self.poly.terms {
            if e[i] == -1 {
                let mut e2 = e.clone();
                e2.remove(i);
                p.add_term(*h, e2, c.clone());
            }
        }
        Ok(HSeries::new(w, p))
    }

    pub fn sing_part(&self, v: &str) -> Result<HSeries> {
        let i = self.idx(v)?;
        let w = window_after(&WindowOp::Sing { var: i }, &self.window, None)?;
        let mut p = self.poly.clone();
        p.terms.retain(|(_, e), _| e[i] < 0);
        Ok(HSeries::new(w, p))
    }

    pub fn reg_part(&self, v: &str) -> Result<HSeries> {
        let i = self.idx(v)?;
        let w = window_after(&WindowOp::Reg { var: i }, &self.window, None)?;
        let mut p = self.poly.clone();
        p.terms.retain(|(_, e), _| e[i] >= 0);
        Ok(HSeries::new(w, p))
    }

    /// `(1/d!) d^d/d num^d  delta(num/den)` truncated to `w`.
    pub fn delta(num: &str, den: &str, d: i64, w: &Window) -> Result<HSeries> {
        let a = w.index(num)?;
        let b = w.index(den)?;
        if w.is_empty() {
            return Err(Error::Window("delta on empty window".into()));
        }
        let (la, ha) = w.bounds[a];
        let (lb, hb) = w.bounds[b];
        // term binom(n,d) num^(n-d) den^(-n-1): n ranges over both constraints
        let lo = la.saturating_add(d).max(-hb - 1);
        let hi = ha.saturating_add(d).min(-lb - 1);
        if lo <= NEG_INF / 2 || hi >= INF / 2 {
            return Err(Error::Window("delta needs a finite window in one variable".into()));
        }
        let mut p = Poly::zero(w.nv());
        if w.omin <= 0 && 0 < w.n {
            for n in lo..=hi {
                let c = binom(&q(n), d);
                let mut e = vec![0; w.nv()];
                e[a] = n - d;
                e[b] = -n - 1;
                if w.contains(0, &e) {
                    p.add_term(0, e, c);
                }
            }
        }
        Ok(HSeries::new(w.clone(), p))
    }

    /// Replace `from` by `to` (the caller multiplies by a delta supported on `from = to`).
    pub fn substitute_equal(&self, from: &str, to: &str) -> Result<HSeries> {
        let f = self.idx(from)?;
        let t = self.idx(to)?;
        let (lf, hf) = self.window.bounds[f];
        if lf > NEG_INF || hf < INF {
            return Err(Error::Window(format!("substitute_equal needs {} fully known", from)));
        }
        let (amin, amax) = ext(&self.poly, f);
        let (lt, ht) = self.window.bounds[t];
        let bound = (crate::window::sat_add(lt, amax), crate::window::sat_add(ht, amin));
        if bound.0 > bound.1 {
            return Err(Error::Window("merged exponent leaves window".into()));
        }
        let mut w = self.window.clone();
        w.bounds[t] = bound;
        let w = w.drop_var(f);
        let mut p = Poly::zero(w.nv());
        for ((h, e), c) in &self.poly.terms {
            let mut e2 = e.clone();
            e2[t] += e[f];
            e2.remove(f);
            p.add_term(*h, e2, c.clone());
        }
        Ok(HSeries::new(w, p))
    }

    fn nilpotent_check(&self) -> Result<()> {
        if self.window.omin < 1 {
            if let Some(h) = self.poly.hval() {
                if h < 1 {
                    return Err(Error::NotNilpotent(format!("term with hbar^{}", h)));
                }
            }
            if !self.window.is_complete() {
                return Err(Error::NotNilpotent("window does not bound the hbar valuation".into()));
            }
        }
        if self.window.n >= INF {
            return Err(Error::NotNilpotent("no hbar truncation".into()));
        }
        Ok(())
    }

    fn with_valuation(&self) -> HSeries {
        let mut s = self.clone();
        if let Some(h) = s.poly.hval() {
            if s.window.is_complete() {
                s.window.omin = s.window.omin.max(h);
            }
        } else if s.window.is_complete() {
            s.window.omin = s.window.omin.max(1);
        }
        s
    }

    /// Truncated `log(1+f)`.
    pub fn log1p(&self) -> Result<HSeries> {
        self.nilpotent_check()?;
        let f = self.with_valuation();
        let mut acc = HSeries::zero(f.window.clone());
        let mut pw = f.clone();
        let mut n = 1i64;
        while !pw.is_zero() {
            let c = if n % 2 == 1 { Q::one() } else { -Q::one() } / q(n);
            acc = acc.add(&pw.scale(&c))?;
            pw = pw.mul(&f)?;
            n += 1;
            if pw.window.omin >= f.window.n {
                break;
            }
        }
        Ok(acc)
    }

    /// Truncated `exp(f)`.
    pub fn exp0(&self) -> Result<HSeries> {
        self.nilpotent_check()?;
        let f = self.with_valuation();
        let mut w1 = f.window.clone();
        w1.omin = 0;
        let mut acc = HSeries::new(w1, Poly::one(f.window.nv()));
        let mut pw = f.clone();
        let mut n = 1u64;
        while !pw.is_zero() {
            acc = acc.add(&pw.scale(&factorial(n).recip()))?;
            pw = pw.mul(&f)?;
            n += 1;
            if pw.window.omin >= f.window.n {
                break;
            }
        }
        Ok(acc)
    }

    /// Compare on the common window; `None` means equal.
    pub fn diff_witness(&self, o: &HSeries) -> Result<Option<Witness>> {
        let w = self.window.intersect(&o.window)?;
        let w = Window { omin: self.window.omin.min(o.window.omin), ..w };
        let a = HSeries::new(w.clone(), self.poly.clone());
        let b = HSeries::new(w, o.poly.clone());
        let d = a.poly.sub(&b.poly);
        Ok(d.terms.keys().next().map(|(h, e)| Witness { hpow: *h, exps: e.clone(), left: a.poly.coeff(*h, e), right: b.poly.coeff(*h, e) }))
    }

    pub fn eq_on_window(&self, o: &HSeries) -> Result<bool> {
        Ok(self.diff_witness(o)?.is_none())
    }

    pub fn to_json(&self) -> Value {
        let mut win = serde_json::Map::new();
        for (v, (lo, hi)) in self.window.vars.iter().zip(&self.window.bounds) {
            let f = |x: i64| if x <= NEG_INF || x >= INF { Value::Null } else { json!(x) };
            win.insert(v.clone(), json!([f(*lo), f(*hi)]));
        }
        let terms: Vec<Value> = self.poly.terms.iter().map(|((h, e), c)| json!([h, e, fmt_q(c)])).collect();
        let hmax = if self.window.n >= INF { Value::Null } else { json!(self.window.n) };
        json!({
            "vars": self.window.vars,
            "hmin": self.window.omin,
            "hmax": hmax,
            "window": Value::Object(win),
            "terms": terms,
        })
    }

    pub fn from_json(v: &Value) -> Result<HSeries> {
        let bad = |m: &str| Error::Config(format!("hseries json: {}", m));
        let vars: Vec<String> = v["vars"]
            .as_array()
            .ok_or_else(|| bad("vars"))?
            .iter()
            .map(|x| x.as_str().map(|s| s.to_string()).ok_or_else(|| bad("vars entry")))
            .collect::<Result<_>>()?;
        let omin = v["hmin"].as_i64().ok_or_else(|| bad("hmin"))?;
        let n = if v["hmax"].is_null() { INF } else { v["hmax"].as_i64().ok_or_else(|| bad("hmax"))? };
        let mut bounds = Vec::new();
        for name in &vars {
            let b = v["window"][name].as_array().ok_or_else(|| bad("window"))?;
            if b.len() != 2 {
                return Err(bad("window pair"));
            }
            let lo = if b[0].is_null() { NEG_INF } else { b[0].as_i64().ok_or_else(|| bad("lo"))? };
            let hi = if b[1].is_null() { INF } else { b[1].as_i64().ok_or_else(|| bad("hi"))? };
            bounds.push((lo, hi));
        }
        let w = Window { vars: vars.clone(), bounds, omin, n };
        let mut terms: BTreeMap<(i64, Vec<i64>), Q> = BTreeMap::new();
        for t in v["terms"].as_array().ok_or_else(|| bad("terms"))? {
            let h = t[0].as_i64().ok_or_else(|| bad("hpow"))?;
            let e: Vec<i64> = t[1].as_array().ok_or_else(|| bad("exps"))?.iter().map(|x| x.as_i64().ok_or_else(|| bad("exp"))).collect::<Result<_>>()?;
            if e.len() != vars.len() {
                return Err(bad("exponent arity"));
            }
            let c = parse_q(t[2].as_str().ok_or_else(|| bad("coeff"))?).ok_or_else(|| bad("coeff value"))?;
            if !w.contains(h, &e) {
                return Err(bad("term outside window"));
            }
            if c.is_zero() {
                return Err(bad("stored zero"));
            }
            terms.insert((h, e), c);
        }
        Ok(HSeries { window: w, poly: Poly { nv: vars.len(), terms } })
    }
}
