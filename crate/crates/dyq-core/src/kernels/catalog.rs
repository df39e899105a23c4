//! Named identities between kernels and operator series.
//!
//! Each entry is data: a name, the formula it asserts (its anchor) and a
//! builder that evaluates it for given parameters.

use num::{One, Zero};
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::hseries::HSeries;
use crate::kernels::cache::expand_cached;
use crate::kernels::expand::Direction;
use crate::kernels::kern::{rational_identity_check, Kern};
use crate::opseries::OpSeries;
use crate::poly::Poly;
use crate::report::Outcome;
use crate::scalar::{fmt_q, q, Q};
use crate::window::Window;

#[derive(Clone, Debug)]
pub struct CatalogParams {
    pub m: Q,
    pub kappa: Q,
    pub b: Q,
    /// Polynomial F(x, hbar), one variable.
    pub f: Option<Poly>,
    pub j: i64,
    pub n: i64,
    /// Degree window for single-variable checks.
    pub lo: i64,
    pub hi: i64,
}

impl Default for CatalogParams {
    fn default() -> Self {
        CatalogParams { m: q(1), kappa: q(1), b: q(1), f: None, j: 0, n: 6, lo: -8, hi: -1 }
    }
}

pub struct CatalogEntry {
    pub name: &'static str,
    pub anchor: &'static str,
    pub run: fn(&CatalogParams) -> Result<Outcome>,
}

pub const LOG_TWO_TERMS: &str = "log((x+m hbar)/(x-m hbar)) = G(d_x)[m]_{q^{d_x}} x^{-1}";
pub const LOG_FOUR_TERMS: &str =
    "log((z-w-m hbar-k hbar)(z-w+m hbar+k hbar)/((z-w+m hbar-k hbar)(z-w-m hbar+k hbar))) = -G(d_z)G(d_z)[m]_{q^{d_z}}[k]_{q^{d_z}}(z-w)^{-2}";
pub const SING_RES: &str = "Res_x(x-b hbar)^{-1}F(x,hbar) = F(b hbar,hbar), Sing_x (x-b hbar)^{-1}F(x,hbar) = (x-b hbar)^{-1}F(b hbar,hbar)";
pub const GL_RELATION: &str = "-G(x)q^{-x} = (e^{-2 hbar x}-1)/x = -2 hbar L(-2 hbar x)";
pub const GQL_LEVEL: &str = "G(x)q^{-l x} = 2 hbar L(-2 hbar x) q^{(1-l)x}";
pub const SERRE_KERNEL: &str =
    "(w-z1+h)(w-z2+h)/((w-z1-h)(w-z2-h)) - 2(w-z1+h)/(w-z1-h) + 1 = 2h(z2-z1+2h)/((w-z1-h)(w-z2-h)); (w-z2+h)/(w-z2-h) - 2 = (z2-w+3h)/(w-z2-h)";
pub const DELTA_DECOMP: &str = "iota_{z,w}(z-w)^{-1-j} - iota_{w,z}(z-w)^{-1-j} = (1/j!) d_w^j z^{-1}delta(w/z)";
pub const FG_INVERSE: &str = "F(d_z)G(d_z) = 1";

pub fn entries() -> Vec<CatalogEntry> {
    vec![
        CatalogEntry { name: "log_two_terms", anchor: LOG_TWO_TERMS, run: log_two_terms },
        CatalogEntry { name: "log_four_terms", anchor: LOG_FOUR_TERMS, run: log_four_terms },
        CatalogEntry { name: "sing_res_fact", anchor: SING_RES, run: sing_res_fact },
        CatalogEntry { name: "GL_relation", anchor: GL_RELATION, run: gl_relation },
        CatalogEntry { name: "GqL_level", anchor: GQL_LEVEL, run: gql_level },
        CatalogEntry { name: "serre_kernel", anchor: SERRE_KERNEL, run: serre_kernel },
        CatalogEntry { name: "delta_decomp", anchor: DELTA_DECOMP, run: delta_decomp },
        CatalogEntry { name: "FG_inverse", anchor: FG_INVERSE, run: fg_inverse },
    ]
}

pub fn lookup(name: &str) -> Result<CatalogEntry> {
    entries().into_iter().find(|e| e.name == name).ok_or_else(|| Error::Unsupported(format!("catalog entry {}", name)))
}

fn x_window(p: &CatalogParams) -> Window {
    Window::with_bounds(&["x"], vec![(p.lo, p.hi)], 0, p.n)
}

/// Series of `(x + a hbar)/(x + b hbar) - 1` as an exact single-variable expansion.
fn ratio_minus_one(factors_num: &[Q], factors_den: &[Q], n: i64) -> Result<HSeries> {
    let mut k = Kern::one(1);
    for c in factors_num {
        k = k.mul(&Kern::lin(1, 0, None, c.clone(), 1)?);
    }
    for c in factors_den {
        k = k.mul(&Kern::lin(1, 0, None, c.clone(), -1)?);
    }
    let k = k.sub(&Kern::one(1));
    expand_cached(&k, &Direction::declared(1), &Window::new(&["x"], 0, 0, n))
}

/// LHS of the two-term identity, computed by log1p on the expanded ratio.
pub fn log_ratio_series(m: &Q, n: i64) -> Result<HSeries> {
    if m.is_zero() {
        return Ok(HSeries::exact(&["x"], Poly::zero(1), n));
    }
    ratio_minus_one(&[m.clone()], &[-m.clone()], n)?.log1p()
}

pub fn log_two_terms(p: &CatalogParams) -> Result<Outcome> {
    let w = x_window(p);
    let lhs = log_ratio_series(&p.m, p.n)?.restrict(&w)?;
    let op = OpSeries::g(p.n + 1).compose(&OpSeries::qbracket(&p.m, p.n + 1));
    let xinv = HSeries::exact(&["x"], Poly::monomial(1, 0, vec![-1], Q::one()), p.n);
    let rhs = op.apply(&xinv, "x")?.restrict(&w)?;
    let lead: Vec<Value> = lhs.poly.terms.iter().take(2).map(|((h, e), c)| json!([h, e[0], fmt_q(c)])).collect();
    let info = json!({"m": fmt_q(&p.m), "N": p.n, "window": [p.lo, p.hi], "terms": lhs.poly.len(), "leading": lead});
    Ok(match lhs.diff_witness(&rhs)? {
        None => Outcome::pass(info),
        Some(wt) => Outcome::fail(wt.to_string(), info),
    })
}

pub fn log_four_terms(p: &CatalogParams) -> Result<Outcome> {
    let w = x_window(p);
    let (m, k) = (&p.m, &p.kappa);
    // x = z - w
    let num = [-(m + k), m + k];
    let den = [m - k, -(m - k)];
    let f = ratio_minus_one(&num, &den, p.n)?;
    let lhs = if f.is_zero() { f } else { f.log1p()? }.restrict(&w)?;
    let t = p.n + 2;
    let op = OpSeries::g(t).compose(&OpSeries::g(t)).compose(&OpSeries::qbracket(m, t)).compose(&OpSeries::qbracket(k, t)).neg();
    let x2 = HSeries::exact(&["x"], Poly::monomial(1, 0, vec![-2], Q::one()), p.n);
    let rhs = op.apply(&x2, "x")?.restrict(&w)?;
    // middle form G[m]((x+k hbar)^{-1} - (x-k hbar)^{-1})
    let d = Kern::lin(1, 0, None, k.clone(), -1)?.sub(&Kern::lin(1, 0, None, -k.clone(), -1)?);
    let ds = expand_cached(&d, &Direction::declared(1), &Window::new(&["x"], 0, 0, p.n + 2))?;
    let mid = OpSeries::g(t).compose(&OpSeries::qbracket(m, t)).apply(&ds, "x")?.restrict(&w)?;
    let info = json!({"m": fmt_q(m), "kappa": fmt_q(k), "N": p.n, "window": [p.lo, p.hi], "terms": lhs.poly.len()});
    if let Some(wt) = lhs.diff_witness(&rhs)? {
        return Ok(Outcome::fail(format!("log vs -GG[m][k]: {}", wt), info));
    }
    if let Some(wt) = lhs.diff_witness(&mid)? {
        return Ok(Outcome::fail(format!("log vs G[m](...): {}", wt), info));
    }
    Ok(Outcome::pass(info))
}

/// Sing/Res of `(x - b hbar)^{-1} F(x, hbar)`; F is a polynomial in x and hbar.
pub fn sing_res_fact(p: &CatalogParams) -> Result<Outcome> {
    let f = p.f.clone().unwrap_or_else(|| Poly::monomial(1, 0, vec![2], Q::one()));
    let fk = Kern::from_poly(f.clone());
    let k = fk.mul(&Kern::lin(1, 0, None, -p.b.clone(), -1)?);
    let w = Window::new(&["x"], 12, 0, p.n);
    let series = expand_cached(&k, &Direction::declared(1), &w)?;
    // F(b hbar, hbar), a polynomial in hbar only
    let fb = f.substitute(0, &Poly::hbar(1, 1).scale(&p.b));
    let sing = series.sing_part("x")?;
    let expect = expand_cached(&Kern::from_poly(fb.clone()).mul(&Kern::lin(1, 0, None, -p.b.clone(), -1)?), &Direction::declared(1), &w)?;
    let info = json!({"b": fmt_q(&p.b), "N": p.n, "deg_F": f.max_exp(0).unwrap_or(0)});
    if let Some(wt) = sing.diff_witness(&expect)? {
        return Ok(Outcome::fail(format!("Sing: {}", wt), info));
    }
    let res = series.residue("x")?;
    let fb0 = HSeries::new(Window { vars: vec![], bounds: vec![], omin: 0, n: p.n }, {
        let mut r = Poly::zero(0);
        for ((h, _), c) in &fb.terms {
            r.add_term(*h, vec![], c.clone());
        }
        r
    });
    if let Some(wt) = res.diff_witness(&fb0)? {
        return Ok(Outcome::fail(format!("Res: {}", wt), info));
    }
    Ok(Outcome::pass(info))
}

fn op_outcome(a: &OpSeries, b: &OpSeries, info: Value) -> Outcome {
    match a.diff(b) {
        None => Outcome::pass(info),
        Some(((k, j), x, y)) => Outcome::fail(format!("hbar^{} d^{}: {} vs {}", k, j, fmt_q(&x), fmt_q(&y)), info),
    }
}

pub fn gl_relation(p: &CatalogParams) -> Result<Outcome> {
    let t = p.n;
    let lhs = OpSeries::g(t).compose(&OpSeries::qpow(&q(-1), t)).neg();
    let rhs = OpSeries::l(&q(-2), t).scale(&q(-2));
    let rhs = shift_h(&rhs, 1);
    // middle form (e^{-2 hbar x} - 1)/x
    let mut mid = OpSeries::zero(t);
    for n in 1..=t {
        let c = crate::scalar::pow_q(&q(-2), n) / crate::scalar::factorial(n as u64);
        if n < t {
            mid.terms.insert((n, n - 1), c);
        }
    }
    mid.kmin = 1;
    if let Some(d) = lhs.diff(&mid) {
        return Ok(Outcome::fail(format!("-G q^-x vs (e^-2hx - 1)/x at {:?}", d.0), json!({"N": t})));
    }
    Ok(op_outcome(&lhs, &rhs, json!({"N": t})))
}

/// Multiply an operator series by hbar^k.
fn shift_h(o: &OpSeries, k: i64) -> OpSeries {
    OpSeries {
        terms: o.terms.iter().map(|((a, b), c)| ((a + k, *b), c.clone())).filter(|((a, _), _)| *a < o.trunc + k).collect(),
        trunc: o.trunc + k,
        kmin: o.kmin + k,
    }
}

pub fn gql_level(p: &CatalogParams) -> Result<Outcome> {
    let t = p.n;
    let l = &p.kappa;
    let lhs = OpSeries::g(t).compose(&OpSeries::qpow(&-l.clone(), t));
    let rhs = shift_h(&OpSeries::l(&q(-2), t).compose(&OpSeries::qpow(&(Q::one() - l), t)), 1).scale(&q(2));
    Ok(op_outcome(&lhs, &rhs, json!({"level": fmt_q(l), "N": t})))
}

pub fn fg_inverse(p: &CatalogParams) -> Result<Outcome> {
    let t = p.n;
    let fg = OpSeries::f(t + 1).compose(&OpSeries::g(t + 1));
    Ok(op_outcome(&fg, &OpSeries::identity(t), json!({"N": t})))
}

/// The two kernel identities used in the order-2 Serre argument, optionally
/// perturbed by `eps * hbar` in the first factor (negative control).
pub fn serre_kernel_identities(eps: &Q) -> Vec<(Vec<Kern>, Vec<Kern>)> {
    // variables z1, z2, w
    let (z1, z2, w) = (0, 1, 2);
    let nv = 3;
    let one = Q::one();
    let f = |a: usize, b: usize, c: Q, e: i64| Kern::pair(nv, a, b, c, e);
    let lhs1 = vec![
        f(w, z1, &one + eps, 1).mul(&f(w, z2, one.clone(), 1)).mul(&f(w, z1, -one.clone(), -1)).mul(&f(w, z2, -one.clone(), -1)),
        f(w, z1, one.clone(), 1).mul(&f(w, z1, -one.clone(), -1)).scale(&q(-2)),
        Kern::one(nv),
    ];
    let rhs1 = vec![Kern::hbar(nv, 1).scale(&q(2)).mul(&f(z2, z1, q(2), 1)).mul(&f(w, z1, -one.clone(), -1)).mul(&f(w, z2, -one.clone(), -1))];
    let lhs2 = vec![f(w, z2, one.clone(), 1).mul(&f(w, z2, -one.clone(), -1)), Kern::constant(nv, q(-2))];
    let rhs2 = vec![f(z2, w, q(3), 1).mul(&f(w, z2, -one.clone(), -1))];
    vec![(lhs1, rhs1), (lhs2, rhs2)]
}

pub fn serre_kernel(p: &CatalogParams) -> Result<Outcome> {
    let _ = p;
    serre_kernel_with(&Q::zero())
}

pub fn serre_kernel_with(eps: &Q) -> Result<Outcome> {
    let names = ["z1", "z2", "w"];
    for (i, (l, r)) in serre_kernel_identities(eps).iter().enumerate() {
        if let Err(wt) = rational_identity_check(l, r) {
            return Ok(Outcome::fail(
                format!("identity {}: residual term {}", i + 1, crate::kernels::kern::fmt_poly(&wt, &names)),
                json!({"perturbation": fmt_q(eps)}),
            ));
        }
    }
    Ok(Outcome::pass(json!({"identities": 2, "truncation": "none"})))
}

pub fn delta_decomp(p: &CatalogParams) -> Result<Outcome> {
    let k = Kern::pair(2, 0, 1, Q::zero(), -1 - p.j);
    let half = p.hi.abs().max(p.lo.abs()).max(4);
    let w = Window::new(&["z", "w"], half, 0, 1);
    let a = expand_cached(&k, &Direction(vec![0, 1]), &w)?;
    let b = expand_cached(&k, &Direction(vec![1, 0]), &w)?;
    let d = HSeries::delta("w", "z", p.j, &w)?;
    let diff = a.sub(&b)?;
    let info = json!({"j": p.j, "half_width": half});
    Ok(match diff.diff_witness(&d)? {
        None => Outcome::pass(info),
        Some(wt) => Outcome::fail(wt.to_string(), info),
    })
}
