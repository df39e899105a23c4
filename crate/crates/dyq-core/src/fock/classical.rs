//! The level-`l` vacuum module of the affine algebra of `sl_{r+1}` at
//! `hbar = 0`, on the PBW basis of negative modes.

use std::cell::RefCell;
use std::collections::{BTreeMap, HashMap};

use num::{One, Zero};
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::fock::space::colored_partitions;
use crate::gcm::Gcm;
use crate::report::{Check, Outcome};
use crate::scalar::{fmt_q, q, Q};

/// `sl_{r+1}` on the basis `E_ab (a != b)`, `h_k = E_kk - E_{k+1,k+1}`, with
/// the trace form.
#[derive(Clone, Debug)]
pub struct LieAlg {
    pub rank: usize,
    pub names: Vec<String>,
    /// `[x_a, x_b] = sum c x_c`.
    pub bracket: Vec<Vec<Vec<(usize, Q)>>>,
    pub form: Vec<Vec<Q>>,
    pub e: Vec<usize>,
    pub f: Vec<usize>,
    pub h: Vec<usize>,
}

type Mat = Vec<Vec<Q>>;

fn mat_mul(a: &Mat, b: &Mat) -> Mat {
    let n = a.len();
    (0..n).map(|i| (0..n).map(|j| (0..n).map(|k| &a[i][k] * &b[k][j]).sum()).collect()).collect()
}

impl LieAlg {
    pub fn sl(n: usize) -> LieAlg {
        let mut mats: Vec<Mat> = Vec::new();
        let mut names = Vec::new();
        let mut off = BTreeMap::new();
        for a in 0..n {
            for b in 0..n {
                if a != b {
                    let mut m = vec![vec![Q::zero(); n]; n];
                    m[a][b] = Q::one();
                    off.insert((a, b), mats.len());
                    mats.push(m);
                    names.push(format!("E{}{}", a + 1, b + 1));
                }
            }
        }
        let mut h = Vec::new();
        for k in 0..n - 1 {
            let mut m = vec![vec![Q::zero(); n]; n];
            m[k][k] = Q::one();
            m[k + 1][k + 1] = -Q::one();
            h.push(mats.len());
            mats.push(m);
            names.push(format!("h{}", k + 1));
        }
        let decompose = |m: &Mat| -> Vec<(usize, Q)> {
            let mut out = Vec::new();
            for ((a, b), idx) in &off {
                if !m[*a][*b].is_zero() {
                    out.push((*idx, m[*a][*b].clone()));
                }
            }
            let mut c = Q::zero();
            for k in 0..n - 1 {
                c += &m[k][k];
                if !c.is_zero() {
                    out.push((h[k], c.clone()));
                }
            }
            out.sort_by_key(|(i, _)| *i);
            out
        };
        let dim = mats.len();
        let mut bracket = vec![vec![Vec::new(); dim]; dim];
        let mut form = vec![vec![Q::zero(); dim]; dim];
        for x in 0..dim {
            for y in 0..dim {
                let xy = mat_mul(&mats[x], &mats[y]);
                let yx = mat_mul(&mats[y], &mats[x]);
                let c: Mat = (0..n).map(|i| (0..n).map(|j| &xy[i][j] - &yx[i][j]).collect()).collect();
                bracket[x][y] = decompose(&c);
                form[x][y] = (0..n).map(|i| xy[i][i].clone()).sum();
            }
        }
        let e = (0..n - 1).map(|k| off[&(k, k + 1)]).collect();
        let f = (0..n - 1).map(|k| off[&(k + 1, k)]).collect();
        LieAlg { rank: n - 1, names, bracket, form, e, f, h }
    }

    pub fn dim(&self) -> usize {
        self.names.len()
    }

    /// The Cartan matrix read off `[h_i, e_j] = a_ij e_j`.
    pub fn cartan(&self) -> Vec<Vec<i64>> {
        (0..self.rank)
            .map(|i| {
                (0..self.rank)
                    .map(|j| {
                        let c = self.bracket[self.h[i]][self.e[j]].iter().find(|(k, _)| *k == self.e[j]).map(|(_, c)| c.clone()).unwrap_or_else(Q::zero);
                        crate::scalar::as_i64(&c).unwrap_or(0)
                    })
                    .collect()
            })
            .collect()
    }
}

/// Ascending multiset of `(n, basis index)` for `x(-n)`.
pub type PMono = Vec<(u32, u16)>;
pub type CVec = BTreeMap<PMono, Q>;

fn add_into(acc: &mut CVec, v: &CVec, c: &Q) {
    if c.is_zero() {
        return;
    }
    for (m, x) in v {
        let e = acc.entry(m.clone()).or_insert_with(Q::zero);
        *e += x * c;
        if e.is_zero() {
            acc.remove(m);
        }
    }
}

pub struct Vacuum {
    pub alg: LieAlg,
    pub level: Q,
    cache: RefCell<HashMap<(u16, i64, PMono), CVec>>,
}

impl Vacuum {
    pub fn new(gcm: &Gcm, level: &Q) -> Result<Vacuum> {
        let r = gcm.size();
        let alg = LieAlg::sl(r + 1);
        if alg.cartan() != gcm.matrix {
            return Err(Error::Unsupported("the classical module covers type A1 and A2 only".into()));
        }
        Ok(Vacuum { alg, level: level.clone(), cache: RefCell::new(HashMap::new()) })
    }

    /// `x_b(m)` on a PBW monomial.
    pub fn act(&self, b: usize, m: i64, mono: &[(u32, u16)]) -> CVec {
        let key = (b as u16, m, mono.to_vec());
        if let Some(v) = self.cache.borrow().get(&key) {
            return v.clone();
        }
        let mut out = CVec::new();
        if mono.is_empty() {
            if m < 0 {
                out.insert(vec![((-m) as u32, b as u16)], Q::one());
            }
        } else {
            let (n1, b1) = mono[0];
            let rest = &mono[1..];
            if m < 0 && ((-m) as u32, b as u16) <= (n1, b1) {
                let mut mm = vec![((-m) as u32, b as u16)];
                mm.extend_from_slice(mono);
                out.insert(mm, Q::one());
            } else {
                // x(m) y(-n1) R = y(-n1) x(m) R + [x, y](m - n1) R + m delta_{m,n1} (x, y) l R
                let xr = self.act(b, m, rest);
                add_into(&mut out, &self.act_vec(b1 as usize, -(n1 as i64), &xr), &Q::one());
                for (z, c) in &self.alg.bracket[b][b1 as usize] {
                    add_into(&mut out, &self.act(*z, m - n1 as i64, rest), c);
                }
                if m == n1 as i64 {
                    let c = q(m) * &self.alg.form[b][b1 as usize] * &self.level;
                    add_into(&mut out, &CVec::from([(rest.to_vec(), Q::one())]), &c);
                }
            }
        }
        self.cache.borrow_mut().insert(key, out.clone());
        out
    }

    pub fn act_vec(&self, b: usize, m: i64, v: &CVec) -> CVec {
        let mut out = CVec::new();
        for (mono, c) in v {
            add_into(&mut out, &self.act(b, m, mono), c);
        }
        out
    }

    /// PBW monomials of weight `d`.
    pub fn layer(&self, d: usize) -> Vec<PMono> {
        fn rec(d: u32, min: (u32, u16), dim: u16, cur: &mut PMono, out: &mut Vec<PMono>) {
            if d == 0 {
                out.push(cur.clone());
                return;
            }
            for n in min.0..=d {
                let b0 = if n == min.0 { min.1 } else { 0 };
                for b in b0..dim {
                    cur.push((n, b));
                    rec(d - n, (n, b), dim, cur, out);
                    cur.pop();
                }
            }
        }
        let mut out = Vec::new();
        rec(d as u32, (1, 0), self.alg.dim() as u16, &mut Vec::new(), &mut out);
        out
    }
}

/// Row-reduced span: each row keyed by its least monomial.
#[derive(Default)]
pub struct Span {
    rows: BTreeMap<PMono, CVec>,
}

impl Span {
    /// Adds `v`; true when it was independent.
    pub fn insert(&mut self, v: &CVec) -> bool {
        let mut v = v.clone();
        while let Some((lead, c)) = v.iter().next().map(|(k, c)| (k.clone(), c.clone())) {
            match self.rows.get(&lead) {
                Some(r) => {
                    let f = -c / &r[&lead];
                    add_into(&mut v, r, &f);
                }
                None => {
                    self.rows.insert(lead, v);
                    return true;
                }
            }
        }
        false
    }

    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }
}

/// Dimension of each layer spanned from the layers below by Chevalley
/// generators: negative modes first, then zero modes until stable.
pub fn chevalley_dims(vac: &Vacuum, dmax: usize) -> Vec<usize> {
    let gens: Vec<usize> = vac.alg.e.iter().chain(&vac.alg.f).chain(&vac.alg.h).copied().collect();
    let mut dims = vec![1];
    for d in 1..=dmax {
        let mut span = Span::default();
        let mut fresh: Vec<CVec> = Vec::new();
        for nn in 1..=d {
            for u in vac.layer(d - nn) {
                let u = CVec::from([(u, Q::one())]);
                for &g in &gens {
                    let w = vac.act_vec(g, -(nn as i64), &u);
                    if span.insert(&w) {
                        fresh.push(w);
                    }
                }
            }
        }
        while !fresh.is_empty() {
            let mut next = Vec::new();
            for w in &fresh {
                for &g in &gens {
                    let x = vac.act_vec(g, 0, w);
                    if span.insert(&x) {
                        next.push(x);
                    }
                }
            }
            fresh = next;
        }
        dims.push(span.len());
    }
    dims
}

#[derive(Clone, Debug)]
pub struct ClassicalParams {
    pub gcm: Gcm,
    pub level: Q,
    pub depth: usize,
    /// Modes `|m| <= modes` in the relation checks.
    pub modes: i64,
}

impl ClassicalParams {
    fn json(&self) -> Value {
        json!({ "gcm": self.gcm.matrix, "level": fmt_q(&self.level), "D": self.depth, "modes": self.modes })
    }
}

fn commutator(vac: &Vacuum, x: usize, m: i64, y: usize, n: i64, v: &CVec) -> CVec {
    let mut a = vac.act_vec(x, m, &vac.act_vec(y, n, v));
    add_into(&mut a, &vac.act_vec(y, n, &vac.act_vec(x, m, v)), &-Q::one());
    a
}

fn show(v: &CVec, alg: &LieAlg) -> String {
    let parts: Vec<String> = v
        .iter()
        .take(4)
        .map(|(m, c)| {
            let mono: Vec<String> = m.iter().map(|(n, b)| format!("{}(-{})", alg.names[*b as usize], n)).collect();
            format!("{}*{}", fmt_q(c), if mono.is_empty() { "1".into() } else { mono.join(" ") })
        })
        .collect();
    parts.join(" + ")
}

/// The mode form of (L1)-(L6) on every PBW vector up to weight `D`.
pub fn relation_checks(p: &ClassicalParams, vac: &Vacuum) -> Vec<Check> {
    let alg = &vac.alg;
    let r = alg.rank;
    let a = |i: usize, j: usize| p.gcm.a(i, j);
    let vs: Vec<CVec> = (0..=p.depth).flat_map(|d| vac.layer(d)).map(|m| CVec::from([(m, Q::one())])).collect();
    let w = p.modes;
    let modes: Vec<i64> = (-w..=w).collect();
    let lvl = p.level.clone();
    let mut out = Vec::new();
    let mut run = |name: String, anchor: &str, f: &dyn Fn(i64, i64, &CVec) -> Option<String>| {
        let mut bad = None;
        'o: for v in &vs {
            for &m in &modes {
                for &n in &modes {
                    if let Some(wit) = f(m, n, v) {
                        bad = Some(format!("m={} n={} on {}: {}", m, n, show(v, alg), wit));
                        break 'o;
                    }
                }
            }
        }
        out.push(Check::new(name, anchor, p.json(), Outcome::check(bad.is_none(), bad.unwrap_or_default(), json!({ "vectors": vs.len() }))));
    };
    let diff = |got: CVec, want: CVec| -> Option<String> {
        let mut d = got;
        add_into(&mut d, &want, &-Q::one());
        if d.is_empty() {
            None
        } else {
            Some(show(&d, alg))
        }
    };
    let scaled = |v: &CVec, c: Q| -> CVec {
        let mut o = CVec::new();
        add_into(&mut o, v, &c);
        o
    };
    for i in 0..r {
        for j in 0..r {
            let (hi, hj, ei, ej, fi, fj) = (alg.h[i], alg.h[j], alg.e[i], alg.e[j], alg.f[i], alg.f[j]);
            let aij = a(i, j);
            let tag = format!("[{},{}]", i + 1, j + 1);
            run(format!("L1{}", tag), "[h_i(z), h_j(w)] = a_ij d_w z^-1 delta(w/z) k", &|m, n, v| {
                let want = if m + n == 0 { scaled(v, q(aij * m) * &lvl) } else { CVec::new() };
                diff(commutator(vac, hi, m, hj, n, v), want)
            });
            run(format!("L2p{}", tag), "[h_i(z), e+_j(w)] = a_ij e+_j(w) z^-1 delta(w/z)", &|m, n, v| {
                diff(commutator(vac, hi, m, ej, n, v), scaled(&vac.act_vec(ej, m + n, v), q(aij)))
            });
            run(format!("L2m{}", tag), "[h_i(z), e-_j(w)] = -a_ij e-_j(w) z^-1 delta(w/z)", &|m, n, v| {
                diff(commutator(vac, hi, m, fj, n, v), scaled(&vac.act_vec(fj, m + n, v), q(-aij)))
            });
            run(format!("L3{}", tag), "[e+_i(z), e-_j(w)] = delta_ij (h_i(w) z^-1 delta(w/z) + k d_w z^-1 delta(w/z))", &|m, n, v| {
                let want = if i == j {
                    let mut h = vac.act_vec(hi, m + n, v);
                    if m + n == 0 {
                        add_into(&mut h, v, &(q(m) * &lvl));
                    }
                    h
                } else {
                    CVec::new()
                };
                diff(commutator(vac, ei, m, fj, n, v), want)
            });
            if aij >= 0 {
                run(format!("L4p{}", tag), "[e+_i(z), e+_j(w)] = 0 if a_ij >= 0", &|m, n, v| diff(commutator(vac, ei, m, ej, n, v), CVec::new()));
                run(format!("L4m{}", tag), "[e-_i(z), e-_j(w)] = 0 if a_ij >= 0", &|m, n, v| diff(commutator(vac, fi, m, fj, n, v), CVec::new()));
            }
            if aij == -1 {
                run(format!("L5p{}", tag), "(z - w)[e+_i(z), e+_j(w)] = 0 if a_ij = -1", &|m, n, v| {
                    let mut c = commutator(vac, ei, m + 1, ej, n, v);
                    add_into(&mut c, &commutator(vac, ei, m, ej, n + 1, v), &-Q::one());
                    diff(c, CVec::new())
                });
                run(format!("L5m{}", tag), "(z - w)[e-_i(z), e-_j(w)] = 0 if a_ij = -1", &|m, n, v| {
                    let mut c = commutator(vac, fi, m + 1, fj, n, v);
                    add_into(&mut c, &commutator(vac, fi, m, fj, n + 1, v), &-Q::one());
                    diff(c, CVec::new())
                });
                run(format!("L6p{}", tag), "[e+_i(z1), [e+_i(z2), e+_j(w)]] = 0 if a_ij = -1", &|m, n, v| {
                    for &k in &modes {
                        let inner = |u: &CVec| commutator(vac, ei, k, ej, n, u);
                        let mut c = vac.act_vec(ei, m, &inner(v));
                        add_into(&mut c, &inner(&vac.act_vec(ei, m, v)), &-Q::one());
                        if let Some(w) = diff(c, CVec::new()) {
                            return Some(format!("z2 mode {}: {}", k, w));
                        }
                    }
                    None
                });
                run(format!("L6m{}", tag), "[e-_i(z1), [e-_i(z2), e-_j(w)]] = 0 if a_ij = -1", &|m, n, v| {
                    for &k in &modes {
                        let inner = |u: &CVec| commutator(vac, fi, k, fj, n, u);
                        let mut c = vac.act_vec(fi, m, &inner(v));
                        add_into(&mut c, &inner(&vac.act_vec(fi, m, v)), &-Q::one());
                        if let Some(w) = diff(c, CVec::new()) {
                            return Some(format!("z2 mode {}: {}", k, w));
                        }
                    }
                    None
                });
            }
        }
    }
    out
}

/// Negative controls: the central term must see the level, and the
/// `a_ij = -1` commutator is nonzero before the `(z - w)` factor.
fn controls(p: &ClassicalParams, vac: &Vacuum) -> Vec<Check> {
    let alg = &vac.alg;
    let vac1 = CVec::from([(Vec::new(), Q::one())]);
    let (h, e, f) = (alg.h[0], alg.e[0], alg.f[0]);
    let got = commutator(vac, e, 1, f, -1, &vac1);
    let mut wrong = CVec::new();
    add_into(&mut wrong, &vac1, &(&p.level + Q::one()));
    add_into(&mut wrong, &vac.act_vec(h, 0, &vac1), &Q::one());
    let o = Outcome::check(got != wrong, "level l + 1 reproduces [e_1(1), f_1(-1)] 1", json!({ "value": show(&got, alg) }));
    let mut out = vec![Check::new("control_L3_wrong_level", "[e_1(1), f_1(-1)] 1 = (h_1(0) + l) 1 differs at l + 1", p.json(), o)];
    if let Some(&(i, j)) = p.gcm.pairs_with(-1).first() {
        let c = commutator(vac, alg.e[i], -1, alg.e[j], -1, &vac1);
        out.push(Check::new(
            "control_L5_needs_factor",
            "[e_i(-1), e_j(-1)] 1 != 0 for a_ij = -1",
            p.json(),
            Outcome::check(!c.is_empty(), "the commutator vanishes without (z - w)", json!({ "value": show(&c, alg) })),
        ));
    }
    out
}

/// Graded dimensions against colored partitions, generation by the
/// Chevalley generators, and the relation checks.
pub fn classical_suite(p: &ClassicalParams) -> Result<Vec<Check>> {
    let vac = Vacuum::new(&p.gcm, &p.level)?;
    let dim = vac.alg.dim();
    let dmax = if dim <= 3 { 4 } else { 2 };
    let pbw: Vec<usize> = (0..=dmax).map(|d| vac.layer(d).len()).collect();
    let want: Vec<usize> = colored_partitions(dim, dmax).into_iter().map(|x| x as usize).collect();
    let gen = chevalley_dims(&vac, dmax);
    let info = json!({ "pbw": pbw, "chevalley_span": gen, "colored_partitions": want });
    let mut out = vec![Check::new(
        "graded_dimensions",
        "dim V_d = coefficient of q^d in prod_{n>=1} (1 - q^n)^{-dim g}",
        p.json(),
        Outcome::check(pbw == want && gen == want, format!("PBW {:?}, Chevalley span {:?}, expected {:?}", pbw, gen, want), info),
    )];
    out.extend(relation_checks(p, &vac));
    out.extend(controls(p, &vac));
    Ok(out)
}
