//! Degree and hbar-order windows.
//!
//! A window is a box of exponents on which a series is known exactly.  An
//! infinite side means the series is fully known in that direction.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub const INF: i64 = i64::MAX / 8;
pub const NEG_INF: i64 = -INF;

pub fn sat_add(a: i64, b: i64) -> i64 {
    if a >= INF || b >= INF {
        if a <= NEG_INF || b <= NEG_INF {
            // undefined; callers never combine opposite infinities
            return 0;
        }
        return INF;
    }
    if a <= NEG_INF || b <= NEG_INF {
        return NEG_INF;
    }
    (a + b).clamp(NEG_INF, INF)
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Window {
    pub vars: Vec<String>,
    pub bounds: Vec<(i64, i64)>,
    /// Lowest possible hbar power (a global valuation bound).
    pub omin: i64,
    /// Truncation order: hbar powers `>= n` are unknown.
    pub n: i64,
}

/// Operations whose output window is derived from input windows.
#[derive(Clone, Debug)]
pub enum WindowOp {
    Add,
    /// Product; each operand is given with its per-variable exponent extent
    /// (min, max of stored terms) and a completeness flag.
    Mul {
        ext_a: Vec<(i64, i64)>,
        ext_b: Vec<(i64, i64)>,
        complete_a: bool,
        complete_b: bool,
    },
    Derive {
        var: usize,
        d: i64,
    },
    /// Shift by a multiple of hbar.
    Shift {
        var: usize,
    },
    Residue {
        var: usize,
    },
    Sing {
        var: usize,
    },
    Reg {
        var: usize,
    },
}

impl Window {
    pub fn new(vars: &[&str], half: i64, omin: i64, n: i64) -> Self {
        Window { vars: vars.iter().map(|s| s.to_string()).collect(), bounds: vec![(-half, half); vars.len()], omin, n }
    }

    pub fn complete(vars: &[String], omin: i64, n: i64) -> Self {
        Window { vars: vars.to_vec(), bounds: vec![(NEG_INF, INF); vars.len()], omin, n }
    }

    pub fn with_bounds(vars: &[&str], bounds: Vec<(i64, i64)>, omin: i64, n: i64) -> Self {
        Window { vars: vars.iter().map(|s| s.to_string()).collect(), bounds, omin, n }
    }

    pub fn nv(&self) -> usize {
        self.vars.len()
    }

    pub fn index(&self, v: &str) -> Result<usize> {
        self.vars.iter().position(|x| x == v).ok_or_else(|| Error::UnknownVariable(v.to_string()))
    }

    pub fn is_complete(&self) -> bool {
        self.bounds.iter().all(|(lo, hi)| *lo <= NEG_INF && *hi >= INF)
    }

    pub fn is_empty(&self) -> bool {
        self.n <= self.omin || self.bounds.iter().any(|(lo, hi)| lo > hi)
    }

    pub fn contains(&self, h: i64, e: &[i64]) -> bool {
        h >= self.omin && h < self.n && self.bounds.iter().zip(e).all(|((lo, hi), x)| lo <= x && x <= hi)
    }

    pub fn intersect(&self, o: &Window) -> Result<Window> {
        if self.vars != o.vars {
            return Err(Error::VariableMismatch(format!("{:?} vs {:?}", self.vars, o.vars)));
        }
        Ok(Window {
            vars: self.vars.clone(),
            bounds: self.bounds.iter().zip(&o.bounds).map(|(a, b)| (a.0.max(b.0), a.1.min(b.1))).collect(),
            omin: self.omin.min(o.omin),
            n: self.n.min(o.n),
        })
    }

    pub fn with_n(&self, n: i64) -> Window {
        Window { n, ..self.clone() }
    }

    pub fn drop_var(&self, v: usize) -> Window {
        let mut w = self.clone();
        w.vars.remove(v);
        w.bounds.remove(v);
        w
    }
}

/// The largest window on which an operation's output is exact.
pub fn window_after(op: &WindowOp, a: &Window, b: Option<&Window>) -> Result<Window> {
    match op {
        WindowOp::Add => a.intersect(b.ok_or_else(|| Error::Window("add needs two windows".into()))?),
        WindowOp::Mul { ext_a, ext_b, complete_a, complete_b } => {
            let b = b.ok_or_else(|| Error::Window("mul needs two windows".into()))?;
            if a.vars != b.vars {
                return Err(Error::VariableMismatch(format!("{:?} vs {:?}", a.vars, b.vars)));
            }
            let mut bounds = Vec::with_capacity(a.nv());
            for v in 0..a.nv() {
                let (la, ha) = a.bounds[v];
                let (lb, hb) = b.bounds[v];
                let (mina, maxa) = ext_a[v];
                let (minb, maxb) = ext_b[v];
                let r = if *complete_a {
                    (sat_add(lb, maxa), sat_add(hb, mina))
                } else if *complete_b {
                    (sat_add(la, maxb), sat_add(ha, minb))
                } else if a.nv() == 1 && ha >= INF && hb >= INF {
                    (sat_add(la, maxb).max(sat_add(lb, maxa)), INF)
                } else if a.nv() == 1 && la <= NEG_INF && lb <= NEG_INF {
                    (NEG_INF, sat_add(ha, minb).min(sat_add(hb, mina)))
                } else {
                    return Err(Error::Window("product window not derivable: no complete operand".into()));
                };
                bounds.push(r);
            }
            let n = sat_add(a.n, b.omin).min(sat_add(b.n, a.omin));
            let w = Window { vars: a.vars.clone(), bounds, omin: a.omin + b.omin, n };
            if w.is_empty() {
                return Err(Error::Window("empty derivable product window".into()));
            }
            Ok(w)
        }
        WindowOp::Derive { var, d } => {
            let mut w = a.clone();
            let (lo, hi) = w.bounds[*var];
            w.bounds[*var] = (sat_add(lo, -d), sat_add(hi, -d));
            Ok(w)
        }
        WindowOp::Shift { var } => {
            let mut w = a.clone();
            let (lo, hi) = w.bounds[*var];
            let span = (a.n - 1 - a.omin).max(0);
            w.bounds[*var] = (lo, sat_add(hi, -span));
            Ok(w)
        }
        WindowOp::Residue { var } => {
            let (lo, hi) = a.bounds[*var];
            if lo > -1 || hi < -1 {
                return Err(Error::Window(format!("residue: window of {} excludes degree -1", a.vars[*var])));
            }
            Ok(a.drop_var(*var))
        }
        WindowOp::Sing { var } => {
            let mut w = a.clone();
            if w.bounds[*var].1 >= -1 {
                w.bounds[*var].1 = INF;
            }
            Ok(w)
        }
        WindowOp::Reg { var } => {
            let mut w = a.clone();
            if w.bounds[*var].0 <= 0 {
                w.bounds[*var].0 = NEG_INF;
            }
            Ok(w)
        }
    }
}
