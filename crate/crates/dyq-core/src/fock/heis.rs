//! Heisenberg data read off the Cartan bracket of the new currents, and
//! the mode operators on the Fock space.
//!
//! `h_i(z) = sum h_i(m) z^{-m-1}`; modes `m >= 1` annihilate, `m <= -1`
//! create, `h_i(0) = 0`. With hbar the pairing is not diagonal:
//! `[h_i(m), h_j(-n)] = gamma_ij(m, n)` carries `hbar^{m-n}`.

use std::collections::BTreeMap;

use num::Zero;

use crate::error::{Error, Result};
use crate::fock::hq::HQ;
use crate::fock::space::{times, FVec, Mono};
use crate::fock::useries;
use crate::gcm::Gcm;
use crate::kernels::{expand_cached, Direction};
use crate::rewrite::decks::DyNew;
use crate::rewrite::Base;
use crate::rewrite::Deck;
use crate::scalar::{binom, factorial, pow_q, q, Q};
use crate::window::Window;

#[derive(Clone, Debug)]
pub struct Heis {
    pub gcm: Gcm,
    pub level: Q,
    /// hbar order.
    pub n: usize,
    /// Largest creation index the table covers.
    pub nmax: usize,
    /// `(i, j, m, n) -> gamma_ij(m, n)`, nonzero entries only.
    pub gamma: BTreeMap<(usize, usize, usize, usize), HQ>,
}

/// `[h^+_i(z), h^-_j(w)]` of the new currents as a kernel in `(z, w)`.
pub fn bracket_kernel(gcm: &Gcm, level: &Q, n: usize, i: usize, j: usize, plus_first: bool) -> Result<crate::kernels::Kern> {
    let deck = DyNew { gcm: gcm.clone(), kappa: level.clone(), prec: n as i64, exact_commute: true };
    if plus_first {
        deck.log_pair(&Base::new("h+", Some(i)), &Base::new("h-", Some(j)))
    } else {
        deck.log_pair(&Base::new("h-", Some(i)), &Base::new("h+", Some(j)))
    }
}

/// Direct double sum: `[a][k]` at `q^{d}` applied to `(z - w + k hbar)^-2`,
/// expanded in `w/z`, coefficient of `z^{-m-1} w^{n-1}`.
pub fn gamma_oracle(a: i64, level: &Q, n_h: usize, m: usize, n: usize) -> HQ {
    let len = n_h + 1;
    let p = useries::mul(&useries::qbracket(&q(a), len), &useries::qbracket(level, len), len);
    let mut out = HQ::zero(n_h);
    for (j, pj) in p.iter().enumerate() {
        if pj.is_zero() {
            continue;
        }
        // p_j hbar^j d_x^j (x + c hbar)^-2 = p_j hbar^j (-1)^j (j+1)! (x + c hbar)^{-2-j}
        let r = 2 + j as i64;
        let t = m as i64 + 1 - r;
        if t < 0 || (n as i64 - 1) > t {
            continue;
        }
        let sgn = if j % 2 == 0 { 1 } else { -1 };
        let c0 = pj * q(sgn) * factorial(j as u64 + 1);
        let c1 = binom(&q(-r), t) * binom(&q(t), n as i64 - 1) * q(if (n - 1) % 2 == 0 { 1 } else { -1 });
        let hp = t - (n as i64 - 1);
        let c = c0 * c1 * pow_q(level, hp);
        out.add_assign(&HQ::hbar(j + hp as usize, c, n_h));
    }
    out
}

impl Heis {
    /// Read `gamma` off the iota-expansion of the Cartan bracket kernel.
    pub fn derive(gcm: &Gcm, level: &Q, n: usize, nmax: usize) -> Result<Heis> {
        let r = gcm.size();
        let mmax = nmax + n;
        let w = Window::with_bounds(&["z", "w"], vec![(-(mmax as i64) - 1, -2), (0, nmax as i64 - 1)], 0, n as i64);
        let mut gamma = BTreeMap::new();
        for i in 0..r {
            for j in 0..r {
                let k = bracket_kernel(gcm, level, n, i, j, true)?;
                let s = expand_cached(&k, &Direction(vec![0, 1]), &w)?;
                for ((h, e), c) in &s.poly.terms {
                    let (m, nn) = (-e[0] - 1, e[1] + 1);
                    if m < 1 || nn < 1 {
                        return Err(Error::Unsupported(format!("bracket kernel has a term z^{} w^{}", e[0], e[1])));
                    }
                    let g = gamma.entry((i, j, m as usize, nn as usize)).or_insert_with(|| HQ::zero(n));
                    g.add_assign(&HQ::hbar(*h as usize, c.clone(), n));
                }
            }
        }
        gamma.retain(|_, v: &mut HQ| !v.is_zero());
        Ok(Heis { gcm: gcm.clone(), level: level.clone(), n, nmax, gamma })
    }

    /// The same table with `gamma_11(1,1)` shifted by `hbar`.
    pub fn perturbed(&self) -> Heis {
        let mut h = self.clone();
        let g = h.gamma.entry((0, 0, 1, 1)).or_insert_with(|| HQ::zero(self.n));
        g.add_assign(&HQ::hbar(1, q(1), self.n));
        h
    }

    pub fn gamma(&self, i: usize, j: usize, m: usize, n: usize) -> HQ {
        self.gamma.get(&(i, j, m, n)).cloned().unwrap_or_else(|| HQ::zero(self.n))
    }

    pub fn rank(&self) -> usize {
        self.gcm.size()
    }

    /// `h_i(m) v`.
    pub fn mode(&self, i: usize, m: i64, v: &FVec) -> Result<FVec> {
        let mut out = FVec::zero(self.n);
        if m == 0 {
            return Ok(out);
        }
        if m < 0 {
            for (mono, c) in &v.terms {
                out.add_term(times(mono, i as u16, (-m) as u16), c);
            }
            return Ok(out);
        }
        let m = m as usize;
        for (mono, c) in &v.terms {
            let mut k = 0;
            while k < mono.len() {
                let (j, nn) = mono[k];
                let mult = mono[k..].iter().take_while(|x| **x == (j, nn)).count();
                if nn as usize > self.nmax {
                    return Err(Error::Window(format!("creation index {} beyond the gamma table ({})", nn, self.nmax)));
                }
                let g = self.gamma(i, j as usize, m, nn as usize);
                if !g.is_zero() {
                    let mut rest: Mono = mono.clone();
                    rest.remove(k);
                    out.add_term(rest, &c.mul(&g).scale(&q(mult as i64)));
                }
                k += mult;
            }
        }
        Ok(out)
    }

    /// Largest annihilation mode that can act nontrivially on weight `wt`.
    pub fn mmax(&self, wt: usize) -> usize {
        wt + self.n - 1
    }
}
