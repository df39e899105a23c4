//! Power series in one variable `u` with rational coefficients.

use num::{One, Zero};

use crate::scalar::{factorial, pow_q, Q};

pub fn exp(c: &Q, len: usize) -> Vec<Q> {
    (0..len).map(|j| pow_q(c, j as i64) / factorial(j as u64)).collect()
}

/// `sinh(c u)/u`.
pub fn sinh_over_u(c: &Q, len: usize) -> Vec<Q> {
    (0..len).map(|j| if j % 2 == 0 { pow_q(c, j as i64 + 1) / factorial(j as u64 + 1) } else { Q::zero() }).collect()
}

pub fn mul(a: &[Q], b: &[Q], len: usize) -> Vec<Q> {
    let mut r = vec![Q::zero(); len];
    for (i, x) in a.iter().enumerate().take(len) {
        for (j, y) in b.iter().enumerate().take(len - i) {
            r[i + j] += x * y;
        }
    }
    r
}

pub fn sub(a: &[Q], b: &[Q]) -> Vec<Q> {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

/// `a / b` with `b[0] != 0`.
pub fn div(a: &[Q], b: &[Q], len: usize) -> Vec<Q> {
    let mut inv = vec![Q::zero(); len];
    inv[0] = b[0].recip();
    for n in 1..len {
        let mut s = Q::zero();
        for i in 1..=n.min(b.len() - 1) {
            s += &b[i] * &inv[n - i];
        }
        inv[n] = -s * &inv[0];
    }
    mul(a, &inv, len)
}

/// The q-bracket `[c]` at `q = e^u`: `sinh(c u)/sinh(u)`.
pub fn qbracket(c: &Q, len: usize) -> Vec<Q> {
    div(&sinh_over_u(c, len), &sinh_over_u(&Q::one(), len), len)
}
