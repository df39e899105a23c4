use num::bigint::BigInt;
use num::rational::BigRational;
use num::{One, Signed, ToPrimitive, Zero};

pub type Q = BigRational;

pub fn q(n: i64) -> Q {
    Q::from_integer(BigInt::from(n))
}

pub fn qf(n: i64, d: i64) -> Q {
    Q::new(BigInt::from(n), BigInt::from(d))
}

/// Parse `p`, `-p`, or `p/q`.
pub fn parse_q(s: &str) -> Option<Q> {
    let s = s.trim();
    match s.split_once('/') {
        Some((a, b)) => {
            let n: BigInt = a.trim().parse().ok()?;
            let d: BigInt = b.trim().parse().ok()?;
            if d.is_zero() {
                return None;
            }
            Some(Q::new(n, d))
        }
        None => s.parse::<BigInt>().ok().map(Q::from_integer),
    }
}

pub fn fmt_q(x: &Q) -> String {
    if x.is_integer() {
        x.numer().to_string()
    } else {
        format!("{}/{}", x.numer(), x.denom())
    }
}

pub fn factorial(n: u64) -> Q {
    let mut r = BigInt::one();
    for k in 2..=n {
        r *= BigInt::from(k);
    }
    Q::from_integer(r)
}

/// Generalized binomial `binom(a, k)` for rational `a`.
pub fn binom(a: &Q, k: i64) -> Q {
    if k < 0 {
        return Q::zero();
    }
    let mut r = Q::one();
    for j in 0..k {
        r = r * (a - q(j)) / q(j + 1);
    }
    r
}

pub fn binom_i(n: i64, k: i64) -> Q {
    binom(&q(n), k)
}

pub fn pow_q(x: &Q, n: i64) -> Q {
    if n >= 0 {
        num::pow(x.clone(), n as usize)
    } else {
        num::pow(x.recip(), (-n) as usize)
    }
}

pub fn as_i64(x: &Q) -> Option<i64> {
    if x.is_integer() {
        x.numer().to_i64()
    } else {
        None
    }
}

pub fn sign(x: &Q) -> i64 {
    if x.is_zero() {
        0
    } else if x.is_positive() {
        1
    } else {
        -1
    }
}
