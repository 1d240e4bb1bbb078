//! Exact rational helpers shared by the symbolic modules.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

pub type Q = BigRational;

pub fn q(n: i64) -> Q {
    Q::from_integer(BigInt::from(n))
}

pub fn qf(num: i64, den: i64) -> Q {
    Q::new(BigInt::from(num), BigInt::from(den))
}

pub fn factorial(n: usize) -> Q {
    let mut acc = BigInt::one();
    for k in 2..=n {
        acc *= k;
    }
    Q::from_integer(acc)
}

/// Parses `p`, `-p` or `p/q`.
pub fn parse_q(s: &str) -> Result<Q> {
    let s = s.trim();
    s.parse::<Q>().map_err(|_| Error::Parse(format!("bad rational `{s}`")))
}

/// Renders as `p/q`, or `p` when the denominator is one.
pub fn fmt_q(x: &Q) -> String {
    x.to_string()
}

pub fn to_f64(x: &Q) -> f64 {
    x.to_f64().unwrap_or(f64::NAN)
}

pub fn abs_f64(x: &Q) -> f64 {
    to_f64(&x.abs())
}

pub fn is_zero(x: &Q) -> bool {
    x.is_zero()
}

pub fn pow_q(x: &Q, k: usize) -> Q {
    num_traits::pow(x.clone(), k)
}
