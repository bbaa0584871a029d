//! Exact rational scalars.
//!
//! Every decision path in this crate is carried out in arbitrary-precision
//! rational arithmetic; there is no floating point anywhere. Rationals
//! serialize as `"p/q"` (or `"p"` when the denominator is 1) in all file
//! formats.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

/// Arbitrary-precision rational number, always reduced, denominator > 0.
pub type Rat = BigRational;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum RatParseError {
    #[error("empty rational literal")]
    Empty,
    #[error("invalid integer part in rational literal `{0}`")]
    BadInteger(String),
    #[error("zero denominator in rational literal `{0}`")]
    ZeroDenominator(String),
}

/// `p/q` as a rational; panics on `q == 0`.
pub fn rat(p: i64, q: i64) -> Rat {
    assert!(q != 0, "zero denominator");
    Rat::new(BigInt::from(p), BigInt::from(q))
}

/// Integer as a rational.
pub fn int(n: i64) -> Rat {
    Rat::from_integer(BigInt::from(n))
}

/// Parses `"p/q"` or `"p"`.
pub fn parse_rat(s: &str) -> Result<Rat, RatParseError> {
    let s = s.trim();
    if s.is_empty() {
        return Err(RatParseError::Empty);
    }
    let (num, den) = match s.split_once('/') {
        Some((n, d)) => (n.trim(), Some(d.trim())),
        None => (s, None),
    };
    let n: BigInt = num
        .parse()
        .map_err(|_| RatParseError::BadInteger(s.to_string()))?;
    let d: BigInt = match den {
        Some(d) => d
            .parse()
            .map_err(|_| RatParseError::BadInteger(s.to_string()))?,
        None => BigInt::one(),
    };
    if d.is_zero() {
        return Err(RatParseError::ZeroDenominator(s.to_string()));
    }
    Ok(Rat::new(n, d))
}

/// Formats as `"p/q"`, or `"p"` when the denominator is 1.
pub fn format_rat(r: &Rat) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// Sign as -1, 0, or 1.
pub fn sign(r: &Rat) -> i32 {
    if r.is_zero() {
        0
    } else if r.is_positive() {
        1
    } else {
        -1
    }
}
