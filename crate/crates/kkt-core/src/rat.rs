//! Exact rational numbers and their text form.
//!
//! Rationals are printed as `p/q` with positive denominator (plain `p` when
//! the denominator is 1) and are never rendered as decimals.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::Error;

pub type Rational = BigRational;

pub fn rat(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

pub fn rat_int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// Reduce into the half-open interval `[0, 1)`.
pub fn mod_one(r: &Rational) -> Rational {
    r - r.floor()
}

/// Parse `p` or `p/q` with `q > 0`. The fraction need not be reduced.
pub fn parse_rational(s: &str) -> Result<Rational, Error> {
    let t = s.trim();
    let malformed = || Error::validation(format!("malformed rational '{s}'"));
    let (num, den) = match t.split_once('/') {
        None => (t, "1"),
        Some((n, d)) => (n, d),
    };
    let n: BigInt = num.parse().map_err(|_| malformed())?;
    let d: BigInt = den.parse().map_err(|_| malformed())?;
    if !d.is_positive() {
        return Err(Error::validation(format!(
            "malformed rational '{s}': denominator must be positive"
        )));
    }
    Ok(Rational::new(n, d))
}

pub fn format_rational(r: &Rational) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

pub fn is_zero(r: &Rational) -> bool {
    r.is_zero()
}
