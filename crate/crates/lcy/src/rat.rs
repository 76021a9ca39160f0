//! Exact rational scalars and their text form.
//!
//! Rationals cross the API boundary as strings "p/q" (or "p" when the
//! denominator is 1). Decimal notation is rejected on input: every quantity
//! in this crate is exact and a decimal would silently approximate.

use crate::{Error, Result};
use num::bigint::BigInt;
use num::rational::BigRational;
use num::{One, Signed, Zero};

pub type Rat = BigRational;

/// n/d as an exact rational. Panics on d = 0; callers pass literals.
pub fn rat(n: i64, d: i64) -> Rat {
    assert!(d != 0, "zero denominator");
    Rat::new(BigInt::from(n), BigInt::from(d))
}

pub fn rint(n: i64) -> Rat {
    Rat::from_integer(BigInt::from(n))
}

/// Exact ceiling as i64. The values this crate ceils are tiny (counts and
/// slope quotients), so the narrowing is checked, not assumed.
pub fn ceil_i64(r: &Rat) -> i64 {
    let c = r.ceil();
    let i = c.to_integer();
    i64::try_from(i).expect("ceiling out of i64 range")
}

pub fn is_integer(r: &Rat) -> bool {
    r.denom().is_one()
}

/// Parse "p/q" or "p". Signs allowed on p only; q must be positive after
/// normalization (BigRational normalizes). Anything else, including decimal
/// points, whitespace and empty fields, is an error.
pub fn parse_rat(s: &str) -> Result<Rat> {
    let bad = || Error::BadWeights(format!("cannot parse rational {s:?}; expected \"p/q\" or \"p\""));
    if s.is_empty() || s.contains(|c: char| c.is_whitespace()) || s.contains('.') {
        return Err(bad());
    }
    let (num, den) = match s.split_once('/') {
        Some((n, d)) => (n, d),
        None => (s, "1"),
    };
    let n: BigInt = num.parse().map_err(|_| bad())?;
    let d: BigInt = den.parse().map_err(|_| bad())?;
    if d.is_zero() || d.is_negative() {
        return Err(bad());
    }
    Ok(Rat::new(n, d))
}

/// Canonical text form: "p/q", or "p" when q = 1.
pub fn fmt_rat(r: &Rat) -> String {
    if is_integer(r) {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

pub fn parse_rat_list(s: &str) -> Result<Vec<Rat>> {
    s.split(',').map(parse_rat).collect()
}
