use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

/// Exact rational, always reduced with a positive denominator.
pub type Rational = num_rational::BigRational;

pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

pub fn ratio(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

/// Parses `a`, `-a` or `a/b`.
pub fn parse_rational(text: &str) -> Result<Rational> {
    let bad = || Error::InvalidArgument(format!("malformed rational `{text}`"));
    let text = text.trim();
    match text.split_once('/') {
        Some((n, d)) => {
            let n: BigInt = n.trim().parse().map_err(|_| bad())?;
            let d: BigInt = d.trim().parse().map_err(|_| bad())?;
            if d.is_zero() {
                return Err(Error::ZeroDenominator);
            }
            Ok(Rational::new(n, d))
        }
        None => Ok(Rational::from_integer(text.parse().map_err(|_| bad())?)),
    }
}

/// `a` for integers, `a/b` otherwise.
pub fn format_rational(r: &Rational) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

pub(crate) fn to_i64(n: &BigInt) -> Result<i64> {
    i64::try_from(n).map_err(|_| Error::Overflow)
}

pub(crate) fn ceil_to_u64(r: &Rational) -> Result<u64> {
    if r.is_negative() {
        return Ok(0);
    }
    u64::try_from(r.ceil().to_integer()).map_err(|_| Error::Overflow)
}

/// Least common multiple of the denominators.
pub(crate) fn lcm_denominators<'a>(values: impl IntoIterator<Item = &'a Rational>) -> BigInt {
    use num_integer::Integer;
    values
        .into_iter()
        .fold(BigInt::one(), |acc, r| acc.lcm(r.denom()))
}
