//! Exact rational scalars.
//!
//! Every coefficient in this crate is an arbitrary-precision rational number;
//! there is no floating point anywhere. `Scalar` is kept in lowest terms with
//! a positive denominator by the underlying `num-rational` representation.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::Error;

/// The base field: arbitrary-precision rationals in lowest terms.
pub type Scalar = BigRational;

/// The integer `n` as a scalar.
pub fn int(n: i64) -> Scalar {
    BigRational::from_integer(BigInt::from(n))
}

/// The fraction `n/d` as a scalar. Panics if `d == 0`.
pub fn frac(n: i64, d: i64) -> Scalar {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

/// Parse the wire format `"p"` or `"p/q"` with decimal integers and `q != 0`.
pub fn parse_scalar(s: &str) -> Result<Scalar, Error> {
    let bad = || Error::InvalidScalar(s.to_string());
    let (num, den) = match s.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (s.trim(), "1"),
    };
    let num: BigInt = num.parse().map_err(|_| bad())?;
    let den: BigInt = den.parse().map_err(|_| bad())?;
    if den.is_zero() {
        return Err(bad());
    }
    Ok(BigRational::new(num, den))
}

/// Render as `"p/q"`, omitting `/q` when the denominator is 1.
pub fn format_scalar(s: &Scalar) -> String {
    if s.denom().is_one() {
        s.numer().to_string()
    } else {
        format!("{}/{}", s.numer(), s.denom())
    }
}

/// Combined bit length of numerator and denominator; the pivot-selection key.
pub fn bit_size(s: &Scalar) -> u64 {
    s.numer().abs().to_biguint().map_or(0, |b| b.bits()) + s.denom().to_biguint().map_or(0, |b| b.bits())
}
