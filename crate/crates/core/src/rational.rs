//! Exact rational helpers: parsing, formatting, and float conversion.
//!
//! Game probabilities and the certificate diagonals are kept as exact
//! rationals end to end; floats only appear once spectra are needed.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};

use crate::error::Error;
use crate::Result;

/// Arbitrary-precision rational used throughout the crate.
pub type Ratio = BigRational;

/// Rational from an integer.
pub fn ratio_int(n: i64) -> Ratio {
    Ratio::from_integer(BigInt::from(n))
}

/// Rational `num/den`. Panics on a zero denominator.
pub fn ratio(num: i64, den: i64) -> Ratio {
    Ratio::new(BigInt::from(num), BigInt::from(den))
}

/// Parses `"a/b"`, `"a"`, or `"-a/b"` into an exact rational.
pub fn parse_ratio(literal: &str) -> Result<Ratio> {
    let s = literal.trim();
    let bad = |reason: &str| Error::BadRational {
        literal: literal.to_string(),
        reason: reason.to_string(),
    };
    if s.is_empty() {
        return Err(bad("empty string"));
    }
    let mut parts = s.splitn(2, '/');
    let num_s = parts.next().unwrap().trim();
    let num: BigInt = num_s.parse().map_err(|_| bad("numerator is not an integer"))?;
    match parts.next() {
        None => Ok(Ratio::from_integer(num)),
        Some(den_s) => {
            let den: BigInt = den_s
                .trim()
                .parse()
                .map_err(|_| bad("denominator is not an integer"))?;
            if den.is_zero() {
                return Err(bad("denominator is zero"));
            }
            Ok(Ratio::new(num, den))
        }
    }
}

/// Canonical string form: reduced, `"a/b"` with positive denominator,
/// or plain `"a"` for integers.
pub fn format_ratio(r: &Ratio) -> String {
    if r.denom() == &BigInt::from(1) {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// Nearest `f64`; exact rationals of interest here are far below the
/// range where the conversion could fail.
pub fn ratio_to_f64(r: &Ratio) -> f64 {
    r.to_f64().unwrap_or_else(|| {
        let n = r.numer().to_f64().unwrap_or(f64::NAN);
        let d = r.denom().to_f64().unwrap_or(f64::NAN);
        n / d
    })
}

/// Sign of a rational as `-1`, `0`, or `+1`.
pub fn ratio_sign(r: &Ratio) -> i8 {
    if r.is_zero() {
        0
    } else if r.is_positive() {
        1
    } else {
        -1
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_plain_integers_and_fractions() {
        assert_eq!(parse_ratio("3").unwrap(), ratio_int(3));
        assert_eq!(parse_ratio("-7").unwrap(), ratio_int(-7));
        assert_eq!(parse_ratio("3/4").unwrap(), ratio(3, 4));
        assert_eq!(parse_ratio(" -1/16 ").unwrap(), ratio(-1, 16));
        assert_eq!(parse_ratio("2/-4").unwrap(), ratio(-1, 2));
    }

    #[test]
    fn rejects_garbage() {
        assert!(parse_ratio("").is_err());
        assert!(parse_ratio("1/0").is_err());
        assert!(parse_ratio("a/b").is_err());
        assert!(parse_ratio("1.5").is_err());
    }

    #[test]
    fn formats_reduced() {
        assert_eq!(format_ratio(&ratio(2, 4)), "1/2");
        assert_eq!(format_ratio(&ratio(4, 2)), "2");
        assert_eq!(format_ratio(&ratio(-1, 16)), "-1/16");
    }

    #[test]
    fn float_conversion() {
        assert_eq!(ratio_to_f64(&ratio(3, 4)), 0.75);
        assert_eq!(ratio_to_f64(&ratio(-1, 8)), -0.125);
    }
}
