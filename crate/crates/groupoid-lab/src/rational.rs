//! Exact rational scalars used by every measure computation.
//!
//! All measure arithmetic in this crate is exact; floating point never
//! appears in measure logic.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::error::{Error, Result};

pub type Rational = BigRational;

pub fn rat(num: i64, den: i64) -> Rational {
    BigRational::new(BigInt::from(num), BigInt::from(den))
}

pub fn int(n: i64) -> Rational {
    BigRational::from_integer(BigInt::from(n))
}

pub fn zero() -> Rational {
    BigRational::zero()
}

pub fn one() -> Rational {
    BigRational::one()
}

/// `base^(-exp)` as an exact rational.
pub fn inv_pow(base: u64, exp: usize) -> Rational {
    BigRational::new(BigInt::one(), BigInt::from(base).pow(exp as u32))
}

/// Renders in the certificate wire format: "p/q" in lowest terms, or "p"
/// for integers.
pub fn to_string(r: &Rational) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

pub fn parse(s: &str) -> Result<Rational> {
    let parse_int = |t: &str| {
        t.trim()
            .parse::<BigInt>()
            .map_err(|_| Error::invalid(format!("bad rational literal {s:?}")))
    };
    match s.split_once('/') {
        Some((p, q)) => {
            let den = parse_int(q)?;
            if den.is_zero() {
                return Err(Error::invalid(format!("zero denominator in {s:?}")));
            }
            Ok(BigRational::new(parse_int(p)?, den))
        }
        None => Ok(BigRational::from_integer(parse_int(s)?)),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn string_round_trip() {
        for r in [rat(1, 4), rat(-3, 7), int(5), zero()] {
            assert_eq!(parse(&to_string(&r)).unwrap(), r);
        }
    }

    #[test]
    fn inv_pow_values() {
        assert_eq!(inv_pow(2, 3), rat(1, 8));
        assert_eq!(inv_pow(3, 0), one());
    }

    #[test]
    fn rejects_zero_denominator() {
        assert!(parse("1/0").is_err());
    }
}
