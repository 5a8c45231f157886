//! Exact rationals for Kraft sums, share-size ratios, and metric constants.

use alloc::string::{String, ToString};
use core::fmt;
use core::ops::{Add, Div, Mul, Neg, Sub};
use core::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{invalid, Error, Result};

/// A reduced fraction with arbitrary-precision numerator and positive denominator.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ExactRational(BigRational);

impl ExactRational {
    pub fn new(numer: impl Into<BigInt>, denom: impl Into<BigInt>) -> Result<Self> {
        let denom = denom.into();
        if denom.is_zero() {
            return Err(invalid("zero denominator"));
        }
        Ok(Self(BigRational::new(numer.into(), denom)))
    }

    pub fn from_integer(value: impl Into<BigInt>) -> Self {
        Self(BigRational::from_integer(value.into()))
    }

    /// `numer / denom` for machine integers; `denom` must be nonzero.
    pub fn ratio(numer: i128, denom: i128) -> Self {
        Self::new(numer, denom).expect("nonzero denominator")
    }

    pub fn zero() -> Self {
        Self(BigRational::zero())
    }

    pub fn numer(&self) -> &BigInt {
        self.0.numer()
    }

    pub fn denom(&self) -> &BigInt {
        self.0.denom()
    }

    pub fn is_integer(&self) -> bool {
        self.0.is_integer()
    }

    /// Largest integer not above the value.
    pub fn floor(&self) -> BigInt {
        self.numer().div_floor(self.denom())
    }

    /// True when the denominator is a power of two.
    pub fn is_dyadic(&self) -> bool {
        let d = self.denom();
        (d - BigInt::one()) & d == BigInt::zero()
    }

    /// Exact decimal expansion, available when the denominator has no prime
    /// factors besides 2 and 5.
    pub fn to_decimal(&self) -> Option<String> {
        let strip = |mut v: BigInt, p: u32| {
            let mut count = 0u32;
            while v.is_multiple_of(&BigInt::from(p)) {
                v /= p;
                count += 1;
            }
            (v, count)
        };
        let (rest, twos) = strip(self.denom().clone(), 2);
        let (rest, fives) = strip(rest, 5);
        if !rest.is_one() {
            return None;
        }
        let places = twos.max(fives) as usize;
        let scaled = self.numer().abs() * (BigInt::from(10).pow(places as u32) / self.denom());
        let digits = scaled.to_string();
        let sign = if self.numer().is_negative() { "-" } else { "" };
        if places == 0 {
            return Some(alloc::format!("{sign}{digits}"));
        }
        let padded = alloc::format!("{digits:0>width$}", width = places + 1);
        let (int, frac) = padded.split_at(padded.len() - places);
        Some(alloc::format!("{sign}{int}.{frac}"))
    }

    pub fn display_with_decimal(&self) -> String {
        match self.to_decimal() {
            Some(d) => alloc::format!("{self} ({d})"),
            None => self.to_string(),
        }
    }
}

impl fmt::Display for ExactRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.numer(), self.denom())
    }
}

impl FromStr for ExactRational {
    type Err = Error;

    /// Accepts `p/q`, integers, and finite decimals such as `1.61875`.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let bad = || Error::Parse(alloc::format!("not a rational number: {s:?}"));
        let int = |t: &str| t.parse::<BigInt>().map_err(|_| bad());
        if let Some((p, q)) = s.split_once('/') {
            return Self::new(int(p)?, int(q)?);
        }
        if let Some((whole, frac)) = s.split_once('.') {
            if frac.is_empty() || !frac.bytes().all(|b| b.is_ascii_digit()) {
                return Err(bad());
            }
            let negative = whole.starts_with('-');
            let whole = if whole.is_empty() || whole == "-" {
                BigInt::zero()
            } else {
                int(whole)?
            };
            let scale = BigInt::from(10).pow(frac.len() as u32);
            let mut numer = whole.abs() * &scale + int(frac)?;
            if negative {
                numer = -numer;
            }
            return Self::new(numer, scale);
        }
        Ok(Self::from_integer(int(s)?))
    }
}

macro_rules! binop {
    ($trait:ident, $method:ident) => {
        impl $trait for ExactRational {
            type Output = ExactRational;
            fn $method(self, rhs: ExactRational) -> ExactRational {
                ExactRational((self.0).$method(rhs.0))
            }
        }

        impl<'a> $trait<&'a ExactRational> for &'a ExactRational {
            type Output = ExactRational;
            fn $method(self, rhs: &'a ExactRational) -> ExactRational {
                ExactRational((&self.0).$method(&rhs.0))
            }
        }
    };
}

binop!(Add, add);
binop!(Sub, sub);
binop!(Mul, mul);
binop!(Div, div);

impl Neg for ExactRational {
    type Output = ExactRational;
    fn neg(self) -> ExactRational {
        ExactRational(-self.0)
    }
}

impl From<i64> for ExactRational {
    fn from(v: i64) -> Self {
        Self::from_integer(v)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(s: &str) -> ExactRational {
        s.parse().unwrap()
    }

    #[test]
    fn parses_fractions_and_decimals() {
        assert_eq!(q("51/32"), ExactRational::ratio(51, 32));
        assert_eq!(q("1.59375"), ExactRational::ratio(51, 32));
        assert_eq!(q("1.61875"), ExactRational::ratio(259, 160));
        assert_eq!(q("7/2"), q("3.5"));
        assert_eq!(q("-0.25"), ExactRational::ratio(-1, 4));
        assert_eq!(q("4"), ExactRational::from_integer(4));
        assert_eq!(q("6/4").to_string(), "3/2");
        assert!("1/0".parse::<ExactRational>().is_err());
        assert!("1.".parse::<ExactRational>().is_err());
        assert!("abc".parse::<ExactRational>().is_err());
    }

    #[test]
    fn dyadic_decimals() {
        assert_eq!(q("51/32").to_decimal().as_deref(), Some("1.59375"));
        assert_eq!(q("13/8").to_decimal().as_deref(), Some("1.625"));
        assert_eq!(q("1/1024").to_decimal().as_deref(), Some("0.0009765625"));
        assert_eq!(q("-3/2").to_decimal().as_deref(), Some("-1.5"));
        assert_eq!(q("5").to_decimal().as_deref(), Some("5"));
        assert_eq!(q("259/160").to_decimal().as_deref(), Some("1.61875"));
        assert_eq!(q("1/3").to_decimal(), None);
        assert_eq!(q("51/32").display_with_decimal(), "51/32 (1.59375)");
        assert_eq!(q("259/160").display_with_decimal(), "259/160 (1.61875)");
        assert_eq!(q("2/3").display_with_decimal(), "2/3");
    }

    #[test]
    fn arithmetic_and_order() {
        assert_eq!(q("1/2") + q("1/3"), q("5/6"));
        assert_eq!(&q("1/2") - &q("1/3"), q("1/6"));
        assert_eq!(q("3/2") * q("2/3"), q("1"));
        assert_eq!(q("1") / q("4"), q("0.25"));
        assert!(q("51/32") < q("259/160"));
        assert_eq!(q("7/2").floor(), BigInt::from(3));
        assert_eq!(q("-7/2").floor(), BigInt::from(-4));
    }
}
