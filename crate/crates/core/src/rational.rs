//! Arbitrary-precision exact fractions.
//!
//! [`Rational`] is always stored in canonical form: the denominator is
//! positive and coprime to the numerator, and zero is `0/1`. The textual form
//! is `p/q` (sign allowed on `p` only, `q > 0`); a bare integer `p` stands for
//! `p/1`.

use std::cmp::Ordering;
use std::fmt;
use std::iter::{Product, Sum};
use std::ops::{Add, AddAssign, Mul, MulAssign, Neg, Sub, SubAssign};
use std::str::FromStr;

use num_bigint::{BigInt, Sign};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// Digits used by [`Rational::to_decimal_default`].
pub const DEFAULT_DECIMAL_DIGITS: usize = 6;

/// An exact fraction in lowest terms.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Rational(BigRational);

impl Rational {
    /// Builds `numer/denom`, reducing to canonical form.
    pub fn new(numer: impl Into<BigInt>, denom: impl Into<BigInt>) -> Result<Self> {
        let denom = denom.into();
        if denom.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(Rational(BigRational::new(numer.into(), denom)))
    }

    pub fn from_integer(n: impl Into<BigInt>) -> Self {
        Rational(BigRational::from_integer(n.into()))
    }

    /// `numer/denom` for literals known to be valid.
    ///
    /// Panics if `denom == 0`; use [`Rational::new`] for untrusted input.
    pub fn ratio(numer: i64, denom: i64) -> Self {
        assert!(denom != 0, "Rational::ratio with zero denominator");
        Rational(BigRational::new(numer.into(), denom.into()))
    }

    pub fn zero() -> Self {
        Rational(BigRational::zero())
    }

    pub fn one() -> Self {
        Rational(BigRational::one())
    }

    pub fn numer(&self) -> &BigInt {
        self.0.numer()
    }

    pub fn denom(&self) -> &BigInt {
        self.0.denom()
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    pub fn is_positive(&self) -> bool {
        self.0.is_positive()
    }

    pub fn is_negative(&self) -> bool {
        self.0.is_negative()
    }

    pub fn is_integer(&self) -> bool {
        self.0.is_integer()
    }

    pub fn abs(&self) -> Self {
        Rational(self.0.abs())
    }

    /// True when `0 <= self <= 1`.
    pub fn is_probability(&self) -> bool {
        !self.is_negative() && self.0 <= BigRational::one()
    }

    pub fn checked_div(&self, rhs: &Rational) -> Result<Self> {
        if rhs.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(Rational(&self.0 / &rhs.0))
    }

    pub fn recip(&self) -> Result<Self> {
        Rational::one().checked_div(self)
    }

    /// Same value rewritten over `denom`, if `denom` is a multiple of the
    /// canonical denominator. `780/2550` is stored as `26/85`; this recovers
    /// the `780` for display.
    pub fn numer_over(&self, denom: &BigInt) -> Option<BigInt> {
        let (q, r) = denom.div_rem(self.denom());
        r.is_zero().then(|| self.numer() * q)
    }

    /// Decimal expansion truncated toward zero after `digits` fractional
    /// digits. Display only.
    pub fn to_decimal(&self, digits: usize) -> String {
        let scale = num_traits::pow(BigInt::from(10u8), digits);
        let scaled = (self.numer().abs() * &scale) / self.denom();
        let (int_part, frac_part) = scaled.div_rem(&scale);
        let sign = if self.is_negative() && !scaled.is_zero() { "-" } else { "" };
        if digits == 0 {
            return format!("{sign}{int_part}");
        }
        format!("{sign}{int_part}.{:0>width$}", frac_part.to_string(), width = digits)
    }

    pub fn to_decimal_default(&self) -> String {
        self.to_decimal(DEFAULT_DECIMAL_DIGITS)
    }

    pub fn to_f64(&self) -> f64 {
        self.0.to_f64().unwrap_or(f64::NAN)
    }
}

impl fmt::Display for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_integer() {
            write!(f, "{}", self.numer())
        } else {
            write!(f, "{}/{}", self.numer(), self.denom())
        }
    }
}

impl fmt::Debug for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.numer(), self.denom())
    }
}

fn parse_int(s: &str, signed: bool) -> Option<BigInt> {
    let digits = match s.as_bytes().first()? {
        b'-' | b'+' if signed => &s[1..],
        _ => s,
    };
    if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
        return None;
    }
    let magnitude = BigInt::parse_bytes(digits.as_bytes(), 10)?;
    Some(if s.starts_with('-') { -magnitude } else { magnitude })
}

impl FromStr for Rational {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::ParseRational(s.to_string());
        let (p, q) = match s.split_once('/') {
            Some((p, q)) => (p, Some(q)),
            None => (s, None),
        };
        let numer = parse_int(p, true).ok_or_else(bad)?;
        let denom = match q {
            Some(q) => parse_int(q, false).ok_or_else(bad)?,
            None => BigInt::one(),
        };
        if denom.sign() != Sign::Plus {
            return Err(bad());
        }
        Rational::new(numer, denom)
    }
}

impl Serialize for Rational {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Rational {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

impl From<i64> for Rational {
    fn from(n: i64) -> Self {
        Rational::from_integer(n)
    }
}

impl From<u64> for Rational {
    fn from(n: u64) -> Self {
        Rational::from_integer(n)
    }
}

impl From<BigInt> for Rational {
    fn from(n: BigInt) -> Self {
        Rational::from_integer(n)
    }
}

macro_rules! forward_binop {
    ($trait:ident, $method:ident) => {
        impl $trait<Rational> for Rational {
            type Output = Rational;
            fn $method(self, rhs: Rational) -> Rational {
                Rational(self.0.$method(rhs.0))
            }
        }
        impl<'a> $trait<&'a Rational> for Rational {
            type Output = Rational;
            fn $method(self, rhs: &'a Rational) -> Rational {
                Rational(self.0.$method(&rhs.0))
            }
        }
        impl<'a> $trait<Rational> for &'a Rational {
            type Output = Rational;
            fn $method(self, rhs: Rational) -> Rational {
                Rational((&self.0).$method(rhs.0))
            }
        }
        impl<'a, 'b> $trait<&'b Rational> for &'a Rational {
            type Output = Rational;
            fn $method(self, rhs: &'b Rational) -> Rational {
                Rational((&self.0).$method(&rhs.0))
            }
        }
    };
}

forward_binop!(Add, add);
forward_binop!(Sub, sub);
forward_binop!(Mul, mul);

macro_rules! forward_assign {
    ($trait:ident, $method:ident) => {
        impl $trait<Rational> for Rational {
            fn $method(&mut self, rhs: Rational) {
                self.0.$method(rhs.0);
            }
        }
        impl<'a> $trait<&'a Rational> for Rational {
            fn $method(&mut self, rhs: &'a Rational) {
                self.0.$method(&rhs.0);
            }
        }
    };
}

forward_assign!(AddAssign, add_assign);
forward_assign!(SubAssign, sub_assign);
forward_assign!(MulAssign, mul_assign);

impl Neg for Rational {
    type Output = Rational;
    fn neg(self) -> Rational {
        Rational(-self.0)
    }
}

impl Neg for &Rational {
    type Output = Rational;
    fn neg(self) -> Rational {
        Rational(-&self.0)
    }
}

impl Sum for Rational {
    fn sum<I: Iterator<Item = Rational>>(iter: I) -> Rational {
        iter.fold(Rational::zero(), |acc, x| acc + x)
    }
}

impl<'a> Sum<&'a Rational> for Rational {
    fn sum<I: Iterator<Item = &'a Rational>>(iter: I) -> Rational {
        iter.fold(Rational::zero(), |acc, x| acc + x)
    }
}

impl Product for Rational {
    fn product<I: Iterator<Item = Rational>>(iter: I) -> Rational {
        iter.fold(Rational::one(), |acc, x| acc * x)
    }
}

/// Exact three-way comparison (cross-multiplication under the hood).
pub fn compare(x: &Rational, y: &Rational) -> Ordering {
    x.cmp(y)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn r(s: &str) -> Rational {
        s.parse().unwrap()
    }

    #[test]
    fn adds_fractions() {
        assert_eq!(r("1/2") + r("1/3"), r("5/6"));
    }

    #[test]
    fn canonicalizes_on_construction() {
        let x = Rational::new(67872, 132600).unwrap();
        assert_eq!(x.numer(), &BigInt::from(2828));
        assert_eq!(x.denom(), &BigInt::from(5525));
        assert_eq!(Rational::new(0, -7).unwrap().denom(), &BigInt::from(1));
        assert_eq!(Rational::new(3, -6).unwrap(), r("-1/2"));
    }

    #[test]
    fn division_by_zero_is_an_error() {
        assert_eq!(r("1/2").checked_div(&r("0/1")), Err(Error::DivisionByZero));
        assert_eq!(Rational::new(1, 0), Err(Error::DivisionByZero));
        assert_eq!(Rational::zero().recip(), Err(Error::DivisionByZero));
    }

    #[test]
    fn montmort_bracket_comparisons() {
        let advantage = r("2828/5525") - r("1/2");
        assert_eq!(advantage, r("131/11050"));
        assert_eq!(compare(&r("1/85"), &advantage), Ordering::Less);
        assert_eq!(compare(&advantage, &r("1/84")), Ordering::Less);
        assert_eq!(compare(&r("2/4"), &r("1/2")), Ordering::Equal);
    }

    #[test]
    fn parse_grammar() {
        assert_eq!(r("7"), Rational::from_integer(7));
        assert_eq!(r("-3/4"), Rational::ratio(-3, 4));
        assert_eq!(r("+3/4"), Rational::ratio(3, 4));
        for bad in ["", "/", "1/", "/2", "1/0", "1/-2", "1/+2", "a", "1.5", "1/2/3", " 1/2", "--1"] {
            assert!(bad.parse::<Rational>().is_err(), "{bad:?} should not parse");
        }
    }

    #[test]
    fn display_forms() {
        assert_eq!(r("10/4").to_string(), "5/2");
        assert_eq!(r("8/4").to_string(), "2");
        assert_eq!(Rational::zero().to_string(), "0");
        assert_eq!(format!("{:?}", r("2")), "2/1");
    }

    #[test]
    fn decimal_truncates_toward_zero() {
        assert_eq!(r("11327/22100").to_decimal_default(), "0.512533");
        assert_eq!(r("2/3").to_decimal(3), "0.666");
        assert_eq!(r("-2/3").to_decimal(3), "-0.666");
        assert_eq!(r("-1/3000").to_decimal(2), "0.00");
        assert_eq!(r("7/2").to_decimal(0), "3");
        assert_eq!(r("1/20").to_decimal(4), "0.0500");
    }

    #[test]
    fn numer_over_recovers_printed_numerators() {
        let x = r("780/2550");
        assert_eq!(x.numer_over(&BigInt::from(2550)), Some(BigInt::from(780)));
        assert_eq!(x.numer_over(&BigInt::from(2551)), None);
    }

    #[test]
    fn serde_uses_text_form() {
        let x = r("-5/6");
        let json = serde_json::to_string(&x).unwrap();
        assert_eq!(json, "\"-5/6\"");
        assert_eq!(serde_json::from_str::<Rational>(&json).unwrap(), x);
        assert!(serde_json::from_str::<Rational>("\"1/0\"").is_err());
    }

    fn arb_rational() -> impl Strategy<Value = Rational> {
        (any::<i64>(), 1i64..=i64::MAX).prop_map(|(p, q)| Rational::new(p, q).unwrap())
    }

    proptest! {
        #[test]
        fn field_laws(x in arb_rational(), y in arb_rational(), z in arb_rational()) {
            prop_assert_eq!(&x + &y, &y + &x);
            prop_assert_eq!(&x * &y, &y * &x);
            prop_assert_eq!(&(&x + &y) + &z, &x + &(&y + &z));
            prop_assert_eq!(&(&x * &y) * &z, &x * &(&y * &z));
            prop_assert_eq!(&(&x + &y) - &y, x.clone());
        }

        #[test]
        fn canonical_form_is_idempotent(p in any::<i64>(), q in 1i64..=i64::MAX) {
            let x = Rational::new(p, q).unwrap();
            let again = Rational::new(x.numer().clone(), x.denom().clone()).unwrap();
            prop_assert_eq!(x.numer(), again.numer());
            prop_assert_eq!(x.denom(), again.denom());
            prop_assert!(x.denom().is_positive());
            prop_assert!(x.numer().gcd(x.denom()).is_one());
        }

        #[test]
        fn compare_matches_sign_of_difference(x in arb_rational(), y in arb_rational()) {
            let diff = &x - &y;
            let expected = diff.numer().sign();
            let got = match compare(&x, &y) {
                Ordering::Less => Sign::Minus,
                Ordering::Equal => Sign::NoSign,
                Ordering::Greater => Sign::Plus,
            };
            prop_assert_eq!(got, expected);
        }

        #[test]
        fn text_round_trip(x in arb_rational()) {
            prop_assert_eq!(x.to_string().parse::<Rational>().unwrap(), x);
        }
    }
}
