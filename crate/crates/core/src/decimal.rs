//! Exact decimal values for capability ranges and unit scales.
//!
//! Values are stored as unbounded rationals so unit conversion and interval
//! comparison never round. Anything parsed from source text has a
//! terminating decimal expansion and prints back in its shortest form.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Div, Mul, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("invalid decimal literal `{0}`")]
pub struct DecimalParseError(pub String);

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Decimal(BigRational);

impl Decimal {
    pub fn zero() -> Self {
        Decimal(BigRational::zero())
    }

    pub fn one() -> Self {
        Decimal(BigRational::one())
    }

    pub fn from_integer(value: i64) -> Self {
        Decimal(BigRational::from_integer(BigInt::from(value)))
    }

    /// `mantissa * 10^-scale`
    pub fn from_scaled(mantissa: i64, scale: u32) -> Self {
        let denom = BigInt::from(10u32).pow(scale);
        Decimal(BigRational::new(BigInt::from(mantissa), denom))
    }

    pub fn from_ratio(numer: i64, denom: i64) -> Self {
        assert!(denom != 0, "zero denominator");
        Decimal(BigRational::new(BigInt::from(numer), BigInt::from(denom)))
    }

    pub fn is_positive(&self) -> bool {
        self.0.is_positive()
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    pub fn as_rational(&self) -> &BigRational {
        &self.0
    }

    pub fn to_f64(&self) -> f64 {
        self.0.to_f64().unwrap_or(f64::NAN)
    }

    /// True when the value has a finite decimal expansion.
    pub fn is_terminating(&self) -> bool {
        let mut d = self.0.denom().clone();
        let two = BigInt::from(2u32);
        let five = BigInt::from(5u32);
        while d.is_even() {
            d /= &two;
        }
        while (&d % &five).is_zero() {
            d /= &five;
        }
        d.is_one()
    }

    /// Shortest decimal text, or `None` when the expansion does not terminate.
    pub fn to_decimal_string(&self) -> Option<String> {
        if !self.is_terminating() {
            return None;
        }
        let negative = self.0.is_negative();
        let abs = self.0.abs();
        let ten = BigInt::from(10u32);
        let mut scale = 0u32;
        let mut scaled = abs.clone();
        while !scaled.is_integer() {
            scaled *= BigRational::from_integer(ten.clone());
            scale += 1;
        }
        let digits = scaled.to_integer().to_string();
        let text = if scale == 0 {
            digits
        } else {
            let width = scale as usize + 1;
            let padded = format!("{digits:0>width$}");
            let split = padded.len() - scale as usize;
            format!("{}.{}", &padded[..split], &padded[split..])
        };
        Some(if negative { format!("-{text}") } else { text })
    }
}

impl FromStr for Decimal {
    type Err = DecimalParseError;

    /// Accepts `-? digits ( . digits )?`; no exponent form.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let err = || DecimalParseError(s.to_string());
        let (negative, body) = match s.strip_prefix('-') {
            Some(rest) => (true, rest),
            None => (false, s),
        };
        let (int_part, frac_part) = match body.split_once('.') {
            Some((i, f)) => (i, Some(f)),
            None => (body, None),
        };
        if int_part.is_empty() || !int_part.bytes().all(|b| b.is_ascii_digit()) {
            return Err(err());
        }
        let frac = frac_part.unwrap_or("");
        if frac_part.is_some() && frac.is_empty() {
            return Err(err());
        }
        if !frac.bytes().all(|b| b.is_ascii_digit()) {
            return Err(err());
        }
        let mut digits = String::with_capacity(int_part.len() + frac.len());
        digits.push_str(int_part);
        digits.push_str(frac);
        let mantissa: BigInt = digits.parse().map_err(|_| err())?;
        let denom = BigInt::from(10u32).pow(frac.len() as u32);
        let value = BigRational::new(mantissa, denom);
        Ok(Decimal(if negative { -value } else { value }))
    }
}

impl fmt::Display for Decimal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.to_decimal_string() {
            Some(text) => f.write_str(&text),
            None => write!(f, "{}/{}", self.0.numer(), self.0.denom()),
        }
    }
}

impl fmt::Debug for Decimal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Decimal({self})")
    }
}

impl Add for &Decimal {
    type Output = Decimal;

    fn add(self, rhs: &Decimal) -> Decimal {
        Decimal(&self.0 + &rhs.0)
    }
}

impl Sub for &Decimal {
    type Output = Decimal;

    fn sub(self, rhs: &Decimal) -> Decimal {
        Decimal(&self.0 - &rhs.0)
    }
}

impl Mul for &Decimal {
    type Output = Decimal;

    fn mul(self, rhs: &Decimal) -> Decimal {
        Decimal(&self.0 * &rhs.0)
    }
}

impl Div for &Decimal {
    type Output = Decimal;

    fn div(self, rhs: &Decimal) -> Decimal {
        assert!(!rhs.is_zero(), "division by zero decimal");
        Decimal(&self.0 / &rhs.0)
    }
}

impl serde::Serialize for Decimal {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        match self.to_decimal_string() {
            Some(text) => match serde_json::Number::from_str(&text) {
                Ok(number) => number.serialize(serializer),
                Err(_) => serializer.serialize_str(&text),
            },
            None => serializer.serialize_str(&self.to_string()),
        }
    }
}

/// Closed-interval containment: `[inner_low, inner_high] ⊆ [outer_low, outer_high]`.
pub fn interval_contains(
    outer: (&Decimal, &Decimal),
    inner: (&Decimal, &Decimal),
) -> bool {
    outer.0.cmp(inner.0) != Ordering::Greater && inner.1.cmp(outer.1) != Ordering::Greater
}
