//! Arbitrary-precision real numbers for the oracle sums.
//!
//! A thin newtype over [`astro_float::BigFloat`] that carries its own working
//! precision, so the arithmetic operators can be used without threading a
//! precision and rounding mode through every expression. Binary operations run
//! at the larger precision of the two operands.

use std::cell::RefCell;
use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Rem, Sub};

use astro_float::{BigFloat, Consts, Radix, RoundingMode, Sign};
use num_bigint::{BigInt, Sign as BigSign};
use num_traits::{FromPrimitive, Num, One, Zero};

use super::scalar::{RealScalar, Scalar};
use super::Rational;

const RM: RoundingMode = RoundingMode::ToEven;

thread_local! {
    static CONSTS: RefCell<Consts> = RefCell::new(Consts::new().expect("constant cache allocation"));
}

/// Working precision in significant decimal digits.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Precision {
    digits: u32,
}

impl Precision {
    pub const DEFAULT_DIGITS: u32 = 60;

    pub const fn digits(digits: u32) -> Self {
        Precision { digits }
    }

    pub fn decimal_digits(&self) -> u32 {
        self.digits
    }

    /// Mantissa bits, with one guard word on top of the decimal request.
    pub fn bits(&self) -> usize {
        let raw = (self.digits as f64 * std::f64::consts::LOG2_10).ceil() as usize;
        raw.div_ceil(64) * 64 + 64
    }
}

impl Default for Precision {
    fn default() -> Self {
        Precision::digits(Self::DEFAULT_DIGITS)
    }
}

#[derive(Clone)]
pub struct HighPrecReal {
    value: BigFloat,
    bits: usize,
}

impl HighPrecReal {
    fn wrap(value: BigFloat, bits: usize) -> Self {
        HighPrecReal { value, bits }
    }

    pub fn zero_with(precision: Precision) -> Self {
        Self::wrap(BigFloat::from_u64(0, precision.bits()), precision.bits())
    }

    pub fn from_i64_with(n: i64, precision: Precision) -> Self {
        Self::wrap(BigFloat::from_i64(n, precision.bits()), precision.bits())
    }

    pub fn from_bigint(n: &BigInt, precision: Precision) -> Self {
        let bits = precision.bits();
        let (sign, words) = n.to_u64_digits();
        if words.is_empty() {
            return Self::zero_with(precision);
        }
        let s = if sign == BigSign::Minus { Sign::Neg } else { Sign::Pos };
        let exact = BigFloat::from_words(&words, s, (words.len() * 64) as astro_float::Exponent);
        // Round the exact integer down to the working precision.
        let rounded = exact.add(&BigFloat::from_u64(0, bits), bits, RM);
        Self::wrap(rounded, bits)
    }

    pub fn from_rational_with(r: &Rational, precision: Precision) -> Self {
        let n = Self::from_bigint(r.numer(), precision);
        if r.denom() == &BigInt::from(1) {
            return n;
        }
        let d = Self::from_bigint(r.denom(), precision);
        n / d
    }

    pub fn precision_bits(&self) -> usize {
        self.bits
    }

    pub fn is_negative(&self) -> bool {
        self.value.is_negative()
    }

    pub fn is_finite(&self) -> bool {
        !(self.value.is_nan() || self.value.is_inf())
    }

    /// Scientific notation truncated to `digits` significant digits.
    pub fn to_decimal_string(&self, digits: usize) -> String {
        let full = self.value.to_string();
        if !self.is_finite() {
            return full;
        }
        if self.value.is_zero() {
            return "0".to_string();
        }
        let (mantissa, exponent) = match full.split_once('e') {
            Some((m, e)) => (m, e),
            None => (full.as_str(), "+0"),
        };
        let (sign, mantissa) = match mantissa.strip_prefix('-') {
            Some(rest) => ("-", rest),
            None => ("", mantissa),
        };
        let mut digit_chars: String = mantissa.chars().filter(|c| c.is_ascii_digit()).collect();
        digit_chars.truncate(digits.max(1));
        let trimmed = digit_chars.trim_end_matches('0');
        let trimmed = if trimmed.is_empty() { "0" } else { trimmed };
        let (head, tail) = trimmed.split_at(1);
        let exp: i64 = exponent.parse().unwrap_or(0);
        if tail.is_empty() {
            format!("{sign}{head}e{exp}")
        } else {
            format!("{sign}{head}.{tail}e{exp}")
        }
    }

    pub fn parse_with(s: &str, precision: Precision) -> Option<Self> {
        let bits = precision.bits();
        let value = CONSTS.with(|cc| BigFloat::parse(s, Radix::Dec, bits, RM, &mut cc.borrow_mut()));
        if value.is_nan() {
            None
        } else {
            Some(Self::wrap(value, bits))
        }
    }

    fn default_bits() -> usize {
        Precision::default().bits()
    }
}

impl fmt::Debug for HighPrecReal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_decimal_string(24))
    }
}

impl fmt::Display for HighPrecReal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let digits = f.precision().unwrap_or(20);
        write!(f, "{}", self.to_decimal_string(digits))
    }
}

impl PartialEq for HighPrecReal {
    fn eq(&self, other: &Self) -> bool {
        self.value == other.value
    }
}

impl PartialOrd for HighPrecReal {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        self.value.partial_cmp(&other.value)
    }
}

macro_rules! binop {
    ($trait:ident, $method:ident) => {
        impl $trait for HighPrecReal {
            type Output = HighPrecReal;
            fn $method(self, rhs: HighPrecReal) -> HighPrecReal {
                (&self).$method(&rhs)
            }
        }

        impl<'a> $trait<&'a HighPrecReal> for &'a HighPrecReal {
            type Output = HighPrecReal;
            fn $method(self, rhs: &'a HighPrecReal) -> HighPrecReal {
                let bits = self.bits.max(rhs.bits);
                HighPrecReal::wrap(self.value.$method(&rhs.value, bits, RM), bits)
            }
        }
    };
}

binop!(Add, add);
binop!(Sub, sub);
binop!(Mul, mul);
binop!(Div, div);

impl Rem for HighPrecReal {
    type Output = HighPrecReal;
    fn rem(self, rhs: HighPrecReal) -> HighPrecReal {
        let bits = self.bits.max(rhs.bits);
        let quotient = self.value.div(&rhs.value, bits, RM).int();
        let r = self.value.sub(&quotient.mul(&rhs.value, bits, RM), bits, RM);
        HighPrecReal::wrap(r, bits)
    }
}

impl Neg for HighPrecReal {
    type Output = HighPrecReal;
    fn neg(self) -> HighPrecReal {
        HighPrecReal::wrap(self.value.neg(), self.bits)
    }
}

impl Zero for HighPrecReal {
    fn zero() -> Self {
        Self::zero_with(Precision::default())
    }

    fn is_zero(&self) -> bool {
        self.value.is_zero()
    }
}

impl One for HighPrecReal {
    fn one() -> Self {
        Self::from_i64_with(1, Precision::default())
    }
}

impl Num for HighPrecReal {
    type FromStrRadixErr = crate::Error;

    fn from_str_radix(s: &str, radix: u32) -> Result<Self, Self::FromStrRadixErr> {
        if radix != 10 {
            return Err(crate::Error::Parse(s.to_string()));
        }
        Self::parse_with(s, Precision::default()).ok_or_else(|| crate::Error::Parse(s.to_string()))
    }
}

impl FromPrimitive for HighPrecReal {
    fn from_i64(n: i64) -> Option<Self> {
        Some(Self::from_i64_with(n, Precision::default()))
    }

    fn from_u64(n: u64) -> Option<Self> {
        let bits = Self::default_bits();
        Some(Self::wrap(BigFloat::from_u64(n, bits), bits))
    }

    fn from_f64(n: f64) -> Option<Self> {
        let bits = Self::default_bits();
        n.is_finite().then(|| Self::wrap(BigFloat::from_f64(n, bits), bits))
    }
}

impl Scalar for HighPrecReal {
    fn as_nonpositive_int(&self) -> Option<u64> {
        if !self.is_finite() || self.value.is_positive() && !self.value.is_zero() || !self.value.is_int() {
            return None;
        }
        self.to_decimal_string(40).parse::<f64>().ok().map(|v| (-v) as u64)
    }
}

impl RealScalar for HighPrecReal {
    fn from_rational(r: &Rational, precision: Precision) -> Self {
        Self::from_rational_with(r, precision)
    }

    fn exp(&self) -> Self {
        let v = CONSTS.with(|cc| self.value.exp(self.bits, RM, &mut cc.borrow_mut()));
        Self::wrap(v, self.bits)
    }

    fn ln(&self) -> Self {
        let v = CONSTS.with(|cc| self.value.ln(self.bits, RM, &mut cc.borrow_mut()));
        Self::wrap(v, self.bits)
    }

    fn sqrt(&self) -> Self {
        Self::wrap(self.value.sqrt(self.bits, RM), self.bits)
    }

    fn abs(&self) -> Self {
        Self::wrap(self.value.abs(), self.bits)
    }

    fn to_f64(&self) -> f64 {
        self.to_decimal_string(20).parse().unwrap_or(f64::NAN)
    }
}
