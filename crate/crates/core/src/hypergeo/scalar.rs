//! Scalar abstractions shared by the exact and the floating-point code paths.
//!
//! [`Scalar`] is the coefficient field of [`Poly`](super::Poly),
//! [`RatFunc`](super::RatFunc) and the hypergeometric partial sums. The exact
//! closed forms run over [`Rational`]; the oracles that need `exp`, `ln` or
//! `sqrt` run over any [`RealScalar`] (`f64` for quick checks,
//! [`HighPrecReal`](super::HighPrecReal) for everything with a tolerance).

use std::fmt::Debug;
use std::ops::Neg;

use num_bigint::BigInt;
use num_traits::{FromPrimitive, Num, Signed, ToPrimitive};

use super::highprec::Precision;
use super::Rational;

pub trait Scalar: Clone + Debug + PartialEq + Num + Neg<Output = Self> + FromPrimitive {
    /// `Some(n)` when `self` is exactly the integer `-n`, `n >= 0`.
    fn as_nonpositive_int(&self) -> Option<u64>;

    fn from_int(n: i64) -> Self {
        Self::from_i64(n).expect("every scalar type represents small integers")
    }
}

pub trait RealScalar: Scalar + PartialOrd {
    /// Converts an exact rational at the requested working precision.
    /// Types with a fixed precision ignore `precision`.
    fn from_rational(r: &Rational, precision: Precision) -> Self;

    fn exp(&self) -> Self;
    fn ln(&self) -> Self;
    fn sqrt(&self) -> Self;
    fn abs(&self) -> Self;
    fn to_f64(&self) -> f64;
}

impl Scalar for Rational {
    fn as_nonpositive_int(&self) -> Option<u64> {
        if self.is_integer() && !self.is_positive() {
            (-self.numer()).to_u64()
        } else {
            None
        }
    }

    fn from_int(n: i64) -> Self {
        Rational::from_integer(BigInt::from(n))
    }
}

impl Scalar for f64 {
    fn as_nonpositive_int(&self) -> Option<u64> {
        if *self <= 0.0 && self.fract() == 0.0 && *self > -(u64::MAX as f64) {
            Some((-*self) as u64)
        } else {
            None
        }
    }
}

impl RealScalar for f64 {
    fn from_rational(r: &Rational, _precision: Precision) -> Self {
        match (r.numer().to_f64(), r.denom().to_f64()) {
            (Some(n), Some(d)) if n.is_finite() && d.is_finite() => n / d,
            _ => {
                // Scale both sides down before dividing when they overflow f64.
                let shift = r.numer().bits().max(r.denom().bits()).saturating_sub(1000);
                let n = (r.numer() >> shift).to_f64().unwrap_or(f64::NAN);
                let d = (r.denom() >> shift).to_f64().unwrap_or(f64::NAN);
                n / d
            }
        }
    }

    fn exp(&self) -> Self {
        f64::exp(*self)
    }

    fn ln(&self) -> Self {
        f64::ln(*self)
    }

    fn sqrt(&self) -> Self {
        f64::sqrt(*self)
    }

    fn abs(&self) -> Self {
        f64::abs(*self)
    }

    fn to_f64(&self) -> f64 {
        *self
    }
}

/// `base^exp` by repeated squaring; works for any scalar.
pub fn powu<T: Scalar>(base: &T, mut exp: u64) -> T {
    let mut result = T::one();
    let mut b = base.clone();
    while exp > 0 {
        if exp & 1 == 1 {
            result = result * b.clone();
        }
        exp >>= 1;
        if exp > 0 {
            b = b.clone() * b;
        }
    }
    result
}

/// Integer power with a possibly negative exponent. Zero to a negative power
/// is rejected by the caller's own validation; here it yields a division by zero.
pub fn powi<T: Scalar>(base: &T, exp: i64) -> T {
    if exp >= 0 {
        powu(base, exp as u64)
    } else {
        T::one() / powu(base, exp.unsigned_abs())
    }
}
