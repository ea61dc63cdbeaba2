//! Exact arithmetic substrate: rationals, factorials, hypergeometric series,
//! and univariate polynomial / rational-function algebra.

mod highprec;
mod poly;
mod ratfunc;
mod scalar;
mod series;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::error::{Error, Result};

pub use highprec::{HighPrecReal, Precision};
pub use poly::Poly;
pub use ratfunc::RatFunc;
pub use scalar::{powi, powu, RealScalar, Scalar};
pub use series::{
    partial_sum, pfq_terminating, pfq_terminating_direct, pfq_terminating_poly, pfq_truncated, term_ratio,
    HypergeoSpec,
};

/// Exact rational number, always in lowest terms with a positive denominator.
pub type Rational = BigRational;

pub fn rat(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// Parses `"a/b"`, `"a"`, or a plain decimal such as `"0.25"`.
pub fn parse_rational(s: &str) -> Result<Rational> {
    let s = s.trim();
    let err = || Error::Parse(s.to_string());
    if let Some((n, d)) = s.split_once('/') {
        let n: BigInt = n.trim().parse().map_err(|_| err())?;
        let d: BigInt = d.trim().parse().map_err(|_| err())?;
        if d.is_zero() {
            return Err(err());
        }
        return Ok(Rational::new(n, d));
    }
    if let Some((whole, frac)) = s.split_once('.') {
        if frac.is_empty() || !frac.chars().all(|c| c.is_ascii_digit()) {
            return Err(err());
        }
        let negative = whole.starts_with('-');
        let whole_digits = whole.trim_start_matches(['-', '+']);
        let digits = format!("{}{}", if whole_digits.is_empty() { "0" } else { whole_digits }, frac);
        let mut n: BigInt = digits.parse().map_err(|_| err())?;
        if negative {
            n = -n;
        }
        let d = num_traits::pow(BigInt::from(10), frac.len());
        return Ok(Rational::new(n, d));
    }
    let n: BigInt = s.parse().map_err(|_| err())?;
    Ok(Rational::from_integer(n))
}

/// Always `"a/b"`, including integers (`"3/1"`), so the output re-parses uniformly.
pub fn format_rational(r: &Rational) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

pub fn rising_factorial<T: Scalar>(a: &T, n: u64) -> T {
    let mut acc = T::one();
    let mut x = a.clone();
    for _ in 0..n {
        acc = acc * x.clone();
        if acc.is_zero() {
            return acc;
        }
        x = x + T::one();
    }
    acc
}

pub fn falling_factorial<T: Scalar>(x: &T, k: u64) -> T {
    let mut acc = T::one();
    let mut y = x.clone();
    for _ in 0..k {
        acc = acc * y.clone();
        if acc.is_zero() {
            return acc;
        }
        y = y - T::one();
    }
    acc
}

pub fn factorial(n: u64) -> BigInt {
    (1..=n).fold(BigInt::one(), |acc, i| acc * i)
}

/// Binomial coefficient, generalised to negative `n` through `n^(k)/k!`.
pub fn binomial(n: i64, k: i64) -> Rational {
    if k < 0 || (n >= 0 && k > n) {
        return Rational::zero();
    }
    let num = falling_factorial(&int(n), k as u64);
    num / Rational::from_integer(factorial(k as u64))
}

pub fn binomial_int(n: u64, k: u64) -> BigInt {
    if k > n {
        return BigInt::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigInt::one();
    for i in 0..k {
        acc = acc * (n - i) / (i + 1);
    }
    acc
}

pub fn catalan(k: u64) -> BigInt {
    binomial_int(2 * k, k) / (k + 1)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rising() {
        assert_eq!(rising_factorial(&int(3), 4), int(360));
        assert_eq!(rising_factorial(&int(-2), 3), int(0));
        assert_eq!(rising_factorial(&rat(1, 2), 2), rat(3, 4));
        assert_eq!(rising_factorial(&rat(7, 3), 0), int(1));
    }

    #[test]
    fn falling() {
        assert_eq!(falling_factorial(&int(5), 2), int(20));
        assert_eq!(falling_factorial(&int(3), 5), int(0));
        assert_eq!(falling_factorial(&int(-1), 2), int(2));
        assert_eq!(falling_factorial(&int(9), 0), int(1));
    }

    #[test]
    fn binomials() {
        assert_eq!(binomial(4, 2), int(6));
        assert_eq!(binomial(3, 5), int(0));
        assert_eq!(binomial(-1, 2), int(1));
        assert_eq!(binomial(5, -1), int(0));
        assert_eq!(binomial_int(10, 3), BigInt::from(120));
        assert_eq!(catalan(5), BigInt::from(42));
    }

    #[test]
    fn parse_and_format() {
        assert_eq!(parse_rational("6/4").unwrap(), rat(3, 2));
        assert_eq!(parse_rational("-3").unwrap(), int(-3));
        assert_eq!(parse_rational("0.25").unwrap(), rat(1, 4));
        assert_eq!(parse_rational("-1.5").unwrap(), rat(-3, 2));
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("abc").is_err());
        assert_eq!(format_rational(&int(3)), "3/1");
        assert_eq!(format_rational(&rat(-2, 6)), "-1/3");
        let r = rat(-123456789, 1000);
        assert_eq!(parse_rational(&format_rational(&r)).unwrap(), r);
    }
}
