use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};


use super::poly::Poly;
use super::scalar::Scalar;
use crate::error::{Error, Result};

/// Rational function `num / den` kept in canonical form: coprime parts and a
/// monic denominator. The zero function is stored as `0 / 1`.
#[derive(Debug, Clone)]
pub struct RatFunc<T> {
    num: Poly<T>,
    den: Poly<T>,
}

impl<T: Scalar> RatFunc<T> {
    pub fn new(num: Poly<T>, den: Poly<T>) -> Result<Self> {
        if den.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(Self::canonical(num, den))
    }

    fn canonical(num: Poly<T>, den: Poly<T>) -> Self {
        if num.is_zero() {
            return RatFunc { num, den: Poly::one() };
        }
        if den.degree() == Some(0) {
            let inv = T::one() / den.coeff(0);
            return RatFunc { num: num.scale(&inv), den: Poly::one() };
        }
        let g = Poly::gcd(&num, &den);
        let (num, den) = if g.degree() == Some(0) {
            (num, den)
        } else {
            (num.div_rem(&g).expect("gcd of nonzero polys is nonzero").0, den.div_rem(&g).expect("gcd of nonzero polys is nonzero").0)
        };
        let lc = den.leading().expect("nonzero denominator").clone();
        let inv = T::one() / lc;
        RatFunc { num: num.scale(&inv), den: den.scale(&inv) }
    }

    pub fn from_poly(p: Poly<T>) -> Self {
        RatFunc { num: p, den: Poly::one() }
    }

    pub fn constant(c: T) -> Self {
        Self::from_poly(Poly::constant(c))
    }

    pub fn zero() -> Self {
        Self::from_poly(Poly::zero())
    }

    pub fn one() -> Self {
        Self::from_poly(Poly::one())
    }

    pub fn x() -> Self {
        Self::from_poly(Poly::x())
    }

    pub fn numer(&self) -> &Poly<T> {
        &self.num
    }

    pub fn denom(&self) -> &Poly<T> {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    /// The polynomial, when the denominator is constant.
    pub fn as_poly(&self) -> Option<Poly<T>> {
        (self.den.degree() == Some(0)).then(|| self.num.scale(&(T::one() / self.den.coeff(0))))
    }

    pub fn recip(&self) -> Result<Self> {
        Self::new(self.den.clone(), self.num.clone())
    }

    pub fn checked_div(&self, rhs: &Self) -> Result<Self> {
        if rhs.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(Self::canonical(&self.num * &rhs.den, &self.den * &rhs.num))
    }

    pub fn scale(&self, c: &T) -> Self {
        Self::canonical(self.num.scale(c), self.den.clone())
    }

    pub fn pow(&self, n: u32) -> Self {
        RatFunc { num: self.num.pow(n), den: self.den.pow(n) }
    }

    pub fn derivative(&self) -> Self {
        let num = &(&self.num.derivative() * &self.den) - &(&self.num * &self.den.derivative());
        Self::canonical(num, &self.den * &self.den)
    }

    pub fn eval(&self, t: &T) -> Result<T> {
        let d = self.den.eval(t);
        if d.is_zero() {
            return Err(Error::Pole(format!("{t:?}")));
        }
        Ok(self.num.eval(t) / d)
    }

    /// `p(self)` for a polynomial `p`, computed as `Σ c_i a^i b^(n-i) / b^n`
    /// with `self = a / b`, so no intermediate gcds are taken.
    pub fn substitute_into(&self, p: &Poly<T>) -> Self {
        let Some(n) = p.degree() else {
            return Self::zero();
        };
        let mut a_pows = vec![Poly::one()];
        let mut b_pows = vec![Poly::one()];
        for i in 0..n {
            a_pows.push(&a_pows[i] * &self.num);
            b_pows.push(&b_pows[i] * &self.den);
        }
        let mut num = Poly::zero();
        for (i, c) in p.coeffs().iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            num = &num + &(&a_pows[i] * &b_pows[n - i]).scale(c);
        }
        Self::canonical(num, b_pows[n].clone())
    }
}

impl<T: Scalar> PartialEq for RatFunc<T> {
    fn eq(&self, other: &Self) -> bool {
        &self.num * &other.den == &other.num * &self.den
    }
}

impl<'a, T: Scalar> Add<&'a RatFunc<T>> for &'a RatFunc<T> {
    type Output = RatFunc<T>;
    fn add(self, rhs: &'a RatFunc<T>) -> RatFunc<T> {
        if self.den == rhs.den {
            return RatFunc::canonical(&self.num + &rhs.num, self.den.clone());
        }
        RatFunc::canonical(&(&self.num * &rhs.den) + &(&rhs.num * &self.den), &self.den * &rhs.den)
    }
}

impl<'a, T: Scalar> Sub<&'a RatFunc<T>> for &'a RatFunc<T> {
    type Output = RatFunc<T>;
    fn sub(self, rhs: &'a RatFunc<T>) -> RatFunc<T> {
        self + &(-rhs)
    }
}

impl<'a, T: Scalar> Mul<&'a RatFunc<T>> for &'a RatFunc<T> {
    type Output = RatFunc<T>;
    fn mul(self, rhs: &'a RatFunc<T>) -> RatFunc<T> {
        RatFunc::canonical(&self.num * &rhs.num, &self.den * &rhs.den)
    }
}

impl<T: Scalar> Neg for &RatFunc<T> {
    type Output = RatFunc<T>;
    fn neg(self) -> RatFunc<T> {
        RatFunc { num: -&self.num, den: self.den.clone() }
    }
}

macro_rules! owned_ops {
    ($($trait:ident $method:ident),*) => {$(
        impl<T: Scalar> $trait for RatFunc<T> {
            type Output = RatFunc<T>;
            fn $method(self, rhs: RatFunc<T>) -> RatFunc<T> {
                (&self).$method(&rhs)
            }
        }
    )*};
}
owned_ops!(Add add, Sub sub, Mul mul);

impl<T: Scalar> Neg for RatFunc<T> {
    type Output = RatFunc<T>;
    fn neg(self) -> RatFunc<T> {
        -&self
    }
}

impl<T: Scalar> From<Poly<T>> for RatFunc<T> {
    fn from(p: Poly<T>) -> Self {
        Self::from_poly(p)
    }
}

impl<T: Scalar + fmt::Display> fmt::Display for RatFunc<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.degree() == Some(0) && self.den.coeff(0).is_one() {
            write!(f, "{}", self.num)
        } else {
            write!(f, "({}) / ({})", self.num, self.den)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hypergeo::{int, Rational};

    fn p(c: &[i64]) -> Poly<Rational> {
        Poly::new(c.iter().map(|&x| int(x)).collect())
    }

    fn rf(n: &[i64], d: &[i64]) -> RatFunc<Rational> {
        RatFunc::new(p(n), p(d)).unwrap()
    }

    #[test]
    fn derivatives() {
        assert_eq!(rf(&[1], &[1, -1]).derivative(), rf(&[1], &[1, -2, 1]));
        assert_eq!(rf(&[2, 1], &[1, -1]).derivative(), rf(&[3], &[1, -2, 1]));
    }

    #[test]
    fn zero_detection_and_canonical_form() {
        let f = rf(&[0], &[1, -1]);
        assert!(f.is_zero());
        let g = rf(&[-2, 0, 2], &[2, 2]);
        assert_eq!(g.numer(), &p(&[-1, 1]));
        assert_eq!(g.denom(), &p(&[1]));
        assert!(RatFunc::new(p(&[1]), Poly::zero()).is_err());
        assert!(rf(&[1], &[1]).checked_div(&RatFunc::zero()).is_err());
    }

    #[test]
    fn substitution() {
        // x^2 evaluated at (1+t)/(1-t)
        let x = rf(&[1, 1], &[1, -1]);
        let sq = x.substitute_into(&p(&[0, 0, 1]));
        assert_eq!(sq, &x * &x);
        assert_eq!(sq.eval(&int(2)).unwrap(), int(9));
        assert!(sq.eval(&int(1)).is_err());
    }
}
