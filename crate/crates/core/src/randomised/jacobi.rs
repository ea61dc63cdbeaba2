//! Jacobi and Legendre polynomials from their terminating ₂F₁ form.

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::hypergeo::{factorial, int, pfq_terminating, pfq_terminating_poly, rising_factorial, HypergeoSpec, Poly, Rational};

#[derive(Debug, Clone, PartialEq)]
pub struct JacobiSpec {
    pub alpha: Rational,
    pub beta: Rational,
    pub n: u64,
}

impl JacobiSpec {
    pub fn new(alpha: Rational, beta: Rational, n: u64) -> Self {
        JacobiSpec { alpha, beta, n }
    }

    fn leading_factor(&self) -> Rational {
        rising_factorial(&(&self.alpha + int(1)), self.n) / Rational::from_integer(factorial(self.n))
    }

    fn upper(&self) -> Vec<Rational> {
        vec![-int(self.n as i64), int(self.n as i64) + &self.alpha + &self.beta + int(1)]
    }

    fn lower(&self) -> Result<Vec<Rational>> {
        let c = &self.alpha + int(1);
        if c.is_integer() && c <= Rational::zero() {
            return Err(Error::InvalidParameter(format!("alpha + 1 = {c} is a nonpositive integer")));
        }
        Ok(vec![c])
    }
}

/// `P_n^{(α,β)}(x) = (α+1)_n/n! ₂F₁(-n, n+α+β+1; α+1; (1-x)/2)`
pub fn jacobi_eval(spec: &JacobiSpec, x: &Rational) -> Result<Rational> {
    let z = (Rational::one() - x) / int(2);
    let f = pfq_terminating(&HypergeoSpec::new(spec.upper(), spec.lower()?, z))?;
    Ok(spec.leading_factor() * f)
}

/// The same polynomial with exact coefficients in `x`.
pub fn jacobi_poly(spec: &JacobiSpec) -> Result<Poly<Rational>> {
    let in_z = pfq_terminating_poly(&spec.upper(), &spec.lower()?)?;
    let z = Poly::linear(Rational::new(1.into(), 2.into()), Rational::new((-1).into(), 2.into()));
    Ok(in_z.compose(&z).scale(&spec.leading_factor()))
}

pub fn legendre_eval(n: u64, x: &Rational) -> Result<Rational> {
    jacobi_eval(&JacobiSpec::new(Rational::zero(), Rational::zero(), n), x)
}

pub fn legendre_poly(n: u64) -> Poly<Rational> {
    jacobi_poly(&JacobiSpec::new(Rational::zero(), Rational::zero(), n)).expect("Legendre parameters are valid")
}

/// A value of the form `coefficient · √2`.
#[derive(Debug, Clone, PartialEq)]
pub struct TimesSqrt2 {
    pub coefficient: Rational,
}

impl TimesSqrt2 {
    pub fn to_f64(&self) -> f64 {
        use num_traits::ToPrimitive;
        self.coefficient.to_f64().unwrap_or(f64::NAN) * std::f64::consts::SQRT_2
    }
}

/// Legendre rational function `R_k(x) = √2/(x+1) · P_k((x-1)/(x+1))`.
pub fn legendre_rational(k: u64, x: &Rational) -> Result<TimesSqrt2> {
    let xp1 = x + int(1);
    if xp1.is_zero() {
        return Err(Error::Pole("-1".into()));
    }
    let y = (x - int(1)) / &xp1;
    Ok(TimesSqrt2 { coefficient: legendre_eval(k, &y)? / xp1 })
}
