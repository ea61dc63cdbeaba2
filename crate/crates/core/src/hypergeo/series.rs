//! Generalised hypergeometric series `pFq(a; b; z) = Σ_i Π(a)_i / Π(b)_i · z^i / i!`.


use super::highprec::Precision;
use super::poly::Poly;
use super::scalar::{RealScalar, Scalar};
use super::{rising_factorial, Rational};
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
pub struct HypergeoSpec<T> {
    pub upper: Vec<T>,
    pub lower: Vec<T>,
    pub argument: T,
}

impl<T: Scalar> HypergeoSpec<T> {
    pub fn new(upper: Vec<T>, lower: Vec<T>, argument: T) -> Self {
        HypergeoSpec { upper, lower, argument }
    }

    /// Index of the last nonzero term when some upper parameter is `-n`.
    pub fn termination_order(&self) -> Option<u64> {
        self.upper.iter().filter_map(Scalar::as_nonpositive_int).min()
    }

    /// Rejects a lower parameter `-m` that would be reached before the series stops.
    pub fn validate(&self) -> Result<u64> {
        let n = self.termination_order().ok_or(Error::NonTerminating)?;
        check_lower_poles(&self.lower, n)?;
        Ok(n)
    }

    pub fn map<U>(&self, f: impl Fn(&T) -> U) -> HypergeoSpec<U> {
        HypergeoSpec {
            upper: self.upper.iter().map(&f).collect(),
            lower: self.lower.iter().map(&f).collect(),
            argument: f(&self.argument),
        }
    }
}

fn check_lower_poles<T: Scalar>(lower: &[T], last_term: u64) -> Result<()> {
    for b in lower {
        if let Some(m) = b.as_nonpositive_int() {
            if m < last_term {
                return Err(Error::LowerParameterPole { parameter: format!("{b:?}"), term: m + 1 });
            }
        }
    }
    Ok(())
}

/// `t_{i+1} / t_i`, or `None` when some `i + b_j` vanishes.
pub fn term_ratio<T: Scalar>(spec: &HypergeoSpec<T>, i: u64) -> Option<T> {
    let fi = T::from_u64(i).expect("small integer");
    let num = spec.upper.iter().fold(spec.argument.clone(), |acc, a| acc * (fi.clone() + a.clone()));
    let den = spec
        .lower
        .iter()
        .fold(fi.clone() + T::one(), |acc, b| acc * (fi.clone() + b.clone()));
    if den.is_zero() {
        None
    } else {
        Some(num / den)
    }
}

/// Sum of the first `terms` terms via the term-ratio recursion, together with
/// the last term included. Stops early once a numerator factor vanishes.
pub fn partial_sum<T: Scalar>(spec: &HypergeoSpec<T>, terms: u64) -> Result<(T, T)> {
    if terms == 0 {
        return Ok((T::zero(), T::zero()));
    }
    let mut term = T::one();
    let mut sum = T::one();
    let fi = |i: u64| T::from_u64(i).expect("small integer");
    for i in 0..terms - 1 {
        let x = fi(i);
        let mut num = spec.argument.clone();
        let mut terminated = false;
        for a in &spec.upper {
            let f = x.clone() + a.clone();
            if f.is_zero() {
                terminated = true;
                break;
            }
            num = num * f;
        }
        if terminated {
            return Ok((sum, T::zero()));
        }
        let mut den = x.clone() + T::one();
        for b in &spec.lower {
            let f = x.clone() + b.clone();
            if f.is_zero() {
                return Err(Error::LowerParameterPole { parameter: format!("{b:?}"), term: i + 1 });
            }
            den = den * f;
        }
        term = term * num / den;
        sum = sum + term.clone();
    }
    Ok((sum, term))
}

pub fn pfq_terminating<T: Scalar>(spec: &HypergeoSpec<T>) -> Result<T> {
    let n = spec.validate()?;
    partial_sum(spec, n + 1).map(|(s, _)| s)
}

/// Sums each term from its own Pochhammer products, without the recursion.
pub fn pfq_terminating_direct<T: Scalar>(spec: &HypergeoSpec<T>) -> Result<T> {
    let n = spec.validate()?;
    let mut sum = T::zero();
    let mut z_pow = T::one();
    let mut i_fact = T::one();
    for i in 0..=n {
        if i > 0 {
            z_pow = z_pow * spec.argument.clone();
            i_fact = i_fact * T::from_u64(i).expect("small integer");
        }
        let num = spec.upper.iter().fold(T::one(), |acc, a| acc * rising_factorial(a, i));
        if num.is_zero() {
            continue;
        }
        let den = spec.lower.iter().fold(i_fact.clone(), |acc, b| acc * rising_factorial(b, i));
        sum = sum + num * z_pow.clone() / den;
    }
    Ok(sum)
}

/// The terminating series as a polynomial in its argument.
pub fn pfq_terminating_poly<T: Scalar>(upper: &[T], lower: &[T]) -> Result<Poly<T>> {
    let spec = HypergeoSpec::new(upper.to_vec(), lower.to_vec(), T::one());
    let n = spec.validate()?;
    let mut coeffs = Vec::with_capacity(n as usize + 1);
    let mut c = T::one();
    coeffs.push(c.clone());
    for i in 0..n {
        c = c * term_ratio(&spec, i).expect("poles excluded by validate");
        coeffs.push(c.clone());
    }
    Ok(Poly::new(coeffs))
}

/// Truncated series in a real scalar type. The second component is the
/// absolute value of the last included term; it is a heuristic, not a bound.
pub fn pfq_truncated<R: RealScalar>(
    spec: &HypergeoSpec<Rational>,
    terms: u64,
    precision: Precision,
) -> Result<(R, R)> {
    if terms == 0 {
        return Err(Error::InvalidParameter("terms must be at least 1".into()));
    }
    let real = spec.map(|r| R::from_rational(r, precision));
    let (sum, last) = partial_sum(&real, terms)?;
    Ok((sum, last.abs()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hypergeo::{int, rat, HighPrecReal};
    use num_traits::Zero;

    fn spec(upper: &[Rational], lower: &[Rational], z: Rational) -> HypergeoSpec<Rational> {
        HypergeoSpec::new(upper.to_vec(), lower.to_vec(), z)
    }

    #[test]
    fn terminating_examples() {
        let s = spec(&[int(-2), int(-2)], &[int(1)], int(1));
        assert_eq!(pfq_terminating(&s).unwrap(), int(6));
        let s = spec(&[int(-5), int(-5)], &[int(2)], int(0));
        assert_eq!(pfq_terminating(&s).unwrap(), int(1));
        let s = spec(&[int(-1), int(-1), int(-2)], &[int(2)], rat(-1, 2));
        assert_eq!(pfq_terminating(&s).unwrap(), rat(3, 2));
        assert_eq!(pfq_terminating_direct(&s).unwrap(), rat(3, 2));
    }

    #[test]
    fn rejects_bad_specs() {
        let s = spec(&[int(1), rat(1, 2)], &[int(2)], rat(1, 2));
        assert_eq!(pfq_terminating(&s), Err(Error::NonTerminating));
        let s = spec(&[int(-3)], &[int(-1)], int(1));
        assert!(matches!(pfq_terminating(&s), Err(Error::LowerParameterPole { .. })));
        // termination precedes the pole
        let s = spec(&[int(-2), int(-2), int(0)], &[int(1), int(-4)], int(2));
        assert_eq!(pfq_terminating(&s).unwrap(), int(1));
        let s = spec(&[int(-2), int(-2)], &[int(-2)], int(1));
        assert_eq!(pfq_terminating(&s), pfq_terminating_direct(&s));
    }

    #[test]
    fn exponential_series() {
        let p = Precision::default();
        let s = spec(&[], &[], int(1));
        let (e, last) = pfq_truncated::<HighPrecReal>(&s, 50, p).unwrap();
        let one = HighPrecReal::from_rational(&int(1), p);
        let err = (e - one.exp()).abs();
        assert!(err < HighPrecReal::parse_with("1e-40", p).unwrap());
        assert!(last < HighPrecReal::parse_with("1e-60", p).unwrap());
    }

    #[test]
    fn padded_terminating_series() {
        let p = Precision::default();
        for t in [rat(1, 3), rat(-7, 5), int(2)] {
            let s = spec(&[int(-1), int(-1)], &[int(2)], t.clone());
            let (v, last) = pfq_truncated::<HighPrecReal>(&s, 5, p).unwrap();
            let exact = HighPrecReal::from_rational(&(int(1) + t / int(2)), p);
            assert!((v - exact).abs() < HighPrecReal::parse_with("1e-58", p).unwrap());
            assert!(last.is_zero());
        }
        let poly = pfq_terminating_poly(&[int(-1), int(-1)], &[int(2)]).unwrap();
        assert_eq!(poly, Poly::new(vec![int(1), rat(1, 2)]));
    }

    #[test]
    fn log_series() {
        let p = Precision::default();
        let s = spec(&[int(1), int(1)], &[int(2)], rat(1, 2));
        let (v, _) = pfq_truncated::<HighPrecReal>(&s, 100, p).unwrap();
        let two = HighPrecReal::from_rational(&int(2), p);
        let expected = two.ln() * two;
        assert!((v - expected).abs() < HighPrecReal::parse_with("1e-20", p).unwrap());
    }

    #[test]
    fn f64_path() {
        let s = HypergeoSpec::new(vec![-3.0, 2.5], vec![1.5], 0.25f64);
        let a = pfq_terminating(&s).unwrap();
        let b = pfq_terminating_direct(&s).unwrap();
        assert!((a - b).abs() < 1e-14);
    }
}
