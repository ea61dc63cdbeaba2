//! Reference measures, squared orthonormal polynomials, one-point functions,
//! and brute-force lattice oracles for factorial moments.
//!
//! Every reference measure factors as `μ(x) = r(x) · C` with `r(x)` rational
//! and `C` a constant (`e^{-θ}`, `(1-q)^γ` or `1`). The oracles accumulate
//! the rational parts exactly and bring in `C` once, in the requested real
//! type, so the only approximations are the truncation of the lattice and
//! the final conversion.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::hypergeo::{
    binomial_int, falling_factorial, factorial, int, pfq_terminating, powu, rising_factorial, HypergeoSpec,
    Precision, Rational, RealScalar,
};

#[derive(Debug, Clone, PartialEq)]
pub enum EnsembleParams {
    Charlier { theta: Rational },
    Meixner { gamma: Rational, q: Rational },
    Krawtchouk { big_k: u64, p: Rational },
}

impl EnsembleParams {
    pub fn charlier(theta: Rational) -> Result<Self> {
        let e = EnsembleParams::Charlier { theta };
        e.validate()?;
        Ok(e)
    }

    pub fn meixner(gamma: Rational, q: Rational) -> Result<Self> {
        let e = EnsembleParams::Meixner { gamma, q };
        e.validate()?;
        Ok(e)
    }

    /// Meixner parameters outside the probabilistic range. Only the exact
    /// polynomial evaluations accept these; the measures reject them.
    pub fn meixner_formal(gamma: Rational, q: Rational) -> Self {
        EnsembleParams::Meixner { gamma, q }
    }

    pub fn krawtchouk(big_k: u64, p: Rational) -> Result<Self> {
        let e = EnsembleParams::Krawtchouk { big_k, p };
        e.validate()?;
        Ok(e)
    }

    pub fn validate(&self) -> Result<()> {
        let zero = Rational::zero();
        let one = Rational::one();
        match self {
            EnsembleParams::Charlier { theta } if *theta <= zero => {
                Err(Error::InvalidParameter(format!("theta must be positive, got {theta}")))
            }
            EnsembleParams::Meixner { gamma, .. } if *gamma <= zero => {
                Err(Error::InvalidParameter(format!("gamma must be positive, got {gamma}")))
            }
            EnsembleParams::Meixner { q, .. } if *q <= zero || *q >= one => {
                Err(Error::InvalidParameter(format!("q must lie in (0,1), got {q}")))
            }
            EnsembleParams::Krawtchouk { big_k: 0, .. } => {
                Err(Error::InvalidParameter("K must be a positive integer".into()))
            }
            EnsembleParams::Krawtchouk { p, .. } if *p <= zero || *p >= one => {
                Err(Error::InvalidParameter(format!("p must lie in (0,1), got {p}")))
            }
            _ => Ok(()),
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            EnsembleParams::Charlier { .. } => "charlier",
            EnsembleParams::Meixner { .. } => "meixner",
            EnsembleParams::Krawtchouk { .. } => "krawtchouk",
        }
    }

    /// Largest lattice point, for finite supports.
    pub fn support_max(&self) -> Option<u64> {
        match self {
            EnsembleParams::Krawtchouk { big_k, .. } => Some(*big_k),
            _ => None,
        }
    }

    fn check_point(&self, x: u64) -> Result<()> {
        match self.support_max() {
            Some(k) if x > k => Err(Error::OutOfRange(format!("x = {x} exceeds K = {k}"))),
            _ => Ok(()),
        }
    }

    /// Mean of the reference measure, as a rough scale for truncation.
    pub fn reference_mean(&self) -> f64 {
        let f = |r: &Rational| r.to_f64().unwrap_or(f64::NAN);
        match self {
            EnsembleParams::Charlier { theta } => f(theta),
            EnsembleParams::Meixner { gamma, q } => f(gamma) * f(q) / (1.0 - f(q)),
            EnsembleParams::Krawtchouk { big_k, p } => *big_k as f64 * f(p),
        }
    }

    /// The rational part `r(x)` of `μ(x) = r(x)·C`.
    pub fn weight_rational(&self, x: u64) -> Result<Rational> {
        self.check_point(x)?;
        Ok(match self {
            EnsembleParams::Charlier { theta } => powu(theta, x) / Rational::from_integer(factorial(x)),
            EnsembleParams::Meixner { gamma, q } => {
                rising_factorial(gamma, x) * powu(q, x) / Rational::from_integer(factorial(x))
            }
            EnsembleParams::Krawtchouk { big_k, p } => {
                Rational::from_integer(binomial_int(*big_k, x))
                    * powu(p, x)
                    * powu(&(Rational::one() - p), big_k - x)
            }
        })
    }

    /// The constant `C` of `μ(x) = r(x)·C`.
    pub fn weight_constant<R: RealScalar>(&self, precision: Precision) -> Result<R> {
        self.validate()?;
        Ok(match self {
            EnsembleParams::Charlier { theta } => (-R::from_rational(theta, precision)).exp(),
            EnsembleParams::Meixner { gamma, q } => {
                let one_minus_q = Rational::one() - q;
                if gamma.is_integer() {
                    let g = gamma.to_integer().to_u64().expect("positive integer gamma");
                    R::from_rational(&powu(&one_minus_q, g), precision)
                } else {
                    let l = R::from_rational(&one_minus_q, precision).ln();
                    (R::from_rational(gamma, precision) * l).exp()
                }
            }
            EnsembleParams::Krawtchouk { .. } => R::one(),
        })
    }

    /// The squared normalising prefactor of the `n`th orthonormal polynomial.
    pub fn norm_prefactor(&self, n: u64) -> Result<Rational> {
        Ok(match self {
            EnsembleParams::Charlier { theta } => powu(theta, n) / Rational::from_integer(factorial(n)),
            EnsembleParams::Meixner { gamma, q } => {
                rising_factorial(gamma, n) * powu(q, n) / Rational::from_integer(factorial(n))
            }
            EnsembleParams::Krawtchouk { big_k, p } => {
                if n > *big_k {
                    return Err(Error::OutOfRange(format!("degree {n} exceeds K = {big_k}")));
                }
                Rational::from_integer(binomial_int(*big_k, n)) * powu(&(p / (Rational::one() - p)), n)
            }
        })
    }

    /// The terminating hypergeometric factor of the `n`th polynomial at `x`.
    pub fn hyper_factor(&self, n: u64, x: u64) -> Result<Rational> {
        let a = vec![-int(n as i64), -int(x as i64)];
        let spec = match self {
            EnsembleParams::Charlier { theta } => HypergeoSpec::new(a, vec![], -theta.recip()),
            EnsembleParams::Meixner { gamma, q } => {
                HypergeoSpec::new(a, vec![gamma.clone()], Rational::one() - q.recip())
            }
            EnsembleParams::Krawtchouk { big_k, p } => {
                self.check_point(x)?;
                if n > *big_k {
                    return Err(Error::OutOfRange(format!("degree {n} exceeds K = {big_k}")));
                }
                HypergeoSpec::new(a, vec![-int(*big_k as i64)], p.recip())
            }
        };
        pfq_terminating(&spec)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct OnePointSpec {
    pub params: EnsembleParams,
    pub n: u64,
}

impl OnePointSpec {
    pub fn new(params: EnsembleParams, n: u64) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidParameter("N must be at least 1".into()));
        }
        if let Some(k) = params.support_max() {
            if n > k + 1 {
                return Err(Error::InvalidParameter(format!("N = {n} exceeds K + 1 = {}", k + 1)));
            }
        }
        Ok(OnePointSpec { params, n })
    }
}

pub fn reference_pmf<R: RealScalar>(params: &EnsembleParams, x: u64, precision: Precision) -> Result<R> {
    let c = params.weight_constant::<R>(precision)?;
    Ok(R::from_rational(&params.weight_rational(x)?, precision) * c)
}

/// `p_n(x)²`, exactly.
pub fn poly_squared(params: &EnsembleParams, n: u64, x: u64) -> Result<Rational> {
    let f = params.hyper_factor(n, x)?;
    Ok(params.norm_prefactor(n)? * &f * f)
}

/// `(1/N) Σ_{n<N} p_n(x)² · r(x)`: the one-point density without the constant `C`.
fn density_rational(spec: &OnePointSpec, x: u64) -> Result<Rational> {
    let mut s = Rational::zero();
    for n in 0..spec.n {
        s += poly_squared(&spec.params, n, x)?;
    }
    Ok(s * spec.params.weight_rational(x)? / int(spec.n as i64))
}

pub fn one_point_density<R: RealScalar>(spec: &OnePointSpec, x: u64, precision: Precision) -> Result<R> {
    let c = spec.params.weight_constant::<R>(precision)?;
    Ok(R::from_rational(&density_rational(spec, x)?, precision) * c)
}

/// A truncated lattice sum with the magnitude of its last included summand.
#[derive(Debug, Clone, PartialEq)]
pub struct LatticeSum<R> {
    pub value: R,
    pub last_summand: R,
    pub x_max: u64,
}

pub fn default_x_max(params: &EnsembleParams) -> u64 {
    match params.support_max() {
        Some(k) => k,
        None => (20.0 * params.reference_mean()).ceil().max(200.0) as u64,
    }
}

/// `Σ_{x ≤ x_max} x(x-1)⋯(x-k+1) ρ_N(x)`. Finite supports are always summed in full.
pub fn factorial_moment_oracle<R: RealScalar>(
    spec: &OnePointSpec,
    k: u64,
    x_max: u64,
    precision: Precision,
) -> Result<LatticeSum<R>> {
    let x_max = spec.params.support_max().unwrap_or(x_max);
    let c = spec.params.weight_constant::<R>(precision)?;
    let mut total = Rational::zero();
    let mut last = Rational::zero();
    for x in 0..=x_max {
        let ff = falling_factorial(&int(x as i64), k);
        if ff.is_zero() {
            continue;
        }
        last = ff * density_rational(spec, x)?;
        total += &last;
    }
    Ok(LatticeSum {
        value: R::from_rational(&total, precision) * c.clone(),
        last_summand: R::from_rational(&last.abs(), precision) * c,
        x_max,
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct CoulombSum<R> {
    /// Expectation of `(1/N) Σ_j X_j(X_j-1)⋯(X_j-k+1)` under the ensemble.
    pub moment: R,
    /// `Σ_{x ∈ {0..x_max}^N} Δ(x)² Π μ(x_j)`.
    pub partition_function: R,
}

/// Direct sum over configurations of the `N`-point measure `Δ(x)² Π μ(x_j)`.
///
/// Only strictly increasing configurations are visited (the others carry a
/// zero Vandermonde factor, and the summand is symmetric), so the cost is
/// `C(x_max+1, N)`. Weights are scaled to integers by a common denominator,
/// which makes the accumulation exact and independent of how the work is
/// split across threads.
pub fn coulomb_oracle<R: RealScalar>(
    params: &EnsembleParams,
    n: u64,
    k: u64,
    x_max: u64,
    precision: Precision,
) -> Result<CoulombSum<R>> {
    if n == 0 {
        return Err(Error::InvalidParameter("N must be at least 1".into()));
    }
    let x_max = params.support_max().map_or(x_max, |m| m.min(x_max));
    if x_max + 1 < n {
        return Err(Error::InvalidParameter(format!("x_max = {x_max} leaves fewer than N = {n} sites")));
    }
    let c = params.weight_constant::<R>(precision)?;

    let weights: Vec<Rational> = (0..=x_max).map(|x| params.weight_rational(x)).collect::<Result<_>>()?;
    let common = weights.iter().fold(BigInt::one(), |acc, w| acc.lcm(w.denom()));
    let scaled: Vec<BigInt> = weights
        .iter()
        .map(|w| w.numer() * (&common / w.denom()))
        .collect();
    let ff: Vec<BigInt> = (0..=x_max)
        .map(|x| falling_factorial(&int(x as i64), k).to_integer())
        .collect();

    let n_us = n as usize;
    let blocks: Vec<(BigInt, BigInt)> = (0..=x_max as usize)
        .into_par_iter()
        .map(|first| {
            let mut acc = (BigInt::zero(), BigInt::zero());
            let mut config = vec![first];
            visit(&mut config, n_us, x_max as usize, &scaled, &ff, &mut acc);
            acc
        })
        .collect();
    let (mut z, mut m) = (BigInt::zero(), BigInt::zero());
    for (bz, bm) in blocks {
        z += bz;
        m += bm;
    }
    if z.is_zero() {
        return Err(Error::InvalidParameter("the configuration sum vanishes".into()));
    }
    let moment = Rational::new(m, z.clone() * BigInt::from(n));
    let z_rational = Rational::new(z * factorial(n), num_traits::pow(common, n_us));
    let c_pow = powu(&c, n);
    Ok(CoulombSum {
        moment: R::from_rational(&moment, precision),
        partition_function: R::from_rational(&z_rational, precision) * c_pow,
    })
}

fn visit(
    config: &mut Vec<usize>,
    n: usize,
    x_max: usize,
    weights: &[BigInt],
    ff: &[BigInt],
    acc: &mut (BigInt, BigInt),
) {
    if config.len() == n {
        let mut w = BigInt::one();
        for (i, &xi) in config.iter().enumerate() {
            w *= &weights[xi];
            for &xj in &config[..i] {
                let d = (xi - xj) as u64;
                w *= d * d;
            }
        }
        let s: BigInt = config.iter().map(|&x| &ff[x]).sum();
        acc.1 += &w * s;
        acc.0 += w;
        return;
    }
    let start = config.last().map_or(0, |&x| x + 1);
    let remaining = n - config.len();
    if start + remaining > x_max + 1 {
        return;
    }
    for x in start..=x_max + 1 - remaining {
        config.push(x);
        visit(config, n, x_max, weights, ff, acc);
        config.pop();
    }
}

/// `|Σ_x p_m(x) p_n(x) μ(x) - δ_mn|`. The signed values `p_n(x)` share the
/// square root of the prefactor across all `x`, so it is taken once.
pub fn orthonormality_defect<R: RealScalar>(
    params: &EnsembleParams,
    m: u64,
    n: u64,
    x_max: u64,
    precision: Precision,
) -> Result<R> {
    let x_max = params.support_max().unwrap_or(x_max);
    let c = params.weight_constant::<R>(precision)?;
    let mut s = Rational::zero();
    for x in 0..=x_max {
        let f = params.hyper_factor(m, x)? * params.hyper_factor(n, x)?;
        if !f.is_zero() {
            s += f * params.weight_rational(x)?;
        }
    }
    let pref = params.norm_prefactor(m)? * params.norm_prefactor(n)?;
    let root = if m == n {
        R::from_rational(&params.norm_prefactor(m)?, precision)
    } else {
        R::from_rational(&pref, precision).sqrt()
    };
    let inner = root * R::from_rational(&s, precision) * c;
    let delta = if m == n { R::one() } else { R::zero() };
    Ok((inner - delta).abs())
}

/// Total mass check helper: `Σ_{x ≤ x_max} ρ_N(x)`.
pub fn one_point_mass<R: RealScalar>(spec: &OnePointSpec, x_max: u64, precision: Precision) -> Result<R> {
    factorial_moment_oracle(spec, 0, x_max, precision).map(|s| s.value)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hypergeo::{rat, HighPrecReal};

    fn hp(s: &str) -> HighPrecReal {
        HighPrecReal::parse_with(s, Precision::default()).unwrap()
    }

    fn close(a: &HighPrecReal, b: &Rational, tol: &str) -> bool {
        (a.clone() - HighPrecReal::from_rational(b, Precision::default())).abs() < hp(tol)
    }

    #[test]
    fn reference_pmfs() {
        let p = Precision::default();
        let c = EnsembleParams::charlier(int(1)).unwrap();
        let v: HighPrecReal = reference_pmf(&c, 0, p).unwrap();
        assert_eq!(v.to_decimal_string(10), "3.678794411e-1");
        let m = EnsembleParams::meixner(int(1), rat(1, 2)).unwrap();
        let v: HighPrecReal = reference_pmf(&m, 2, p).unwrap();
        assert!(close(&v, &rat(1, 8), "1e-55"));
        let k = EnsembleParams::krawtchouk(3, rat(1, 2)).unwrap();
        let v: HighPrecReal = reference_pmf(&k, 1, p).unwrap();
        assert!(close(&v, &rat(3, 8), "1e-55"));
        assert!(reference_pmf::<HighPrecReal>(&k, 4, p).is_err());
    }

    #[test]
    fn non_integer_gamma_constant() {
        let m = EnsembleParams::meixner(rat(1, 2), rat(3, 4)).unwrap();
        let c: f64 = m.weight_constant(Precision::default()).unwrap();
        assert!((c - 0.5).abs() < 1e-15);
    }

    #[test]
    fn polynomial_squares() {
        let c = EnsembleParams::charlier(int(1)).unwrap();
        assert_eq!(poly_squared(&c, 0, 7).unwrap(), int(1));
        assert_eq!(poly_squared(&c, 1, 0).unwrap(), int(1));
        // c_1(x; θ) = √θ (1 - x/θ)
        let c = EnsembleParams::charlier(rat(5, 2)).unwrap();
        assert_eq!(poly_squared(&c, 1, 4).unwrap(), rat(5, 2) * rat(-3, 5) * rat(-3, 5));
        let k = EnsembleParams::krawtchouk(3, rat(1, 2)).unwrap();
        assert_eq!(poly_squared(&k, 1, 0).unwrap(), int(3));
        assert!(poly_squared(&k, 4, 0).is_err());
    }

    #[test]
    fn one_point_examples() {
        let p = Precision::default();
        let c = EnsembleParams::charlier(int(1)).unwrap();
        let s = OnePointSpec::new(c.clone(), 2).unwrap();
        let v: HighPrecReal = one_point_density(&s, 0, p).unwrap();
        let e: HighPrecReal = reference_pmf(&c, 0, p).unwrap();
        assert!((v - e).abs() < hp("1e-58"));
        let s = OnePointSpec::new(c.clone(), 1).unwrap();
        for x in 0..5 {
            let a: HighPrecReal = one_point_density(&s, x, p).unwrap();
            let b: HighPrecReal = reference_pmf(&c, x, p).unwrap();
            assert_eq!(a, b);
        }
        let k = EnsembleParams::krawtchouk(6, rat(1, 3)).unwrap();
        let s = OnePointSpec::new(k, 4).unwrap();
        let mass: HighPrecReal = one_point_mass(&s, 0, p).unwrap();
        assert!(close(&mass, &int(1), "1e-50"));
        assert!(OnePointSpec::new(EnsembleParams::krawtchouk(2, rat(1, 2)).unwrap(), 4).is_err());
    }

    #[test]
    fn factorial_moment_examples() {
        let p = Precision::default();
        let c = EnsembleParams::charlier(int(2)).unwrap();
        let s = OnePointSpec::new(c.clone(), 1).unwrap();
        let m: LatticeSum<HighPrecReal> = factorial_moment_oracle(&s, 1, 200, p).unwrap();
        assert!(close(&m.value, &int(2), "1e-30"));
        assert!(m.last_summand < hp("1e-30"));
        let s = OnePointSpec::new(c, 3).unwrap();
        let m: LatticeSum<HighPrecReal> = factorial_moment_oracle(&s, 1, 200, p).unwrap();
        assert!(close(&m.value, &int(3), "1e-30"));
        let m: LatticeSum<HighPrecReal> = factorial_moment_oracle(&s, 0, 200, p).unwrap();
        assert!(close(&m.value, &int(1), "1e-30"));
    }

    #[test]
    fn coulomb_examples() {
        let p = Precision::default();
        let c = EnsembleParams::charlier(int(1)).unwrap();
        let r: CoulombSum<HighPrecReal> = coulomb_oracle(&c, 2, 1, 60, p).unwrap();
        assert!(close(&r.moment, &rat(3, 2), "1e-20"));
        // N = 1 agrees with the one-point oracle exactly
        let s = OnePointSpec::new(c.clone(), 1).unwrap();
        for k in 0..4 {
            let a: CoulombSum<HighPrecReal> = coulomb_oracle(&c, 1, k, 60, p).unwrap();
            let b: LatticeSum<HighPrecReal> = factorial_moment_oracle(&s, k, 60, p).unwrap();
            assert!((a.moment - b.value).abs() < hp("1e-50"));
        }
    }

    #[test]
    fn coulomb_partition_function_for_single_site_pairs() {
        // K = 1, N = 2: the only configuration is {0, 1} with Δ² = 1.
        let k = EnsembleParams::krawtchouk(1, rat(1, 3)).unwrap();
        let r: CoulombSum<HighPrecReal> = coulomb_oracle(&k, 2, 1, 10, Precision::default()).unwrap();
        // 2! · μ(0) μ(1) = 2 · (2/3)(1/3)
        assert!(close(&r.partition_function, &rat(4, 9), "1e-55"));
        assert!(close(&r.moment, &rat(1, 2), "1e-55"));
    }

    #[test]
    fn orthonormality_examples() {
        let p = Precision::default();
        let c = EnsembleParams::charlier(int(1)).unwrap();
        let d: HighPrecReal = orthonormality_defect(&c, 0, 0, 100, p).unwrap();
        assert!(d < hp("1e-50"));
        let d: HighPrecReal = orthonormality_defect(&c, 0, 1, 100, p).unwrap();
        assert!(d < hp("1e-30"));
        let k = EnsembleParams::krawtchouk(5, rat(1, 3)).unwrap();
        let d: HighPrecReal = orthonormality_defect(&k, 2, 2, 0, p).unwrap();
        assert!(d < hp("1e-50"));
    }

    #[test]
    fn parameter_validation() {
        assert!(EnsembleParams::charlier(int(0)).is_err());
        assert!(EnsembleParams::meixner(int(1), rat(3, 2)).is_err());
        assert!(EnsembleParams::meixner(int(-1), rat(1, 2)).is_err());
        assert!(EnsembleParams::krawtchouk(0, rat(1, 2)).is_err());
        assert!(EnsembleParams::krawtchouk(3, int(1)).is_err());
        let formal = EnsembleParams::meixner_formal(int(-3), int(-1));
        assert!(reference_pmf::<f64>(&formal, 0, Precision::default()).is_err());
        assert!(poly_squared(&formal, 2, 1).is_ok());
    }
}
