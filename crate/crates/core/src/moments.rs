//! Exact factorial moments `M(k, N) = ∫ x(x-1)⋯(x-k+1) dρ_N(x)`.
//!
//! The double sums are evaluated term by term. The hypergeometric forms go
//! through [`pfq_terminating`], so agreement between the two is a genuine
//! cross-check rather than a restatement.

use num_traits::{One, Zero};

use crate::ensembles::EnsembleParams;
use crate::error::{Error, Result};
use crate::hypergeo::{
    binomial, factorial, falling_factorial, int, pfq_terminating, powi, powu, rising_factorial, HypergeoSpec,
    Poly, Rational,
};

fn check_n(n: u64) -> Result<()> {
    if n == 0 {
        Err(Error::InvalidParameter("N must be at least 1".into()))
    } else {
        Ok(())
    }
}

fn check_q(q: &Rational) -> Result<()> {
    if q.is_zero() || q.is_one() {
        Err(Error::InvalidParameter(format!("q must differ from 0 and 1, got {q}")))
    } else {
        Ok(())
    }
}

fn sq_binomial(k: u64, i: u64) -> Rational {
    let b = binomial(k as i64, i as i64);
    &b * &b
}

/// `Σ_i θ^{k-i} C(k,i)² (1/N) Σ_{l=i}^{N-1} l!/(l-i)!`
pub fn charlier_ledoux(theta: &Rational, k: u64, n: u64) -> Result<Rational> {
    check_n(n)?;
    if theta.is_zero() {
        return Err(Error::InvalidParameter("theta must be nonzero".into()));
    }
    let mut total = Rational::zero();
    for i in 0..=k.min(n - 1) {
        let inner: Rational = (i..n).map(|l| falling_factorial(&int(l as i64), i)).sum();
        total += powu(theta, k - i) * sq_binomial(k, i) * inner;
    }
    Ok(total / int(n as i64))
}

/// `Σ_i (q/(1-q))^k q^{-i} C(k,i)² (1/N) Σ_{l=i}^{N-1} l!/(l-i)! (γ+l)_{k-i}`.
/// Any `γ` and any `q ∉ {0, 1}` are accepted.
pub fn meixner_ledoux(gamma: &Rational, q: &Rational, k: u64, n: u64) -> Result<Rational> {
    check_n(n)?;
    check_q(q)?;
    let mut total = Rational::zero();
    for i in 0..=k.min(n - 1) {
        let inner: Rational = (i..n)
            .map(|l| falling_factorial(&int(l as i64), i) * rising_factorial(&(gamma + int(l as i64)), k - i))
            .sum();
        total += powi(q, -(i as i64)) * sq_binomial(k, i) * inner;
    }
    let ratio = q / (Rational::one() - q);
    Ok(powu(&ratio, k) * total / int(n as i64))
}

/// `Σ_i p^{k-i} (1-p)^i C(k,i)² (1/N) Σ_{l=i}^{N-1} l!(K-l)!/((l-i)!(K-l-k+i)!)`
pub fn krawtchouk_ledoux(big_k: u64, p: &Rational, k: u64, n: u64) -> Result<Rational> {
    check_n(n)?;
    if n > big_k {
        return Err(Error::InvalidParameter(format!("N = {n} exceeds K = {big_k}")));
    }
    let one_minus_p = Rational::one() - p;
    let mut total = Rational::zero();
    for i in 0..=k.min(n - 1) {
        let inner: Rational = (i..n)
            .map(|l| {
                falling_factorial(&int(l as i64), i) * falling_factorial(&int((big_k - l) as i64), k - i)
            })
            .sum();
        total += powu(p, k - i) * powu(&one_minus_p, i) * sq_binomial(k, i) * inner;
    }
    Ok(total / int(n as i64))
}

/// `M(k, N)` for `N = 1..=n_max` from the double sum, accumulating the inner
/// `l`-sums as `N` grows. `weight(l, i)` is the factor multiplying `l!/(l-i)!`.
fn ledoux_sequence(
    k: u64,
    n_max: u64,
    outer: impl Fn(u64) -> Rational,
    weight: impl Fn(u64, u64) -> Rational,
) -> Vec<Rational> {
    let coeffs: Vec<Rational> = (0..=k).map(|i| outer(i) * sq_binomial(k, i)).collect();
    let mut inner = vec![Rational::zero(); k as usize + 1];
    let mut out = Vec::with_capacity(n_max as usize);
    for n in 1..=n_max {
        let l = n - 1;
        for i in 0..=k.min(l) {
            inner[i as usize] += falling_factorial(&int(l as i64), i) * weight(l, i);
        }
        let total: Rational = coeffs.iter().zip(&inner).map(|(c, s)| c * s).sum();
        out.push(total / int(n as i64));
    }
    out
}

/// [`charlier_ledoux`] for `N = 1..=n_max`.
pub fn charlier_ledoux_sequence(theta: &Rational, k: u64, n_max: u64) -> Result<Vec<Rational>> {
    if theta.is_zero() {
        return Err(Error::InvalidParameter("theta must be nonzero".into()));
    }
    Ok(ledoux_sequence(k, n_max, |i| powu(theta, k - i), |_, _| Rational::one()))
}

/// [`meixner_ledoux`] for `N = 1..=n_max`.
pub fn meixner_ledoux_sequence(gamma: &Rational, q: &Rational, k: u64, n_max: u64) -> Result<Vec<Rational>> {
    check_q(q)?;
    let ratio_k = powu(&(q / (Rational::one() - q)), k);
    Ok(ledoux_sequence(
        k,
        n_max,
        |i| &ratio_k * powi(q, -(i as i64)),
        |l, i| rising_factorial(&(gamma + int(l as i64)), k - i),
    ))
}

/// Meixner moments at `γ = -K`, `q = -p/(1-p)`.
pub fn krawtchouk_via_meixner(big_k: u64, p: &Rational, k: u64, n: u64) -> Result<Rational> {
    if n > big_k {
        return Err(Error::InvalidParameter(format!("N = {n} exceeds K = {big_k}")));
    }
    let q = -(p / (Rational::one() - p));
    meixner_ledoux(&-int(big_k as i64), &q, k, n)
}

/// `θ^k ₃F₁(-k, -k, 1-N; 2; -1/θ)`
pub fn charlier_hyper(theta: &Rational, k: u64, n: u64) -> Result<Rational> {
    check_n(n)?;
    let k_r = int(k as i64);
    let spec = HypergeoSpec::new(
        vec![-k_r.clone(), -k_r, int(1 - n as i64)],
        vec![int(2)],
        -theta.recip(),
    );
    Ok(powu(theta, k) * pfq_terminating(&spec)?)
}

/// `(q/(1-q))^k (N+1)_k/(k+1) ₃F₂(-k, -k, 1-N; 1, -N-k; 1/q)`
pub fn meixner1_hyper(q: &Rational, k: u64, n: u64) -> Result<Rational> {
    check_n(n)?;
    check_q(q)?;
    let k_r = int(k as i64);
    let n_r = int(n as i64);
    let spec = HypergeoSpec::new(
        vec![-k_r.clone(), -k_r.clone(), int(1) - &n_r],
        vec![int(1), -&n_r - &k_r],
        q.recip(),
    );
    let pref = powu(&(q / (Rational::one() - q)), k) * rising_factorial(&(n_r + int(1)), k) / int(k as i64 + 1);
    Ok(pref * pfq_terminating(&spec)?)
}

/// Ledoux double sum for any ensemble.
pub fn ledoux_moment(params: &EnsembleParams, k: u64, n: u64) -> Result<Rational> {
    match params {
        EnsembleParams::Charlier { theta } => charlier_ledoux(theta, k, n),
        EnsembleParams::Meixner { gamma, q } => meixner_ledoux(gamma, q, k, n),
        EnsembleParams::Krawtchouk { big_k, p } => krawtchouk_ledoux(*big_k, p, k, n),
    }
}

/// `Σ_{l=i}^{N-1} (l+k-i)!/(l-i)! = (N-i)_{k+1}/(k+1)`
pub fn pochsum_check(i: u64, k: u64, n: u64) -> bool {
    if i >= n {
        return false;
    }
    let lhs: Rational = (i..n)
        .map(|l| Rational::from_integer(factorial(l + k - i) / factorial(l - i)))
        .sum();
    let rhs = rising_factorial(&int((n - i) as i64), k + 1) / int(k as i64 + 1);
    lhs == rhs
}

/// Families whose normalised moments are polynomial in `k` and in `N - 1`.
#[derive(Debug, Clone, PartialEq)]
pub enum MomentFamily {
    /// `θ^{-k} M^θ(k, N)`
    Charlier { theta: Rational },
    /// `((1-q)/q)^k M¹_q(k, N) / k!`
    Meixner1 { q: Rational },
    /// `((1-q)/q)^k (k+1)/(N+1)_k M¹_q(k, N)`; kept to show it is not polynomial in `k`.
    Meixner1Alternative { q: Rational },
}

impl MomentFamily {
    pub fn normalized(&self, k: u64, n: u64) -> Result<Rational> {
        match self {
            MomentFamily::Charlier { theta } => Ok(charlier_hyper(theta, k, n)? / powu(theta, k)),
            MomentFamily::Meixner1 { q } => {
                let m = meixner1_hyper(q, k, n)?;
                Ok(powu(&((Rational::one() - q) / q), k) * m / Rational::from_integer(factorial(k)))
            }
            MomentFamily::Meixner1Alternative { q } => {
                let m = meixner1_hyper(q, k, n)?;
                let n1 = int(n as i64 + 1);
                Ok(powu(&((Rational::one() - q) / q), k) * int(k as i64 + 1) / rising_factorial(&n1, k) * m)
            }
        }
    }
}

/// Polynomial in `k` through the normalised moments at `k = 0..=2(N-1)`.
pub fn interpolate_normalized_in_k(family: &MomentFamily, n: u64) -> Result<Poly<Rational>> {
    check_n(n)?;
    let nodes: Vec<Rational> = (0..=2 * (n - 1)).map(|k| int(k as i64)).collect();
    let values = (0..=2 * (n - 1)).map(|k| family.normalized(k, n)).collect::<Result<Vec<_>>>()?;
    Poly::interpolate(&nodes, &values)
}

/// Polynomial in `N - 1` through the normalised moments at `N - 1 = 0..=k`.
pub fn interpolate_in_nminus1(family: &MomentFamily, k: u64) -> Result<Poly<Rational>> {
    let nodes: Vec<Rational> = (0..=k).map(|m| int(m as i64)).collect();
    let values = (0..=k).map(|m| family.normalized(k, m + 1)).collect::<Result<Vec<_>>>()?;
    Poly::interpolate(&nodes, &values)
}

/// Whether `poly` reproduces the normalised moments in `k` at `k = 2N-1 ..= 2N-2+extra`.
pub fn extrapolates_in_k(family: &MomentFamily, n: u64, poly: &Poly<Rational>, extra: u64) -> Result<bool> {
    for k in 2 * n - 1..2 * n - 1 + extra {
        if poly.eval(&int(k as i64)) != family.normalized(k, n)? {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Whether `poly` reproduces the normalised moments in `N - 1` at `N - 1 = k+1 ..= k+extra`.
pub fn extrapolates_in_nminus1(family: &MomentFamily, k: u64, poly: &Poly<Rational>, extra: u64) -> Result<bool> {
    for m in k + 1..=k + extra {
        if poly.eval(&int(m as i64)) != family.normalized(k, m + 1)? {
            return Ok(false);
        }
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hypergeo::rat;

    #[test]
    fn charlier_examples() {
        assert_eq!(charlier_ledoux(&int(2), 3, 1).unwrap(), int(8));
        assert_eq!(charlier_ledoux(&int(1), 2, 2).unwrap(), int(3));
        assert_eq!(charlier_ledoux(&int(2), 1, 3).unwrap(), int(3));
        assert_eq!(charlier_hyper(&int(2), 1, 3).unwrap(), int(3));
        assert_eq!(charlier_hyper(&rat(7, 3), 5, 1).unwrap(), powu(&rat(7, 3), 5));
        assert_eq!(charlier_hyper(&int(1), 4, 3).unwrap(), int(41));
    }

    #[test]
    fn meixner_examples() {
        assert_eq!(meixner_ledoux(&int(1), &rat(1, 2), 2, 1).unwrap(), int(2));
        assert_eq!(meixner_ledoux(&rat(5, 3), &rat(1, 7), 0, 4).unwrap(), int(1));
        assert_eq!(meixner_ledoux(&int(2), &rat(1, 3), 1, 2).unwrap(), int(2));
        assert_eq!(meixner1_hyper(&rat(1, 2), 2, 1).unwrap(), int(2));
        assert_eq!(meixner1_hyper(&rat(1, 2), 1, 2).unwrap(), rat(5, 2));
        assert_eq!(meixner1_hyper(&rat(2, 9), 0, 5).unwrap(), int(1));
        assert!(meixner_ledoux(&int(1), &int(1), 1, 1).is_err());
    }

    #[test]
    fn krawtchouk_examples() {
        assert_eq!(krawtchouk_ledoux(3, &rat(1, 2), 2, 1).unwrap(), rat(3, 2));
        assert_eq!(krawtchouk_ledoux(5, &rat(1, 4), 0, 3).unwrap(), int(1));
        assert_eq!(krawtchouk_ledoux(4, &rat(1, 3), 1, 2).unwrap(), rat(3, 2));
        assert_eq!(krawtchouk_ledoux(3, &rat(1, 2), 5, 2).unwrap(), int(0));
        assert_eq!(krawtchouk_via_meixner(3, &rat(1, 2), 2, 1).unwrap(), rat(3, 2));
        assert_eq!(krawtchouk_via_meixner(4, &rat(1, 3), 1, 2).unwrap(), rat(3, 2));
        assert!(krawtchouk_ledoux(2, &rat(1, 2), 1, 3).is_err());
    }

    #[test]
    fn sequences_match_pointwise() {
        let c = charlier_ledoux_sequence(&rat(3, 2), 4, 7).unwrap();
        let m = meixner_ledoux_sequence(&rat(5, 2), &rat(1, 3), 3, 7).unwrap();
        for n in 1..=7u64 {
            assert_eq!(c[n as usize - 1], charlier_ledoux(&rat(3, 2), 4, n).unwrap());
            assert_eq!(m[n as usize - 1], meixner_ledoux(&rat(5, 2), &rat(1, 3), 3, n).unwrap());
        }
    }

    #[test]
    fn pochsum_examples() {
        assert!(pochsum_check(0, 0, 3));
        assert!(pochsum_check(1, 2, 4));
        assert!(pochsum_check(4, 6, 5));
        assert!(!pochsum_check(5, 1, 5));
    }

    #[test]
    fn interpolation_examples() {
        let c1 = MomentFamily::Charlier { theta: int(1) };
        assert_eq!(interpolate_normalized_in_k(&c1, 1).unwrap(), Poly::constant(int(1)));
        let p = interpolate_normalized_in_k(&c1, 2).unwrap();
        assert_eq!(p, Poly::new(vec![int(1), int(0), rat(1, 2)]));
        assert!(extrapolates_in_k(&c1, 2, &p, 8).unwrap());

        let p = interpolate_in_nminus1(&c1, 1).unwrap();
        assert_eq!(p, Poly::new(vec![int(1), rat(1, 2)]));
        assert_eq!(interpolate_in_nminus1(&c1, 0).unwrap(), Poly::constant(int(1)));

        // (k² + kq + 2q)/(2q) at q = 1/2
        let m = MomentFamily::Meixner1 { q: rat(1, 2) };
        let p = interpolate_normalized_in_k(&m, 2).unwrap();
        assert_eq!(p, Poly::new(vec![int(1), rat(1, 2), int(1)]));
        assert!(extrapolates_in_k(&m, 2, &p, 8).unwrap());
        assert_eq!(interpolate_in_nminus1(&m, 0).unwrap(), Poly::constant(int(1)));
    }

    #[test]
    fn alternative_meixner_normalisation_is_not_polynomial_in_k() {
        let m = MomentFamily::Meixner1Alternative { q: rat(1, 2) };
        let p = interpolate_normalized_in_k(&m, 2).unwrap();
        assert!(!extrapolates_in_k(&m, 2, &p, 8).unwrap());
        // (k² + kq + 2q)/((k+2)q) at k = 3, q = 1/2
        assert_eq!(m.normalized(3, 2).unwrap(), rat(23, 5));
    }
}
