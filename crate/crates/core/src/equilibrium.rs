//! Moments of the equilibrium measures, written as `A(U) + ξ √D(U)` with `U`
//! uniform on (0,1) and `ξ` arcsine on (-1,1), independent.
//!
//! Closed forms come from hypergeometric sums and triple sums; the oracles
//! expand `(A + ξ√D)^k`, drop odd powers of `ξ` and integrate the remaining
//! polynomial in `u` exactly, so no square root is ever formed.

use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::hypergeo::{
    binomial_int, factorial, int, pfq_terminating, powu, HypergeoSpec, Poly, Precision, Rational, RealScalar,
};
use crate::moments::meixner_ledoux_sequence;
use crate::randomised::{gauss_series, poissonised_charlier};

#[derive(Debug, Clone, PartialEq)]
pub enum EquilibriumSpec {
    /// `U + 2√(Uh) ξ + h`
    Charlier { h: Rational },
    /// `U(1 + q + 2√q ξ)/(1-q)`
    Meixner1 { q: Rational },
    /// `(U + 2√(qU(c+U)) ξ + q(c+U))/(1-q)`
    MeixnerGeneral { q: Rational, c: Rational },
    /// `(1-p)U + 2√(p(1-p)U(κ-U)) ξ + p(κ-U)`
    Krawtchouk { kappa: Rational, p: Rational },
}

fn unit_interval(x: &Rational, what: &str) -> Result<()> {
    if x.is_positive() && *x < Rational::one() {
        Ok(())
    } else {
        Err(Error::InvalidParameter(format!("{what} must lie in (0,1), got {x}")))
    }
}

impl EquilibriumSpec {
    pub fn charlier(h: Rational) -> Result<Self> {
        if !h.is_positive() {
            return Err(Error::InvalidParameter(format!("h must be positive, got {h}")));
        }
        Ok(EquilibriumSpec::Charlier { h })
    }

    pub fn meixner1(q: Rational) -> Result<Self> {
        unit_interval(&q, "q")?;
        Ok(EquilibriumSpec::Meixner1 { q })
    }

    pub fn meixner_general(q: Rational, c: Rational) -> Result<Self> {
        unit_interval(&q, "q")?;
        if c.is_negative() {
            return Err(Error::InvalidParameter(format!("c must be nonnegative, got {c}")));
        }
        Ok(EquilibriumSpec::MeixnerGeneral { q, c })
    }

    pub fn krawtchouk(kappa: Rational, p: Rational) -> Result<Self> {
        unit_interval(&p, "p")?;
        if kappa <= Rational::one() {
            return Err(Error::InvalidParameter(format!("kappa must exceed 1, got {kappa}")));
        }
        Ok(EquilibriumSpec::Krawtchouk { kappa, p })
    }

    pub fn name(&self) -> &'static str {
        match self {
            EquilibriumSpec::Charlier { .. } => "charlier",
            EquilibriumSpec::Meixner1 { .. } => "meixner1",
            EquilibriumSpec::MeixnerGeneral { .. } => "meixner_general",
            EquilibriumSpec::Krawtchouk { .. } => "krawtchouk",
        }
    }

    /// `(A, D)` as polynomials in `u`.
    fn shape(&self) -> (Poly<Rational>, Poly<Rational>) {
        let u = Poly::<Rational>::x();
        match self {
            EquilibriumSpec::Charlier { h } => (Poly::linear(h.clone(), int(1)), u.scale(&(h * int(4)))),
            EquilibriumSpec::Meixner1 { q } => {
                let s = Rational::one() / (Rational::one() - q);
                (u.scale(&((Rational::one() + q) * &s)), u.pow(2).scale(&(q * int(4) * &s * &s)))
            }
            EquilibriumSpec::MeixnerGeneral { q, c } => {
                let s = Rational::one() / (Rational::one() - q);
                let a = Poly::linear(q * c, Rational::one() + q).scale(&s);
                let d = (&u * &Poly::linear(c.clone(), int(1))).scale(&(q * int(4) * &s * &s));
                (a, d)
            }
            EquilibriumSpec::Krawtchouk { kappa, p } => {
                let one_minus_p = Rational::one() - p;
                let a = Poly::linear(p * kappa, &one_minus_p - p);
                let d = (&u * &Poly::linear(kappa.clone(), int(-1))).scale(&(p * &one_minus_p * int(4)));
                (a, d)
            }
        }
    }

    /// Closed form of the `k`th moment.
    pub fn moment(&self, k: u64) -> Result<Rational> {
        match self {
            EquilibriumSpec::Charlier { h } => charlier_eq_moment(h, k),
            EquilibriumSpec::Meixner1 { q } => meixner1_eq_moment(q, k),
            EquilibriumSpec::MeixnerGeneral { q, c } => meixner_general_eq_moment(q, c, k),
            EquilibriumSpec::Krawtchouk { kappa, p } => krawtchouk_eq_moment(kappa, p, k),
        }
    }

    /// The `k`th moment by exact expansion and integration.
    pub fn moment_oracle(&self, k: u64) -> Rational {
        let (a, d) = self.shape();
        let mut integrand = Poly::zero();
        for j in 0..=k / 2 {
            let coeff = arcsine_uniform_monomial(2 * j, 0) * Rational::from_integer(binomial_int(k, 2 * j));
            integrand = &integrand + &(&a.pow((k - 2 * j) as u32) * &d.pow(j as u32)).scale(&coeff);
        }
        integrate_unit(&integrand)
    }
}

fn integrate_unit(p: &Poly<Rational>) -> Rational {
    p.coeffs().iter().enumerate().map(|(i, c)| c / int(i as i64 + 1)).sum()
}

/// `E[ξ^j] · E[U^m]`
pub fn arcsine_uniform_monomial(j: u64, m: u64) -> Rational {
    if j % 2 == 1 {
        return Rational::zero();
    }
    Rational::new(binomial_int(j, j / 2), num_bigint::BigInt::one() << j) / int(m as i64 + 1)
}

fn gauss_minus_k(k: u64, lower: i64, z: Rational) -> Result<Rational> {
    let kr = -int(k as i64);
    pfq_terminating(&HypergeoSpec::new(vec![kr.clone(), kr], vec![int(lower)], z))
}

/// `h^k ₂F₁(-k, -k; 2; 1/h)`
pub fn charlier_eq_moment(h: &Rational, k: u64) -> Result<Rational> {
    if h.is_zero() {
        return Err(Error::InvalidParameter("h must be nonzero".into()));
    }
    Ok(powu(h, k) * gauss_minus_k(k, 2, h.recip())?)
}

pub fn charlier_eq_moment_oracle(h: &Rational, k: u64) -> Result<Rational> {
    Ok(EquilibriumSpec::charlier(h.clone())?.moment_oracle(k))
}

/// `(q/(1-q))^k/(k+1) ₂F₁(-k, -k; 1; 1/q)`
pub fn meixner1_eq_moment(q: &Rational, k: u64) -> Result<Rational> {
    unit_interval(q, "q")?;
    let ratio = q / (Rational::one() - q);
    Ok(powu(&ratio, k) / int(k as i64 + 1) * gauss_minus_k(k, 1, q.recip())?)
}

pub fn meixner1_eq_moment_oracle(q: &Rational, k: u64) -> Result<Rational> {
    Ok(EquilibriumSpec::meixner1(q.clone())?.moment_oracle(k))
}

fn fact(n: u64) -> Rational {
    Rational::from_integer(factorial(n))
}

/// `((1+q)/(1-q))^k Σ_{j,l,m} k! c^{l+m} q^{j+l} / (l! j! m! (j-m)! (k-2j-l)! (k-m-l+1) (1+q)^{2j+l})`
pub fn meixner_general_eq_moment(q: &Rational, c: &Rational, k: u64) -> Result<Rational> {
    unit_interval(q, "q")?;
    if c.is_negative() {
        return Err(Error::InvalidParameter(format!("c must be nonnegative, got {c}")));
    }
    let one_plus = Rational::one() + q;
    let mut total = Rational::zero();
    for j in 0..=k / 2 {
        for l in 0..=k - 2 * j {
            for m in 0..=j {
                let den = fact(l) * fact(j) * fact(m) * fact(j - m) * fact(k - 2 * j - l) * int((k - m - l + 1) as i64);
                total += powu(c, l + m) * powu(q, j + l) / powu(&one_plus, 2 * j + l) / den;
            }
        }
    }
    Ok(total * fact(k) * powu(&(&one_plus / (Rational::one() - q)), k))
}

pub fn meixner_general_eq_moment_oracle(q: &Rational, c: &Rational, k: u64) -> Result<Rational> {
    Ok(EquilibriumSpec::meixner_general(q.clone(), c.clone())?.moment_oracle(k))
}

/// `Σ_{j,l,m} p^k k! (-1)^m κ^{k-j-l-m} / (l! j! m! (j-m)! (k-2j-l)! (j+l+m+1)) ((1-p)/p)^j ((1-2p)/p)^l`
pub fn krawtchouk_eq_moment(kappa: &Rational, p: &Rational, k: u64) -> Result<Rational> {
    unit_interval(p, "p")?;
    let r1 = (Rational::one() - p) / p;
    let r2 = (Rational::one() - p * int(2)) / p;
    let mut total = Rational::zero();
    for j in 0..=k / 2 {
        for l in 0..=k - 2 * j {
            for m in 0..=j {
                let den = fact(l) * fact(j) * fact(m) * fact(j - m) * fact(k - 2 * j - l) * int((j + l + m + 1) as i64);
                let sign = if m % 2 == 0 { int(1) } else { int(-1) };
                total += sign * powu(kappa, k - j - l - m) * powu(&r1, j) * powu(&r2, l) / den;
            }
        }
    }
    Ok(total * fact(k) * powu(p, k))
}

pub fn krawtchouk_eq_moment_oracle(kappa: &Rational, p: &Rational, k: u64) -> Result<Rational> {
    Ok(EquilibriumSpec::krawtchouk(kappa.clone(), p.clone())?.moment_oracle(k))
}

/// `E[(U + 2√(Uh)ξ + h)^k] = M^θ(k; 1/h)/(θ/h)^k`
pub fn charlier_correspondence(theta: &Rational, h: &Rational, k: u64) -> Result<bool> {
    if !theta.is_positive() || !h.is_positive() {
        return Err(Error::InvalidParameter("theta and h must be positive".into()));
    }
    let rhs = poissonised_charlier(theta, k).eval(&h.recip()) / powu(&(theta / h), k);
    Ok(charlier_eq_moment(h, k)? == rhs)
}

/// `C(k,m) C(k,k-m) = Σ_j C(m,j) C(k-j,k-m-j) C(k,k-j)`
pub fn riordan_check(k: u64, m: u64) -> bool {
    let lhs = binomial_int(k, m) * binomial_int(k, k - m);
    let rhs: num_bigint::BigInt = (0..=m.min(k - m))
        .map(|j| binomial_int(m, j) * binomial_int(k - j, k - m - j) * binomial_int(k, k - j))
        .sum();
    lhs == rhs
}

/// `Σ_j C(k,j)² q^{-j} (q/(1-q))^k/(k+1)`, the value of the `t → 1/q` limit.
pub fn meixner_limit_value(q: &Rational, k: u64) -> Result<Rational> {
    unit_interval(q, "q")?;
    let s: Rational = (0..=k)
        .map(|j| Rational::from_integer(binomial_int(k, j).pow(2)) / powu(q, j))
        .sum();
    Ok(s * powu(&(q / (Rational::one() - q)), k) / int(k as i64 + 1))
}

#[derive(Debug, Clone)]
pub struct LimitRow<R> {
    pub t: Rational,
    /// Truncated weighted sum of normalised factorial moments.
    pub value: R,
    /// Same quantity through the `₂F₁(k+2, j+2; k+j+2; tq)` form.
    pub intermediate: R,
    pub last_summand: R,
    /// `|value - limit|`
    pub gap: R,
}

#[derive(Debug, Clone)]
pub struct LimitReport<R> {
    pub q: Rational,
    pub k: u64,
    pub limit: Rational,
    pub rows: Vec<LimitRow<R>>,
    /// Whether the exact limit value equals the equilibrium moment.
    pub limit_matches: bool,
    /// Whether the gaps are nonincreasing along the sequence.
    pub gaps_decrease: bool,
    /// Largest `|value - intermediate|` over the rows.
    pub max_route_difference: R,
}

/// Walks `t` toward `1/q` and reports how the weighted moments approach the limit.
pub fn meixner_limit_correspondence<R: RealScalar>(
    q: &Rational,
    k: u64,
    t_sequence: &[Rational],
    m_max: u64,
    precision: Precision,
) -> Result<LimitReport<R>> {
    unit_interval(q, "q")?;
    let limit = meixner_limit_value(q, k)?;
    let limit_matches = limit == meixner1_eq_moment(q, k)?;
    let normalised: Vec<Rational> = meixner_ledoux_sequence(&int(1), q, k, m_max + 1)?
        .into_iter()
        .enumerate()
        .map(|(m, v)| v / crate::hypergeo::rising_factorial(&int(m as i64 + 2), k))
        .collect();
    let limit_r = R::from_rational(&limit, precision);
    let mut rows = Vec::with_capacity(t_sequence.len());
    let mut max_diff = R::zero();
    for t in t_sequence {
        let tq = t * q;
        if tq >= Rational::one() {
            return Err(Error::Divergent(format!("tq = {tq} is not below 1")));
        }
        if !tq.is_positive() {
            return Err(Error::InvalidParameter(format!("t must be positive, got {t}")));
        }
        let x = R::from_rational(&tq, precision);
        let one_minus = R::one() - x.clone();
        let mut power = one_minus.clone() * one_minus.clone();
        let mut value = R::zero();
        let mut last = R::zero();
        for (m, v) in normalised.iter().enumerate() {
            if m > 0 {
                power = power * x.clone();
            }
            last = power.clone() * R::from_rational(&(v * int(m as i64 + 1)), precision);
            value = value + last.clone();
        }
        let intermediate = meixner_intermediate::<R>(q, k, t, precision)?;
        let diff = (value.clone() - intermediate.clone()).abs();
        if diff > max_diff {
            max_diff = diff;
        }
        rows.push(LimitRow {
            t: t.clone(),
            gap: (value.clone() - limit_r.clone()).abs(),
            value,
            intermediate,
            last_summand: last,
        });
    }
    let gaps_decrease = rows.windows(2).all(|w| w[1].gap <= w[0].gap);
    Ok(LimitReport { q: q.clone(), k, limit, rows, limit_matches, gaps_decrease, max_route_difference: max_diff })
}

/// `(q/(1-q))^k/(k+1) Σ_j C(k,j)² t^j (1-tq)² (j+1)!(k+1)!/(j+k+1)! ₂F₁(k+2, j+2; k+j+2; tq)`
pub fn meixner_intermediate<R: RealScalar>(q: &Rational, k: u64, t: &Rational, precision: Precision) -> Result<R> {
    let tq = t * q;
    if tq >= Rational::one() {
        return Err(Error::Divergent(format!("tq = {tq} is not below 1")));
    }
    let conv = |r: &Rational| R::from_rational(r, precision);
    let x = conv(&tq);
    let one_minus = R::one() - x.clone();
    let mut total = R::zero();
    for j in 0..=k {
        let exact = Rational::from_integer(binomial_int(k, j).pow(2)) * powu(t, j) * fact(j + 1) * fact(k + 1)
            / fact(j + k + 1);
        let f = gauss_series(
            &R::from_u64(k + 2).expect("small integer"),
            &R::from_u64(j + 2).expect("small integer"),
            &R::from_u64(k + j + 2).expect("small integer"),
            &x,
            precision,
        )?;
        total = total + conv(&exact) * f;
    }
    let pre = powu(&(q / (Rational::one() - q)), k) / int(k as i64 + 1);
    Ok(total * one_minus.clone() * one_minus * conv(&pre))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hypergeo::{rat, HighPrecReal};

    #[test]
    fn monomials() {
        assert_eq!(arcsine_uniform_monomial(1, 0), int(0));
        assert_eq!(arcsine_uniform_monomial(2, 0), rat(1, 2));
        assert_eq!(arcsine_uniform_monomial(0, 2), rat(1, 3));
        assert_eq!(arcsine_uniform_monomial(4, 1), rat(3, 16));
    }

    #[test]
    fn charlier_examples() {
        assert_eq!(charlier_eq_moment(&rat(7, 3), 1).unwrap(), rat(7, 3) + rat(1, 2));
        assert_eq!(charlier_eq_moment_oracle(&rat(7, 3), 1).unwrap(), rat(7, 3) + rat(1, 2));
        assert_eq!(charlier_eq_moment(&int(5), 0).unwrap(), int(1));
        assert_eq!(charlier_eq_moment(&int(1), 2).unwrap(), rat(10, 3));
        assert_eq!(charlier_eq_moment(&int(2), 2).unwrap(), rat(25, 3));
        assert_eq!(charlier_eq_moment_oracle(&int(2), 2).unwrap(), rat(25, 3));
    }

    #[test]
    fn meixner_examples() {
        assert_eq!(meixner1_eq_moment(&rat(1, 2), 1).unwrap(), rat(3, 2));
        assert_eq!(meixner1_eq_moment_oracle(&rat(1, 2), 1).unwrap(), rat(3, 2));
        assert_eq!(meixner1_eq_moment(&rat(1, 2), 2).unwrap(), rat(13, 3));
        assert_eq!(meixner1_eq_moment_oracle(&rat(1, 2), 2).unwrap(), rat(13, 3));
        assert_eq!(meixner_general_eq_moment(&rat(1, 2), &int(1), 1).unwrap(), rat(5, 2));
        assert_eq!(meixner_general_eq_moment_oracle(&rat(1, 2), &int(1), 1).unwrap(), rat(5, 2));
        assert_eq!(meixner_general_eq_moment(&rat(1, 2), &int(1), 0).unwrap(), int(1));
    }

    #[test]
    fn general_matches_oracle() {
        for q in [rat(1, 4), rat(1, 2)] {
            for c in [int(0), int(1), int(2)] {
                for k in 0..=8 {
                    assert_eq!(
                        meixner_general_eq_moment(&q, &c, k).unwrap(),
                        meixner_general_eq_moment_oracle(&q, &c, k).unwrap()
                    );
                }
            }
        }
    }

    #[test]
    fn krawtchouk_examples() {
        let (kappa, p) = (rat(5, 2), rat(1, 3));
        let expected = &p * &kappa + (int(1) - &p * int(2)) / int(2);
        assert_eq!(krawtchouk_eq_moment(&kappa, &p, 1).unwrap(), expected);
        assert_eq!(krawtchouk_eq_moment_oracle(&kappa, &p, 1).unwrap(), expected);
        assert_eq!(krawtchouk_eq_moment(&kappa, &p, 0).unwrap(), int(1));
        for k in 0..=8 {
            assert_eq!(
                krawtchouk_eq_moment(&int(2), &rat(1, 2), k).unwrap(),
                krawtchouk_eq_moment_oracle(&int(2), &rat(1, 2), k).unwrap()
            );
        }
    }

    #[test]
    fn correspondence_and_riordan() {
        assert!(charlier_correspondence(&int(7), &int(2), 3).unwrap());
        assert!(charlier_correspondence(&int(1), &int(1), 2).unwrap());
        assert!(charlier_correspondence(&rat(2, 5), &int(3), 0).unwrap());
        for k in 0..=15 {
            for m in 0..=k {
                assert!(riordan_check(k, m));
            }
        }
    }

    #[test]
    fn limit_value_matches_moment() {
        for k in 0..=6 {
            assert_eq!(meixner_limit_value(&rat(1, 3), k).unwrap(), meixner1_eq_moment(&rat(1, 3), k).unwrap());
        }
    }

    #[test]
    fn limit_walk() {
        let p = Precision::digits(40);
        let ts = [int(1), rat(9, 5), rat(99, 50)];
        let r = meixner_limit_correspondence::<HighPrecReal>(&rat(1, 2), 2, &ts, 8000, p).unwrap();
        assert!(r.limit_matches);
        assert!(r.gaps_decrease);
        assert_eq!(r.limit, rat(13, 3));
        assert!(r.max_route_difference.to_f64() < 1e-15, "{:?}", r.max_route_difference);
        let r = meixner_limit_correspondence::<f64>(&rat(1, 2), 0, &ts, 8000, p).unwrap();
        assert!(r.rows.iter().all(|row| (row.value - 1.0).abs() < 1e-12));
        assert!(matches!(
            meixner_limit_correspondence::<f64>(&rat(1, 2), 1, &[int(2)], 10, p),
            Err(Error::Divergent(_))
        ));
    }
}
