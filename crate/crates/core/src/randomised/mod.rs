//! Factorial moments with a randomised particle number: `N - 1` Poisson for
//! the Charlier ensemble, `N - 1` 2-negative binomial for the geometric
//! Meixner ensemble. Both collapse to exact functions of `t`.

mod jacobi;
mod residuals;

pub use jacobi::{jacobi_eval, jacobi_poly, legendre_eval, legendre_poly, legendre_rational, JacobiSpec, TimesSqrt2};
pub use residuals::{
    charlier_jacobi_link_holds, ode_residual_jacobi_substituted, ode_residual_printed, printed_equation_report, recurrence_residual_charlier,
    recurrence_residual_meixner, Adjudication, ResidualKind,
};

use num_traits::{One, Signed, Zero};

use crate::ensembles::LatticeSum;
use crate::error::{Error, Result};
use crate::hypergeo::{
    binomial_int, catalan, factorial, int, partial_sum, pfq_terminating_poly, powu, HypergeoSpec, Poly, Precision,
    RatFunc, Rational, RealScalar,
};
use crate::moments::{charlier_ledoux_sequence, meixner_ledoux_sequence};

fn rational_t_linear(a: i64, b: Rational) -> Poly<Rational> {
    Poly::linear(int(a), b)
}

/// `(1+t)/(1-t)` as a rational function of `t`.
fn cayley() -> RatFunc<Rational> {
    RatFunc::new(rational_t_linear(1, int(1)), rational_t_linear(1, int(-1))).expect("nonzero denominator")
}

/// `M^θ(k; t) = θ^k ₂F₁(-k, -k; 2; t)`, a polynomial of degree `k` in `t`.
pub fn poissonised_charlier(theta: &Rational, k: u64) -> Poly<Rational> {
    let kr = -int(k as i64);
    pfq_terminating_poly(&[kr.clone(), kr], &[int(2)])
        .expect("upper parameter -k terminates")
        .scale(&powu(theta, k))
}

/// `θ^k (1-t)^k/(k+1) · P_k^{(1,0)}((1+t)/(1-t))`
pub fn poissonised_charlier_jacobi(theta: &Rational, k: u64) -> RatFunc<Rational> {
    let p = jacobi_poly(&JacobiSpec::new(int(1), int(0), k)).expect("valid Jacobi parameters");
    let one_minus_t = RatFunc::from_poly(rational_t_linear(1, int(-1)));
    let scale = powu(theta, k) / int(k as i64 + 1);
    (&one_minus_t.pow(k as u32) * &cayley().substitute_into(&p)).scale(&scale)
}

/// `θ^k (2k+1)/(k+1) C_k`
pub fn catalan_poissonised(theta: &Rational, k: u64) -> Rational {
    powu(theta, k) * int(2 * k as i64 + 1) / int(k as i64 + 1) * Rational::from_integer(catalan(k))
}

/// `q^k (1-q)^{-2k} (k+1)! C_k`
pub fn catalan_nb(q: &Rational, k: u64) -> Rational {
    powu(q, k) / powu(&(Rational::one() - q), 2 * k) * Rational::from_integer(factorial(k + 1) * catalan(k))
}

fn check_q(q: &Rational) -> Result<()> {
    if q.is_zero() || q.is_one() {
        return Err(Error::InvalidParameter(format!("q must differ from 0 and 1, got {q}")));
    }
    Ok(())
}

fn nb_prefactor(q: &Rational, k: u64) -> Rational {
    Rational::from_integer(factorial(k)) * powu(&(q / (Rational::one() - q)), k)
}

fn one_minus_qt(q: &Rational) -> Poly<Rational> {
    Poly::linear(int(1), -q.clone())
}

/// `M^{1,2}_q(k; t) = k! (q/((1-q)(1-qt)))^k ₂F₁(-k, -k; 1; t)`
pub fn nb_meixner(q: &Rational, k: u64) -> Result<RatFunc<Rational>> {
    RatFunc::new(nb_meixner_numerator(q, k)?, one_minus_qt(q).pow(k as u32))
}

/// `M^{1,2}_q(k; t) (1-qt)^k`, unreduced.
pub(crate) fn nb_meixner_numerator(q: &Rational, k: u64) -> Result<Poly<Rational>> {
    check_q(q)?;
    let kr = -int(k as i64);
    let f = pfq_terminating_poly(&[kr.clone(), kr], &[int(1)])?;
    Ok(f.scale(&nb_prefactor(q, k)))
}

/// `k! (q/((1-q)(1-tq)))^k (1-t)^k P_k((1+t)/(1-t))`
pub fn nb_meixner_legendre(q: &Rational, k: u64) -> Result<RatFunc<Rational>> {
    check_q(q)?;
    let p = legendre_poly(k);
    let ratio = RatFunc::new(Poly::linear(int(1), int(-1)), one_minus_qt(q))?;
    Ok((&ratio.pow(k as u32) * &cayley().substitute_into(&p)).scale(&nb_prefactor(q, k)))
}

/// Sum of `₂F₁(a, b; c; t)` for `|t| < 1`, continued until the terms are
/// below `10^{-(digits+10)}` relative to the partial sum.
pub(crate) fn gauss_series<R: RealScalar>(a: &R, b: &R, c: &R, t: &R, precision: Precision) -> Result<R> {
    let tol = R::from_rational(
        &Rational::new(1.into(), num_traits::pow(num_bigint::BigInt::from(10), precision.decimal_digits() as usize + 10)),
        precision,
    );
    let mut term = R::one();
    let mut sum = R::one();
    let mut small = 0;
    for i in 0..1_000_000u64 {
        let x = R::from_u64(i).expect("small integer");
        let den = (x.clone() + c.clone()) * (x.clone() + R::one());
        if den.is_zero() {
            return Err(Error::LowerParameterPole { parameter: format!("{c:?}"), term: i + 1 });
        }
        term = term * (x.clone() + a.clone()) * (x + b.clone()) * t.clone() / den;
        if term.is_zero() {
            return Ok(sum);
        }
        sum = sum + term.clone();
        if term.abs() < tol.clone() * (R::one() + sum.abs()) {
            small += 1;
            if small >= 3 {
                return Ok(sum);
            }
        } else {
            small = 0;
        }
    }
    Err(Error::Divergent("hypergeometric series did not settle".into()))
}

/// `|e^{tθ} ₂F₁(a, b; c; t) - Σ_{m ≤ m_max} (tθ)^m/m! ₃F₁(a, b, -m; c; -1/θ)|`,
/// both sides summed directly at 20 digits above `precision`.
pub fn exton_defect<R: RealScalar>(
    a: &Rational,
    b: &Rational,
    c: &Rational,
    theta: &Rational,
    t: &Rational,
    m_max: u64,
    precision: Precision,
) -> Result<R> {
    if t.abs() >= Rational::one() {
        return Err(Error::OutOfRange(format!("|t| must be below 1, got {t}")));
    }
    if theta.is_zero() {
        return Err(Error::InvalidParameter("theta must be nonzero".into()));
    }
    if c.is_integer() && !c.is_positive() {
        return Err(Error::InvalidParameter(format!("c = {c} is a nonpositive integer")));
    }
    let w = Precision::digits(precision.decimal_digits() + 20);
    let conv = |r: &Rational| R::from_rational(r, w);
    let (ra, rb, rc) = (conv(a), conv(b), conv(c));
    let lhs = (conv(&(t * theta))).exp() * gauss_series(&ra, &rb, &rc, &conv(t), w)?;

    let z = conv(&-theta.recip());
    let tt = conv(&(t * theta));
    let mut weight = R::one();
    let mut rhs = R::zero();
    for m in 0..=m_max {
        if m > 0 {
            weight = weight * tt.clone() / R::from_u64(m).expect("small integer");
        }
        let spec = HypergeoSpec::new(
            vec![ra.clone(), rb.clone(), -R::from_u64(m).expect("small integer")],
            vec![rc.clone()],
            z.clone(),
        );
        let (f, _) = partial_sum(&spec, m + 1)?;
        rhs = rhs + weight.clone() * f;
    }
    Ok((lhs - rhs).abs())
}

/// `Σ_{m ≤ m_max} e^{-tθ} (tθ)^m/m! · M^θ(k, m+1)`, with `M` from the double sum.
pub fn poissonisation_oracle<R: RealScalar>(
    theta: &Rational,
    k: u64,
    t: &Rational,
    m_max: u64,
    precision: Precision,
) -> Result<LatticeSum<R>> {
    if !t.is_positive() || !theta.is_positive() {
        return Err(Error::InvalidParameter("theta and t must be positive".into()));
    }
    let moments = charlier_ledoux_sequence(theta, k, m_max + 1)?;
    let rate = t * theta;
    let mut weight = Rational::one();
    let mut total = Rational::zero();
    let mut last = Rational::zero();
    for (m, mom) in moments.iter().enumerate() {
        if m > 0 {
            weight = weight * &rate / int(m as i64);
        }
        last = &weight * mom;
        total += &last;
    }
    let c = (-R::from_rational(&rate, precision)).exp();
    Ok(LatticeSum {
        value: R::from_rational(&total, precision) * c.clone(),
        last_summand: R::from_rational(&last, precision) * c,
        x_max: m_max,
    })
}

/// `Σ_{m ≤ m_max} (m+1)(tq)^m (1-tq)² · M¹_q(k, m+1)`; exact up to truncation.
pub fn nb_oracle<R: RealScalar>(
    q: &Rational,
    k: u64,
    t: &Rational,
    m_max: u64,
    precision: Precision,
) -> Result<LatticeSum<R>> {
    let tq = t * q;
    if !tq.is_positive() || tq >= Rational::one() || !q.is_positive() || *q >= Rational::one() {
        return Err(Error::InvalidParameter(format!("need 0 < q < 1 and 0 < tq < 1, got q = {q}, tq = {tq}")));
    }
    let moments = meixner_ledoux_sequence(&int(1), q, k, m_max + 1)?;
    let one_minus = Rational::one() - &tq;
    let mut power = one_minus.clone() * &one_minus;
    let mut total = Rational::zero();
    let mut last = Rational::zero();
    for (m, mom) in moments.iter().enumerate() {
        if m > 0 {
            power *= &tq;
        }
        last = &power * int(m as i64 + 1) * mom;
        total += &last;
    }
    Ok(LatticeSum {
        value: R::from_rational(&total, precision),
        last_summand: R::from_rational(&last, precision),
        x_max: m_max,
    })
}

/// `Σ_j C(k+1, k-j) C(k, j) = C(2k+1, k)`
pub fn chu_vandermonde_check(k: u64) -> bool {
    let lhs: num_bigint::BigInt = (0..=k).map(|j| binomial_int(k + 1, k - j) * binomial_int(k, j)).sum();
    lhs == binomial_int(2 * k + 1, k)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hypergeo::{rat, HighPrecReal};

    fn hp(s: &str) -> HighPrecReal {
        HighPrecReal::parse_with(s, Precision::default()).unwrap()
    }

    fn p(c: &[Rational]) -> Poly<Rational> {
        Poly::new(c.to_vec())
    }

    #[test]
    fn listed_poissonised_polynomials() {
        let theta = rat(3, 7);
        let t1 = poissonised_charlier(&theta, 1);
        assert_eq!(t1, p(&[int(2), int(1)]).scale(&(&theta / int(2))));
        let t2 = poissonised_charlier(&theta, 2);
        assert_eq!(t2, p(&[int(3), int(6), int(1)]).scale(&(powu(&theta, 2) / int(3))));
        assert_eq!(poissonised_charlier(&theta, 5).eval(&int(0)), powu(&theta, 5));
    }

    #[test]
    fn jacobi_form_examples() {
        let theta = rat(5, 2);
        assert_eq!(poissonised_charlier_jacobi(&theta, 0), RatFunc::one());
        assert_eq!(
            poissonised_charlier_jacobi(&theta, 1).as_poly().unwrap(),
            p(&[int(2), int(1)]).scale(&(&theta / int(2)))
        );
        let k3 = p(&[int(4), int(18), int(12), int(1)]).scale(&(powu(&theta, 3) / int(4)));
        assert_eq!(poissonised_charlier_jacobi(&theta, 3).as_poly().unwrap(), k3);
    }

    #[test]
    fn catalan_examples() {
        assert_eq!(catalan_poissonised(&int(1), 2), rat(10, 3));
        assert_eq!(catalan_poissonised(&int(1), 0), int(1));
        assert_eq!(catalan_poissonised(&int(1), 3), rat(35, 4));
        assert_eq!(catalan_nb(&rat(1, 2), 1), int(4));
    }

    #[test]
    fn nb_examples() {
        assert_eq!(nb_meixner(&rat(1, 3), 0).unwrap(), RatFunc::one());
        assert_eq!(nb_meixner(&rat(1, 2), 1).unwrap().eval(&int(1)).unwrap(), int(4));
        let q = rat(2, 5);
        let expected = Rational::from_integer(factorial(3)) * powu(&(&q / (int(1) - &q)), 3);
        assert_eq!(nb_meixner(&q, 3).unwrap().eval(&int(0)).unwrap(), expected);
        assert_eq!(nb_meixner(&q, 4).unwrap(), nb_meixner_legendre(&q, 4).unwrap());
        assert!(nb_meixner(&int(1), 2).is_err());
    }

    #[test]
    fn exton_examples() {
        let pr = Precision::default();
        let d: HighPrecReal = exton_defect(&int(-1), &int(-1), &int(2), &int(1), &rat(1, 2), 80, pr).unwrap();
        assert!(d < hp("1e-30"));
        let d: HighPrecReal = exton_defect(&int(-2), &int(-2), &int(2), &int(2), &rat(1, 3), 100, pr).unwrap();
        assert!(d < hp("1e-30"));
        let d: HighPrecReal = exton_defect(&rat(1, 3), &rat(-5, 2), &rat(3, 2), &rat(3, 4), &int(0), 10, pr).unwrap();
        assert!(d < hp("1e-70"));
        let d: HighPrecReal =
            exton_defect(&rat(7, 3), &rat(-5, 4), &rat(1, 2), &rat(1, 2), &rat(-1, 2), 200, pr).unwrap();
        assert!(d < hp("1e-25"));
        assert!(exton_defect::<f64>(&int(1), &int(1), &int(0), &int(1), &rat(1, 2), 5, pr).is_err());
    }

    #[test]
    fn randomisation_oracle_examples() {
        let pr = Precision::default();
        let v: LatticeSum<HighPrecReal> = poissonisation_oracle(&int(1), 1, &int(1), 120, pr).unwrap();
        assert!((v.value - HighPrecReal::from_rational(&rat(3, 2), pr)).abs() < hp("1e-25"));
        let v: LatticeSum<HighPrecReal> = poissonisation_oracle(&int(2), 2, &rat(1, 2), 150, pr).unwrap();
        assert!((v.value - HighPrecReal::from_rational(&rat(25, 3), pr)).abs() < hp("1e-25"));
        let v: LatticeSum<HighPrecReal> = poissonisation_oracle(&int(2), 0, &rat(1, 2), 150, pr).unwrap();
        assert!((v.value - HighPrecReal::from_rational(&int(1), pr)).abs() < hp("1e-25"));

        let v: LatticeSum<HighPrecReal> = nb_oracle(&rat(1, 2), 1, &int(1), 400, pr).unwrap();
        assert!((v.value - HighPrecReal::from_rational(&int(4), pr)).abs() < hp("1e-20"));
        let exact = nb_meixner(&rat(1, 3), 2).unwrap().eval(&rat(1, 2)).unwrap();
        let v: LatticeSum<HighPrecReal> = nb_oracle(&rat(1, 3), 2, &rat(1, 2), 400, pr).unwrap();
        assert!((v.value - HighPrecReal::from_rational(&exact, pr)).abs() < hp("1e-20"));
        assert!(nb_oracle::<f64>(&rat(1, 2), 1, &int(2), 10, pr).is_err());
    }

    #[test]
    fn chu_vandermonde() {
        assert!((0..=30).all(chu_vandermonde_check));
    }
}
