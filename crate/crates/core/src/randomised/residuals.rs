//! Residuals of recurrences in `k` and differential equations in `t` or `x`.
//!
//! A residual is returned as an exact rational function; an identity holds
//! iff its residual is the zero function. Some equations are evaluated
//! exactly as written in the literature and may well fail; those are
//! reported, never corrected in place.

use std::fmt;

use super::jacobi::{jacobi_poly, legendre_poly, JacobiSpec};
use super::{nb_meixner, nb_meixner_numerator, poissonised_charlier, poissonised_charlier_jacobi};
use crate::error::{Error, Result};
use crate::hypergeo::{format_rational, int, powi, rat, Poly, RatFunc, Rational};

fn t() -> Poly<Rational> {
    Poly::x()
}

fn lin(a: Rational, b: Rational) -> Poly<Rational> {
    Poly::linear(a, b)
}

fn need_k_at_least_one(k: u64) -> Result<()> {
    if k == 0 {
        Err(Error::InvalidParameter("k must be at least 1".into()))
    } else {
        Ok(())
    }
}

/// `(2k+1)(k+2)² M_{k+1} - θ(k+1)[(2k+3)(2k+1)(1+t) + (1-t)] M_k + θ² k² (2k+3)(1-t)² M_{k-1}`
pub fn recurrence_residual_charlier(theta: &Rational, k: u64) -> Result<Poly<Rational>> {
    need_k_at_least_one(k)?;
    let ki = k as i64;
    let m_next = poissonised_charlier(theta, k + 1);
    let m = poissonised_charlier(theta, k);
    let m_prev = poissonised_charlier(theta, k - 1);
    let one_minus_t = lin(int(1), int(-1));
    let a = int((2 * ki + 1) * (ki + 2) * (ki + 2));
    let mid = &lin(int(1), int(1)).scale(&int((2 * ki + 3) * (2 * ki + 1))) + &one_minus_t;
    let b = mid.scale(&(theta * int(ki + 1)));
    let c = (&one_minus_t * &one_minus_t).scale(&(theta * theta * int(ki * ki * (2 * ki + 3))));
    Ok(&(&m_next.scale(&a) - &(&b * &m)) + &(&c * &m_prev))
}

/// `M_{k+1} - (2k+1)q(1+t)/((1-q)(1-tq)) M_k + (kq(1-t)/((1-q)(1-tq)))² M_{k-1}`
///
/// Built over the common denominator `(1-q)²(1-qt)^{k+1}`, so a vanishing
/// residual never pays for a gcd.
pub fn recurrence_residual_meixner(q: &Rational, k: u64) -> Result<RatFunc<Rational>> {
    need_k_at_least_one(k)?;
    let ki = k as i64;
    let one_minus_q = int(1) - q;
    let p_next = nb_meixner_numerator(q, k + 1)?;
    let p = nb_meixner_numerator(q, k)?;
    let p_prev = nb_meixner_numerator(q, k - 1)?;
    let one_minus_t = lin(int(1), int(-1));
    let b = lin(int(1), int(1)).scale(&(q * int(2 * ki + 1) * &one_minus_q));
    let c = (&one_minus_t * &one_minus_t).scale(&(q * q * int(ki * ki)));
    let num = &(&p_next.scale(&(&one_minus_q * &one_minus_q)) - &(&b * &p)) + &(&c * &p_prev);
    let den = lin(int(1), -q.clone()).pow(k as u32 + 1).scale(&(&one_minus_q * &one_minus_q));
    RatFunc::new(num, den)
}

/// `t(1-t)² P'' + (2-t)(1-t) P' - k(k+2) P` with `P(t) = P_k^{(1,0)}((1+t)/(1-t))`.
///
/// With `P = Q/(1-t)^k`, `R₁ = Q'(1-t) + kQ` and `R₂ = R₁'(1-t) + (k+1)R₁`,
/// the residual is `(t R₂ + (2-t) R₁ - k(k+2) Q)/(1-t)^k`.
pub fn ode_residual_jacobi_substituted(k: u64) -> Result<RatFunc<Rational>> {
    let p = jacobi_poly(&JacobiSpec::new(int(1), int(0), k))?;
    let one_minus_t = lin(int(1), int(-1));
    let one_plus_t = lin(int(1), int(1));
    let mut q = Poly::zero();
    for (j, c) in p.coeffs().iter().enumerate() {
        let term = &one_plus_t.pow(j as u32) * &one_minus_t.pow((k as usize - j) as u32);
        q = &q + &term.scale(c);
    }
    let kr = int(k as i64);
    let r1 = &(&q.derivative() * &one_minus_t) + &q.scale(&kr);
    let r2 = &(&r1.derivative() * &one_minus_t) + &r1.scale(&(&kr + int(1)));
    let num = &(&(&t() * &r2) + &(&lin(int(2), int(-1)) * &r1)) - &q.scale(&int((k * (k + 2)) as i64));
    RatFunc::new(num, one_minus_t.pow(k as u32))
}

/// Equations whose residual can be computed and reported.
#[derive(Debug, Clone, PartialEq)]
pub enum ResidualKind {
    /// `t/(1-t)^{k-2} M'' + 2^{k-2}(2k+3) M' + 2^{k-1} k² M = 0` for the Poissonised Charlier moment.
    CharlierPrinted { theta: Rational },
    /// Gauss equation of `₂F₁(-k,-k;2;t)`: `t(1-t) M'' + (2 + (2k-1)t) M' - k² M = 0`.
    CharlierStandard { theta: Rational },
    /// `t(1-t) M'' + (qt² - (1 - 2k(1-q) + q)t + 1)/(1-qt) M' - (kq(1-t) + k²(1-q²t))/(1-qt)² M = 0`
    /// for the negative binomialised Meixner moment.
    MeixnerPrinted { q: Rational },
    /// `(1-x²) y'' - (1+3x) y' + k(k+2) y = 0`, `y = P_k^{(1,0)}`.
    JacobiBaseOde,
    /// `x P_k = (k+2)/(2k+3) P_{k+1} - 1/((2k+1)(2k+3)) P_k + k/(2k+1) P_{k-1}`, for `P^{(1,0)}`.
    JacobiBaseRec,
    /// `x P_k = (k+1) P_{k+1} - 2k P_k + k P_{k-1}` for Legendre `P_k`.
    LegendreBaseRec,
    /// `(1-x)² P'' - 2x P' + k(k+1) P = 0` for Legendre `P_k`.
    LegendreBaseOde,
    /// `(2k+1) x P_k = (k+1) P_{k+1} + k P_{k-1}`
    LegendreStandardRec,
    /// `(1-x²) P'' - 2x P' + k(k+1) P = 0`
    LegendreStandardOde,
}

impl ResidualKind {
    pub fn label(&self) -> &'static str {
        match self {
            ResidualKind::CharlierPrinted { .. } => "charlier_printed",
            ResidualKind::CharlierStandard { .. } => "charlier_standard",
            ResidualKind::MeixnerPrinted { .. } => "meixner_printed",
            ResidualKind::JacobiBaseOde => "jacobi_base",
            ResidualKind::JacobiBaseRec => "jacobi_base_rec",
            ResidualKind::LegendreBaseRec => "legendre_base_rec",
            ResidualKind::LegendreBaseOde => "legendre_base_ode",
            ResidualKind::LegendreStandardRec => "legendre_standard_rec",
            ResidualKind::LegendreStandardOde => "legendre_standard_ode",
        }
    }

    pub fn parameters(&self) -> String {
        match self {
            ResidualKind::CharlierPrinted { theta } | ResidualKind::CharlierStandard { theta } => {
                format!("theta={}", format_rational(theta))
            }
            ResidualKind::MeixnerPrinted { q } => format!("q={}", format_rational(q)),
            _ => String::new(),
        }
    }
}

fn jacobi10(k: u64) -> Result<Poly<Rational>> {
    jacobi_poly(&JacobiSpec::new(int(1), int(0), k))
}

/// The residual of the chosen equation at degree or order `k`.
pub fn ode_residual_printed(kind: &ResidualKind, k: u64) -> Result<RatFunc<Rational>> {
    need_k_at_least_one(k)?;
    let ki = k as i64;
    let x = Poly::<Rational>::x();
    let one_minus_t = lin(int(1), int(-1));
    match kind {
        ResidualKind::CharlierPrinted { theta } => {
            let m = RatFunc::from_poly(poissonised_charlier(theta, k));
            let (d1, d2) = (m.derivative(), m.derivative().derivative());
            let a = if k >= 2 {
                RatFunc::new(t(), one_minus_t.pow((k - 2) as u32))?
            } else {
                RatFunc::from_poly(&t() * &one_minus_t.pow((2 - k) as u32))
            };
            let b = powi(&int(2), ki - 2) * int(2 * ki + 3);
            let c = powi(&int(2), ki - 1) * int(ki * ki);
            Ok(&(&(&a * &d2) + &d1.scale(&b)) + &m.scale(&c))
        }
        ResidualKind::CharlierStandard { theta } => {
            let m = RatFunc::from_poly(poissonised_charlier(theta, k));
            let (d1, d2) = (m.derivative(), m.derivative().derivative());
            let a = RatFunc::from_poly(&t() * &one_minus_t);
            let b = RatFunc::from_poly(lin(int(2), int(2 * ki - 1)));
            Ok(&(&(&a * &d2) + &(&b * &d1)) - &m.scale(&int(ki * ki)))
        }
        ResidualKind::MeixnerPrinted { q } => {
            let m = nb_meixner(q, k)?;
            let (d1, d2) = (m.derivative(), m.derivative().derivative());
            let one_minus_qt = lin(int(1), -q.clone());
            let a = RatFunc::from_poly(&t() * &one_minus_t);
            let b_num = Poly::new(vec![
                int(1),
                -(int(1) - int(2 * ki) * (int(1) - q) + q),
                q.clone(),
            ]);
            let b = RatFunc::new(b_num, one_minus_qt.clone())?;
            let c_num = &one_minus_t.scale(&(q * int(ki))) + &lin(int(1), -(q * q)).scale(&int(ki * ki));
            let c = RatFunc::new(c_num, one_minus_qt.pow(2))?;
            Ok(&(&(&a * &d2) + &(&b * &d1)) - &(&c * &m))
        }
        ResidualKind::JacobiBaseOde => {
            let y = jacobi10(k)?;
            let (d1, d2) = (y.derivative(), y.derivative().derivative());
            let a = Poly::new(vec![int(1), int(0), int(-1)]);
            let b = lin(int(1), int(3));
            Ok(RatFunc::from_poly(&(&(&a * &d2) - &(&b * &d1)) + &y.scale(&int(ki * (ki + 2)))))
        }
        ResidualKind::JacobiBaseRec => {
            let (p_prev, p, p_next) = (jacobi10(k - 1)?, jacobi10(k)?, jacobi10(k + 1)?);
            let rhs = &(&p_next.scale(&rat(ki + 2, 2 * ki + 3)) - &p.scale(&rat(1, (2 * ki + 1) * (2 * ki + 3))))
                + &p_prev.scale(&rat(ki, 2 * ki + 1));
            Ok(RatFunc::from_poly(&(&x * &p) - &rhs))
        }
        ResidualKind::LegendreBaseRec => {
            let (p_prev, p, p_next) = (legendre_poly(k - 1), legendre_poly(k), legendre_poly(k + 1));
            let rhs = &(&p_next.scale(&int(ki + 1)) - &p.scale(&int(2 * ki))) + &p_prev.scale(&int(ki));
            Ok(RatFunc::from_poly(&(&x * &p) - &rhs))
        }
        ResidualKind::LegendreBaseOde => {
            let p = legendre_poly(k);
            let (d1, d2) = (p.derivative(), p.derivative().derivative());
            let a = lin(int(1), int(-1)).pow(2);
            Ok(RatFunc::from_poly(
                &(&(&a * &d2) - &(&x * &d1).scale(&int(2))) + &p.scale(&int(ki * (ki + 1))),
            ))
        }
        ResidualKind::LegendreStandardRec => {
            let (p_prev, p, p_next) = (legendre_poly(k - 1), legendre_poly(k), legendre_poly(k + 1));
            let lhs = (&x * &p).scale(&int(2 * ki + 1));
            Ok(RatFunc::from_poly(&(&lhs - &p_next.scale(&int(ki + 1))) - &p_prev.scale(&int(ki))))
        }
        ResidualKind::LegendreStandardOde => {
            let p = legendre_poly(k);
            let (d1, d2) = (p.derivative(), p.derivative().derivative());
            let a = Poly::new(vec![int(1), int(0), int(-1)]);
            Ok(RatFunc::from_poly(
                &(&(&a * &d2) - &(&x * &d1).scale(&int(2))) + &p.scale(&int(ki * (ki + 1))),
            ))
        }
    }
}

/// One line of the adjudication report.
#[derive(Debug, Clone, PartialEq)]
pub struct Adjudication {
    pub equation: &'static str,
    pub parameters: String,
    pub k: u64,
    pub residual: RatFunc<Rational>,
    pub holds: bool,
}

impl fmt::Display for Adjudication {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let status = if self.holds { "holds" } else { "FAILS" };
        write!(f, "{} [{}] k={}: {} (residual: {})", self.equation, self.parameters, self.k, status, self.residual)
    }
}

/// Residuals of the equations under scrutiny, followed by their reference forms.
pub fn default_report_kinds() -> Vec<ResidualKind> {
    vec![
        ResidualKind::CharlierPrinted { theta: int(1) },
        ResidualKind::LegendreBaseRec,
        ResidualKind::LegendreBaseOde,
        ResidualKind::MeixnerPrinted { q: rat(1, 2) },
        ResidualKind::CharlierStandard { theta: int(1) },
        ResidualKind::JacobiBaseOde,
        ResidualKind::JacobiBaseRec,
        ResidualKind::LegendreStandardRec,
        ResidualKind::LegendreStandardOde,
    ]
}

pub fn printed_equation_report(ks: &[u64]) -> Result<Vec<Adjudication>> {
    let mut out = Vec::new();
    for kind in default_report_kinds() {
        for &k in ks {
            let residual = ode_residual_printed(&kind, k)?;
            out.push(Adjudication {
                equation: kind.label(),
                parameters: kind.parameters(),
                k,
                holds: residual.is_zero(),
                residual,
            });
        }
    }
    Ok(out)
}

/// `M^θ(k; t) = θ^k (1-t)^k/(k+1) P(t)` links the Charlier moment to the
/// substituted Jacobi polynomial; the check is exact.
pub fn charlier_jacobi_link_holds(theta: &Rational, k: u64) -> bool {
    RatFunc::from_poly(poissonised_charlier(theta, k)) == poissonised_charlier_jacobi(theta, k)
}
