//! Truncated sums over partitions, shell by shell in `|λ|`.
//!
//! Every shell is summed exactly (integers times rational weights); factors
//! such as `e^{-Nθ}` enter once per layer. Shell sums run in parallel over
//! the partitions of a shell and reduce exactly, so the result does not
//! depend on scheduling.

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use rayon::prelude::*;

use super::partition::{partitions_of, Partition};
use crate::error::{Error, Result};
use crate::hypergeo::{
    factorial, int, pfq_terminating, powu, rising_factorial, HypergeoSpec, Precision, Rational, RealScalar,
};
use crate::moments::{charlier_hyper, meixner1_hyper};
use crate::randomised::{nb_meixner, poissonised_charlier};

/// Stopping rule: stop once `patience` consecutive nonincreasing shells each
/// add less than `rel_tol` of the running total; `max_size` is a hard cap.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Truncation {
    pub max_size: u64,
    pub rel_tol: f64,
    pub patience: u32,
}

impl Truncation {
    pub fn new(max_size: u64) -> Self {
        Truncation { max_size, rel_tol: 1e-12, patience: 3 }
    }

    pub fn with_rel_tol(self, rel_tol: f64) -> Self {
        Truncation { rel_tol, ..self }
    }
}

fn approx(r: &Rational) -> f64 {
    <f64 as RealScalar>::from_rational(r, Precision::default())
}

struct Series {
    sum: Rational,
    last: Rational,
    terms: u64,
    converged: bool,
}

/// Sums `term(0), term(1), ...` under `rule`. `scale` converts a term to the
/// size it really contributes; `offset` is what the enclosing sum already holds.
fn run_series(
    rule: &Truncation,
    cap: u64,
    first: u64,
    offset: f64,
    scale: f64,
    mut term: impl FnMut(u64) -> Result<Rational>,
) -> Result<Series> {
    let mut sum = Rational::zero();
    let mut last = Rational::zero();
    let mut prev = f64::INFINITY;
    let mut streak = 0;
    let mut terms = 0;
    for n in first..=cap {
        let c = term(n)?;
        terms += 1;
        sum += &c;
        let size = (approx(&c) * scale).abs();
        let running = (offset + approx(&sum) * scale).abs();
        if !sum.is_zero() && size <= prev && size < rule.rel_tol * running {
            streak += 1;
        } else {
            streak = 0;
        }
        prev = size;
        last = c;
        if streak >= rule.patience {
            return Ok(Series { sum, last, terms, converged: true });
        }
    }
    Ok(Series { sum, last, terms, converged: false })
}

/// `N·F_{N,k}(λ)`, an integer.
fn n_f_nk(lambda: &Partition, n: u64, k: u64) -> BigInt {
    (1..=n as usize)
        .map(|i| {
            let x = lambda.part(i) + n - i as u64;
            if x < k {
                BigInt::zero()
            } else {
                (0..k).map(|j| BigInt::from(x - j)).product()
            }
        })
        .sum()
}

fn shell_sum(size: u64, n: u64, summand: impl Fn(&Partition) -> BigInt + Sync + Send) -> BigInt {
    partitions_of(size, n as usize)
        .par_iter()
        .map(summand)
        .reduce(BigInt::zero, |a, b| a + b)
}

/// `Σ_{|λ|=size} F_{N,k}(λ) s_λ(1^N) f^λ`
pub fn charlier_shell(size: u64, n: u64, k: u64) -> Rational {
    let s = shell_sum(size, n, |l| n_f_nk(l, n, k) * l.schur_at_ones(n) * l.f_lambda());
    Rational::new(s, BigInt::from(n))
}

/// `Σ_{|λ|=size} F_{N,k}(λ) s_λ(1^N) s_λ(1^M)`
pub fn meixner_shell(size: u64, n: u64, m: u64, k: u64) -> Rational {
    let s = shell_sum(size, n, |l| n_f_nk(l, n, k) * l.schur_at_ones(n) * l.schur_at_ones(m));
    Rational::new(s, BigInt::from(n))
}

/// Charlier and Meixner Schur measures on partitions with at most `N` parts.
#[derive(Debug, Clone, PartialEq)]
pub enum SchurMeasure {
    /// `e^{-Nθ} θ^{|λ|}/|λ|! s_λ(1^N) f^λ`
    Charlier { theta: Rational, n: u64 },
    /// `q^{|λ|} (1-q)^{N(N+γ-1)} s_λ(1^N) s_λ(1^{N+γ-1})`, `γ` a positive integer.
    Meixner { q: Rational, gamma: u64, n: u64 },
}

fn check_n(n: u64) -> Result<()> {
    if n == 0 {
        Err(Error::InvalidParameter("N must be at least 1".into()))
    } else {
        Ok(())
    }
}

fn check_q(q: &Rational) -> Result<()> {
    if q.is_positive() && *q < Rational::one() {
        Ok(())
    } else {
        Err(Error::InvalidParameter(format!("q must lie in (0,1), got {q}")))
    }
}

fn check_theta(theta: &Rational) -> Result<()> {
    if theta.is_positive() {
        Ok(())
    } else {
        Err(Error::InvalidParameter(format!("theta must be positive, got {theta}")))
    }
}

fn fact(n: u64) -> Rational {
    Rational::from_integer(factorial(n))
}

impl SchurMeasure {
    pub fn charlier(theta: Rational, n: u64) -> Result<Self> {
        check_theta(&theta)?;
        check_n(n)?;
        Ok(SchurMeasure::Charlier { theta, n })
    }

    pub fn meixner(q: Rational, gamma: u64, n: u64) -> Result<Self> {
        check_q(&q)?;
        check_n(n)?;
        if gamma == 0 {
            return Err(Error::InvalidParameter("gamma must be a positive integer".into()));
        }
        Ok(SchurMeasure::Meixner { q, gamma, n })
    }

    pub fn n(&self) -> u64 {
        match self {
            SchurMeasure::Charlier { n, .. } | SchurMeasure::Meixner { n, .. } => *n,
        }
    }

    /// The weight of `λ` divided by [`Self::constant`]; exact.
    pub fn rational_weight(&self, lambda: &Partition) -> Rational {
        let size = lambda.size();
        match self {
            SchurMeasure::Charlier { theta, n } => {
                powu(theta, size) / fact(size)
                    * Rational::from_integer(lambda.schur_at_ones(*n) * lambda.f_lambda())
            }
            SchurMeasure::Meixner { q, gamma, n } => {
                powu(q, size)
                    * powu(&(Rational::one() - q), n * (n + gamma - 1))
                    * Rational::from_integer(lambda.schur_at_ones(*n) * lambda.schur_at_ones(n + gamma - 1))
            }
        }
    }

    /// `e^{-Nθ}` for Charlier, 1 for Meixner.
    pub fn constant<R: RealScalar>(&self, precision: Precision) -> R {
        match self {
            SchurMeasure::Charlier { theta, n } => (-R::from_rational(&(theta * int(*n as i64)), precision)).exp(),
            SchurMeasure::Meixner { .. } => R::one(),
        }
    }

    pub fn weight<R: RealScalar>(&self, lambda: &Partition, precision: Precision) -> R {
        R::from_rational(&self.rational_weight(lambda), precision) * self.constant::<R>(precision)
    }

    /// Shell `|λ| = size` of `Σ F_{N,k}(λ) · weight / constant`.
    fn shell(&self, size: u64, k: u64) -> Rational {
        match self {
            SchurMeasure::Charlier { theta, n } => powu(theta, size) / fact(size) * charlier_shell(size, *n, k),
            SchurMeasure::Meixner { q, gamma, n } => {
                powu(q, size) * powu(&(Rational::one() - q), n * (n + gamma - 1)) * meixner_shell(size, *n, n + gamma - 1, k)
            }
        }
    }

    /// Truncated `Σ_λ F_{N,k}(λ) · weight(λ)`; `k = 0` gives the total mass.
    pub fn expectation<R: RealScalar>(&self, k: u64, rule: &Truncation, precision: Precision) -> Result<ShellReport<R>> {
        let c = self.constant::<R>(precision);
        let s = run_series(rule, rule.max_size, 0, 0.0, c.to_f64(), |size| Ok(self.shell(size, k)))?;
        Ok(ShellReport {
            value: R::from_rational(&s.sum, precision) * c.clone(),
            last_term: R::from_rational(&s.last, precision) * c,
            terms: s.terms,
            converged: s.converged,
        })
    }
}

/// A truncated sum and the size of its final term.
#[derive(Debug, Clone)]
pub struct ShellReport<R> {
    pub value: R,
    pub last_term: R,
    pub terms: u64,
    pub converged: bool,
}

/// Truncated left side against the exact right side.
#[derive(Debug, Clone)]
pub struct CauchyReport<R> {
    pub lhs: R,
    pub rhs: Rational,
    pub gap: R,
    /// Last shell (or last layer) added.
    pub tail: R,
    pub terms: u64,
    pub converged: bool,
}

impl<R: RealScalar> CauchyReport<R> {
    fn build(lhs: R, rhs: Rational, tail: R, terms: u64, converged: bool, precision: Precision) -> Self {
        let gap = (lhs.clone() - R::from_rational(&rhs, precision)).abs();
        CauchyReport { lhs, rhs, gap, tail, terms, converged }
    }

    /// `gap ≤ tol · max(1, |rhs|)`
    pub fn within(&self, tol: f64) -> bool {
        self.gap.to_f64() <= tol * approx(&self.rhs).abs().max(1.0)
    }
}

/// `Σ_λ F_{N,k}(λ) ℂ_{θ,N}(λ)` against `θ^k ₃F₁(-k, -k, 1-N; 2; -1/θ)`.
pub fn verify_charlier_cauchy<R: RealScalar>(
    theta: &Rational,
    n: u64,
    k: u64,
    rule: &Truncation,
    precision: Precision,
) -> Result<CauchyReport<R>> {
    let measure = SchurMeasure::charlier(theta.clone(), n)?;
    let s = measure.expectation::<R>(k, rule, precision)?;
    Ok(CauchyReport::build(s.value, charlier_hyper(theta, k, n)?, s.last_term, s.terms, s.converged, precision))
}

/// Which lower parameter of the `₃F₂` reproduces the `γ = 1` Schur sum.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LowerParameterVerdict {
    /// Both candidates coincide (`N = 1`) and match.
    Both,
    /// Only the lower parameter `2` matches.
    Two,
    /// Only the lower parameter `1` matches.
    One,
    Neither,
}

#[derive(Debug, Clone)]
pub struct MeixnerCauchyReport<R> {
    /// Truncated `Σ_λ F_{N,k}(λ) q^{|λ|} s_λ(1^N)²`.
    pub lhs: R,
    /// `q^k (N+1)_k / ((1-q)^{N²+k}(k+1)) ₃F₂(-k, -k, 1-N; 2, -N-k; 1/q)`
    pub rhs_lower_two: Rational,
    /// Same prefactor with lower parameters `(1, -N-k)`.
    pub rhs_lower_one: Rational,
    /// `(1-q)^{-N²} M¹_q(k, N)` from the hypergeometric moment formula.
    pub rhs_moment: Rational,
    pub gap_lower_two: R,
    pub gap_lower_one: R,
    pub tail: R,
    pub terms: u64,
    pub converged: bool,
    pub verdict: LowerParameterVerdict,
}

fn cauchy_meixner_rhs(q: &Rational, n: u64, k: u64, lower: i64) -> Result<Rational> {
    let (kr, nr) = (int(k as i64), int(n as i64));
    let spec = HypergeoSpec::new(
        vec![-kr.clone(), -kr.clone(), int(1) - &nr],
        vec![int(lower), -(&nr + &kr)],
        q.recip(),
    );
    let pref = powu(q, k) * rising_factorial(&(&nr + int(1)), k)
        / powu(&(Rational::one() - q), n * n + k)
        / int(k as i64 + 1);
    Ok(pref * pfq_terminating(&spec)?)
}

/// `Σ_λ F_{N,k}(λ) q^{|λ|} s_λ(1^N)²` against both candidate right sides.
/// A candidate matches when its gap is within `match_tol · max(1, |rhs|)`.
pub fn verify_meixner_cauchy<R: RealScalar>(
    q: &Rational,
    n: u64,
    k: u64,
    rule: &Truncation,
    match_tol: f64,
    precision: Precision,
) -> Result<MeixnerCauchyReport<R>> {
    check_q(q)?;
    check_n(n)?;
    let s = run_series(rule, rule.max_size, 0, 0.0, 1.0, |size| Ok(powu(q, size) * meixner_shell(size, n, n, k)))?;
    let lhs = R::from_rational(&s.sum, precision);
    let two = cauchy_meixner_rhs(q, n, k, 2)?;
    let one = cauchy_meixner_rhs(q, n, k, 1)?;
    let moment = meixner1_hyper(q, k, n)? / powu(&(Rational::one() - q), n * n);
    let gap = |r: &Rational| (lhs.clone() - R::from_rational(r, precision)).abs();
    let (g2, g1) = (gap(&two), gap(&one));
    let ok = |g: &R, r: &Rational| s.converged && g.to_f64() <= match_tol * approx(r).abs().max(1.0);
    let verdict = match (ok(&g2, &two), ok(&g1, &one)) {
        (true, true) => LowerParameterVerdict::Both,
        (true, false) => LowerParameterVerdict::Two,
        (false, true) => LowerParameterVerdict::One,
        (false, false) => LowerParameterVerdict::Neither,
    };
    Ok(MeixnerCauchyReport {
        lhs,
        rhs_lower_two: two,
        rhs_lower_one: one,
        rhs_moment: moment,
        gap_lower_two: g2,
        gap_lower_one: g1,
        tail: R::from_rational(&s.last, precision),
        terms: s.terms,
        converged: s.converged,
        verdict,
    })
}

/// Sum over `N = 1..=max_n` of `layer_weight(N) · Σ_λ shell terms`, both
/// levels under `rule`. Everything is exact. Layer weights decay
/// geometrically, so the outer level stops at the first small layer.
fn double_series(
    rule: &Truncation,
    max_n: u64,
    layer_weight: impl Fn(u64) -> Rational,
    shell: impl Fn(u64, u64) -> Rational,
) -> Result<Series> {
    let mut grand = 0.0f64;
    let mut exact = Rational::zero();
    let outer = Truncation { patience: 1, ..*rule };
    let mut result = run_series(&outer, max_n, 1, 0.0, 1.0, |n| {
        let w = layer_weight(n);
        let inner = run_series(rule, rule.max_size, 0, grand, approx(&w), |size| Ok(shell(n, size)))?;
        let layer = w * inner.sum;
        exact += &layer;
        grand = approx(&exact);
        Ok(layer)
    })?;
    result.sum = exact;
    Ok(result)
}

/// `Σ_N Σ_λ F_{N,k}(λ) e^{-(N+t)θ} θ^{|λ|}/|λ|! (tθ)^{N-1}/(N-1)! s_λ(1^N) f^λ` against `θ^k ₂F₁(-k,-k;2;t)`.
pub fn verify_poissonised_cauchy<R: RealScalar>(
    theta: &Rational,
    t: &Rational,
    k: u64,
    max_n: u64,
    rule: &Truncation,
    precision: Precision,
) -> Result<CauchyReport<R>> {
    check_theta(theta)?;
    if !t.is_positive() {
        return Err(Error::InvalidParameter(format!("t must be positive, got {t}")));
    }
    let rate = t * theta;
    let e = (-R::from_rational(theta, precision)).exp();
    let e_t = (-R::from_rational(&rate, precision)).exp();
    let e_f = e.to_f64();
    let mut lhs = R::zero();
    let mut last = R::zero();
    let mut prev = f64::INFINITY;
    let mut streak = 0;
    let mut layers = 0;
    let mut converged = false;
    let mut e_n = R::one();
    for n in 1..=max_n {
        e_n = e_n * e.clone();
        let w = powu(&rate, n - 1) / fact(n - 1);
        let sc = approx(&w) * e_f.powi(n as i32) * e_t.to_f64();
        let inner = run_series(rule, rule.max_size, 0, lhs.to_f64(), sc, |size| {
            Ok(powu(theta, size) / fact(size) * charlier_shell(size, n, k))
        })?;
        let layer = R::from_rational(&(w * inner.sum), precision) * e_n.clone() * e_t.clone();
        lhs = lhs + layer.clone();
        layers += 1;
        let size = layer.to_f64().abs();
        if lhs.to_f64() != 0.0 && size <= prev && size < rule.rel_tol * lhs.to_f64().abs() {
            streak += 1;
        } else {
            streak = 0;
        }
        prev = size;
        last = layer;
        if streak >= rule.patience {
            converged = true;
            break;
        }
    }
    let rhs = poissonised_charlier(theta, k).eval(t);
    Ok(CauchyReport::build(lhs, rhs, last, layers, converged, precision))
}

/// `Σ_N Σ_λ N F_{N,k}(λ) q^{|λ|} (tq)^{N-1} (1-q)^{N²} s_λ(1^N)²` against
/// `q^k k!/((1-q)^k (1-tq)^{k+2}) ₂F₁(-k,-k;1;t)`.
///
/// The factor `(1-q)^{N²}` normalises each inner sum to a probability; without
/// it the outer sum diverges.
pub fn verify_nb_cauchy<R: RealScalar>(
    q: &Rational,
    t: &Rational,
    k: u64,
    max_n: u64,
    rule: &Truncation,
    precision: Precision,
) -> Result<CauchyReport<R>> {
    check_q(q)?;
    let tq = t * q;
    if !tq.is_positive() || tq >= Rational::one() {
        return Err(Error::InvalidParameter(format!("need 0 < tq < 1, got {tq}")));
    }
    let one_minus_q = Rational::one() - q;
    let s = double_series(
        rule,
        max_n,
        |n| int(n as i64) * powu(&tq, n - 1) * powu(&one_minus_q, n * n),
        |n, size| powu(q, size) * meixner_shell(size, n, n, k),
    )?;
    let rhs = nb_meixner(q, k)?.eval(t)? / powu(&(Rational::one() - &tq), 2);
    let lhs = R::from_rational(&s.sum, precision);
    Ok(CauchyReport::build(lhs, rhs, R::from_rational(&s.last, precision), s.terms, s.converged, precision))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hypergeo::{rat, HighPrecReal};

    fn p40() -> Precision {
        Precision::digits(40)
    }

    #[test]
    fn charlier_examples() {
        let rule = Truncation::new(60).with_rel_tol(1e-30);
        let r = verify_charlier_cauchy::<HighPrecReal>(&rat(1, 2), 1, 1, &rule, p40()).unwrap();
        assert_eq!(r.rhs, rat(1, 2));
        assert!(r.gap.to_f64() < 1e-20, "{:?}", r.gap);
        let r = verify_charlier_cauchy::<HighPrecReal>(&rat(1, 2), 2, 2, &Truncation::new(80), p40()).unwrap();
        assert_eq!(r.rhs, rat(5, 4));
        assert!(r.converged);
        assert!(r.gap.to_f64() < 1e-10, "{:?}", r.gap);
        let r = verify_charlier_cauchy::<HighPrecReal>(&rat(1, 2), 3, 0, &Truncation::new(80), p40()).unwrap();
        assert!(r.within(1e-10));
    }

    #[test]
    fn meixner_examples() {
        let rule = Truncation::new(200);
        let r = verify_meixner_cauchy::<HighPrecReal>(&rat(1, 4), 1, 1, &rule, 1e-9, p40()).unwrap();
        assert_eq!(r.rhs_moment, rat(4, 9));
        assert_eq!(r.verdict, LowerParameterVerdict::Both);
        let r = verify_meixner_cauchy::<HighPrecReal>(&rat(1, 4), 2, 1, &rule, 1e-9, p40()).unwrap();
        assert_eq!(r.rhs_lower_one, r.rhs_moment);
        assert_eq!(r.verdict, LowerParameterVerdict::One);
        let r = verify_meixner_cauchy::<HighPrecReal>(&rat(1, 4), 2, 0, &rule, 1e-9, p40()).unwrap();
        assert!((r.lhs.to_f64() - (4.0f64 / 3.0).powi(4)).abs() < 1e-9);
    }

    #[test]
    fn randomised_examples() {
        let rule = Truncation::new(60);
        let r = verify_poissonised_cauchy::<HighPrecReal>(&rat(1, 2), &int(1), 1, 40, &rule, p40()).unwrap();
        assert_eq!(r.rhs, rat(3, 4));
        assert!(r.within(1e-10), "{:?}", r.gap);
        let r = verify_poissonised_cauchy::<HighPrecReal>(&rat(1, 2), &rat(1, 2), 2, 40, &rule, p40()).unwrap();
        assert_eq!(r.rhs, rat(25, 48));
        assert!(r.within(1e-10), "{:?}", r.gap);
        let r = verify_nb_cauchy::<HighPrecReal>(&rat(1, 4), &rat(1, 16), 1, 40, &Truncation::new(120), p40()).unwrap();
        assert!(r.within(1e-10), "{:?} {:?}", r.gap, r.lhs);
    }
}
