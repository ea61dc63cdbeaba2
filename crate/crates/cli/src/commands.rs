use facmom::ensembles::{default_x_max, factorial_moment_oracle, EnsembleParams, OnePointSpec};
use facmom::equilibrium::{charlier_correspondence, meixner_limit_correspondence, EquilibriumSpec};
use facmom::hypergeo::{format_rational, int, RealScalar};
use facmom::moments::{
    charlier_hyper, charlier_ledoux, krawtchouk_ledoux, krawtchouk_via_meixner, meixner1_hyper, meixner_ledoux,
};
use facmom::randomised::{
    catalan_nb, catalan_poissonised, charlier_jacobi_link_holds, nb_meixner, nb_meixner_legendre,
    ode_residual_jacobi_substituted, poissonised_charlier, printed_equation_report, recurrence_residual_charlier,
    recurrence_residual_meixner,
};
use facmom::schur::{
    verify_charlier_cauchy, verify_meixner_cauchy, verify_nb_cauchy, verify_poissonised_cauchy, LowerParameterVerdict,
    Truncation,
};
use facmom::{suite, HighPrecReal, Precision, Rational};
use num_traits::{One, Signed};
use rayon::prelude::*;
use serde_json::{json, Map, Value};

use crate::args::{require, CliError, CliResult};
use crate::report::{decimal, rational, rationals, Report};
use crate::row;
use crate::{EnsembleKind, EquilibriumArgs, EquilibriumKind, MomentsArgs, RandomisedArgs, SchurArgs, SuiteArgs, VerifyKind};

type Row = (Map<String, Value>, Option<(bool, String)>);

fn in_unit_interval(x: &Rational, flag: &str) -> CliResult<()> {
    if x.is_positive() && *x < Rational::one() {
        Ok(())
    } else {
        Err(CliError::Usage(format!("--{flag} must lie strictly between 0 and 1, got {}", format_rational(x))))
    }
}

/// `gap ≤ tol · max(1, |reference|)`
fn within(gap: &HighPrecReal, reference: &Rational, tol: f64) -> bool {
    let scale = <f64 as RealScalar>::from_rational(&reference.abs(), Precision::default()).max(1.0);
    gap.to_f64() <= tol * scale
}

fn collect_rows(report: &mut Report, rows: Vec<CliResult<Row>>) -> CliResult<()> {
    for r in rows {
        let (row, verdict) = r?;
        report.push(row, verdict);
    }
    Ok(())
}

pub fn moments(a: &MomentsArgs, prec: Precision) -> CliResult<Report> {
    let digits = prec.decimal_digits();
    let params = match a.ensemble {
        EnsembleKind::Charlier => EnsembleParams::charlier(require(&a.theta, "theta", "charlier")?.0)?,
        EnsembleKind::Meixner => {
            let q = require(&a.q, "q", "meixner")?.0;
            in_unit_interval(&q, "q")?;
            EnsembleParams::meixner(a.gamma.0.clone(), q)?
        }
        EnsembleKind::Krawtchouk => {
            let p = require(&a.p, "p", "krawtchouk")?.0;
            in_unit_interval(&p, "p")?;
            EnsembleParams::krawtchouk(require(&a.bigk, "bigk", "krawtchouk")?, p)?
        }
    };
    if a.n.values.contains(&0) {
        return Err(CliError::Usage("--n values must be at least 1".into()));
    }
    let label = match &params {
        EnsembleParams::Charlier { theta } => format!("theta={}", format_rational(theta)),
        EnsembleParams::Meixner { gamma, q } => format!("gamma={} q={}", format_rational(gamma), format_rational(q)),
        EnsembleParams::Krawtchouk { big_k, p } => format!("K={big_k} p={}", format_rational(p)),
    };
    if let EnsembleParams::Krawtchouk { big_k, .. } = &params {
        if let Some(n) = a.n.values.iter().find(|n| **n > *big_k) {
            return Err(CliError::Usage(format!("N = {n} exceeds K = {big_k}")));
        }
    }
    let x_max = a.x_max.unwrap_or_else(|| default_x_max(&params));

    let mut report = Report::new(
        "moments",
        &[
            "ensemble", "parameters", "k", "n", "ledoux", "hyper", "substitution", "oracle", "routes_equal", "oracle_gap",
            "ok",
        ],
    );
    report.config("ensemble", params.name());
    report.config("parameters", label.clone());
    report.config("k", a.k.to_string());
    report.config("n", a.n.to_string());
    report.config("oracle", !a.no_oracle);
    report.config("x_max", x_max);
    report.config("tol", a.tol);
    report.config("precision", digits);

    let grid: Vec<(u64, u64)> = a.k.values.iter().flat_map(|&k| a.n.values.iter().map(move |&n| (k, n))).collect();
    let rows: Vec<CliResult<Row>> = grid
        .par_iter()
        .map(|&(k, n)| {
            let (ledoux, hyper, subst) = match &params {
                EnsembleParams::Charlier { theta } => (charlier_ledoux(theta, k, n)?, Some(charlier_hyper(theta, k, n)?), None),
                EnsembleParams::Meixner { gamma, q } => {
                    let h = if gamma.is_one() { Some(meixner1_hyper(q, k, n)?) } else { None };
                    (meixner_ledoux(gamma, q, k, n)?, h, None)
                }
                EnsembleParams::Krawtchouk { big_k, p } => {
                    (krawtchouk_ledoux(*big_k, p, k, n)?, None, Some(krawtchouk_via_meixner(*big_k, p, k, n)?))
                }
            };
            let equal = hyper.iter().chain(subst.iter()).all(|v| *v == ledoux);
            let mut ok = equal;
            let mut row = row!(
                "ensemble" => params.name(),
                "parameters" => label.clone(),
                "k" => k,
                "n" => n,
                "ledoux" => rational(&ledoux),
                "routes_equal" => equal,
            );
            if let Some(h) = &hyper {
                row.insert("hyper".into(), rational(h));
            }
            if let Some(s) = &subst {
                row.insert("substitution".into(), rational(s));
            }
            if !a.no_oracle {
                let spec = OnePointSpec::new(params.clone(), n)?;
                let sum = factorial_moment_oracle::<HighPrecReal>(&spec, k, x_max, prec)?;
                let gap = (sum.value.clone() - HighPrecReal::from_rational(&ledoux, prec)).abs();
                ok &= within(&gap, &ledoux, a.tol);
                row.insert("oracle".into(), decimal(&sum.value, digits));
                row.insert("oracle_gap".into(), decimal(&gap, 6));
            }
            row.insert("ok".into(), Value::Bool(ok));
            Ok((row, Some((ok, format!("{label} k={k} N={n}")))))
        })
        .collect();
    collect_rows(&mut report, rows)?;
    Ok(report)
}

pub fn randomised(a: &RandomisedArgs) -> CliResult<Report> {
    if a.theta.is_none() && a.q.is_none() {
        return Err(CliError::Usage("randomised needs --theta, --q, or both".into()));
    }
    if let Some(t) = &a.theta {
        if !t.0.is_positive() {
            return Err(CliError::Usage("--theta must be positive".into()));
        }
    }
    if let Some(q) = &a.q {
        in_unit_interval(&q.0, "q")?;
    }
    if a.report_k.values.contains(&0) {
        return Err(CliError::Usage("--report-k values must be at least 1".into()));
    }
    let mut report = Report::new(
        "randomised",
        &["section", "family", "parameters", "k", "numerator", "denominator", "value", "holds", "informational"],
    );
    if let Some(t) = &a.theta {
        report.config("theta", t.to_string());
    }
    if let Some(q) = &a.q {
        report.config("q", q.to_string());
    }
    report.config("k", a.k.to_string());
    report.config("recurrence_max", a.recurrence_max);
    report.config("report_k", if a.no_report { Value::Null } else { a.report_k.to_string().into() });

    if let Some(theta) = a.theta.as_ref().map(|t| &t.0) {
        let p = format!("theta={}", format_rational(theta));
        for &k in &a.k.values {
            let poly = poissonised_charlier(theta, k);
            let at_one = poly.eval(&Rational::one());
            let holds = at_one == catalan_poissonised(theta, k) && charlier_jacobi_link_holds(theta, k);
            report.push(
                row!(
                    "section" => "coefficients", "family" => "poissonised_charlier", "parameters" => p.clone(), "k" => k,
                    "numerator" => rationals(poly.coeffs()), "denominator" => rationals(&[Rational::one()]),
                    "value" => rational(&at_one), "holds" => holds, "informational" => false,
                ),
                Some((holds, format!("poissonised charlier {p} k={k}"))),
            );
        }
        let rows: Vec<CliResult<Row>> = (1..=a.recurrence_max)
            .into_par_iter()
            .map(|k| {
                let holds = recurrence_residual_charlier(theta, k)?.is_zero();
                Ok((
                    row!("section" => "recurrence", "family" => "poissonised_charlier", "parameters" => p.clone(), "k" => k, "holds" => holds, "informational" => false),
                    Some((holds, format!("charlier recurrence {p} k={k}"))),
                ))
            })
            .collect();
        collect_rows(&mut report, rows)?;
    }

    if let Some(q) = a.q.as_ref().map(|q| &q.0) {
        let p = format!("q={}", format_rational(q));
        for &k in &a.k.values {
            let f = nb_meixner(q, k)?;
            let at_one = f.eval(&Rational::one())?;
            let holds = at_one == catalan_nb(q, k) && f == nb_meixner_legendre(q, k)?;
            report.push(
                row!(
                    "section" => "coefficients", "family" => "nb_meixner", "parameters" => p.clone(), "k" => k,
                    "numerator" => rationals(f.numer().coeffs()), "denominator" => rationals(f.denom().coeffs()),
                    "value" => rational(&at_one), "holds" => holds, "informational" => false,
                ),
                Some((holds, format!("nb meixner {p} k={k}"))),
            );
        }
        let rows: Vec<CliResult<Row>> = (1..=a.recurrence_max)
            .into_par_iter()
            .map(|k| {
                let holds = recurrence_residual_meixner(q, k)?.is_zero();
                Ok((
                    row!("section" => "recurrence", "family" => "nb_meixner", "parameters" => p.clone(), "k" => k, "holds" => holds, "informational" => false),
                    Some((holds, format!("meixner recurrence {p} k={k}"))),
                ))
            })
            .collect();
        collect_rows(&mut report, rows)?;
    }

    let rows: Vec<CliResult<Row>> = (1..=a.recurrence_max)
        .into_par_iter()
        .map(|k| {
            let holds = ode_residual_jacobi_substituted(k)?.is_zero();
            Ok((
                row!("section" => "jacobi_equation", "family" => "jacobi", "parameters" => "alpha=1 beta=0", "k" => k, "holds" => holds, "informational" => false),
                Some((holds, format!("transformed jacobi equation k={k}"))),
            ))
        })
        .collect();
    collect_rows(&mut report, rows)?;

    if !a.no_report {
        for adj in printed_equation_report(&a.report_k.values)? {
            report.push(
                row!(
                    "section" => "printed_report", "family" => adj.equation, "parameters" => adj.parameters.clone(),
                    "k" => adj.k, "value" => adj.residual.to_string(), "holds" => adj.holds, "informational" => true,
                ),
                None,
            );
        }
    }
    Ok(report)
}

pub fn equilibrium(a: &EquilibriumArgs, prec: Precision) -> CliResult<Report> {
    let digits = prec.decimal_digits();
    let spec = match a.kind {
        EquilibriumKind::Charlier => EquilibriumSpec::charlier(require(&a.h, "h", "charlier")?.0)?,
        EquilibriumKind::Meixner1 => EquilibriumSpec::meixner1(require(&a.q, "q", "meixner1")?.0)?,
        EquilibriumKind::Meixner => {
            EquilibriumSpec::meixner_general(require(&a.q, "q", "meixner")?.0, require(&a.c, "c", "meixner")?.0)?
        }
        EquilibriumKind::Krawtchouk => EquilibriumSpec::krawtchouk(
            require(&a.kappa, "kappa", "krawtchouk")?.0,
            require(&a.p, "p", "krawtchouk")?.0,
        )?,
    };
    if !a.theta.is_empty() && !matches!(spec, EquilibriumSpec::Charlier { .. }) {
        return Err(CliError::Usage("--theta applies to the charlier kind only".into()));
    }
    if a.limit && !matches!(spec, EquilibriumSpec::Meixner1 { .. }) {
        return Err(CliError::Usage("--limit applies to the meixner1 kind only".into()));
    }
    let label = match &spec {
        EquilibriumSpec::Charlier { h } => format!("h={}", format_rational(h)),
        EquilibriumSpec::Meixner1 { q } => format!("q={}", format_rational(q)),
        EquilibriumSpec::MeixnerGeneral { q, c } => format!("q={} c={}", format_rational(q), format_rational(c)),
        EquilibriumSpec::Krawtchouk { kappa, p } => format!("kappa={} p={}", format_rational(kappa), format_rational(p)),
    };

    let mut report = Report::new(
        "equilibrium",
        &["section", "kind", "parameters", "k", "closed_form", "oracle", "theta", "t", "value", "gap", "holds"],
    );
    report.config("kind", spec.name());
    report.config("parameters", label.clone());
    report.config("k", a.k.to_string());
    report.config("theta", a.theta.iter().map(|t| t.to_string()).collect::<Vec<_>>());
    report.config("limit", a.limit);
    report.config("precision", digits);

    let rows: Vec<CliResult<Row>> = a
        .k
        .values
        .par_iter()
        .map(|&k| {
            let closed = spec.moment(k)?;
            let oracle = spec.moment_oracle(k);
            let holds = closed == oracle;
            Ok((
                row!(
                    "section" => "moment", "kind" => spec.name(), "parameters" => label.clone(), "k" => k,
                    "closed_form" => rational(&closed), "oracle" => rational(&oracle), "holds" => holds,
                ),
                Some((holds, format!("{} {label} k={k}", spec.name()))),
            ))
        })
        .collect();
    collect_rows(&mut report, rows)?;

    if let EquilibriumSpec::Charlier { h } = &spec {
        for theta in &a.theta {
            for &k in &a.k.values {
                let holds = charlier_correspondence(&theta.0, h, k)?;
                report.push(
                    row!(
                        "section" => "correspondence", "kind" => "charlier", "parameters" => label.clone(), "k" => k,
                        "theta" => theta.to_string(), "holds" => holds,
                    ),
                    Some((holds, format!("correspondence theta={theta} {label} k={k}"))),
                );
            }
        }
    }

    if let (true, EquilibriumSpec::Meixner1 { q }) = (a.limit, &spec) {
        let ts: Vec<Rational> = if a.limit_t.is_empty() {
            suite::limit_sequence().iter().map(|t| t / q / int(2)).collect()
        } else {
            a.limit_t.iter().map(|t| t.0.clone()).collect()
        };
        for &k in &a.k.values {
            let r = meixner_limit_correspondence::<HighPrecReal>(q, k, &ts, a.m_max, prec)?;
            for row in &r.rows {
                report.push(
                    row!(
                        "section" => "limit_walk", "kind" => "meixner1", "parameters" => label.clone(), "k" => k,
                        "t" => rational(&row.t), "value" => decimal(&row.value, digits),
                        "oracle" => decimal(&row.intermediate, digits), "gap" => decimal(&row.gap, 6),
                    ),
                    None,
                );
            }
            let holds = r.limit_matches && r.gaps_decrease;
            report.push(
                row!(
                    "section" => "limit", "kind" => "meixner1", "parameters" => label.clone(), "k" => k,
                    "closed_form" => rational(&r.limit), "holds" => holds,
                ),
                Some((holds, format!("limit walk {label} k={k}"))),
            );
        }
    }
    Ok(report)
}

pub fn schur(a: &SchurArgs, prec: Precision) -> CliResult<Report> {
    let digits = prec.decimal_digits();
    let rule = Truncation::new(a.max_size).with_rel_tol(a.rel_tol);
    let mut report = Report::new(
        "schur",
        &[
            "verify", "parameters", "n", "k", "lhs", "rhs", "gap", "tail", "terms", "converged", "rhs_lower_one",
            "rhs_lower_two", "gap_lower_one", "gap_lower_two", "verdict", "ok",
        ],
    );
    let fmt = |x: &HighPrecReal| decimal(x, digits);
    let small = |x: &HighPrecReal| decimal(x, 6);

    let mut config = Map::new();
    config.insert("max_size".into(), json!(a.max_size));
    config.insert("rel_tol".into(), json!(a.rel_tol));
    config.insert("tol".into(), json!(a.tol));
    config.insert("precision".into(), json!(digits));

    let rows: Vec<CliResult<Row>> = match a.verify {
        VerifyKind::Charlier | VerifyKind::Meixner => {
            if a.n.values.contains(&0) {
                return Err(CliError::Usage("--n values must be at least 1".into()));
            }
            let (name, param, label) = match a.verify {
                VerifyKind::Charlier => {
                    let th = require(&a.theta, "theta", "charlier")?.0;
                    if !th.is_positive() {
                        return Err(CliError::Usage("--theta must be positive".into()));
                    }
                    ("charlier", th.clone(), format!("theta={}", format_rational(&th)))
                }
                _ => {
                    let q = require(&a.q, "q", "meixner")?.0;
                    in_unit_interval(&q, "q")?;
                    ("meixner", q.clone(), format!("q={}", format_rational(&q)))
                }
            };
            config.insert("parameters".into(), json!(label));
            config.insert("n".into(), json!(a.n.to_string()));
            config.insert("k".into(), json!(a.k.to_string()));
            let grid: Vec<(u64, u64)> =
                a.n.values.iter().flat_map(|&n| a.k.values.iter().map(move |&k| (n, k))).collect();
            grid.par_iter()
                .map(|&(n, k)| {
                    let tag = format!("{name} {label} N={n} k={k}");
                    if name == "charlier" {
                        let r = verify_charlier_cauchy::<HighPrecReal>(&param, n, k, &rule, prec)?;
                        let ok = r.converged && r.within(a.tol);
                        Ok((
                            row!(
                                "verify" => name, "parameters" => label.clone(), "n" => n, "k" => k,
                                "lhs" => fmt(&r.lhs), "rhs" => rational(&r.rhs), "gap" => small(&r.gap),
                                "tail" => small(&r.tail), "terms" => r.terms, "converged" => r.converged, "ok" => ok,
                            ),
                            Some((ok, tag)),
                        ))
                    } else {
                        let r = verify_meixner_cauchy::<HighPrecReal>(&param, n, k, &rule, a.tol, prec)?;
                        let gap = (r.lhs.clone() - HighPrecReal::from_rational(&r.rhs_moment, prec)).abs();
                        let ok = r.converged && r.verdict != LowerParameterVerdict::Neither && within(&gap, &r.rhs_moment, a.tol);
                        Ok((
                            row!(
                                "verify" => name, "parameters" => label.clone(), "n" => n, "k" => k,
                                "lhs" => fmt(&r.lhs), "rhs" => rational(&r.rhs_moment), "gap" => small(&gap),
                                "tail" => small(&r.tail), "terms" => r.terms, "converged" => r.converged,
                                "rhs_lower_one" => rational(&r.rhs_lower_one), "rhs_lower_two" => rational(&r.rhs_lower_two),
                                "gap_lower_one" => small(&r.gap_lower_one), "gap_lower_two" => small(&r.gap_lower_two),
                                "verdict" => format!("{:?}", r.verdict).to_lowercase(), "ok" => ok,
                            ),
                            Some((ok, tag)),
                        ))
                    }
                })
                .collect()
        }
        VerifyKind::Poissonised | VerifyKind::Nb => {
            let t = require(&a.t, "t", "this check")?.0;
            let (name, param, label) = match a.verify {
                VerifyKind::Poissonised => {
                    let th = require(&a.theta, "theta", "poissonised")?.0;
                    ("poissonised", th.clone(), format!("theta={} t={}", format_rational(&th), format_rational(&t)))
                }
                _ => {
                    let q = require(&a.q, "q", "nb")?.0;
                    in_unit_interval(&q, "q")?;
                    ("nb", q.clone(), format!("q={} t={}", format_rational(&q), format_rational(&t)))
                }
            };
            config.insert("parameters".into(), json!(label));
            config.insert("k".into(), json!(a.k.to_string()));
            config.insert("max_n".into(), json!(a.max_n));
            a.k.values
                .par_iter()
                .map(|&k| {
                    let r = if name == "poissonised" {
                        verify_poissonised_cauchy::<HighPrecReal>(&param, &t, k, a.max_n, &rule, prec)?
                    } else {
                        verify_nb_cauchy::<HighPrecReal>(&param, &t, k, a.max_n, &rule, prec)?
                    };
                    let ok = r.converged && r.within(a.tol);
                    Ok((
                        row!(
                            "verify" => name, "parameters" => label.clone(), "k" => k,
                            "lhs" => fmt(&r.lhs), "rhs" => rational(&r.rhs), "gap" => small(&r.gap),
                            "tail" => small(&r.tail), "terms" => r.terms, "converged" => r.converged, "ok" => ok,
                        ),
                        Some((ok, format!("{name} {label} k={k}"))),
                    ))
                })
                .collect()
        }
    };
    report.config = config;
    report.config.insert("verify".into(), json!(format!("{:?}", a.verify).to_lowercase()));
    collect_rows(&mut report, rows)?;
    Ok(report)
}

pub fn suite(a: &SuiteArgs) -> CliResult<Report> {
    let mut report = Report::new(
        "suite",
        &[
            "section", "criterion", "title", "checks", "failed", "passed", "seconds", "first_failure", "equation",
            "parameters", "k", "residual", "informational",
        ],
    );
    report.config("criterion", a.criterion.map_or(Value::from("all"), Value::from));
    let (results, adjudication) = match a.criterion {
        Some(id) => {
            let r = suite::run_criterion(id).ok_or_else(|| CliError::Usage(format!("no criterion {id}; use 1 to 9")))?;
            (vec![r], Vec::new())
        }
        None => suite::run_all(),
    };
    for r in &results {
        eprintln!("{r}");
        report.push(
            row!(
                "section" => "criterion", "criterion" => r.id, "title" => r.title, "checks" => r.checks,
                "failed" => r.failures.len(), "passed" => r.passed(), "seconds" => format!("{:.2}", r.seconds),
                "first_failure" => r.failures.first().cloned().unwrap_or_default(), "informational" => false,
            ),
            Some((r.passed(), format!("criterion {}: {}", r.id, r.title))),
        );
    }
    for adj in &adjudication {
        report.push(
            row!(
                "section" => "printed_report", "equation" => adj.equation, "parameters" => adj.parameters.clone(),
                "k" => adj.k, "residual" => adj.residual.to_string(), "passed" => adj.holds, "informational" => true,
            ),
            None,
        );
    }
    let notes: Vec<String> = results.iter().flat_map(|r| r.notes.iter().map(move |n| format!("criterion {}: {n}", r.id))).collect();
    report.extra.insert("notes".into(), json!(notes));
    report.extra.insert("criteria_passed".into(), json!(results.iter().filter(|r| r.passed()).count()));
    report.extra.insert("criteria_run".into(), json!(results.len()));
    Ok(report)
}
