use facmom::ensembles::{poly_squared, EnsembleParams};
use facmom::equilibrium::{riordan_check, EquilibriumSpec};
use facmom::hypergeo::{
    int, pfq_terminating, pfq_terminating_direct, rat, term_ratio, HypergeoSpec, Poly, RatFunc, Rational,
};
use facmom::moments::{
    charlier_hyper, charlier_ledoux, krawtchouk_ledoux, krawtchouk_via_meixner, meixner1_hyper, meixner_ledoux,
    pochsum_check,
};
use facmom::randomised::chu_vandermonde_check;
use facmom::schur::{config_to_partition, Partition};
use num_bigint::BigInt;
use num_traits::{One, Zero};
use proptest::prelude::*;

fn rational_coeff() -> impl Strategy<Value = Rational> {
    (-1_000_000i64..=1_000_000, 1i64..=1_000_000).prop_map(|(n, d)| rat(n, d))
}

fn small_rational() -> impl Strategy<Value = Rational> {
    (-30i64..=30, 1i64..=12).prop_map(|(n, d)| rat(n, d))
}

fn positive_rational() -> impl Strategy<Value = Rational> {
    (1i64..=40, 1i64..=12).prop_map(|(n, d)| rat(n, d))
}

fn unit_rational() -> impl Strategy<Value = Rational> {
    (1i64..=15, 16i64..=17).prop_map(|(n, d)| rat(n, d))
}

fn poly(max_degree: usize) -> impl Strategy<Value = Poly<Rational>> {
    prop::collection::vec(rational_coeff(), 0..=max_degree + 1).prop_map(Poly::new)
}

fn small_poly(max_degree: usize) -> impl Strategy<Value = Poly<Rational>> {
    prop::collection::vec(small_rational(), 0..=max_degree + 1).prop_map(Poly::new)
}

fn nonzero_small_poly(max_degree: usize) -> impl Strategy<Value = Poly<Rational>> {
    small_poly(max_degree).prop_filter("nonzero", |p| !p.is_zero())
}

fn ratfunc() -> impl Strategy<Value = RatFunc<Rational>> {
    (small_poly(4), nonzero_small_poly(3)).prop_map(|(n, d)| RatFunc::new(n, d).unwrap())
}

/// Lower parameters that are never nonpositive integers.
fn lower_param() -> impl Strategy<Value = Rational> {
    small_rational().prop_filter("no pole", |b| !(b.is_integer() && *b <= Rational::zero()))
}

fn terminating_spec() -> impl Strategy<Value = HypergeoSpec<Rational>> {
    (
        0i64..=9,
        prop::collection::vec(small_rational(), 0..3),
        prop::collection::vec(lower_param(), 0..3),
        small_rational(),
    )
        .prop_map(|(m, mut upper, lower, z)| {
            upper.insert(0, int(-m));
            HypergeoSpec::new(upper, lower, z)
        })
}

/// Σ_i Π(a)_i / Π(b)_i z^i / i!, each term built from scratch.
fn naive_pfq(spec: &HypergeoSpec<Rational>, terms: u64) -> Rational {
    let mut total = Rational::zero();
    for i in 0..terms {
        let mut term = Rational::one();
        for j in 0..i {
            let jr = int(j as i64);
            for a in &spec.upper {
                term *= a + &jr;
            }
            for b in &spec.lower {
                term /= b + &jr;
            }
            term *= &spec.argument;
            term /= int(j as i64 + 1);
        }
        total += term;
    }
    total
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn terminating_routes_agree(spec in terminating_spec()) {
        let m = spec.termination_order().unwrap();
        let rec = pfq_terminating(&spec).unwrap();
        prop_assert_eq!(&rec, &pfq_terminating_direct(&spec).unwrap());
        prop_assert_eq!(&rec, &naive_pfq(&spec, m + 1));
    }

    #[test]
    fn term_ratio_matches_display(spec in terminating_spec(), i in 0u64..20) {
        let ir = int(i as i64);
        let mut expect = spec.argument.clone() / (&ir + int(1));
        for a in &spec.upper {
            expect *= a + &ir;
        }
        for b in &spec.lower {
            expect /= b + &ir;
        }
        prop_assert_eq!(term_ratio(&spec, i), Some(expect));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(120))]

    #[test]
    fn poly_ring_laws(f in poly(12), g in poly(12), h in poly(12)) {
        prop_assert_eq!(&(&f + &g) + &h, &f + &(&g + &h));
        prop_assert_eq!(&(&f * &g) * &h, &f * &(&g * &h));
        prop_assert_eq!(&f * &(&g + &h), &(&f * &g) + &(&f * &h));
        prop_assert_eq!(&f * &g, &g * &f);
        prop_assert!((&f - &f).is_zero());
    }

    #[test]
    fn poly_product_rule(f in poly(12), g in poly(12)) {
        let lhs = (&f * &g).derivative();
        let rhs = &(&f.derivative() * &g) + &(&f * &g.derivative());
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn poly_eval_is_homomorphism(f in poly(8), g in poly(8), t in small_rational()) {
        prop_assert_eq!((&f * &g).eval(&t), f.eval(&t) * g.eval(&t));
        prop_assert_eq!((&f + &g).eval(&t), f.eval(&t) + g.eval(&t));
    }

    #[test]
    fn ratfunc_ring_laws(f in ratfunc(), g in ratfunc(), h in ratfunc()) {
        prop_assert_eq!(&(&f + &g) + &h, &f + &(&g + &h));
        prop_assert_eq!(&(&f * &g) * &h, &f * &(&g * &h));
        prop_assert_eq!(&f * &(&g + &h), &(&f * &g) + &(&f * &h));
        prop_assert!((&f - &f).is_zero());
    }

    #[test]
    fn ratfunc_product_rule(f in ratfunc(), g in ratfunc()) {
        let lhs = (&f * &g).derivative();
        let rhs = &(&f.derivative() * &g) + &(&f * &g.derivative());
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn ratfunc_zero_iff_vanishes_on_enough_points(num in small_poly(4), den in nonzero_small_poly(3), cancel in any::<bool>()) {
        // Half the cases subtract a rewritten copy, which must be exactly zero.
        let f = RatFunc::new(num.clone(), den.clone()).unwrap();
        let g = if cancel {
            let twisted = RatFunc::new(&num * &Poly::linear(int(2), int(1)), &den * &Poly::linear(int(2), int(1))).unwrap();
            &f - &twisted
        } else {
            f
        };
        let budget = g.numer().degree().unwrap_or(0) + g.denom().degree().unwrap_or(0) + 1;
        let mut points = Vec::new();
        let mut x = 0i64;
        while points.len() < budget {
            let p = rat(x, 7) + rat(1, 3);
            if !g.denom().eval(&p).is_zero() {
                points.push(p);
            }
            x += 1;
        }
        let vanishes = points.iter().all(|p| g.eval(p).unwrap().is_zero());
        prop_assert_eq!(g.is_zero(), vanishes);
        if cancel {
            prop_assert!(g.is_zero());
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(60))]

    #[test]
    fn charlier_routes_agree(theta in positive_rational(), k in 0u64..9, n in 1u64..6) {
        prop_assert_eq!(charlier_hyper(&theta, k, n).unwrap(), charlier_ledoux(&theta, k, n).unwrap());
    }

    #[test]
    fn meixner_routes_agree(q in unit_rational(), k in 0u64..9, n in 1u64..6) {
        prop_assert_eq!(meixner1_hyper(&q, k, n).unwrap(), meixner_ledoux(&int(1), &q, k, n).unwrap());
    }

    #[test]
    fn krawtchouk_substitution(big_k in 1u64..10, p in unit_rational(), k in 0u64..7, n_off in 0u64..10) {
        let n = 1 + n_off % big_k;
        prop_assert_eq!(krawtchouk_ledoux(big_k, &p, k, n).unwrap(), krawtchouk_via_meixner(big_k, &p, k, n).unwrap());
    }

    #[test]
    fn krawtchouk_squares_are_formal_meixner(big_k in 1u64..8, p in unit_rational(), n_off in 0u64..8, x_off in 0u64..8) {
        let (n, x) = (n_off % (big_k + 1), x_off % (big_k + 1));
        let kraw = EnsembleParams::krawtchouk(big_k, p.clone()).unwrap();
        let formal = EnsembleParams::meixner_formal(-int(big_k as i64), -(&p / (int(1) - &p)));
        prop_assert_eq!(poly_squared(&kraw, n, x).unwrap(), poly_squared(&formal, n, x).unwrap());
    }

    #[test]
    fn moments_start_at_one(theta in positive_rational(), q in unit_rational(), n in 1u64..8) {
        prop_assert!(charlier_ledoux(&theta, 0, n).unwrap().is_one());
        prop_assert!(meixner_ledoux(&int(2), &q, 0, n).unwrap().is_one());
    }

    #[test]
    fn equilibrium_closed_forms(h in positive_rational(), q in unit_rational(), c in 0i64..4, k in 0u64..8) {
        for spec in [
            EquilibriumSpec::charlier(h.clone()).unwrap(),
            EquilibriumSpec::meixner1(q.clone()).unwrap(),
            EquilibriumSpec::meixner_general(q.clone(), int(c)).unwrap(),
            EquilibriumSpec::krawtchouk(&h + int(1), q.clone()).unwrap(),
        ] {
            prop_assert_eq!(spec.moment(k).unwrap(), spec.moment_oracle(k), "{:?} k={}", spec, k);
        }
    }

    #[test]
    fn partition_config_round_trip(mut parts in prop::collection::vec(0u64..6, 0..5), extra in 0u64..3) {
        parts.sort_unstable_by(|a, b| b.cmp(a));
        let lambda = Partition::new(parts).unwrap();
        let n = lambda.len() as u64 + extra;
        if n > 0 {
            let x = lambda.to_config(n).unwrap();
            prop_assert!(x.windows(2).all(|w| w[0] > w[1]));
            prop_assert_eq!(config_to_partition(&x).unwrap(), lambda);
        }
    }
}

#[test]
fn pochhammer_sum_identity() {
    for n in 1..=12 {
        for i in 0..n {
            for k in 0..=12 {
                assert!(pochsum_check(i, k, n), "i={i} k={k} N={n}");
            }
        }
    }
}

#[test]
fn binomial_convolutions() {
    for k in 0..=30 {
        assert!(chu_vandermonde_check(k), "k={k}");
    }
    for k in 0..=15 {
        for m in 0..=k {
            assert!(riordan_check(k, m), "k={k} m={m}");
        }
    }
}

#[test]
fn pfq_examples_against_naive_sum() {
    let spec = HypergeoSpec::new(vec![int(-1), int(-1), int(-2)], vec![int(2)], rat(-1, 2));
    assert_eq!(naive_pfq(&spec, 3), rat(3, 2));
    assert_eq!(pfq_terminating(&spec).unwrap(), rat(3, 2));
    let catalan = HypergeoSpec::new(vec![int(-2), int(-2)], vec![int(1)], int(1));
    assert_eq!(pfq_terminating(&catalan).unwrap(), int(6));
    assert_eq!(BigInt::from(6), facmom::hypergeo::binomial_int(4, 2));
}
