use hardy_core::*;
use proptest::prelude::*;

fn entry() -> impl Strategy<Value = f64> {
    (-3.0f64..3.0).prop_map(|e| 10f64.powf(e))
}

fn vector(max: usize) -> impl Strategy<Value = SampleVector> {
    prop::collection::vec(entry(), 1..=max).prop_map(|v| SampleVector::new(v).unwrap())
}

fn num() -> impl Strategy<Value = f64> {
    prop_oneof![
        (-40i32..40).prop_map(|k| k as f64 / 8.0),
        -5.0f64..5.0,
    ]
}

fn generator() -> impl Strategy<Value = Generator> {
    prop_oneof![
        Just(Generator::Identity),
        Just(Generator::Log),
        Just(Generator::Exp),
        num().prop_map(Generator::Pow),
        num().prop_map(Generator::NegPow),
    ]
}

/// Any syntactically valid expression (not necessarily passing `validate`).
fn any_expr() -> impl Strategy<Value = MeanExpr> {
    let leaf = prop_oneof![
        num().prop_map(MeanExpr::Power),
        (num(), num()).prop_map(|(p, q)| MeanExpr::Gini(p, q)),
        generator().prop_map(MeanExpr::QuasiArithmetic),
        (generator(), generator()).prop_map(|(f, g)| MeanExpr::Bajraktarevic(f, g)),
        Just(MeanExpr::Deviation(DeviationSpec::Arithmetic)),
        (generator(), generator()).prop_map(|(f, g)| MeanExpr::Deviation(DeviationSpec::FromPair { f, g })),
        Just(MeanExpr::Arith),
        Just(MeanExpr::Geom),
        Just(MeanExpr::Harm),
        Just(MeanExpr::Min),
        Just(MeanExpr::Max),
    ];
    leaf.prop_recursive(3, 12, 4, |inner| prop::collection::vec(inner, 2..4).prop_map(MeanExpr::Gauss))
}

/// Homogeneous symmetric means that evaluate everywhere on the test range.
fn homogeneous_expr() -> impl Strategy<Value = MeanExpr> {
    let leaf = prop_oneof![
        (-3.0f64..3.0).prop_map(MeanExpr::Power),
        ((-3.0f64..3.0), (-3.0f64..3.0)).prop_map(|(p, q)| MeanExpr::Gini(p, q)),
        Just(MeanExpr::Arith),
        Just(MeanExpr::Geom),
        Just(MeanExpr::Harm),
    ];
    // far-apart children (one near min, one near max) make the product
    // converge arbitrarily slowly, so keep their parameters moderate
    let child = prop_oneof![
        (-1.0f64..1.0).prop_map(MeanExpr::Power),
        ((-1.0f64..1.0), (-1.0f64..1.0)).prop_map(|(p, q)| MeanExpr::Gini(p, q)),
        Just(MeanExpr::Geom),
    ];
    prop_oneof![
        3 => leaf,
        1 => prop::collection::vec(child, 2..4).prop_map(MeanExpr::Gauss),
    ]
}

fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / a.abs().max(b.abs())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn parse_print_round_trip(e in any_expr()) {
        let printed = e.to_string();
        prop_assert_eq!(parse_mean_expr(&printed).unwrap(), e);
    }

    #[test]
    fn parse_ignores_whitespace(e in any_expr()) {
        let spaced: String = e.to_string().chars().flat_map(|c| match c {
            '(' | ')' | ',' => vec![' ', c, ' '],
            _ => vec![c],
        }).collect();
        prop_assert_eq!(parse_mean_expr(&spaced).unwrap(), e);
    }

    #[test]
    fn mean_value_and_symmetry(e in homogeneous_expr(), x in vector(8), seed in any::<u64>()) {
        let m = e.evaluate(&x).unwrap();
        prop_assert!(m >= x.min() * (1.0 - 1e-12) && m <= x.max() * (1.0 + 1e-12));
        let mut v = x.as_slice().to_vec();
        let k = (seed % v.len() as u64) as usize;
        v.rotate_left(k);
        v.reverse();
        let m2 = e.evaluate(&SampleVector::new(v).unwrap()).unwrap();
        prop_assert!(rel(m, m2) < 1e-10, "{} vs {}", m, m2);
    }

    #[test]
    fn repetition_and_homogeneity(e in homogeneous_expr(), x in vector(6), k in 2usize..4, t in entry()) {
        let m = e.evaluate(&x).unwrap();
        prop_assert!(rel(m, e.evaluate(&x.repeated(k)).unwrap()) < 1e-10);
        prop_assert!(rel(t * m, e.evaluate(&x.scaled(t).unwrap()).unwrap()) < 1e-10);
    }

    #[test]
    fn constant_vectors_are_fixed(e in homogeneous_expr(), c in entry(), n in 1usize..7) {
        let m = e.evaluate(&SampleVector::constant(c, n).unwrap()).unwrap();
        prop_assert!(rel(m, c) < 1e-12);
    }

    #[test]
    fn power_mean_is_monotone_in_p(x in vector(8), p in -4.0f64..4.0, dp in 0.0f64..3.0) {
        prop_assert!(power_mean(p, &x) <= power_mean(p + dp, &x) * (1.0 + 1e-12));
    }

    #[test]
    fn gini_identities(x in vector(8), p in -3.0f64..3.0, q in -3.0f64..3.0) {
        prop_assert!(rel(gini_mean(p, q, &x), gini_mean(q, p, &x)) < 1e-12);
        prop_assert!(rel(gini_mean(p, 0.0, &x), power_mean(p, &x)) < 1e-10);
        // continuity across the diagonal
        let near = gini_mean(p, p + 1e-7, &x);
        prop_assert!(rel(near, gini_mean(p, p, &x)) < 1e-5);
    }

    #[test]
    fn deviation_pair_matches_bajraktarevic(x in vector(6), a in 0.25f64..3.0, b in -3.0f64..0.0) {
        // pow:a / negpow:b = x^(a-b)·sign, increasing for a > b
        let (f, g) = (Generator::Pow(a), Generator::Pow(b));
        let d = deviation_mean(&DeviationSpec::FromPair { f, g }, &x).unwrap();
        let bj = bajraktarevic_mean(&f, &g, &x).unwrap();
        prop_assert!(rel(d, bj) < 1e-10, "{} vs {}", d, bj);
    }

    #[test]
    fn gauss_fixed_point_and_envelope(x in vector(4), y in vector(4)) {
        let means = vec![MeanExpr::Power(-1.0), MeanExpr::Power(0.0), MeanExpr::Gini(0.5, -1.0)];
        let v = SampleVector::new(x.iter().copied().take(3).chain(y.iter().copied()).take(3).collect()).unwrap();
        if v.len() == 3 {
            let run = gauss_run(&means, &v, &GaussConfig::default()).unwrap();
            let step = gauss::gauss_step(&means, &v).unwrap();
            let after = gauss_product(&means, &step, &GaussConfig::default()).unwrap();
            prop_assert!(rel(run.value, after) < 1e-12);
            prop_assert!(run.value >= v.min() && run.value <= v.max());
            for w in run.envelope.windows(2) {
                prop_assert!(w[1].0 >= w[0].0 * (1.0 - 1e-15) && w[1].1 <= w[0].1 * (1.0 + 1e-15));
            }
        }
    }

    #[test]
    fn gauss_of_concave_means_is_concave(x in vector(3), y in vector(3)) {
        // Jensen concavity of gauss(power(-1), power(0)) as a function of its two arguments
        let means = vec![MeanExpr::Power(-1.0), MeanExpr::Power(0.0)];
        let cfg = GaussConfig::default();
        let (a, b) = ((x[0], x[x.len() - 1]), (y[0], y[y.len() - 1]));
        let g = |u: f64, v: f64| gauss_product(&means, &SampleVector::new(vec![u, v]).unwrap(), &cfg).unwrap();
        let mid = g(0.5 * (a.0 + b.0), 0.5 * (a.1 + b.1));
        prop_assert!(mid >= 0.5 * (g(a.0, a.1) + g(b.0, b.1)) * (1.0 - 1e-12));
    }

    #[test]
    fn kedlaya_margin_nonnegative(x in vector(6)) {
        for e in [MeanExpr::Power(0.0), MeanExpr::Power(-1.0), MeanExpr::Gini(0.5, -1.0)] {
            let m = kedlaya::check_kedlaya_inequality(&e, &x).unwrap();
            prop_assert!(m >= -1e-12 * x.max(), "{}: {}", e, m);
        }
    }

    #[test]
    fn prefix_matches_full_evaluation(e in homogeneous_expr(), x in vector(10)) {
        let pre = prefix_means(&e, x.as_slice()).unwrap();
        for k in 1..=x.len() {
            let full = e.evaluate(&SampleVector::new(x[..k].to_vec()).unwrap()).unwrap();
            prop_assert!(rel(pre[k - 1], full) < 1e-10);
        }
    }

    #[test]
    fn partial_hardy_ratio_below_constant(x in vector(30), p in -2.0f64..0.9) {
        let c = closed_form_hardy(&MeanExpr::Power(p)).unwrap().value().unwrap();
        let r = hardy_partial_check(&MeanExpr::Power(p), &x, c).unwrap();
        prop_assert!(r.strictly_below, "{} >= {}", r.ratio, c);
    }
}

#[test]
fn hardy_constants_are_ordered_like_the_means() {
    // P_-1 ≤ P_0 ≤ P_1/2 pointwise, so their constants are ordered too
    let cfg = HardyConfig {
        n_max: 2_000,
        ..HardyConfig::default()
    };
    let vals: Vec<f64> = [-1.0, 0.0, 0.5]
        .iter()
        .map(|&p| hardy_constant(&MeanExpr::Power(p), &cfg).unwrap().estimate.finite().unwrap())
        .collect();
    assert!(vals[0] < vals[1] && vals[1] < vals[2], "{vals:?}");
    let g = hardy_constant(&MeanExpr::Gauss(vec![MeanExpr::Power(-1.0), MeanExpr::Power(0.0)]), &cfg)
        .unwrap()
        .estimate
        .finite()
        .unwrap();
    assert!(vals[0] < g && g < vals[1], "{g}");
}

#[test]
fn pn_is_nondecreasing_for_hardy_means() {
    for e in [MeanExpr::Power(-2.0), MeanExpr::Power(0.0), MeanExpr::Gini(0.5, -1.0)] {
        let pn = pn_sequence(&e, 3_000).unwrap();
        assert!(pn.max_decrease <= 1e-11, "{e}: {}", pn.max_decrease);
    }
}

#[test]
fn kedlaya_tables_and_matrices() {
    for n in 1..=kedlaya::MAX_COEFF_N {
        assert!(KedlayaTable::new(n).unwrap().audit().all_hold(), "n = {n}");
    }
    for n in 2..=5 {
        assert!(kedlaya_matrix(n).unwrap().audit().all_hold(), "n = {n}");
    }
    assert!(KedlayaTable::new(13).is_err());
    assert!(kedlaya_matrix(7).is_err());
}

#[test]
fn sequence_bounds_increase() {
    let cfg = SeqBoundConfig {
        restarts: 4,
        budget: 2_000,
        ..SeqBoundConfig::default()
    };
    let b = hardy_sequence_bounds(&MeanExpr::Power(0.0), 4, &cfg).unwrap();
    for w in b.windows(2) {
        assert!(w[1].estimate >= w[0].estimate - 1e-11);
    }
    for (i, bound) in b.iter().enumerate() {
        let n = (i + 1) as f64;
        assert!(bound.estimate <= (1.0 + 1.0 / n).powf(n) + 1e-12);
    }
}
