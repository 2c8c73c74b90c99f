//! Property tests over the kernel invariants.

use proptest::prelude::*;

use hyers_lab_core::{
    approximate, cauchy_defect, defect_rounding_allowance, fold_control, gajda_exact,
    gajda_series, kappa, scalars, stabilizer_closed_form, stabilizer_series, zeta, ControlSpec,
    DirectMethodConfig, Point, ScalingMode, SymmetricKind, SymmetricSpec,
};

fn nonzero_scalar() -> impl Strategy<Value = f64> {
    (0.01f64..4.0, any::<bool>()).prop_map(|(m, neg)| if neg { -m } else { m })
}

fn exponent() -> impl Strategy<Value = f64> {
    prop_oneof![(-1.0f64..0.95), (1.05f64..3.0)]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn permuting_arguments_is_bit_exact(
        xs in prop::collection::vec(-8.0f64..8.0, 2..5),
        rot in 0usize..4,
        kind in 0usize..4,
    ) {
        let n = xs.len();
        let kind = match kind {
            0 => SymmetricKind::ExactMultiadditive { c: 1.7 },
            1 => SymmetricKind::PowerPerturbed { c: 1.0, beta: 0.3, r: 0.5 },
            2 => SymmetricKind::AbsProduct { eps: 2.0 },
            _ => SymmetricKind::GajdaMulti { eps: 1.0 },
        };
        let spec = SymmetricSpec::new(n, 1, kind).unwrap();
        let y = scalars(&xs);
        let mut permuted = y.clone();
        permuted.rotate_left(rot % n);
        let a = spec.evaluate(&y).unwrap();
        let b = spec.evaluate(&permuted).unwrap();
        prop_assert_eq!(a.to_bits(), b.to_bits());
    }

    #[test]
    fn multiadditive_defect_vanishes(
        xs in prop::collection::vec(-8.0f64..8.0, 3..6),
        c in -5.0f64..5.0,
    ) {
        let n = xs.len() - 1;
        let spec = SymmetricSpec::new(n, 1, SymmetricKind::ExactMultiadditive { c }).unwrap();
        let eval = spec.defect_eval(&scalars(&xs)).unwrap();
        prop_assert!(eval.value.abs() <= defect_rounding_allowance(n, eval.magnitude));
    }

    #[test]
    fn control_scales_dyadically(
        zs in prop::collection::vec(nonzero_scalar(), 2..6),
        r in -1.0f64..3.0,
    ) {
        // phi(2z) = 2^{nr} phi(z) on nonzero tuples: n-1 prefix factors plus
        // the common 2^r of the bracketed pair
        let n = zs.len() - 1;
        let phi = ControlSpec::power(n, 1.0, r).unwrap();
        let z = scalars(&zs);
        let base = phi.evaluate(&z).unwrap();
        let doubled: Vec<f64> = zs.iter().map(|x| 2.0 * x).collect();
        let scaled = phi.evaluate(&scalars(&doubled)).unwrap();
        let expected = (2.0_f64).powf(n as f64 * r) * base;
        prop_assert!((scaled - expected).abs() <= 1e-12 * expected.abs());
    }

    #[test]
    fn fold_scales_dyadically(
        xs in prop::collection::vec(nonzero_scalar(), 2..5),
        r in -1.0f64..3.0,
    ) {
        let n = xs.len();
        let phi = ControlSpec::power(n, 1.0, r).unwrap();
        let y = scalars(&xs);
        let fold = fold_control(&phi, &y).unwrap();
        let doubled: Vec<f64> = xs.iter().map(|x| 2.0 * x).collect();
        let fold2 = fold_control(&phi, &scalars(&doubled)).unwrap();
        let expected = (2.0_f64).powf(n as f64 * r) * fold;
        prop_assert!((fold2 - expected).abs() <= 1e-12 * expected.abs());
    }

    #[test]
    fn kappa_literal_sum_matches_geometric_closed_form(
        n in 1usize..6,
        r in exponent(),
    ) {
        let literal = kappa(n, r);
        let closed = 2.0 * ((2.0_f64).powf(n as f64 * r) - (2.0_f64).powi(n as i32))
            / ((2.0_f64).powf(r) - 2.0);
        prop_assert!((literal - closed).abs() <= 1e-10 * literal.abs());
    }

    #[test]
    fn series_partial_sum_confirms_closed_form(
        xs in prop::collection::vec(nonzero_scalar(), 1..4),
        r in exponent(),
    ) {
        let n = xs.len();
        let mode = ScalingMode::for_exponent(r).unwrap();
        let phi = ControlSpec::power(n, 0.8, r).unwrap();
        let y = scalars(&xs);
        let series = stabilizer_series(&phi, &y, mode, 60).unwrap();
        let closed = stabilizer_closed_form(&phi, &y, mode).unwrap();
        prop_assert!((series.value + series.tail_bound - closed).abs() <= 1e-10 * closed.abs());
    }

    #[test]
    fn certified_bound_holds_for_perturbed_products(
        x1 in nonzero_scalar(),
        x2 in nonzero_scalar(),
        beta in 0.01f64..0.5,
        r in 0.0f64..0.9,
    ) {
        let spec =
            SymmetricSpec::new(2, 1, SymmetricKind::PowerPerturbed { c: 1.0, beta, r }).unwrap();
        let phi = ControlSpec::power(2, beta, r).unwrap();
        // the per-step ratio 2^(n(r-1)) approaches 1 as r -> 1, so the wide
        // exponent range needs more steps than the desk-scale default
        let cfg = DirectMethodConfig::for_arity(2, ScalingMode::Doubling).with_k_max(400);
        let y = vec![Point::scalar(x1), Point::scalar(x2)];
        let out = approximate(&spec, &phi, &y, ScalingMode::Doubling, &cfg).unwrap();
        let g = spec.evaluate(&y).unwrap();
        prop_assert!(out.certified);
        prop_assert!((g - out.value).abs() <= out.bound * (1.0 + 1e-9) + 1e-12);
        // the limit strips the perturbation entirely
        prop_assert!((out.value - x1 * x2).abs() <= 1e-9 * (x1 * x2).abs().max(1.0));
    }

    #[test]
    fn gajda_is_odd_and_bounded(x in -1e4f64..1e4, eps in 0.1f64..12.0) {
        prop_assert_eq!(gajda_exact(-x, eps).to_bits(), (-gajda_exact(x, eps)).to_bits());
        prop_assert!(gajda_exact(x, eps).abs() <= eps / 3.0 + 1e-12);
    }

    #[test]
    fn gajda_series_brackets_the_closed_form(
        x in -10.0f64..10.0,
        eps in 0.1f64..12.0,
        k_terms in 1u32..64,
    ) {
        let (value, tail) = gajda_series(x, eps, k_terms);
        prop_assert!((value - gajda_exact(x, eps)).abs() <= tail * (1.0 + 1e-12) + 1e-15);
    }

    #[test]
    fn gajda_index_shift(x in -20.0f64..20.0, eps in 0.1f64..12.0) {
        let lhs = gajda_exact(2.0 * x, eps);
        let rhs = 2.0 * (gajda_exact(x, eps) - zeta(x, eps));
        prop_assert!((lhs - rhs).abs() <= 1e-12 * lhs.abs().max(rhs.abs()).max(1e-300));
    }

    #[test]
    fn cauchy_defect_linearly_controlled(
        x in -100.0f64..100.0,
        y in -100.0f64..100.0,
        eps in 0.1f64..12.0,
    ) {
        let defect = cauchy_defect(x, y, eps).abs();
        prop_assert!(defect <= eps * (x.abs() + y.abs()) * (1.0 + 1e-12) + 1e-12);
    }
}
