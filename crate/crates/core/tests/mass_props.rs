mod common;

use common::{assert_normalized, mass, mass_on, mass_pair};
use evidential::mass::{support_from_weight, SimpleCombination};
use evidential::{FocalSet, Frame, MassFunction, SimpleMass};
use proptest::prelude::*;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(512))]

    #[test]
    fn plausibility_is_dual_to_belief(m in mass(), bits in 0u32..16) {
        let n = m.frame().len();
        let a = FocalSet::from_bits(bits & ((1 << n) - 1));
        let pl = m.plausibility(a).unwrap();
        let bel = m.belief(a.complement(n)).unwrap();
        prop_assert!((pl - (1.0 - bel)).abs() < 1e-12);
    }

    #[test]
    fn contour_of_combination_is_product_of_contours((m1, m2) in mass_pair()) {
        let kappa = m1.conflict_with(&m2).unwrap();
        prop_assume!(kappa < 1.0 - 1e-9);
        let fused = m1.combine(&m2).unwrap();
        prop_assert!((fused.conflict - kappa).abs() < 1e-15);
        let expected = m1.contour().combine(&m2.contour(), kappa).unwrap();
        for (a, b) in fused.mass.contour().values().iter().zip(expected.values()) {
            prop_assert!((a - b).abs() < 1e-12, "{a} vs {b}");
        }
    }

    #[test]
    fn combination_is_commutative_and_closed((m1, m2) in mass_pair()) {
        prop_assume!(m1.conflict_with(&m2).unwrap() < 1.0 - 1e-9);
        let ab = m1.combine(&m2).unwrap().mass;
        let ba = m2.combine(&m1).unwrap().mass;
        let keys = |m: &MassFunction| m.focal_sets().iter().map(|(s, _)| *s).collect::<Vec<_>>();
        prop_assert_eq!(keys(&ab), keys(&ba));
        prop_assert!(ab.approx_eq(&ba, 1e-15));
        assert_normalized(&ab);
    }

    #[test]
    fn vacuous_is_neutral(m in mass()) {
        let vac = MassFunction::vacuous(m.frame());
        let fused = m.combine(&vac).unwrap();
        prop_assert_eq!(fused.conflict, 0.0);
        prop_assert!(fused.mass.approx_eq(&m, 1e-15));
    }

    #[test]
    fn pignistic_sums_to_one(m in mass()) {
        let bet = m.pignistic();
        prop_assert!((bet.iter().sum::<f64>() - 1.0).abs() < 1e-12);
        prop_assert!(bet.iter().all(|&p| p >= 0.0));
    }

    #[test]
    fn pignistic_of_bayesian_is_identity(raw in proptest::collection::vec(0.01f64..1.0, 2..6)) {
        let total: f64 = raw.iter().sum();
        let p: Vec<f64> = raw.iter().map(|v| v / total).collect();
        let frame = Frame::indexed(p.len()).unwrap();
        let m = MassFunction::bayesian(&frame, &p).unwrap();
        for (a, b) in m.pignistic().iter().zip(&p) {
            prop_assert!((a - b).abs() < 1e-15);
        }
    }

    #[test]
    fn same_focal_weights_add(bits in 1u32..7, w1 in 0.0f64..5.0, w2 in 0.0f64..5.0) {
        let frame = Frame::indexed(3).unwrap();
        let a = FocalSet::from_bits(bits);
        let s1 = SimpleMass::new(&frame, a, w1).unwrap();
        let s2 = SimpleMass::new(&frame, a, w2).unwrap();
        let SimpleCombination::Simple(sum) = s1.combine(&s2).unwrap() else {
            panic!("same focal set must stay simple");
        };
        prop_assert_eq!(sum.weight(), w1 + w2);
        let expanded = s1.to_mass().combine(&s2.to_mass()).unwrap().mass;
        prop_assert!(expanded.approx_eq(&sum.to_mass(), 1e-12));
        prop_assert!((sum.support() - support_from_weight(w1 + w2)).abs() < 1e-15);
    }

    #[test]
    fn discounting_scales_belief(m in mass_on(3), beta in 0.0f64..=1.0, bits in 1u32..7) {
        let d = m.discount(beta).unwrap();
        assert_normalized(&d);
        let a = FocalSet::from_bits(bits);
        let expected = beta * m.belief(a).unwrap();
        prop_assert!((d.belief(a).unwrap() - expected).abs() < 1e-12);
    }

    #[test]
    fn discounting_endpoints_are_exact(m in mass()) {
        prop_assert!(m.discount(0.0).unwrap().is_vacuous());
        prop_assert_eq!(m.discount(1.0).unwrap(), m);
    }
}
