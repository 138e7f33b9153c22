use evidential::fusion::{fuse_discounted_sources, fuse_prob_mass, ReliabilityVector};
use evidential::{ContourFunction, FocalSet, Frame, MassFunction};
use proptest::prelude::*;

const C: usize = 3;

fn prob() -> impl Strategy<Value = Vec<f64>> {
    proptest::collection::vec(0.01f64..1.0, C).prop_map(|r| {
        let t: f64 = r.iter().sum();
        r.iter().map(|v| v / t).collect()
    })
}

fn contour() -> impl Strategy<Value = ContourFunction> {
    proptest::collection::vec(0.01f64..=1.0, C)
        .prop_map(|v| ContourFunction::new(&Frame::indexed(C).unwrap(), v).unwrap())
}

fn betas() -> impl Strategy<Value = ReliabilityVector> {
    proptest::collection::vec(0.0f64..=1.0, C).prop_map(|v| ReliabilityVector::new(v).unwrap())
}

fn sources() -> impl Strategy<Value = Vec<(ContourFunction, ReliabilityVector)>> {
    proptest::collection::vec((contour(), betas()), 1..5)
}

fn singleton_mass() -> impl Strategy<Value = MassFunction> {
    proptest::collection::vec(0.0f64..1.0, C + 1).prop_map(|r| {
        let frame = Frame::indexed(C).unwrap();
        let mut entries: Vec<(FocalSet, f64)> =
            (0..C).map(|c| (FocalSet::singleton(c), r[c])).collect();
        entries.push((frame.omega(), r[C] + 0.01));
        MassFunction::normalized_from(&frame, entries).unwrap()
    })
}

fn assert_probability(p: &[f64]) {
    assert!(p.iter().all(|&v| v >= 0.0));
    assert!((p.iter().sum::<f64>() - 1.0).abs() < 1e-12);
}

fn split(
    src: &[(ContourFunction, ReliabilityVector)],
) -> (Vec<ContourFunction>, Vec<ReliabilityVector>) {
    src.iter().cloned().unzip()
}

proptest! {
    #[test]
    fn vacuous_mass_leaves_p_untouched(p in prob()) {
        let vac = MassFunction::vacuous(&Frame::indexed(C).unwrap());
        prop_assert_eq!(fuse_prob_mass(&p, &vac).unwrap(), p);
    }

    #[test]
    fn prob_mass_fusion_is_a_probability(p in prob(), m in singleton_mass()) {
        assert_probability(&fuse_prob_mass(&p, &m).unwrap());
    }

    #[test]
    fn source_order_does_not_matter(src in sources(), seed in any::<u64>()) {
        let (pls, bs) = split(&src);
        let base = fuse_discounted_sources(&pls, &bs).unwrap();
        assert_probability(&base);
        let mut shuffled = src.clone();
        let n = shuffled.len();
        shuffled.rotate_left((seed as usize) % n);
        if n > 1 {
            shuffled.swap(0, n - 1);
        }
        let (pls, bs) = split(&shuffled);
        prop_assert_eq!(fuse_discounted_sources(&pls, &bs).unwrap(), base);
    }

    #[test]
    fn unreliable_source_changes_nothing(src in sources(), extra in contour()) {
        let (mut pls, mut bs) = split(&src);
        let base = fuse_discounted_sources(&pls, &bs).unwrap();
        pls.push(extra);
        bs.push(ReliabilityVector::constant(C, 0.0).unwrap());
        let with = fuse_discounted_sources(&pls, &bs).unwrap();
        for (a, b) in with.iter().zip(&base) {
            prop_assert!((a - b).abs() < 1e-12);
        }
    }

    #[test]
    fn fully_reliable_sources_match_contour_products(pls in proptest::collection::vec(contour(), 1..5)) {
        let bs = vec![ReliabilityVector::constant(C, 1.0).unwrap(); pls.len()];
        let fused = fuse_discounted_sources(&pls, &bs).unwrap();
        let mut acc = pls[0].clone();
        for pl in &pls[1..] {
            acc = acc.combine(pl, 0.0).unwrap();
        }
        for (a, b) in fused.iter().zip(acc.normalized().unwrap()) {
            prop_assert!((a - b).abs() < 1e-10);
        }
    }
}
