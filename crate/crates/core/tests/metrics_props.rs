use evidential::metrics::{
    consistency_loss, dice_loss_binary, ece, hausdorff, overlap_metrics, LabelArray, ProbArray,
};
use proptest::prelude::*;

fn labels(n: usize) -> impl Strategy<Value = Vec<usize>> {
    proptest::collection::vec(0usize..3, n)
}

fn points() -> impl Strategy<Value = Vec<Vec<f64>>> {
    proptest::collection::vec(proptest::collection::vec(-10.0f64..10.0, 2), 1..60)
}

fn probs(n: usize) -> impl Strategy<Value = Vec<Vec<f64>>> {
    proptest::collection::vec(proptest::collection::vec(0.01f64..1.0, 3), n).prop_map(|rows| {
        rows.into_iter()
            .map(|r| {
                let t: f64 = r.iter().sum();
                r.iter().map(|v| v / t).collect()
            })
            .collect()
    })
}

fn brute_hausdorff(a: &[Vec<f64>], b: &[Vec<f64>]) -> f64 {
    let d = |p: &Vec<f64>, q: &Vec<f64>| ((p[0] - q[0]).powi(2) + (p[1] - q[1]).powi(2)).sqrt();
    let directed = |x: &[Vec<f64>], y: &[Vec<f64>]| {
        let mut worst = 0.0f64;
        for p in x {
            let mut best = f64::INFINITY;
            for q in y {
                best = best.min(d(p, q));
            }
            worst = worst.max(best);
        }
        worst
    };
    directed(a, b).max(directed(b, a))
}

proptest! {
    #[test]
    fn overlap_symmetry((p, t) in (1usize..40).prop_flat_map(|n| (labels(n), labels(n))), class in 0usize..3) {
        let p = LabelArray::new(p, 3).unwrap();
        let t = LabelArray::new(t, 3).unwrap();
        let a = overlap_metrics(&p, &t, class).unwrap();
        let b = overlap_metrics(&t, &p, class).unwrap();
        prop_assert_eq!(a.dice, b.dice);
        prop_assert_eq!(a.sensitivity, b.precision);
        prop_assert_eq!(a.precision, b.sensitivity);
        prop_assert!((0.0..=1.0).contains(&a.dice));
    }

    #[test]
    fn hausdorff_is_symmetric_brute_force(a in points(), b in points()) {
        let h = hausdorff(&a, &b).unwrap();
        prop_assert_eq!(h, hausdorff(&b, &a).unwrap());
        prop_assert!((h - brute_hausdorff(&a, &b)).abs() < 1e-12);
    }

    #[test]
    fn dice_loss_is_bounded(pairs in proptest::collection::vec((0.0f64..=1.0, any::<bool>()), 1..50)) {
        let s: Vec<f64> = pairs.iter().map(|p| p.0).collect();
        let g: Vec<f64> = pairs.iter().map(|p| p.1 as u8 as f64).collect();
        let loss = dice_loss_binary(&s, &g).unwrap();
        prop_assert!((0.0..=1.0 + 1e-15).contains(&loss));
    }

    #[test]
    fn consistency_vanishes_only_on_equal_arrays((a, b) in (1usize..20).prop_flat_map(|n| (probs(n), probs(n)))) {
        let a = ProbArray::new(a).unwrap();
        let b = ProbArray::new(b).unwrap();
        prop_assert_eq!(consistency_loss(&a, &a).unwrap(), 0.0);
        let l = consistency_loss(&a, &b).unwrap();
        prop_assert!(l >= 0.0);
        prop_assert_eq!(l == 0.0, a == b);
    }

    #[test]
    fn ece_of_calibrated_bins_is_zero(groups in proptest::collection::vec(0usize..=4, 1..8)) {
        // every group of four has accuracy equal to its confidence
        let mut conf = Vec::new();
        let mut ok = Vec::new();
        for hits in groups {
            for k in 0..4 {
                conf.push(hits as f64 / 4.0);
                ok.push(k < hits);
            }
        }
        prop_assert_eq!(ece(&conf, &ok, 10).unwrap(), 0.0);
    }
}
