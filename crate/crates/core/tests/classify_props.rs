mod common;

use common::assert_normalized;
use evidential::classify::{
    enn_train, rbf_train, Dataset, EnnModel, EnnObjective, RbfModel, RbfObjective, TrainConfig,
};
use evidential::optim::{numeric_gradient, relative_error, Objective};
use evidential::synthetic::{bananas, gaussian_blobs, BananaSpec};
use evidential::{rng, FocalSet, Frame};
use proptest::prelude::*;
use rand::Rng;

const DIM: usize = 2;

fn point() -> impl Strategy<Value = Vec<f64>> {
    proptest::collection::vec(-3.0f64..3.0, DIM)
}

fn enn_model(classes: usize) -> impl Strategy<Value = EnnModel> {
    (1usize..5).prop_flat_map(move |i| {
        (
            proptest::collection::vec(point(), i),
            proptest::collection::vec(0.0f64..=1.0, i),
            proptest::collection::vec(0.01f64..5.0, i),
            proptest::collection::vec(proptest::collection::vec(0.01f64..1.0, classes), i),
        )
            .prop_map(move |(protos, alpha, gamma, raw)| {
                let u = raw
                    .into_iter()
                    .map(|r| {
                        let t: f64 = r.iter().sum();
                        r.iter().map(|v| v / t).collect()
                    })
                    .collect();
                EnnModel::new(&Frame::indexed(classes).unwrap(), protos, alpha, gamma, u).unwrap()
            })
    })
}

fn rbf_model() -> impl Strategy<Value = RbfModel> {
    (1usize..6).prop_flat_map(|i| {
        (
            proptest::collection::vec(point(), i),
            proptest::collection::vec(0.01f64..5.0, i),
            proptest::collection::vec(-4.0f64..4.0, i),
        )
            .prop_map(|(p, g, v)| RbfModel::new(&Frame::indexed(2).unwrap(), p, g, v).unwrap())
    })
}

fn direction() -> impl Strategy<Value = Vec<f64>> {
    (0.0f64..std::f64::consts::TAU).prop_map(|t| vec![t.cos(), t.sin()])
}

fn farthest(prototypes: &[Vec<f64>]) -> f64 {
    prototypes
        .iter()
        .map(|p| p.iter().map(|v| v * v).sum::<f64>().sqrt())
        .fold(0.0, f64::max)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(500))]

    #[test]
    fn enn_output_is_discounted_bayesian(m in (2usize..5).prop_flat_map(enn_model), x in point()) {
        let out = m.forward(&x).unwrap();
        assert_normalized(&out);
        let omega = out.frame().omega();
        prop_assert!(out.focal_sets().iter().all(|(s, _)| s.is_singleton() || *s == omega));
    }

    #[test]
    fn rbf_logistic_is_normalized_plausibility(m in rbf_model(), x in point()) {
        let out = m.forward(&x).unwrap();
        let pl = out.mass.contour().normalized().unwrap();
        prop_assert!((out.p - pl[0]).abs() < 1e-10, "{} vs {}", out.p, pl[0]);
        let total: f64 = out.mass.focal_sets().iter().map(|(_, v)| v).sum();
        prop_assert!((total - 1.0).abs() < 1e-12);
    }

    #[test]
    fn rbf_masses_sum_to_one(a in 0.0f64..50.0, b in 0.0f64..50.0) {
        let (m1, m2, mo, k) = evidential::classify::rbf_masses(a, b);
        prop_assert!((m1 + m2 + mo - 1.0).abs() < 1e-12);
        prop_assert!((0.0..=1.0).contains(&k));
    }

    #[test]
    fn enn_becomes_vacuous_far_away(m in enn_model(3), d in direction()) {
        let start = farthest(&m.prototypes) + 0.5;
        let omega = m.frame.omega();
        let mut last = 0.0;
        for step in 0..20 {
            let t = start + step as f64 * 0.5;
            let x: Vec<f64> = d.iter().map(|v| v * t).collect();
            let mo = m.forward(&x).unwrap().mass(omega);
            prop_assert!(mo >= last - 1e-12, "{mo} < {last}");
            last = mo;
        }
        let x: Vec<f64> = d.iter().map(|v| v * (start + 100.0)).collect();
        prop_assert!(m.forward(&x).unwrap().mass(omega) > 1.0 - 1e-9);
    }

    #[test]
    fn rbf_becomes_vacuous_far_away(m in rbf_model(), d in direction()) {
        let start = farthest(&m.prototypes) + 0.5;
        let omega = FocalSet::full(2);
        let mut last = 0.0;
        for step in 0..20 {
            let t = start + step as f64 * 0.5;
            let x: Vec<f64> = d.iter().map(|v| v * t).collect();
            let mo = m.forward(&x).unwrap().mass.mass(omega);
            prop_assert!(mo >= last - 1e-12, "{mo} < {last}");
            last = mo;
        }
        let x: Vec<f64> = d.iter().map(|v| v * (start + 100.0)).collect();
        prop_assert!(m.forward(&x).unwrap().mass.mass(omega) > 1.0 - 1e-9);
    }
}

fn blob_data(classes: usize) -> Dataset {
    let centers: Vec<Vec<f64>> = (0..classes)
        .map(|c| vec![c as f64 * 2.0, (c % 2) as f64])
        .collect();
    let (x, y) = gaussian_blobs(&centers, 15, 0.6, 4);
    Dataset::new(&Frame::indexed(classes).unwrap(), x, y).unwrap()
}

fn check_gradients<O: Objective>(objective: &O, len: usize, seed: u64) {
    let mut rng = rng::stream(seed, "gradient-check");
    for _ in 0..20 {
        let theta: Vec<f64> = (0..len).map(|_| rng.random_range(-1.5..1.5)).collect();
        let (loss, g) = objective.loss_and_gradient(&theta);
        assert_eq!(loss, objective.loss(&theta));
        let fd = numeric_gradient(objective, &theta, 1e-5);
        let err = relative_error(&g, &fd);
        assert!(err < 1e-4, "relative error {err}");
    }
}

#[test]
fn enn_gradient_matches_finite_differences() {
    let data = blob_data(3);
    for lambda in [0.0, 0.1] {
        let objective = EnnObjective::new(&data, 4, lambda);
        check_gradients(&objective, objective.len(), 11);
    }
}

#[test]
fn rbf_gradient_matches_finite_differences() {
    let data = blob_data(2);
    for lambda in [0.0, 0.1] {
        let objective = RbfObjective::new(&data, 4, lambda);
        check_gradients(&objective, objective.len(), 12);
    }
}

#[test]
fn training_is_deterministic() {
    let (x, y) = bananas(80, &BananaSpec::default(), 3);
    let data = Dataset::new(&Frame::indexed(2).unwrap(), x, y).unwrap();
    let config = TrainConfig {
        lambda: 1e-3,
        epochs: 50,
        seed: 9,
        ..TrainConfig::default()
    };
    let a = enn_train(&data, 4, &config).unwrap();
    let b = enn_train(&data, 4, &config).unwrap();
    assert_eq!(a, b);
    let a = rbf_train(&data, 4, &config).unwrap();
    let b = rbf_train(&data, 4, &config).unwrap();
    assert_eq!(a, b);
}
