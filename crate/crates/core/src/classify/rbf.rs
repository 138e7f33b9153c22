use rand_distr::{Distribution, StandardNormal};
use serde::{Deserialize, Serialize};

use super::init::initial_prototypes;
use super::{check_dim, Dataset, TrainConfig};
use crate::error::{Error, Result};
use crate::mass::{FocalSet, Frame, MassFunction};
use crate::optim::{minimize, Objective, TrainReport};
use crate::rng;
use crate::util::{logistic, matrix_width, sq_dist};

/// Binary RBF network read as a weights-of-evidence model.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RbfModel {
    pub frame: Frame,
    pub prototypes: Vec<Vec<f64>>,
    pub gamma: Vec<f64>,
    /// Output weights; positive values support the first class.
    pub weights: Vec<f64>,
}

#[derive(Clone, Debug)]
pub struct RbfOutput {
    pub mass: MassFunction,
    /// Logistic output, the normalized plausibility of the first class.
    pub p: f64,
    pub conflict: f64,
    pub w_plus: f64,
    pub w_minus: f64,
}

/// Masses of `{w1}^a (+) {w2}^b`: `(m({w1}), m({w2}), m(frame), conflict)`.
pub fn rbf_masses(w_plus: f64, w_minus: f64) -> (f64, f64, f64, f64) {
    let (a, b) = (w_plus, w_minus);
    let t = a.min(b);
    // common factor exp(min(a, b)) keeps the terms representable
    let m1 = -(-a).exp_m1() * (t - b).exp();
    let m2 = -(-b).exp_m1() * (t - a).exp();
    let mo = (t - a - b).exp();
    let total = m1 + m2 + mo;
    let conflict = (-(-a).exp_m1()) * (-(-b).exp_m1());
    (m1 / total, m2 / total, mo / total, conflict)
}

fn check_binary(frame: &Frame) -> Result<()> {
    if frame.len() != 2 {
        return Err(Error::FrameSize {
            got: frame.len(),
            max: 2,
        });
    }
    Ok(())
}

impl RbfModel {
    pub fn new(
        frame: &Frame,
        prototypes: Vec<Vec<f64>>,
        gamma: Vec<f64>,
        weights: Vec<f64>,
    ) -> Result<Self> {
        let model = RbfModel {
            frame: frame.clone(),
            prototypes,
            gamma,
            weights,
        };
        model.validate()?;
        Ok(model)
    }

    pub fn validate(&self) -> Result<()> {
        check_binary(&self.frame)?;
        matrix_width(&self.prototypes, "prototypes")?;
        let i = self.prototypes.len();
        for len in [self.gamma.len(), self.weights.len()] {
            if len != i {
                return Err(Error::DimensionMismatch {
                    expected: i,
                    got: len,
                });
            }
        }
        if let Some(&g) = self.gamma.iter().find(|g| !(**g > 0.0) || !g.is_finite()) {
            return Err(Error::OutOfRange {
                name: "gamma",
                value: g,
                range: "(0, inf)",
            });
        }
        if self.weights.iter().any(|v| !v.is_finite()) {
            return Err(Error::InvalidConfig("output weights must be finite".into()));
        }
        Ok(())
    }

    pub fn dim(&self) -> usize {
        self.prototypes[0].len()
    }

    /// Hidden activations `exp(-gamma_i d_i^2)`.
    pub fn activations(&self, x: &[f64]) -> Result<Vec<f64>> {
        check_dim(self.dim(), x)?;
        Ok(self
            .prototypes
            .iter()
            .zip(&self.gamma)
            .map(|(p, &g)| (-g * sq_dist(x, p)).exp())
            .collect())
    }

    pub fn forward(&self, x: &[f64]) -> Result<RbfOutput> {
        let s = self.activations(x)?;
        let (mut w_plus, mut w_minus, mut z) = (0.0, 0.0, 0.0);
        for (si, vi) in s.iter().zip(&self.weights) {
            let w = si * vi;
            z += w;
            if w >= 0.0 {
                w_plus += w;
            } else {
                w_minus -= w;
            }
        }
        let (m1, m2, mo, conflict) = rbf_masses(w_plus, w_minus);
        let mass = MassFunction::normalized_from(
            &self.frame,
            [
                (FocalSet::singleton(0), m1),
                (FocalSet::singleton(1), m2),
                (self.frame.omega(), mo),
            ],
        )?;
        Ok(RbfOutput {
            mass,
            p: logistic(z),
            conflict,
            w_plus,
            w_minus,
        })
    }
}

/// Regularized cross-entropy of a binary RBF network as a function of the
/// unconstrained vector `[prototypes, rho, v]` with `gamma = exp(rho)`.
///
/// The cross-entropy is averaged over the examples; the penalty is
/// `lambda * sum v_i^2`. Label 0 is the positive class.
pub struct RbfObjective<'a> {
    data: &'a Dataset,
    prototypes: usize,
    lambda: f64,
}

impl<'a> RbfObjective<'a> {
    pub fn new(data: &'a Dataset, prototypes: usize, lambda: f64) -> Self {
        RbfObjective {
            data,
            prototypes,
            lambda,
        }
    }

    pub fn len(&self) -> usize {
        self.prototypes * (self.data.dim() + 2)
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn parameters(&self, model: &RbfModel) -> Vec<f64> {
        let mut theta = Vec::with_capacity(self.len());
        for p in &model.prototypes {
            theta.extend_from_slice(p);
        }
        theta.extend(model.gamma.iter().map(|g| g.ln()));
        theta.extend_from_slice(&model.weights);
        theta
    }

    pub fn model(&self, theta: &[f64]) -> RbfModel {
        let (i, d) = (self.prototypes, self.data.dim());
        assert_eq!(theta.len(), self.len(), "parameter vector length");
        RbfModel {
            frame: self.data.frame().clone(),
            prototypes: theta[..i * d].chunks(d).map(<[f64]>::to_vec).collect(),
            gamma: theta[i * d..i * d + i].iter().map(|r| r.exp()).collect(),
            weights: theta[i * d + i..].to_vec(),
        }
    }
}

/// `ln(1 + exp(x))` without overflow.
fn softplus(x: f64) -> f64 {
    if x > 0.0 {
        x + (-x).exp().ln_1p()
    } else {
        x.exp().ln_1p()
    }
}

impl Objective for RbfObjective<'_> {
    fn loss(&self, theta: &[f64]) -> f64 {
        self.loss_and_gradient(theta).0
    }

    fn loss_and_gradient(&self, theta: &[f64]) -> (f64, Vec<f64>) {
        assert_eq!(theta.len(), self.len(), "parameter vector length");
        let (ni, d) = (self.prototypes, self.data.dim());
        let n = self.data.len() as f64;
        let protos = &theta[..ni * d];
        let gamma: Vec<f64> = theta[ni * d..ni * d + ni].iter().map(|r| r.exp()).collect();
        let v = &theta[ni * d + ni..];
        let mut grad = vec![0.0; theta.len()];
        let mut loss = 0.0;
        let mut d2 = vec![0.0; ni];
        let mut s = vec![0.0; ni];
        for (x, &y) in self.data.features().iter().zip(self.data.labels()) {
            let mut z = 0.0;
            for i in 0..ni {
                d2[i] = sq_dist(x, &protos[i * d..(i + 1) * d]);
                s[i] = (-gamma[i] * d2[i]).exp();
                z += v[i] * s[i];
            }
            let positive = y == 0;
            // -log p = softplus(-z), -log(1 - p) = softplus(z)
            loss += if positive { softplus(-z) } else { softplus(z) } / n;
            let dz = (logistic(z) - if positive { 1.0 } else { 0.0 }) / n;
            for i in 0..ni {
                let ds = dz * v[i];
                grad[ni * d + ni + i] += dz * s[i];
                grad[ni * d + i] -= ds * gamma[i] * d2[i] * s[i];
                let scale = ds * 2.0 * gamma[i] * s[i];
                for q in 0..d {
                    grad[i * d + q] += scale * (x[q] - protos[i * d + q]);
                }
            }
        }
        for i in 0..ni {
            loss += self.lambda * v[i] * v[i];
            grad[ni * d + ni + i] += 2.0 * self.lambda * v[i];
        }
        (loss, grad)
    }
}

/// Trains a binary RBF network with `prototypes` hidden units. Output weights
/// start from standard normal draws.
pub fn rbf_train(
    data: &Dataset,
    prototypes: usize,
    config: &TrainConfig,
) -> Result<(RbfModel, TrainReport)> {
    config.validate()?;
    check_binary(data.frame())?;
    let (protos, gamma) = initial_prototypes(data, prototypes, config)?;
    let mut rng = rng::stream(config.seed, "rbf-weights");
    let weights = (0..prototypes)
        .map(|_| StandardNormal.sample(&mut rng))
        .collect();
    let start = RbfModel::new(data.frame(), protos, gamma, weights)?;
    let objective = RbfObjective::new(data, prototypes, config.lambda);
    let (theta, report) = minimize(&objective, objective.parameters(&start), &config.optim())?;
    Ok((objective.model(&theta), report))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::optim::{numeric_gradient, relative_error};
    use crate::synthetic::gaussian_blobs;
    use rand::Rng as _;

    fn blobs() -> Dataset {
        let (x, y) = gaussian_blobs(&[vec![0.0, 0.0], vec![4.0, 0.0]], 40, 0.5, 1);
        Dataset::new(&Frame::indexed(2).unwrap(), x, y).unwrap()
    }

    #[test]
    fn mass_cases() {
        assert_eq!(rbf_masses(0.0, 0.0), (0.0, 0.0, 1.0, 0.0));
        let (m1, m2, mo, k) = rbf_masses(2f64.ln(), 0.0);
        assert!((m1 - 0.5).abs() < 1e-15 && m2 == 0.0 && (mo - 0.5).abs() < 1e-15 && k == 0.0);
        let (m1, m2, mo, k) = rbf_masses(2f64.ln(), 2f64.ln());
        assert!((k - 0.25).abs() < 1e-15);
        for m in [m1, m2, mo] {
            assert!((m - 1.0 / 3.0).abs() < 1e-15);
        }
        let (m1, m2, mo, _) = rbf_masses(800.0, 790.0);
        assert!(m1.is_finite() && (m1 + m2 + mo - 1.0).abs() < 1e-12);
    }

    #[test]
    fn forward_cases() {
        let frame = Frame::indexed(2).unwrap();
        let zero = RbfModel::new(&frame, vec![vec![0.0]], vec![1.0], vec![0.0]).unwrap();
        let out = zero.forward(&[0.3]).unwrap();
        assert!(out.mass.is_vacuous());
        assert_eq!(out.p, 0.5);

        let ln2 = RbfModel::new(&frame, vec![vec![0.0]], vec![1.0], vec![2f64.ln()]).unwrap();
        let out = ln2.forward(&[0.0]).unwrap();
        assert!((out.p - 2.0 / 3.0).abs() < 1e-15);
        assert!((out.mass.mass(FocalSet::singleton(0)) - 0.5).abs() < 1e-15);
        assert!(out.mass.mass(frame.omega()) > 0.49);
        assert_eq!(out.conflict, 0.0);

        assert!(ln2.forward(&[50.0]).unwrap().mass.mass(frame.omega()) > 1.0 - 1e-12);
        assert!(RbfModel::new(
            &Frame::indexed(3).unwrap(),
            vec![vec![0.0]],
            vec![1.0],
            vec![1.0]
        )
        .is_err());
    }

    #[test]
    fn gradient_matches_finite_differences() {
        let data = blobs();
        let objective = RbfObjective::new(&data, 3, 0.2);
        let mut rng = rng::stream(8, "test");
        for _ in 0..5 {
            let theta: Vec<f64> = (0..objective.len())
                .map(|_| rng.random::<f64>() * 2.0 - 1.0)
                .collect();
            let (_, g) = objective.loss_and_gradient(&theta);
            let fd = numeric_gradient(&objective, &theta, 1e-5);
            assert!(relative_error(&g, &fd) < 1e-6);
        }
    }

    #[test]
    fn separable_blobs_are_learned() {
        let data = blobs();
        let cfg = TrainConfig {
            epochs: 300,
            ..TrainConfig::default()
        };
        let (model, report) = rbf_train(&data, 2, &cfg).unwrap();
        assert!(report.final_loss <= report.initial_loss);
        let errors = data
            .features()
            .iter()
            .zip(data.labels())
            .filter(|(x, &y)| (model.forward(x).unwrap().p < 0.5) != (y == 1))
            .count();
        assert_eq!(errors, 0);
        let json = serde_json::to_string(&model).unwrap();
        assert_eq!(serde_json::from_str::<RbfModel>(&json).unwrap(), model);
    }
}
