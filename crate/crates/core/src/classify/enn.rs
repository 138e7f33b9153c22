use serde::{Deserialize, Serialize};

use super::init::initial_prototypes;
use super::{check_dim, pool_singleton_evidence, singletons_and_frame, Dataset, TrainConfig};
use crate::error::{Error, Result};
use crate::kmeans::nearest_center;
use crate::mass::{Frame, MassFunction};
use crate::optim::{minimize, Objective, TrainReport};
use crate::util::{logistic, matrix_width, sq_dist};

/// Evidential neural network parameters.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EnnModel {
    pub frame: Frame,
    pub prototypes: Vec<Vec<f64>>,
    /// Per-prototype maximum support in `[0, 1]`.
    pub alpha: Vec<f64>,
    /// Per-prototype distance scale, `> 0`.
    pub gamma: Vec<f64>,
    /// `I x C` class memberships, rows sum to one.
    pub memberships: Vec<Vec<f64>>,
}

impl EnnModel {
    pub fn new(
        frame: &Frame,
        prototypes: Vec<Vec<f64>>,
        alpha: Vec<f64>,
        gamma: Vec<f64>,
        memberships: Vec<Vec<f64>>,
    ) -> Result<Self> {
        let model = EnnModel {
            frame: frame.clone(),
            prototypes,
            alpha,
            gamma,
            memberships,
        };
        model.validate()?;
        Ok(model)
    }

    /// Checks shapes and parameter ranges, e.g. after deserialization.
    pub fn validate(&self) -> Result<()> {
        matrix_width(&self.prototypes, "prototypes")?;
        let i = self.prototypes.len();
        for len in [self.alpha.len(), self.gamma.len(), self.memberships.len()] {
            if len != i {
                return Err(Error::DimensionMismatch {
                    expected: i,
                    got: len,
                });
            }
        }
        for &a in &self.alpha {
            crate::error::check_range("alpha", a, 0.0, 1.0, "[0, 1]")?;
        }
        if let Some(&g) = self.gamma.iter().find(|g| !(**g > 0.0) || !g.is_finite()) {
            return Err(Error::OutOfRange {
                name: "gamma",
                value: g,
                range: "(0, inf)",
            });
        }
        for row in &self.memberships {
            if row.len() != self.frame.len() {
                return Err(Error::DimensionMismatch {
                    expected: self.frame.len(),
                    got: row.len(),
                });
            }
            if row.iter().any(|u| !(*u >= 0.0)) || (row.iter().sum::<f64>() - 1.0).abs() > 1e-9 {
                return Err(Error::InvalidConfig(
                    "membership rows must be nonnegative and sum to one".into(),
                ));
            }
        }
        Ok(())
    }

    pub fn dim(&self) -> usize {
        self.prototypes[0].len()
    }

    /// Prototype activations `alpha_i exp(-gamma_i d_i^2)`.
    pub fn activations(&self, x: &[f64]) -> Result<Vec<f64>> {
        check_dim(self.dim(), x)?;
        Ok(self
            .prototypes
            .iter()
            .zip(self.alpha.iter().zip(&self.gamma))
            .map(|(p, (&a, &g))| a * (-g * sq_dist(x, p)).exp())
            .collect())
    }

    /// Combined mass on the singletons and the frame.
    pub fn forward(&self, x: &[f64]) -> Result<MassFunction> {
        let s = self.activations(x)?;
        let (singles, omega) =
            pool_singleton_evidence(self.frame.len(), &s, |i, c| self.memberships[i][c])?;
        singletons_and_frame(&self.frame, &singles, omega)
    }
}

/// Regularized sum-of-squares loss of an ENN over a dataset, as a function of
/// the unconstrained vector `[prototypes, xi, rho, zeta]` with
/// `alpha = logistic(xi)`, `gamma = exp(rho)` and memberships `softmax(zeta)`.
///
/// The squared error is averaged over the examples; the penalty is
/// `lambda * sum alpha_i`.
pub struct EnnObjective<'a> {
    data: &'a Dataset,
    prototypes: usize,
    lambda: f64,
}

impl<'a> EnnObjective<'a> {
    pub fn new(data: &'a Dataset, prototypes: usize, lambda: f64) -> Self {
        EnnObjective {
            data,
            prototypes,
            lambda,
        }
    }

    pub fn len(&self) -> usize {
        self.prototypes * (self.data.dim() + 2 + self.data.classes())
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Unconstrained vector of `model`; extreme parameters are clamped so the
    /// result stays finite.
    pub fn parameters(&self, model: &EnnModel) -> Vec<f64> {
        let mut theta = Vec::with_capacity(self.len());
        for p in &model.prototypes {
            theta.extend_from_slice(p);
        }
        for &a in &model.alpha {
            let a = a.clamp(1e-12, 1.0 - 1e-12);
            theta.push((a / (1.0 - a)).ln());
        }
        theta.extend(model.gamma.iter().map(|g| g.ln()));
        for row in &model.memberships {
            theta.extend(row.iter().map(|u| u.max(1e-300).ln()));
        }
        theta
    }

    pub fn model(&self, theta: &[f64]) -> EnnModel {
        let v = self.view(theta);
        EnnModel {
            frame: self.data.frame().clone(),
            prototypes: (0..self.prototypes)
                .map(|i| v.prototype(i).to_vec())
                .collect(),
            alpha: (0..self.prototypes).map(|i| logistic(v.xi[i])).collect(),
            gamma: (0..self.prototypes).map(|i| v.rho[i].exp()).collect(),
            memberships: (0..self.prototypes)
                .map(|i| softmax(v.zeta_row(i)))
                .collect(),
        }
    }

    fn view<'t>(&self, theta: &'t [f64]) -> View<'t> {
        assert_eq!(theta.len(), self.len(), "parameter vector length");
        let (i, d, c) = (self.prototypes, self.data.dim(), self.data.classes());
        let (protos, rest) = theta.split_at(i * d);
        let (xi, rest) = rest.split_at(i);
        let (rho, zeta) = rest.split_at(i);
        View {
            protos,
            xi,
            rho,
            zeta,
            d,
            c,
        }
    }
}

struct View<'t> {
    protos: &'t [f64],
    xi: &'t [f64],
    rho: &'t [f64],
    zeta: &'t [f64],
    d: usize,
    c: usize,
}

impl View<'_> {
    fn prototype(&self, i: usize) -> &[f64] {
        &self.protos[i * self.d..(i + 1) * self.d]
    }

    fn zeta_row(&self, i: usize) -> &[f64] {
        &self.zeta[i * self.c..(i + 1) * self.c]
    }
}

fn softmax(z: &[f64]) -> Vec<f64> {
    let max = z.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let e: Vec<f64> = z.iter().map(|v| (v - max).exp()).collect();
    let total: f64 = e.iter().sum();
    e.iter().map(|v| v / total).collect()
}

impl Objective for EnnObjective<'_> {
    fn loss(&self, theta: &[f64]) -> f64 {
        self.loss_and_gradient(theta).0
    }

    fn loss_and_gradient(&self, theta: &[f64]) -> (f64, Vec<f64>) {
        let v = self.view(theta);
        let (ni, d, c) = (self.prototypes, v.d, v.c);
        let n = self.data.len() as f64;
        let r = 1.0 - 1.0 / c as f64;
        let alpha: Vec<f64> = v.xi.iter().map(|&x| logistic(x)).collect();
        let gamma: Vec<f64> = v.rho.iter().map(|r| r.exp()).collect();
        let u: Vec<Vec<f64>> = (0..ni).map(|i| softmax(v.zeta_row(i))).collect();

        let mut grad = vec![0.0; theta.len()];
        let (g_protos, rest) = grad.split_at_mut(ni * d);
        let (g_xi, rest) = rest.split_at_mut(ni);
        let (g_rho, g_zeta) = rest.split_at_mut(ni);
        let mut du = vec![vec![0.0; c]; ni];
        let mut loss = 0.0;

        let mut d2 = vec![0.0; ni];
        let mut s = vec![0.0; ni];
        let mut f = vec![vec![0.0; c]; ni];
        for (x, &y) in self.data.features().iter().zip(self.data.labels()) {
            for i in 0..ni {
                d2[i] = sq_dist(x, v.prototype(i));
                s[i] = alpha[i] * (-gamma[i] * d2[i]).exp();
                for k in 0..c {
                    f[i][k] = 1.0 - s[i] + u[i][k] * s[i];
                }
            }
            let plaus: Vec<f64> = (0..c).map(|k| (0..ni).map(|i| f[i][k]).product()).collect();
            let ignorance: f64 = s.iter().map(|si| 1.0 - si).product();
            let norm = plaus.iter().sum::<f64>() - (c as f64 - 1.0) * ignorance;
            let p: Vec<f64> = plaus.iter().map(|pc| (pc - r * ignorance) / norm).collect();
            let g: Vec<f64> = (0..c)
                .map(|k| {
                    let t = if k == y { 1.0 } else { 0.0 };
                    loss += (p[k] - t).powi(2) / n;
                    2.0 * (p[k] - t) / n
                })
                .collect();
            let g_bar: f64 = g.iter().zip(&p).map(|(a, b)| a * b).sum();
            let g_sum: f64 = g.iter().sum();
            let d_plaus: Vec<f64> = g.iter().map(|gk| (gk - g_bar) / norm).collect();
            let d_ign = (-r * g_sum + (c as f64 - 1.0) * g_bar) / norm;

            for i in 0..ni {
                let ign_excl: f64 = (0..ni).filter(|&j| j != i).map(|j| 1.0 - s[j]).product();
                let mut ds = -d_ign * ign_excl;
                for k in 0..c {
                    let excl: f64 = (0..ni).filter(|&j| j != i).map(|j| f[j][k]).product();
                    ds -= d_plaus[k] * (1.0 - u[i][k]) * excl;
                    du[i][k] += d_plaus[k] * s[i] * excl;
                }
                g_xi[i] += ds * s[i] * (1.0 - alpha[i]);
                g_rho[i] -= ds * gamma[i] * d2[i] * s[i];
                let scale = ds * 2.0 * gamma[i] * s[i];
                let proto = v.prototype(i);
                for q in 0..d {
                    g_protos[i * d + q] += scale * (x[q] - proto[q]);
                }
            }
        }
        for i in 0..ni {
            loss += self.lambda * alpha[i];
            g_xi[i] += self.lambda * alpha[i] * (1.0 - alpha[i]);
            let inner: f64 = (0..c).map(|k| u[i][k] * du[i][k]).sum();
            for k in 0..c {
                g_zeta[i * c + k] = u[i][k] * (du[i][k] - inner);
            }
        }
        (loss, grad)
    }
}

/// Trains an ENN with `prototypes` units. Initial `alpha` is 0.5, scales come
/// from the initial prototype spread, memberships are random.
pub fn enn_train(
    data: &Dataset,
    prototypes: usize,
    config: &TrainConfig,
) -> Result<(EnnModel, TrainReport)> {
    config.validate()?;
    if prototypes < data.classes() {
        log::warn!(
            "{prototypes} prototypes for {} classes; some classes get no prototype",
            data.classes()
        );
    }
    let (protos, gamma) = initial_prototypes(data, prototypes, config)?;
    let memberships = label_memberships(data, &protos);
    let start = EnnModel::new(
        data.frame(),
        protos,
        vec![0.5; prototypes],
        gamma,
        memberships,
    )?;
    let objective = EnnObjective::new(data, prototypes, config.lambda);
    let (theta, report) = minimize(&objective, objective.parameters(&start), &config.optim())?;
    Ok((objective.model(&theta), report))
}

/// Class frequencies, with add-one smoothing, of the training points nearest
/// to each prototype.
fn label_memberships(data: &Dataset, prototypes: &[Vec<f64>]) -> Vec<Vec<f64>> {
    let c = data.classes();
    let mut counts = vec![vec![1.0; c]; prototypes.len()];
    for (x, &y) in data.features().iter().zip(data.labels()) {
        counts[nearest_center(x, prototypes).0][y] += 1.0;
    }
    for row in counts.iter_mut() {
        let total: f64 = row.iter().sum();
        row.iter_mut().for_each(|v| *v /= total);
    }
    counts
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mass::FocalSet;
    use crate::optim::{numeric_gradient, relative_error};
    use crate::synthetic::gaussian_blobs;
    use rand::Rng as _;

    fn blobs() -> Dataset {
        let (x, y) = gaussian_blobs(&[vec![0.0, 0.0], vec![4.0, 0.0]], 40, 0.5, 1);
        Dataset::new(&Frame::indexed(2).unwrap(), x, y).unwrap()
    }

    #[test]
    fn forward_cases() {
        let frame = Frame::indexed(2).unwrap();
        let m = EnnModel::new(
            &frame,
            vec![vec![0.0]],
            vec![1.0],
            vec![1.0],
            vec![vec![0.0, 1.0]],
        )
        .unwrap();
        assert_eq!(m.forward(&[0.0]).unwrap().mass(FocalSet::singleton(1)), 1.0);

        let one = EnnModel::new(
            &frame,
            vec![vec![0.0]],
            vec![0.8],
            vec![1.0],
            vec![vec![0.3, 0.7]],
        )
        .unwrap();
        let out = one.forward(&[0.5]).unwrap();
        let s = 0.8 * (-0.25f64).exp();
        assert!((out.mass(FocalSet::singleton(0)) - 0.3 * s).abs() < 1e-12);
        assert!((out.mass(frame.omega()) - (1.0 - s)).abs() < 1e-12);

        let two = EnnModel::new(
            &frame,
            vec![vec![0.0], vec![1.0]],
            vec![0.9, 0.9],
            vec![1.0, 1.0],
            vec![vec![1.0, 0.0], vec![0.0, 1.0]],
        )
        .unwrap();
        let far = two.forward(&[10.0]).unwrap();
        assert!(far.mass(frame.omega()) > 0.999_9);
    }

    #[test]
    fn gradient_matches_finite_differences() {
        let data = blobs();
        let objective = EnnObjective::new(&data, 3, 0.3);
        let mut rng = crate::rng::stream(5, "test");
        for _ in 0..5 {
            let theta: Vec<f64> = (0..objective.len())
                .map(|_| rng.random::<f64>() * 2.0 - 1.0)
                .collect();
            let (_, g) = objective.loss_and_gradient(&theta);
            let fd = numeric_gradient(&objective, &theta, 1e-5);
            assert!(relative_error(&g, &fd) < 1e-6, "{g:?} vs {fd:?}");
        }
    }

    #[test]
    fn separable_blobs_are_learned() {
        let data = blobs();
        let cfg = TrainConfig {
            epochs: 300,
            ..TrainConfig::default()
        };
        let (model, report) = enn_train(&data, 2, &cfg).unwrap();
        assert!(report.final_loss <= report.initial_loss);
        let errors = data
            .features()
            .iter()
            .zip(data.labels())
            .filter(|(x, &y)| crate::decide::decide_pignistic(&model.forward(x).unwrap()) != y)
            .count();
        assert_eq!(errors, 0);
        assert_eq!(enn_train(&data, 2, &cfg).unwrap().0, model);
    }

    #[test]
    fn strong_penalty_empties_the_evidence() {
        let data = blobs();
        let cfg = TrainConfig {
            lambda: 10.0,
            epochs: 300,
            ..TrainConfig::default()
        };
        let (model, _) = enn_train(&data, 2, &cfg).unwrap();
        assert!(model.alpha.iter().all(|&a| a < 0.05), "{:?}", model.alpha);
        let mean_omega: f64 = data
            .features()
            .iter()
            .map(|x| model.forward(x).unwrap().mass(data.frame().omega()))
            .sum::<f64>()
            / data.len() as f64;
        assert!(mean_omega > 0.95);
    }

    #[test]
    fn round_trips_through_parameters_and_json() {
        let data = blobs();
        let (model, _) = enn_train(
            &data,
            2,
            &TrainConfig {
                epochs: 5,
                ..TrainConfig::default()
            },
        )
        .unwrap();
        let objective = EnnObjective::new(&data, 2, 0.0);
        let back = objective.model(&objective.parameters(&model));
        for (a, b) in back.alpha.iter().zip(&model.alpha) {
            assert!((a - b).abs() < 1e-12);
        }
        let json = serde_json::to_string(&model).unwrap();
        let parsed: EnnModel = serde_json::from_str(&json).unwrap();
        assert_eq!(parsed, model);
    }
}
