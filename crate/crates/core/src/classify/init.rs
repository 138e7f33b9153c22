use rand_distr::{Distribution, Normal};
use serde::{Deserialize, Serialize};

use super::Dataset;
use crate::error::{Error, Result};
use crate::kmeans::{kmeans_best_of, nearest_center};
use crate::optim::{OptimConfig, Optimizer};
use crate::rng;
use crate::util::sq_dist;

/// Prototype initialization.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum Init {
    /// Prototypes drawn from a Gaussian matching the feature means and spreads.
    Random,
    #[default]
    KMeans,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TrainConfig {
    /// Regularization weight, `>= 0`.
    pub lambda: f64,
    pub epochs: usize,
    pub learning_rate: f64,
    pub seed: u64,
    pub init: Init,
    pub optimizer: Optimizer,
}

impl Default for TrainConfig {
    fn default() -> Self {
        TrainConfig {
            lambda: 0.0,
            epochs: 1000,
            learning_rate: 0.1,
            seed: 0,
            init: Init::KMeans,
            optimizer: Optimizer::GradientDescent,
        }
    }
}

impl TrainConfig {
    pub(crate) fn validate(&self) -> Result<()> {
        if !(self.lambda >= 0.0) || !self.lambda.is_finite() {
            return Err(Error::OutOfRange {
                name: "lambda",
                value: self.lambda,
                range: "[0, inf)",
            });
        }
        Ok(())
    }

    pub(crate) fn optim(&self) -> OptimConfig {
        OptimConfig {
            epochs: self.epochs,
            learning_rate: self.learning_rate,
            optimizer: self.optimizer,
        }
    }
}

/// Number of k-means runs behind [`kmeans_prototype_init`].
pub const KMEANS_RESTARTS: usize = 10;

/// `count` prototypes placed by k-means on the features, best of
/// [`KMEANS_RESTARTS`] k-means++ runs seeded from `seed`.
pub fn kmeans_prototype_init(
    features: &[Vec<f64>],
    count: usize,
    seed: u64,
) -> Result<Vec<Vec<f64>>> {
    Ok(kmeans_best_of(features, count, seed, 300, KMEANS_RESTARTS)?.centers)
}

/// Prototypes and per-prototype scales `1 / mean d^2` of the points each
/// prototype attracts.
pub(crate) fn initial_prototypes(
    data: &Dataset,
    count: usize,
    config: &TrainConfig,
) -> Result<(Vec<Vec<f64>>, Vec<f64>)> {
    if count == 0 {
        return Err(Error::InvalidConfig(
            "at least one prototype is required".into(),
        ));
    }
    let x = data.features();
    let prototypes = match config.init {
        Init::KMeans => kmeans_prototype_init(x, count, config.seed)?,
        Init::Random => {
            let mut rng = rng::stream(config.seed, "prototypes");
            let n = x.len() as f64;
            let mut protos = vec![vec![0.0; data.dim()]; count];
            for q in 0..data.dim() {
                let mean = x.iter().map(|r| r[q]).sum::<f64>() / n;
                let var = x.iter().map(|r| (r[q] - mean).powi(2)).sum::<f64>() / n;
                let normal = Normal::new(mean, var.sqrt().max(1e-12)).expect("finite spread");
                for p in protos.iter_mut() {
                    p[q] = normal.sample(&mut rng);
                }
            }
            protos
        }
    };
    let mut sums = vec![0.0; count];
    let mut counts = vec![0usize; count];
    for row in x {
        let (i, d) = nearest_center(row, &prototypes);
        sums[i] += d;
        counts[i] += 1;
    }
    let overall = x
        .iter()
        .map(|row| prototypes.iter().map(|p| sq_dist(row, p)).sum::<f64>())
        .sum::<f64>()
        / (x.len() * count) as f64;
    let fallback = if overall > 0.0 { 1.0 / overall } else { 1.0 };
    let gamma = sums
        .iter()
        .zip(&counts)
        .map(|(&s, &c)| {
            if c > 0 && s > 0.0 {
                c as f64 / s
            } else {
                fallback
            }
        })
        .collect();
    Ok((prototypes, gamma))
}
