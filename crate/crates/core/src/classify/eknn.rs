use serde::{Deserialize, Serialize};

use super::{check_dim, pool_singleton_evidence, singletons_and_frame, Dataset};
use crate::error::{Error, Result};
use crate::mass::{Frame, MassFunction};
use crate::util::sq_dist;

/// Distance scale of the neighbour evidence `alpha exp(-gamma d^2)`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Gamma {
    Shared(f64),
    /// One scale per class, applied according to the neighbour's label.
    PerClass(Vec<f64>),
}

impl Gamma {
    fn of(&self, class: usize) -> f64 {
        match self {
            Gamma::Shared(g) => *g,
            Gamma::PerClass(g) => g[class],
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EknnConfig {
    pub k: usize,
    /// Support ceiling in `(0, 1)`.
    pub alpha: f64,
    pub gamma: Gamma,
}

impl EknnConfig {
    pub fn new(k: usize, alpha: f64, gamma: Gamma) -> Result<Self> {
        let cfg = EknnConfig { k, alpha, gamma };
        cfg.validate(None)?;
        Ok(cfg)
    }

    /// `alpha = 0.95` and a shared scale `1 / mean d^2` over all training pairs.
    pub fn with_default_scale(train: &Dataset, k: usize) -> Result<Self> {
        let msd = mean_squared_distance(train.features());
        let gamma = if msd > 0.0 { 1.0 / msd } else { 1.0 };
        EknnConfig::new(k, 0.95, Gamma::Shared(gamma))
    }

    fn validate(&self, train: Option<&Dataset>) -> Result<()> {
        if self.k == 0 {
            return Err(Error::InvalidConfig("K must be at least 1".into()));
        }
        if !(self.alpha > 0.0 && self.alpha < 1.0) {
            return Err(Error::OutOfRange {
                name: "alpha",
                value: self.alpha,
                range: "(0, 1)",
            });
        }
        let scales = match &self.gamma {
            Gamma::Shared(g) => std::slice::from_ref(g),
            Gamma::PerClass(g) => g.as_slice(),
        };
        if let Some(&bad) = scales.iter().find(|g| !(**g > 0.0) || !g.is_finite()) {
            return Err(Error::OutOfRange {
                name: "gamma",
                value: bad,
                range: "(0, inf)",
            });
        }
        if let Some(train) = train {
            if self.k > train.len() {
                return Err(Error::InvalidConfig(format!(
                    "K = {} exceeds the {} training examples",
                    self.k,
                    train.len()
                )));
            }
            if let Gamma::PerClass(g) = &self.gamma {
                if g.len() != train.classes() {
                    return Err(Error::DimensionMismatch {
                        expected: train.classes(),
                        got: g.len(),
                    });
                }
            }
        }
        Ok(())
    }
}

/// Mean squared Euclidean distance over all unordered pairs of rows.
pub fn mean_squared_distance(features: &[Vec<f64>]) -> f64 {
    let n = features.len();
    if n < 2 {
        return 0.0;
    }
    let mut total = 0.0;
    for i in 0..n {
        for j in i + 1..n {
            total += sq_dist(&features[i], &features[j]);
        }
    }
    total / (n * (n - 1) / 2) as f64
}

/// Evidential k-NN: each of the `K` nearest neighbours supports its own class
/// with `alpha exp(-gamma d^2)`, and the neighbour masses are combined.
pub fn eknn_predict(x: &[f64], train: &Dataset, config: &EknnConfig) -> Result<MassFunction> {
    config.validate(Some(train))?;
    check_dim(train.dim(), x)?;
    let mut dist: Vec<(f64, usize)> = train
        .features()
        .iter()
        .enumerate()
        .map(|(i, p)| (sq_dist(x, p), i))
        .collect();
    dist.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)));
    let neighbours = &dist[..config.k];
    let labels = train.labels();
    let support: Vec<f64> = neighbours
        .iter()
        .map(|&(d2, i)| config.alpha * (-config.gamma.of(labels[i]) * d2).exp())
        .collect();
    let (singles, omega) = pool_singleton_evidence(train.classes(), &support, |j, c| {
        if labels[neighbours[j].1] == c {
            1.0
        } else {
            0.0
        }
    })?;
    singletons_and_frame(train.frame(), &singles, omega)
}

/// Stored training set plus configuration, for saving and reloading.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EknnModel {
    pub frame: Frame,
    pub config: EknnConfig,
    pub features: Vec<Vec<f64>>,
    pub labels: Vec<usize>,
}

impl EknnModel {
    pub fn new(train: &Dataset, config: EknnConfig) -> Result<Self> {
        config.validate(Some(train))?;
        Ok(EknnModel {
            frame: train.frame().clone(),
            config,
            features: train.features().to_vec(),
            labels: train.labels().to_vec(),
        })
    }

    pub fn dataset(&self) -> Result<Dataset> {
        Dataset::new(&self.frame, self.features.clone(), self.labels.clone())
    }

    pub fn predict(&self, x: &[f64]) -> Result<MassFunction> {
        eknn_predict(x, &self.dataset()?, &self.config)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mass::FocalSet;

    fn train() -> Dataset {
        Dataset::new(
            &Frame::indexed(2).unwrap(),
            vec![vec![0.0], vec![0.0], vec![5.0]],
            vec![0, 0, 1],
        )
        .unwrap()
    }

    #[test]
    fn single_neighbour_cases() {
        let cfg = EknnConfig::new(1, 0.95, Gamma::Shared(1.0)).unwrap();
        let m = eknn_predict(&[0.0], &train(), &cfg).unwrap();
        assert!((m.mass(FocalSet::singleton(0)) - 0.95).abs() < 1e-12);
        assert!((m.mass(FocalSet::full(2)) - 0.05).abs() < 1e-12);
        let far = eknn_predict(&[1e3], &train(), &cfg).unwrap();
        assert!(far.is_vacuous());
    }

    #[test]
    fn two_agreeing_neighbours() {
        // alpha exp(-gamma d^2) = 0.5 at d = 1
        let gamma = -(0.5f64 / 0.95).ln();
        let cfg = EknnConfig::new(2, 0.95, Gamma::Shared(gamma)).unwrap();
        let m = eknn_predict(&[1.0], &train(), &cfg).unwrap();
        assert!((m.mass(FocalSet::singleton(0)) - 0.75).abs() < 1e-12);
        assert!((m.mass(FocalSet::full(2)) - 0.25).abs() < 1e-12);
    }

    #[test]
    fn validation() {
        let data = train();
        let cfg = EknnConfig::new(4, 0.95, Gamma::Shared(1.0)).unwrap();
        assert!(eknn_predict(&[0.0], &data, &cfg).is_err());
        assert!(EknnConfig::new(1, 1.0, Gamma::Shared(1.0)).is_err());
        assert!(EknnConfig::new(1, 0.5, Gamma::Shared(0.0)).is_err());
        let cfg = EknnConfig::new(1, 0.95, Gamma::Shared(1.0)).unwrap();
        assert!(eknn_predict(&[0.0, 1.0], &data, &cfg).is_err());
        let per_class = EknnConfig::new(1, 0.9, Gamma::PerClass(vec![1.0, 2.0])).unwrap();
        assert!(eknn_predict(&[4.0], &data, &per_class).is_ok());
        let default = EknnConfig::with_default_scale(&data, 2).unwrap();
        assert_eq!(
            default.gamma,
            Gamma::Shared(1.0 / mean_squared_distance(data.features()))
        );
        assert!((mean_squared_distance(data.features()) - 50.0 / 3.0).abs() < 1e-12);
    }
}
