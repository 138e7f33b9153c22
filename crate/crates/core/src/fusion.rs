//! Fusion of several sources of evidence about the same frame.
//!
//! * [`fuse_prob_mass`]: a probability vector combined with a mass on the
//!   singletons and the frame; the result is again a probability vector.
//! * [`contextual_discount_contour`] and [`fuse_discounted_sources`]: contour
//!   functions weakened by per-class reliabilities, then multiplied and
//!   normalized.
//! * [`fit_reliability`]: learns the per-source, per-class reliabilities by
//!   minimizing the pooled Dice loss of the fused output on labelled data.

use serde::{Deserialize, Serialize};

use crate::error::{check_range, Error, Result};
use crate::mass::{ContourFunction, MassFunction};
use crate::optim::{minimize, Objective, OptimConfig, Optimizer, TrainReport};
use crate::util::logistic;

/// Reliability of a source in each class context, entries in `[0, 1]`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<f64>", into = "Vec<f64>")]
pub struct ReliabilityVector(Vec<f64>);

impl ReliabilityVector {
    pub fn new(values: Vec<f64>) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::EmptyInput("reliability vector"));
        }
        for &b in &values {
            check_range("beta", b, 0.0, 1.0, "[0, 1]")?;
        }
        Ok(ReliabilityVector(values))
    }

    pub fn constant(classes: usize, beta: f64) -> Result<Self> {
        ReliabilityVector::new(vec![beta; classes])
    }

    pub fn values(&self) -> &[f64] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

impl TryFrom<Vec<f64>> for ReliabilityVector {
    type Error = Error;

    fn try_from(values: Vec<f64>) -> Result<Self> {
        ReliabilityVector::new(values)
    }
}

impl From<ReliabilityVector> for Vec<f64> {
    fn from(b: ReliabilityVector) -> Self {
        b.0
    }
}

fn check_probabilities(p: &[f64], classes: usize) -> Result<()> {
    if p.len() != classes {
        return Err(Error::DimensionMismatch {
            expected: classes,
            got: p.len(),
        });
    }
    for &v in p {
        check_range("probability", v, 0.0, 1.0, "[0, 1]")?;
    }
    let total: f64 = p.iter().sum();
    if (total - 1.0).abs() > 1e-9 {
        return Err(Error::SumNotOne(total));
    }
    Ok(())
}

/// Dempster combination of a probability vector with a mass on singletons
/// and the frame: `p(c) pl(c)` renormalized.
///
/// When every singleton is fully plausible (e.g. a vacuous mass) `p` is
/// returned unchanged.
pub fn fuse_prob_mass(p: &[f64], m: &MassFunction) -> Result<Vec<f64>> {
    let frame = m.frame();
    check_probabilities(p, frame.len())?;
    let omega = frame.omega();
    if m.focal_sets()
        .iter()
        .any(|(s, _)| !s.is_singleton() && *s != omega)
    {
        return Err(Error::InvalidConfig(
            "mass must have only singletons and the frame as focal sets".into(),
        ));
    }
    let pl = m.contour().into_values();
    if pl.iter().all(|&v| v == 1.0) {
        return Ok(p.to_vec());
    }
    let joint: Vec<f64> = p.iter().zip(&pl).map(|(a, b)| a * b).collect();
    let total: f64 = joint.iter().sum();
    if total <= 0.0 {
        return Err(Error::ZeroDenominator(
            "probability and plausibility have disjoint support",
        ));
    }
    Ok(joint.iter().map(|v| v / total).collect())
}

/// Contour of a contextually discounted mass: `1 - beta_c + beta_c pl(c)`.
pub fn contextual_discount_contour(
    pl: &ContourFunction,
    beta: &ReliabilityVector,
) -> Result<ContourFunction> {
    if beta.len() != pl.values().len() {
        return Err(Error::DimensionMismatch {
            expected: pl.values().len(),
            got: beta.len(),
        });
    }
    let values = pl
        .values()
        .iter()
        .zip(beta.values())
        .map(|(&p, &b)| 1.0 - b + b * p)
        .collect();
    ContourFunction::new(pl.frame(), values)
}

/// Product over sources of the discounted contours, normalized over classes.
///
/// Factors are multiplied in sorted order so the result does not depend on
/// the order of the sources.
pub fn fuse_discounted_sources(
    pls: &[ContourFunction],
    betas: &[ReliabilityVector],
) -> Result<Vec<f64>> {
    if pls.is_empty() {
        return Err(Error::EmptyInput("sources"));
    }
    if pls.len() != betas.len() {
        return Err(Error::DimensionMismatch {
            expected: pls.len(),
            got: betas.len(),
        });
    }
    let frame = pls[0].frame();
    let discounted = pls
        .iter()
        .zip(betas)
        .map(|(pl, b)| {
            if pl.frame() != frame {
                return Err(Error::FrameMismatch);
            }
            contextual_discount_contour(pl, b)
        })
        .collect::<Result<Vec<_>>>()?;
    let columns: Vec<Vec<f64>> = (0..frame.len())
        .map(|c| discounted.iter().map(|d| d.values()[c]).collect())
        .collect();
    normalized_products(columns)
}

fn sorted_product(mut factors: Vec<f64>) -> f64 {
    factors.sort_by(f64::total_cmp);
    factors.iter().product()
}

fn normalized_products(columns: Vec<Vec<f64>>) -> Result<Vec<f64>> {
    let products: Vec<f64> = columns.into_iter().map(sorted_product).collect();
    let total: f64 = products.iter().sum();
    if !(total > 0.0) {
        return Err(Error::ZeroDenominator(
            "every class has zero fused plausibility",
        ));
    }
    Ok(products.iter().map(|v| v / total).collect())
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FitConfig {
    /// Starting reliability of every `(source, class)` pair.
    pub initial_beta: f64,
    pub epochs: usize,
    pub learning_rate: f64,
    pub optimizer: Optimizer,
}

impl Default for FitConfig {
    fn default() -> Self {
        FitConfig {
            initial_beta: 0.5,
            epochs: 2000,
            learning_rate: 1.0,
            optimizer: Optimizer::GradientDescent,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct ReliabilityFit {
    pub betas: Vec<ReliabilityVector>,
    pub report: TrainReport,
}

/// Pooled Dice loss of the fused prediction as a function of `theta`
/// (`beta = logistic(theta)`, source-major).
struct DiceObjective<'a> {
    /// `sources[t][n][c]`
    sources: &'a [Vec<Vec<f64>>],
    labels: &'a [usize],
    classes: usize,
}

impl Objective for DiceObjective<'_> {
    fn loss(&self, theta: &[f64]) -> f64 {
        self.loss_and_gradient(theta).0
    }

    fn loss_and_gradient(&self, theta: &[f64]) -> (f64, Vec<f64>) {
        let (t_count, c_count) = (self.sources.len(), self.classes);
        let beta: Vec<f64> = theta.iter().map(|&t| logistic(t)).collect();
        let n_count = self.labels.len();
        // fused outputs first: the Dice gradient needs the pooled sums
        let mut fused = Vec::with_capacity(n_count);
        let mut factors = vec![vec![0.0; c_count]; t_count];
        let mut all_factors = Vec::with_capacity(n_count);
        for n in 0..n_count {
            for t in 0..t_count {
                for c in 0..c_count {
                    let b = beta[t * c_count + c];
                    factors[t][c] = 1.0 - b + b * self.sources[t][n][c];
                }
            }
            let q: Vec<f64> = (0..c_count)
                .map(|c| (0..t_count).map(|t| factors[t][c]).product())
                .collect();
            fused.push(q);
            all_factors.push(factors.clone());
        }
        let mut overlap = 0.0;
        let mut volume = n_count as f64;
        let mut s = Vec::with_capacity(n_count);
        for (n, q) in fused.iter().enumerate() {
            let z: f64 = q.iter().sum();
            let row: Vec<f64> = q.iter().map(|v| v / z).collect();
            overlap += row[self.labels[n]];
            volume += row.iter().sum::<f64>();
            s.push((row, z));
        }
        let loss = 1.0 - 2.0 * overlap / volume;
        let mut grad = vec![0.0; theta.len()];
        for n in 0..n_count {
            let (row, z) = &s[n];
            let g: Vec<f64> = (0..c_count)
                .map(|c| {
                    let truth = if c == self.labels[n] { 1.0 } else { 0.0 };
                    -2.0 * (truth * volume - overlap) / (volume * volume)
                })
                .collect();
            let g_bar: f64 = g.iter().zip(row).map(|(a, b)| a * b).sum();
            for c in 0..c_count {
                let dq = (g[c] - g_bar) / z;
                for t in 0..t_count {
                    let excl: f64 = (0..t_count)
                        .filter(|&u| u != t)
                        .map(|u| all_factors[n][u][c])
                        .product();
                    let k = t * c_count + c;
                    grad[k] +=
                        dq * excl * (self.sources[t][n][c] - 1.0) * beta[k] * (1.0 - beta[k]);
                }
            }
        }
        (loss, grad)
    }
}

/// Learns one reliability vector per source. `sources[t][n]` is the contour
/// of source `t` on example `n`, `labels[n]` its class.
pub fn fit_reliability(
    sources: &[Vec<Vec<f64>>],
    labels: &[usize],
    config: &FitConfig,
) -> Result<ReliabilityFit> {
    if sources.is_empty() {
        return Err(Error::EmptyInput("sources"));
    }
    if labels.is_empty() {
        return Err(Error::EmptyInput("labelled examples"));
    }
    let classes = sources[0].first().map(Vec::len).unwrap_or(0);
    if classes == 0 {
        return Err(Error::EmptyInput("classes"));
    }
    for source in sources {
        if source.len() != labels.len() {
            return Err(Error::DimensionMismatch {
                expected: labels.len(),
                got: source.len(),
            });
        }
        for row in source {
            if row.len() != classes {
                return Err(Error::DimensionMismatch {
                    expected: classes,
                    got: row.len(),
                });
            }
            for &v in row {
                check_range("plausibility", v, 0.0, 1.0, "[0, 1]")?;
            }
        }
    }
    if let Some(&y) = labels.iter().find(|&&y| y >= classes) {
        return Err(Error::BadFrame {
            index: y,
            size: classes,
        });
    }
    check_range("initial beta", config.initial_beta, 0.0, 1.0, "[0, 1]")?;
    let b0 = config.initial_beta.clamp(1e-9, 1.0 - 1e-9);
    let theta0 = vec![(b0 / (1.0 - b0)).ln(); sources.len() * classes];
    let objective = DiceObjective {
        sources,
        labels,
        classes,
    };
    let optim = OptimConfig {
        epochs: config.epochs,
        learning_rate: config.learning_rate,
        optimizer: config.optimizer,
    };
    let (theta, report) = minimize(&objective, theta0, &optim)?;
    let betas = theta
        .chunks(classes)
        .map(|chunk| ReliabilityVector::new(chunk.iter().map(|&t| logistic(t)).collect()))
        .collect::<Result<Vec<_>>>()?;
    Ok(ReliabilityFit { betas, report })
}
