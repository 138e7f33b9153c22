//! Full-batch first-order minimization of unconstrained parameter vectors.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Differentiable loss over an unconstrained parameter vector.
pub trait Objective {
    fn loss(&self, theta: &[f64]) -> f64;
    fn loss_and_gradient(&self, theta: &[f64]) -> (f64, Vec<f64>);
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum Optimizer {
    /// Gradient descent; the step is halved until the loss does not increase
    /// and grows by 10% after every accepted step.
    #[default]
    GradientDescent,
    Adam,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct OptimConfig {
    pub epochs: usize,
    pub learning_rate: f64,
    pub optimizer: Optimizer,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TrainReport {
    pub initial_loss: f64,
    pub final_loss: f64,
    /// Loss at the start of every epoch, then the final loss.
    pub losses: Vec<f64>,
}

const MAX_HALVINGS: usize = 40;

/// Minimizes `objective` from `theta`, returning the best parameters seen.
pub fn minimize<O: Objective>(
    objective: &O,
    mut theta: Vec<f64>,
    config: &OptimConfig,
) -> Result<(Vec<f64>, TrainReport)> {
    if !(config.learning_rate > 0.0) || !config.learning_rate.is_finite() {
        return Err(Error::OutOfRange {
            name: "learning rate",
            value: config.learning_rate,
            range: "(0, inf)",
        });
    }
    let (mut loss, mut grad) = objective.loss_and_gradient(&theta);
    check_finite(0, loss, &grad)?;
    let initial_loss = loss;
    let mut losses = Vec::with_capacity(config.epochs + 1);
    losses.push(loss);
    match config.optimizer {
        Optimizer::GradientDescent => {
            let mut step = config.learning_rate;
            for epoch in 1..=config.epochs {
                let mut accepted = false;
                for _ in 0..MAX_HALVINGS {
                    let trial: Vec<f64> =
                        theta.iter().zip(&grad).map(|(t, g)| t - step * g).collect();
                    let (l, g) = objective.loss_and_gradient(&trial);
                    if l.is_finite() && l <= loss {
                        theta = trial;
                        loss = l;
                        grad = g;
                        check_finite(epoch, loss, &grad)?;
                        step *= 1.1;
                        accepted = true;
                        break;
                    }
                    step *= 0.5;
                }
                losses.push(loss);
                if !accepted {
                    // no descent direction at machine precision
                    break;
                }
            }
        }
        Optimizer::Adam => {
            let (b1, b2, eps) = (0.9, 0.999, 1e-8);
            let mut m = vec![0.0; theta.len()];
            let mut v = vec![0.0; theta.len()];
            let mut best = (loss, theta.clone());
            for epoch in 1..=config.epochs {
                for k in 0..theta.len() {
                    m[k] = b1 * m[k] + (1.0 - b1) * grad[k];
                    v[k] = b2 * v[k] + (1.0 - b2) * grad[k] * grad[k];
                    let mh = m[k] / (1.0 - b1.powi(epoch as i32));
                    let vh = v[k] / (1.0 - b2.powi(epoch as i32));
                    theta[k] -= config.learning_rate * mh / (vh.sqrt() + eps);
                }
                let (l, g) = objective.loss_and_gradient(&theta);
                check_finite(epoch, l, &g)?;
                loss = l;
                grad = g;
                if loss < best.0 {
                    best = (loss, theta.clone());
                }
                losses.push(loss);
            }
            loss = best.0;
            theta = best.1;
        }
    }
    Ok((
        theta,
        TrainReport {
            initial_loss,
            final_loss: loss,
            losses,
        },
    ))
}

fn check_finite(epoch: usize, loss: f64, grad: &[f64]) -> Result<()> {
    if loss.is_finite() && grad.iter().all(|g| g.is_finite()) {
        Ok(())
    } else {
        Err(Error::NonFiniteLoss { epoch, loss })
    }
}

/// Central finite-difference gradient with step `h`.
pub fn numeric_gradient<O: Objective>(objective: &O, theta: &[f64], h: f64) -> Vec<f64> {
    let mut work = theta.to_vec();
    (0..theta.len())
        .map(|k| {
            work[k] = theta[k] + h;
            let up = objective.loss(&work);
            work[k] = theta[k] - h;
            let down = objective.loss(&work);
            work[k] = theta[k];
            (up - down) / (2.0 * h)
        })
        .collect()
}

/// `||a - b|| / max(||a||, ||b||)`, zero when both vanish.
pub fn relative_error(a: &[f64], b: &[f64]) -> f64 {
    let norm = |v: &[f64]| v.iter().map(|x| x * x).sum::<f64>().sqrt();
    let diff: Vec<f64> = a.iter().zip(b).map(|(x, y)| x - y).collect();
    let scale = norm(a).max(norm(b));
    if scale == 0.0 {
        0.0
    } else {
        norm(&diff) / scale
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    struct Quadratic;

    impl Objective for Quadratic {
        fn loss(&self, t: &[f64]) -> f64 {
            (t[0] - 3.0).powi(2) + 10.0 * (t[1] + 1.0).powi(2)
        }
        fn loss_and_gradient(&self, t: &[f64]) -> (f64, Vec<f64>) {
            (self.loss(t), vec![2.0 * (t[0] - 3.0), 20.0 * (t[1] + 1.0)])
        }
    }

    #[test]
    fn both_optimizers_reach_the_minimum() {
        for optimizer in [Optimizer::GradientDescent, Optimizer::Adam] {
            let cfg = OptimConfig {
                epochs: 3000,
                learning_rate: 0.05,
                optimizer,
            };
            let (t, report) = minimize(&Quadratic, vec![0.0, 0.0], &cfg).unwrap();
            assert!(
                (t[0] - 3.0).abs() < 1e-3 && (t[1] + 1.0).abs() < 1e-3,
                "{optimizer:?} {t:?}"
            );
            assert!(report.final_loss <= report.initial_loss);
        }
    }

    #[test]
    fn gradient_descent_never_increases_the_loss() {
        let cfg = OptimConfig {
            epochs: 50,
            learning_rate: 5.0,
            optimizer: Optimizer::GradientDescent,
        };
        let (_, report) = minimize(&Quadratic, vec![10.0, 10.0], &cfg).unwrap();
        for w in report.losses.windows(2) {
            assert!(w[1] <= w[0]);
        }
    }

    #[test]
    fn finite_differences() {
        let g = numeric_gradient(&Quadratic, &[1.0, 2.0], 1e-5);
        assert!(relative_error(&g, &Quadratic.loss_and_gradient(&[1.0, 2.0]).1) < 1e-8);
    }
}
