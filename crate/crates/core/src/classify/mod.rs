//! Evidential classifiers.
//!
//! * [`eknn_predict`]: the evidential k-nearest-neighbour rule.
//! * [`EnnModel`]: prototype network whose per-prototype simple masses are
//!   pooled by Dempster's rule into a mass on singletons and the frame.
//! * [`RbfModel`]: binary RBF network whose hidden activations times output
//!   weights act as weights of evidence; its logistic output is a normalized
//!   plausibility.
//!
//! ENN and RBF models are trained by minimizing their regularized losses over
//! an unconstrained parameterization (see [`EnnObjective`], [`RbfObjective`]).

mod dataset;
mod eknn;
mod enn;
mod init;
mod rbf;

pub use dataset::Dataset;
pub use eknn::{eknn_predict, mean_squared_distance, EknnConfig, EknnModel, Gamma};
pub use enn::{enn_train, EnnModel, EnnObjective};
pub use init::{kmeans_prototype_init, Init, TrainConfig};
pub use rbf::{rbf_masses, rbf_train, RbfModel, RbfObjective, RbfOutput};

use crate::error::{Error, Result};
use crate::mass::{FocalSet, Frame, MassFunction};

/// Dempster combination of masses `m_i({c}) = u_ic s_i`, `m_i(frame) = 1 - s_i`
/// in closed form. Returns masses of the singletons and of the frame.
pub(crate) fn pool_singleton_evidence(
    classes: usize,
    support: &[f64],
    membership: impl Fn(usize, usize) -> f64,
) -> Result<(Vec<f64>, f64)> {
    let mut plaus = vec![1.0; classes];
    let mut ignorance = 1.0;
    for (i, &s) in support.iter().enumerate() {
        for (c, p) in plaus.iter_mut().enumerate() {
            *p *= 1.0 - s + membership(i, c) * s;
        }
        ignorance *= 1.0 - s;
    }
    let singles: Vec<f64> = plaus.iter().map(|p| (p - ignorance).max(0.0)).collect();
    let total = singles.iter().sum::<f64>() + ignorance;
    if !(total > 0.0) {
        return Err(Error::TotalConflict(1.0));
    }
    Ok((
        singles.iter().map(|m| m / total).collect(),
        ignorance / total,
    ))
}

pub(crate) fn singletons_and_frame(
    frame: &Frame,
    singles: &[f64],
    omega: f64,
) -> Result<MassFunction> {
    let entries = singles
        .iter()
        .enumerate()
        .map(|(c, &m)| (FocalSet::singleton(c), m))
        .chain([(frame.omega(), omega)]);
    MassFunction::normalized_from(frame, entries)
}

pub(crate) fn check_dim(expected: usize, x: &[f64]) -> Result<()> {
    if x.len() != expected {
        return Err(Error::DimensionMismatch {
            expected,
            got: x.len(),
        });
    }
    if x.iter().any(|v| !v.is_finite()) {
        return Err(Error::InvalidConfig("input features must be finite".into()));
    }
    Ok(())
}
