//! Evidential reasoning toolkit built on belief-function (Dempster-Shafer) theory.
//!
//! * [`mass`]: frames, mass functions, Dempster's rule, discounting.
//! * [`bba`]: models turning likelihoods and membership values into masses.
//! * [`cluster`]: fuzzy c-means and evidential c-means (credal partitions).
//! * [`classify`]: evidential k-NN, the evidential neural network and the
//!   weights-of-evidence RBF network, with gradient training.
//! * [`decide`]: pignistic and plausibility decisions, expected-utility bounds.
//! * [`fusion`]: probability/mass fusion and contextual-discounting fusion of
//!   several sources.
//! * [`metrics`]: overlap metrics, Hausdorff distance, calibration error and
//!   segmentation losses.

pub mod bba;
pub mod classify;
pub mod cluster;
pub mod decide;
mod error;
pub mod fusion;
pub mod kmeans;
pub mod mass;
pub mod metrics;
pub mod optim;
pub mod rng;
pub mod synthetic;
mod util;

pub use error::{Error, Result};
pub use mass::{ContourFunction, FocalSet, Frame, MassDocument, MassFunction, SimpleMass};
