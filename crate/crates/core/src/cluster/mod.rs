//! Fuzzy and evidential c-means.
//!
//! [`fcm_fit`] produces a fuzzy partition (row-stochastic memberships);
//! [`ecm_fit`] produces a [`CredalPartition`], where each object carries a mass
//! function over a declared family of cluster subsets plus an outlier mass on
//! the empty set.

mod credal;
mod ecm;
mod fcm;

pub use credal::{credal_to_mass, focal_structure, CredalPartition};
pub use ecm::{ecm_fit, ecm_masses, ecm_objective, EcmConfig, EcmFit};
pub use fcm::{fcm_fit, fcm_memberships, fcm_objective, FcmConfig, FuzzyPartition};
