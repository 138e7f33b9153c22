use nalgebra::DMatrix;

use super::credal::CredalPartition;
use crate::error::{Error, Result};
use crate::kmeans::plus_plus_seeds;
use crate::mass::{FocalSet, Frame};
use crate::rng;
use crate::util::{matrix_width, sq_dist};

#[derive(Clone, Debug, PartialEq)]
pub struct EcmConfig {
    pub clusters: usize,
    /// Cardinality penalty exponent on `|A_j|`.
    pub alpha: f64,
    /// Mass exponent, `> 1`.
    pub beta: f64,
    /// Distance of every object to the empty set.
    pub delta: f64,
    pub max_iter: usize,
    /// Relative objective change below which the fit stops.
    pub tol: f64,
    pub seed: u64,
}

impl EcmConfig {
    pub fn new(clusters: usize, seed: u64) -> Self {
        EcmConfig {
            clusters,
            alpha: 1.0,
            beta: 2.0,
            delta: 10.0,
            max_iter: 200,
            tol: 1e-7,
            seed,
        }
    }

    fn validate(&self) -> Result<()> {
        if !(self.beta > 1.0) || !self.beta.is_finite() {
            return Err(Error::OutOfRange {
                name: "beta",
                value: self.beta,
                range: "(1, inf)",
            });
        }
        if !(self.delta > 0.0) || !self.delta.is_finite() {
            return Err(Error::OutOfRange {
                name: "delta",
                value: self.delta,
                range: "(0, inf)",
            });
        }
        if !self.alpha.is_finite() {
            return Err(Error::OutOfRange {
                name: "alpha",
                value: self.alpha,
                range: "finite",
            });
        }
        Ok(())
    }
}

#[derive(Clone, Debug)]
pub struct EcmFit {
    pub partition: CredalPartition,
    /// One prototype per cluster.
    pub prototypes: Vec<Vec<f64>>,
    pub objective: f64,
    pub iterations: usize,
    pub converged: bool,
}

/// Barycenters of the cluster prototypes for every focal set.
fn barycenters(prototypes: &[Vec<f64>], focal: &[FocalSet]) -> Vec<Vec<f64>> {
    let dim = prototypes[0].len();
    focal
        .iter()
        .map(|set| {
            let mut v = vec![0.0; dim];
            for l in set.indices() {
                for (a, b) in v.iter_mut().zip(&prototypes[l]) {
                    *a += b;
                }
            }
            let n = set.len() as f64;
            v.iter_mut().for_each(|a| *a /= n);
            v
        })
        .collect()
}

/// Optimal masses for fixed prototypes: `(masses over focal, empty masses)`.
pub fn ecm_masses(
    data: &[Vec<f64>],
    prototypes: &[Vec<f64>],
    focal: &[FocalSet],
    config: &EcmConfig,
) -> (Vec<Vec<f64>>, Vec<f64>) {
    let centers = barycenters(prototypes, focal);
    let p = -1.0 / (config.beta - 1.0);
    let card: Vec<f64> = focal
        .iter()
        .map(|s| (s.len() as f64).powf(config.alpha * p))
        .collect();
    let empty_term = (config.delta * config.delta).powf(p);
    let mut masses = Vec::with_capacity(data.len());
    let mut empty = Vec::with_capacity(data.len());
    for x in data {
        let d: Vec<f64> = centers.iter().map(|c| sq_dist(x, c)).collect();
        let mut row = vec![0.0; focal.len()];
        if let Some(hit) = d.iter().position(|&v| v == 0.0) {
            row[hit] = 1.0;
            masses.push(row);
            empty.push(0.0);
            continue;
        }
        for j in 0..focal.len() {
            row[j] = card[j] * d[j].powf(p);
        }
        let total: f64 = row.iter().sum::<f64>() + empty_term;
        row.iter_mut().for_each(|v| *v /= total);
        empty.push(empty_term / total);
        masses.push(row);
    }
    (masses, empty)
}

/// The criterion `sum_ij |A_j|^alpha m_ij^beta d_ij^2 + sum_i delta^2 m_i0^beta`.
pub fn ecm_objective(
    data: &[Vec<f64>],
    prototypes: &[Vec<f64>],
    focal: &[FocalSet],
    masses: &[Vec<f64>],
    empty: &[f64],
    config: &EcmConfig,
) -> f64 {
    let centers = barycenters(prototypes, focal);
    let delta2 = config.delta * config.delta;
    data.iter()
        .zip(masses.iter().zip(empty))
        .map(|(x, (row, &e))| {
            let fit: f64 = focal
                .iter()
                .zip(row.iter().zip(&centers))
                .map(|(s, (&m, c))| {
                    (s.len() as f64).powf(config.alpha) * m.powf(config.beta) * sq_dist(x, c)
                })
                .sum();
            fit + delta2 * e.powf(config.beta)
        })
        .sum()
}

/// Solves the linear system for the prototypes minimizing the criterion at
/// fixed masses. `None` if the system is singular (some cluster carries no mass).
fn update_prototypes(
    data: &[Vec<f64>],
    masses: &[Vec<f64>],
    focal: &[FocalSet],
    config: &EcmConfig,
    dim: usize,
) -> Option<Vec<Vec<f64>>> {
    let c = config.clusters;
    let mut h = DMatrix::<f64>::zeros(c, c);
    let mut b = DMatrix::<f64>::zeros(c, dim);
    for (x, row) in data.iter().zip(masses) {
        for (set, &m) in focal.iter().zip(row) {
            if m == 0.0 {
                continue;
            }
            let size = set.len() as f64;
            let mb = m.powf(config.beta);
            let w1 = size.powf(config.alpha - 1.0) * mb;
            let w2 = size.powf(config.alpha - 2.0) * mb;
            for l in set.indices() {
                for q in 0..dim {
                    b[(l, q)] += w1 * x[q];
                }
                for k in set.indices() {
                    h[(l, k)] += w2;
                }
            }
        }
    }
    let max_diag = (0..c).map(|l| h[(l, l)]).fold(0.0, f64::max);
    if (0..c).any(|l| h[(l, l)] <= 1e-12 * max_diag) {
        return None;
    }
    let v = h.lu().solve(&b)?;
    if v.iter().any(|x| !x.is_finite()) {
        return None;
    }
    Some(
        (0..c)
            .map(|l| (0..dim).map(|q| v[(l, q)]).collect())
            .collect(),
    )
}

/// Evidential c-means by alternating closed-form mass updates and prototype
/// solves, seeded with k-means++ from stream `"ecm"`.
pub fn ecm_fit(data: &[Vec<f64>], config: &EcmConfig, focal: &[FocalSet]) -> Result<EcmFit> {
    let dim = matrix_width(data, "clustering data")?;
    config.validate()?;
    let frame = Frame::indexed(config.clusters)?;
    if focal.is_empty() {
        return Err(Error::EmptyInput("focal structure"));
    }
    for &set in focal {
        frame.check_set(set)?;
        if set.is_empty() {
            return Err(Error::InvalidConfig("empty set in focal structure".into()));
        }
    }
    let mut rng = rng::stream(config.seed, "ecm");
    let mut prototypes = plus_plus_seeds(data, config.clusters, &mut rng)?;
    let (mut masses, mut empty) = ecm_masses(data, &prototypes, focal, config);
    let mut objective = ecm_objective(data, &prototypes, focal, &masses, &empty, config);
    let mut converged = false;
    let mut iterations = 0;
    while iterations < config.max_iter {
        iterations += 1;
        match update_prototypes(data, &masses, focal, config, dim) {
            Some(p) => prototypes = p,
            None => {
                reseed(data, &mut prototypes, &masses, focal, config.clusters);
                log::debug!("ecm reseeded an empty cluster at iteration {iterations}");
            }
        }
        let (m, e) = ecm_masses(data, &prototypes, focal, config);
        masses = m;
        empty = e;
        let next = ecm_objective(data, &prototypes, focal, &masses, &empty, config);
        let change = (objective - next).abs();
        objective = next;
        if change <= config.tol * objective.abs().max(f64::MIN_POSITIVE) {
            converged = true;
            break;
        }
    }
    if !converged {
        log::warn!("ecm stopped after {iterations} iterations, objective {objective}");
    }
    let partition = CredalPartition::new(&frame, focal.to_vec(), masses, empty)?;
    Ok(EcmFit {
        partition,
        prototypes,
        objective,
        iterations,
        converged,
    })
}

/// Moves every cluster without mass onto the object worst explained by the
/// current prototypes.
fn reseed(
    data: &[Vec<f64>],
    prototypes: &mut [Vec<f64>],
    masses: &[Vec<f64>],
    focal: &[FocalSet],
    clusters: usize,
) {
    let mut support = vec![0.0; clusters];
    for row in masses {
        for (set, &m) in focal.iter().zip(row) {
            for l in set.indices() {
                support[l] += m;
            }
        }
    }
    let max_support = support.iter().cloned().fold(0.0, f64::max);
    for l in 0..clusters {
        if support[l] > 1e-12 * max_support {
            continue;
        }
        let far = data
            .iter()
            .map(|x| {
                prototypes
                    .iter()
                    .map(|p| sq_dist(x, p))
                    .fold(f64::INFINITY, f64::min)
            })
            .enumerate()
            .fold(
                (0, -1.0),
                |best, (i, d)| if d > best.1 { (i, d) } else { best },
            )
            .0;
        prototypes[l] = data[far].clone();
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cluster::focal_structure;
    use crate::synthetic::gaussian_blobs;

    fn three_blobs() -> (Vec<Vec<f64>>, Vec<usize>) {
        gaussian_blobs(
            &[vec![0.0, 0.0], vec![6.0, 0.0], vec![3.0, 5.0]],
            60,
            0.5,
            21,
        )
    }

    #[test]
    fn rows_normalized_and_anti_monotone() {
        let (data, _) = three_blobs();
        let focal = focal_structure(3, true);
        let fit = ecm_fit(&data, &EcmConfig::new(3, 4), &focal).unwrap();
        assert!(fit.converged);
        let centers = barycenters(&fit.prototypes, &focal);
        for (i, x) in data.iter().enumerate() {
            let row = &fit.partition.masses()[i];
            let total = row.iter().sum::<f64>() + fit.partition.empty_mass()[i];
            assert!((total - 1.0).abs() < 1e-9);
            for j in 0..focal.len() {
                for k in 0..focal.len() {
                    if focal[j].len() == focal[k].len()
                        && sq_dist(x, &centers[j]) < sq_dist(x, &centers[k])
                    {
                        assert!(row[j] >= row[k]);
                    }
                }
            }
        }
    }

    #[test]
    fn object_at_a_prototype_and_at_a_midpoint() {
        let (data, _) = three_blobs();
        let focal = focal_structure(3, true);
        let cfg = EcmConfig::new(3, 4);
        let fit = ecm_fit(&data, &cfg, &focal).unwrap();
        let p = &fit.prototypes;
        let mid: Vec<f64> = p[0].iter().zip(&p[1]).map(|(a, b)| (a + b) / 2.0).collect();
        let probes = vec![p[0].clone(), mid];
        let (m, _) = ecm_masses(&probes, p, &focal, &cfg);
        assert_eq!(crate::util::argmax(&m[0]), 0);
        let pair = focal
            .iter()
            .position(|s| *s == FocalSet::from_indices([0, 1]))
            .unwrap();
        assert!(m[1][pair] > m[1][0] && m[1][pair] > m[1][1]);
    }

    #[test]
    fn midpoint_pair_mass_dominates_off_axis() {
        // symmetric distances: the pair's barycenter is nearer than either singleton
        let protos = vec![vec![-1.0, 0.0], vec![1.0, 0.0]];
        let focal = focal_structure(2, false);
        let mut cfg = EcmConfig::new(2, 0);
        cfg.delta = 100.0;
        let (m, e) = ecm_masses(&[vec![0.0, 0.5]], &protos, &focal, &cfg);
        assert!(m[0][2] > m[0][0]);
        assert_eq!(m[0][0], m[0][1]);
        assert!(e[0] < 1e-3);
    }

    #[test]
    fn deterministic() {
        let (data, _) = three_blobs();
        let focal = focal_structure(3, false);
        let a = ecm_fit(&data, &EcmConfig::new(3, 9), &focal).unwrap();
        let b = ecm_fit(&data, &EcmConfig::new(3, 9), &focal).unwrap();
        assert_eq!(a.partition, b.partition);
        assert_eq!(a.prototypes, b.prototypes);
    }

    #[test]
    fn rejects_bad_config() {
        let data = vec![vec![0.0], vec![1.0]];
        let focal = focal_structure(2, false);
        let mut cfg = EcmConfig::new(2, 0);
        cfg.beta = 1.0;
        assert!(ecm_fit(&data, &cfg, &focal).is_err());
        let mut cfg = EcmConfig::new(2, 0);
        cfg.delta = 0.0;
        assert!(ecm_fit(&data, &cfg, &focal).is_err());
        assert!(ecm_fit(&data, &EcmConfig::new(2, 0), &[FocalSet::EMPTY]).is_err());
    }
}
