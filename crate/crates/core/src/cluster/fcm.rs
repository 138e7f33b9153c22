use crate::error::{Error, Result};
use crate::kmeans::plus_plus_seeds;
use crate::rng;
use crate::util::{matrix_width, sq_dist};

#[derive(Clone, Debug, PartialEq)]
pub struct FcmConfig {
    pub clusters: usize,
    /// Fuzzifier `m > 1`.
    pub fuzzifier: f64,
    pub max_iter: usize,
    /// Stop once no center moves farther than this.
    pub tol: f64,
    pub seed: u64,
}

impl FcmConfig {
    pub fn new(clusters: usize, seed: u64) -> Self {
        FcmConfig {
            clusters,
            fuzzifier: 2.0,
            max_iter: 300,
            tol: 1e-6,
            seed,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct FuzzyPartition {
    pub centers: Vec<Vec<f64>>,
    /// `N x C`, rows sum to one.
    pub memberships: Vec<Vec<f64>>,
    /// Objective after each membership update, starting from the seeds.
    pub objectives: Vec<f64>,
    pub iterations: usize,
    pub converged: bool,
}

impl FuzzyPartition {
    pub fn hard_labels(&self) -> Vec<usize> {
        self.memberships
            .iter()
            .map(|w| crate::util::argmax(w))
            .collect()
    }
}

/// Memberships of every point given the centers. A point lying on a center
/// belongs to it fully (the first such center if several coincide).
pub fn fcm_memberships(data: &[Vec<f64>], centers: &[Vec<f64>], fuzzifier: f64) -> Vec<Vec<f64>> {
    let exponent = 1.0 / (fuzzifier - 1.0);
    data.iter()
        .map(|x| {
            let d: Vec<f64> = centers.iter().map(|c| sq_dist(x, c)).collect();
            let mut row = vec![0.0; centers.len()];
            if let Some(hit) = d.iter().position(|&v| v == 0.0) {
                row[hit] = 1.0;
                return row;
            }
            for j in 0..centers.len() {
                let s: f64 = d.iter().map(|&dk| (d[j] / dk).powf(exponent)).sum();
                row[j] = 1.0 / s;
            }
            let total: f64 = row.iter().sum();
            row.iter_mut().for_each(|v| *v /= total);
            row
        })
        .collect()
}

/// `sum_ij w_ij^m ||x_i - c_j||^2`.
pub fn fcm_objective(
    data: &[Vec<f64>],
    centers: &[Vec<f64>],
    memberships: &[Vec<f64>],
    fuzzifier: f64,
) -> f64 {
    data.iter()
        .zip(memberships)
        .map(|(x, w)| {
            centers
                .iter()
                .zip(w)
                .map(|(c, &wij)| wij.powf(fuzzifier) * sq_dist(x, c))
                .sum::<f64>()
        })
        .sum()
}

fn weighted_centers(
    data: &[Vec<f64>],
    memberships: &[Vec<f64>],
    clusters: usize,
    dim: usize,
    fuzzifier: f64,
) -> Vec<Vec<f64>> {
    let mut sums = vec![vec![0.0; dim]; clusters];
    let mut weights = vec![0.0; clusters];
    for (x, w) in data.iter().zip(memberships) {
        for j in 0..clusters {
            let wm = w[j].powf(fuzzifier);
            weights[j] += wm;
            for (s, v) in sums[j].iter_mut().zip(x) {
                *s += wm * v;
            }
        }
    }
    sums.into_iter()
        .zip(weights)
        .map(|(s, w)| s.into_iter().map(|v| v / w).collect())
        .collect()
}

/// Fuzzy c-means by alternating center and membership updates, seeded with
/// k-means++ from stream `"fcm"`.
pub fn fcm_fit(data: &[Vec<f64>], config: &FcmConfig) -> Result<FuzzyPartition> {
    let dim = matrix_width(data, "clustering data")?;
    if !(config.fuzzifier > 1.0) || !config.fuzzifier.is_finite() {
        return Err(Error::OutOfRange {
            name: "fuzzifier",
            value: config.fuzzifier,
            range: "(1, inf)",
        });
    }
    let c = config.clusters;
    let mut rng = rng::stream(config.seed, "fcm");
    let mut centers = plus_plus_seeds(data, c, &mut rng)?;
    let mut memberships = fcm_memberships(data, &centers, config.fuzzifier);
    let mut objectives = vec![fcm_objective(
        data,
        &centers,
        &memberships,
        config.fuzzifier,
    )];
    let mut converged = false;
    let mut iterations = 0;
    while iterations < config.max_iter {
        iterations += 1;
        let next = weighted_centers(data, &memberships, c, dim, config.fuzzifier);
        let shift = centers
            .iter()
            .zip(&next)
            .map(|(a, b)| sq_dist(a, b).sqrt())
            .fold(0.0, f64::max);
        centers = next;
        memberships = fcm_memberships(data, &centers, config.fuzzifier);
        let j = fcm_objective(data, &centers, &memberships, config.fuzzifier);
        let prev = *objectives.last().expect("seeded objective");
        debug_assert!(
            j <= prev + 1e-9 * prev.abs().max(1.0),
            "objective increased from {prev} to {j}"
        );
        objectives.push(j);
        if shift < config.tol {
            converged = true;
            break;
        }
    }
    if !converged {
        log::warn!("fcm stopped after {iterations} iterations without converging");
    }
    Ok(FuzzyPartition {
        centers,
        memberships,
        objectives,
        iterations,
        converged,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::synthetic::gaussian_blobs;

    #[test]
    fn single_cluster_is_the_mean() {
        let data = vec![vec![0.0, 1.0], vec![2.0, 3.0], vec![4.0, -1.0]];
        let fit = fcm_fit(&data, &FcmConfig::new(1, 0)).unwrap();
        assert!(fit.memberships.iter().all(|w| w == &[1.0]));
        assert!(sq_dist(&fit.centers[0], &[2.0, 1.0]) < 1e-20);
    }

    #[test]
    fn equidistant_point_is_split() {
        let centers = vec![vec![-1.0, 0.0], vec![1.0, 0.0]];
        let w = fcm_memberships(&[vec![0.0, 3.0]], &centers, 2.0);
        assert_eq!(w[0], [0.5, 0.5]);
        let w = fcm_memberships(&[vec![1.0, 0.0]], &centers, 2.0);
        assert_eq!(w[0], [0.0, 1.0]);
    }

    #[test]
    fn separated_blobs_monotone_and_deterministic() {
        let sigma = 0.5;
        let (data, labels) =
            gaussian_blobs(&[vec![0.0, 0.0], vec![10.0 * sigma, 0.0]], 200, sigma, 3);
        let cfg = FcmConfig::new(2, 8);
        let fit = fcm_fit(&data, &cfg).unwrap();
        assert!(fit.converged);
        for pair in fit.objectives.windows(2) {
            assert!(pair[1] <= pair[0] + 1e-9);
        }
        for w in &fit.memberships {
            assert!((w.iter().sum::<f64>() - 1.0).abs() < 1e-9);
        }
        // match clusters to blobs by the first point
        let own = fit.hard_labels()[0];
        let confident = fit
            .memberships
            .iter()
            .zip(&labels)
            .filter(|(w, &y)| {
                let j = if y == 0 { own } else { 1 - own };
                w[j] > 0.9
            })
            .count();
        assert!(confident as f64 >= 0.95 * data.len() as f64);
        assert_eq!(fcm_fit(&data, &cfg).unwrap(), fit);
    }

    #[test]
    fn rejects_bad_config() {
        let data = vec![vec![0.0], vec![1.0]];
        let mut cfg = FcmConfig::new(2, 0);
        cfg.fuzzifier = 1.0;
        assert!(fcm_fit(&data, &cfg).is_err());
        assert!(fcm_fit(&data, &FcmConfig::new(3, 0)).is_err());
    }
}
