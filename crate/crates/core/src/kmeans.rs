//! Lloyd's k-means with k-means++ seeding.
//!
//! Used to place classifier prototypes and to seed the c-means algorithms.

use rand::Rng as _;

use crate::error::{Error, Result};
use crate::rng;
use crate::util::{matrix_width, sq_dist};

#[derive(Clone, Debug, PartialEq)]
pub struct KMeans {
    pub centers: Vec<Vec<f64>>,
    pub assignments: Vec<usize>,
    pub inertia: f64,
    pub iterations: usize,
}

/// k-means++ seeding: the first center uniformly, then each next one with
/// probability proportional to its squared distance to the chosen centers.
pub fn plus_plus_seeds(data: &[Vec<f64>], k: usize, rng: &mut rng::Rng) -> Result<Vec<Vec<f64>>> {
    matrix_width(data, "k-means data")?;
    check_k(data.len(), k)?;
    let n = data.len();
    let mut chosen = vec![false; n];
    let first = rng.random_range(0..n);
    chosen[first] = true;
    let mut centers = vec![data[first].clone()];
    let mut nearest: Vec<f64> = data.iter().map(|x| sq_dist(x, &centers[0])).collect();
    while centers.len() < k {
        let total: f64 = nearest.iter().sum();
        let pick = if total > 0.0 {
            let mut target = rng.random::<f64>() * total;
            let mut pick = None;
            for (i, &d) in nearest.iter().enumerate() {
                if d > 0.0 {
                    pick = Some(i);
                    if target < d {
                        break;
                    }
                    target -= d;
                }
            }
            pick.expect("positive total implies a positive entry")
        } else {
            // every remaining point duplicates a center
            let free: Vec<usize> = (0..n).filter(|&i| !chosen[i]).collect();
            free[rng.random_range(0..free.len())]
        };
        chosen[pick] = true;
        centers.push(data[pick].clone());
        for (i, x) in data.iter().enumerate() {
            nearest[i] = nearest[i].min(sq_dist(x, &data[pick]));
        }
    }
    Ok(centers)
}

/// Runs k-means from k-means++ seeds drawn from stream `"kmeans"` of `seed`.
pub fn kmeans(data: &[Vec<f64>], k: usize, seed: u64, max_iter: usize) -> Result<KMeans> {
    let mut rng = rng::stream(seed, "kmeans");
    let centers = plus_plus_seeds(data, k, &mut rng)?;
    lloyd(data, centers, max_iter)
}

/// Best of `restarts` k-means runs by inertia; run `r` uses the child seed
/// `"restart-r"` of `seed`. Earlier runs win ties.
pub fn kmeans_best_of(
    data: &[Vec<f64>],
    k: usize,
    seed: u64,
    max_iter: usize,
    restarts: usize,
) -> Result<KMeans> {
    let mut best: Option<KMeans> = None;
    for r in 0..restarts.max(1) {
        let fit = kmeans(
            data,
            k,
            rng::child_seed(seed, &format!("restart-{r}")),
            max_iter,
        )?;
        if best.as_ref().is_none_or(|b| fit.inertia < b.inertia) {
            best = Some(fit);
        }
    }
    Ok(best.expect("at least one restart"))
}

/// Lloyd iterations from the given initial centers.
pub fn lloyd(data: &[Vec<f64>], mut centers: Vec<Vec<f64>>, max_iter: usize) -> Result<KMeans> {
    let dim = matrix_width(data, "k-means data")?;
    let k = centers.len();
    check_k(data.len(), k)?;
    let mut assignments = vec![usize::MAX; data.len()];
    let mut iterations = 0;
    for _ in 0..max_iter.max(1) {
        iterations += 1;
        let mut changed = false;
        for (i, x) in data.iter().enumerate() {
            let c = nearest_center(x, &centers).0;
            if assignments[i] != c {
                assignments[i] = c;
                changed = true;
            }
        }
        if !changed {
            break;
        }
        let mut sums = vec![vec![0.0; dim]; k];
        let mut counts = vec![0usize; k];
        for (x, &c) in data.iter().zip(&assignments) {
            counts[c] += 1;
            for (s, v) in sums[c].iter_mut().zip(x) {
                *s += v;
            }
        }
        for c in 0..k {
            if counts[c] == 0 {
                // refill an empty cluster with the point worst served by its center
                let (far, _) = data
                    .iter()
                    .enumerate()
                    .filter(|(i, _)| counts[assignments[*i]] > 1)
                    .map(|(i, x)| (i, sq_dist(x, &centers[assignments[i]])))
                    .fold(
                        (usize::MAX, -1.0),
                        |best, cur| if cur.1 > best.1 { cur } else { best },
                    );
                if far == usize::MAX {
                    continue;
                }
                let old = assignments[far];
                counts[old] -= 1;
                for (s, v) in sums[old].iter_mut().zip(&data[far]) {
                    *s -= v;
                }
                assignments[far] = c;
                counts[c] = 1;
                sums[c] = data[far].clone();
            }
        }
        for c in 0..k {
            if counts[c] > 0 {
                centers[c] = sums[c].iter().map(|s| s / counts[c] as f64).collect();
            }
        }
    }
    let inertia = data
        .iter()
        .zip(&assignments)
        .map(|(x, &c)| sq_dist(x, &centers[c]))
        .sum();
    Ok(KMeans {
        centers,
        assignments,
        inertia,
        iterations,
    })
}

pub(crate) fn nearest_center(x: &[f64], centers: &[Vec<f64>]) -> (usize, f64) {
    let mut best = (0, f64::INFINITY);
    for (c, center) in centers.iter().enumerate() {
        let d = sq_dist(x, center);
        if d < best.1 {
            best = (c, d);
        }
    }
    best
}

fn check_k(n: usize, k: usize) -> Result<()> {
    if k == 0 || k > n {
        Err(Error::InvalidConfig(format!(
            "cluster count {k} must be between 1 and the number of points {n}"
        )))
    } else {
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::synthetic::gaussian_blobs;

    #[test]
    fn k_equal_n_returns_the_points() {
        let data = vec![
            vec![0.0, 0.0],
            vec![1.0, 2.0],
            vec![5.0, -1.0],
            vec![3.0, 3.0],
        ];
        let fit = kmeans(&data, 4, 3, 50).unwrap();
        let mut centers = fit.centers.clone();
        centers.sort_by(|a, b| a.partial_cmp(b).unwrap());
        let mut expected = data.clone();
        expected.sort_by(|a, b| a.partial_cmp(b).unwrap());
        assert_eq!(centers, expected);
        assert_eq!(fit.inertia, 0.0);
    }

    #[test]
    fn recovers_two_blobs() {
        let sigma = 0.3;
        let (data, _) = gaussian_blobs(&[vec![0.0, 0.0], vec![6.0, 0.0]], 2000, sigma, 11);
        let fit = kmeans(&data, 2, 5, 100).unwrap();
        let mut centers = fit.centers.clone();
        centers.sort_by(|a, b| a[0].partial_cmp(&b[0]).unwrap());
        assert!(sq_dist(&centers[0], &[0.0, 0.0]).sqrt() < 0.1 * sigma);
        assert!(sq_dist(&centers[1], &[6.0, 0.0]).sqrt() < 0.1 * sigma);
    }

    #[test]
    fn deterministic_and_validated() {
        let (data, _) = gaussian_blobs(&[vec![0.0], vec![3.0]], 30, 1.0, 2);
        assert_eq!(
            kmeans(&data, 3, 9, 100).unwrap(),
            kmeans(&data, 3, 9, 100).unwrap()
        );
        assert!(kmeans(&data, 61, 9, 100).is_err());
        let best = kmeans_best_of(&data, 3, 9, 100, 5).unwrap();
        for r in 0..5 {
            let single =
                kmeans(&data, 3, rng::child_seed(9, &format!("restart-{r}")), 100).unwrap();
            assert!(best.inertia <= single.inertia);
        }
        assert!(kmeans(&data, 0, 9, 100).is_err());
    }
}
