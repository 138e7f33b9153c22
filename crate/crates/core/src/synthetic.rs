//! Seeded synthetic datasets for experiments and fixtures.

use rand::Rng as _;
use rand_distr::{Distribution, Normal};

use crate::rng;

/// Geometry of the two interleaved half-circle classes.
#[derive(Clone, Debug, PartialEq)]
pub struct BananaSpec {
    pub radius: f64,
    /// Translation applied to the mirrored second half circle.
    pub offset: (f64, f64),
    pub noise: f64,
}

impl Default for BananaSpec {
    fn default() -> Self {
        BananaSpec {
            radius: 1.0,
            offset: (1.0, -0.5),
            noise: 0.15,
        }
    }
}

/// Two noisy interleaved half circles ("bananas"), labels 0 and 1.
///
/// Class 0 lies on the upper half circle `(r cos t, r sin t)`, class 1 on the
/// mirrored arc `(dx - r cos t, r + dy - r sin t)` where `(dx, dy)` is the
/// offset, with `t ~ U(0, pi)`. The default offset `(1, -0.5)` yields the usual
/// two-moons layout.
///
/// Points alternate between the classes; `n` odd gives class 0 one extra point.
pub fn bananas(n: usize, spec: &BananaSpec, seed: u64) -> (Vec<Vec<f64>>, Vec<usize>) {
    let mut rng = rng::stream(seed, "bananas");
    let noise = Normal::new(0.0, spec.noise).expect("noise level is finite");
    let r = spec.radius;
    let mut data = Vec::with_capacity(n);
    let mut labels = Vec::with_capacity(n);
    for i in 0..n {
        let t = rng.random::<f64>() * std::f64::consts::PI;
        let class = i % 2;
        let (x, y) = if class == 0 {
            (r * t.cos(), r * t.sin())
        } else {
            (spec.offset.0 - r * t.cos(), r + spec.offset.1 - r * t.sin())
        };
        data.push(vec![x + noise.sample(&mut rng), y + noise.sample(&mut rng)]);
        labels.push(class);
    }
    (data, labels)
}

/// Isotropic Gaussian blobs, `n_per` points around each center, labelled by
/// center index.
pub fn gaussian_blobs(
    centers: &[Vec<f64>],
    n_per: usize,
    sigma: f64,
    seed: u64,
) -> (Vec<Vec<f64>>, Vec<usize>) {
    let mut rng = rng::stream(seed, "blobs");
    let noise = Normal::new(0.0, sigma).expect("sigma is finite");
    let mut data = Vec::with_capacity(centers.len() * n_per);
    let mut labels = Vec::with_capacity(centers.len() * n_per);
    for (c, center) in centers.iter().enumerate() {
        for _ in 0..n_per {
            data.push(center.iter().map(|m| m + noise.sample(&mut rng)).collect());
            labels.push(c);
        }
    }
    (data, labels)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bananas_are_balanced_and_reproducible() {
        let spec = BananaSpec::default();
        let (x, y) = bananas(301, &spec, 4);
        assert_eq!(x.len(), 301);
        assert_eq!(y.iter().filter(|&&c| c == 0).count(), 151);
        assert_eq!(bananas(301, &spec, 4), (x.clone(), y));
        assert_ne!(bananas(301, &spec, 5).0, x);
    }

    #[test]
    fn noiseless_bananas_lie_on_their_arcs() {
        let spec = BananaSpec {
            noise: 1e-300,
            ..BananaSpec::default()
        };
        let (x, y) = bananas(50, &spec, 1);
        for (p, c) in x.iter().zip(y) {
            let (cx, cy) = if c == 0 { (0.0, 0.0) } else { (1.0, 0.5) };
            let r = ((p[0] - cx).powi(2) + (p[1] - cy).powi(2)).sqrt();
            assert!((r - 1.0).abs() < 1e-12);
        }
    }
}
