//! Basic belief assignment models.
//!
//! Each model maps some per-object evidence (class likelihoods, membership
//! values, a confidence factor, a raw feature) to a [`MassFunction`].
//! Models working on a binary frame `{w, not w}` take a two-label [`Frame`]
//! whose index 0 is the hypothesis and index 1 its negation; see
//! [`binary_frame`].

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{check_range, Error, Result};
use crate::mass::{ContourFunction, FocalSet, Frame, MassFunction};

/// Binary frame `{label, not_label}`.
pub fn binary_frame(label: &str) -> Result<Frame> {
    Frame::new([label.to_string(), format!("not_{label}")])
}

fn check_binary(frame: &Frame) -> Result<()> {
    if frame.len() == 2 {
        Ok(())
    } else {
        Err(Error::FrameSize {
            got: frame.len(),
            max: 2,
        })
    }
}

fn binary_mass(frame: &Frame, yes: f64, no: f64, omega: f64) -> Result<MassFunction> {
    MassFunction::from_assignments(
        frame,
        [
            (FocalSet::singleton(0), yes),
            (FocalSet::singleton(1), no),
            (frame.omega(), omega),
        ],
    )
}

/// Conditional likelihoods `l(w_c | x)` of one pattern.
#[derive(Clone, Debug, PartialEq)]
pub struct LikelihoodVector(Vec<f64>);

impl LikelihoodVector {
    pub fn new(values: Vec<f64>) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::EmptyInput("likelihood vector"));
        }
        for &v in &values {
            if !(v >= 0.0) || !v.is_finite() {
                return Err(Error::OutOfRange {
                    name: "likelihood",
                    value: v,
                    range: "[0, inf)",
                });
            }
        }
        if values.iter().all(|&v| v == 0.0) {
            return Err(Error::AllZeroLikelihood);
        }
        Ok(LikelihoodVector(values))
    }

    pub fn values(&self) -> &[f64] {
        &self.0
    }

    /// Normalization factor `1 / max l`.
    pub fn hbar(&self) -> f64 {
        1.0 / self.0.iter().cloned().fold(0.0, f64::max)
    }
}

/// Shafer's likelihood model: plausibility of each singleton proportional to
/// its likelihood, scaled so the most likely class is fully plausible.
///
/// Returns the contour function and the consonant mass function that induces it.
pub fn shafer(
    frame: &Frame,
    likelihoods: &LikelihoodVector,
) -> Result<(ContourFunction, MassFunction)> {
    let hbar = likelihoods.hbar();
    let pl: Vec<f64> = likelihoods
        .values()
        .iter()
        .map(|l| (hbar * l).min(1.0))
        .collect();
    let contour = ContourFunction::new(frame, pl)?;
    let mass = MassFunction::consonant_from_contour(&contour)?;
    Ok((contour, mass))
}

fn check_appriou(likelihood: f64, reliability: f64, hbar: f64) -> Result<f64> {
    check_range("reliability", reliability, 0.0, 1.0, "[0, 1]")?;
    if !(hbar > 0.0) || !hbar.is_finite() {
        return Err(Error::OutOfRange {
            name: "hbar",
            value: hbar,
            range: "(0, inf)",
        });
    }
    let scaled = hbar * likelihood;
    check_range("hbar * likelihood", scaled, 0.0, 1.0, "[0, 1]")?;
    Ok(scaled)
}

/// Appriou's first model: evidence only against the hypothesis.
pub fn appriou1(
    frame: &Frame,
    likelihood: f64,
    reliability: f64,
    hbar: f64,
) -> Result<MassFunction> {
    check_binary(frame)?;
    let scaled = check_appriou(likelihood, reliability, hbar)?;
    let against = reliability * (1.0 - scaled);
    binary_mass(frame, 0.0, against, 1.0 - against)
}

/// Appriou's second model: support split between the hypothesis and its
/// negation, a share `1 - reliability` left on the frame.
pub fn appriou2(
    frame: &Frame,
    likelihood: f64,
    reliability: f64,
    hbar: f64,
) -> Result<MassFunction> {
    check_binary(frame)?;
    let scaled = check_appriou(likelihood, reliability, hbar)?;
    binary_mass(
        frame,
        reliability * scaled / (1.0 + scaled),
        reliability / (1.0 + scaled),
        1.0 - reliability,
    )
}

/// Generator of confidence factors in `[0, 1]` from a membership value.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ConfidenceFunction {
    Identity,
    Sigmoid {
        midpoint: f64,
        slope: f64,
    },
    /// One for values at or above `center`, Gaussian decay below it.
    OneSidedGaussian {
        center: f64,
        width: f64,
    },
}

impl Default for ConfidenceFunction {
    fn default() -> Self {
        ConfidenceFunction::Sigmoid {
            midpoint: 0.5,
            slope: 10.0,
        }
    }
}

impl ConfidenceFunction {
    pub fn eval(&self, value: f64) -> f64 {
        match *self {
            ConfidenceFunction::Identity => value.clamp(0.0, 1.0),
            ConfidenceFunction::Sigmoid { midpoint, slope } => {
                crate::util::logistic(slope * (value - midpoint))
            }
            ConfidenceFunction::OneSidedGaussian { center, width } => {
                if value >= center {
                    1.0
                } else {
                    let z = (value - center) / width;
                    (-0.5 * z * z).exp()
                }
            }
        }
    }
}

/// Binary-frame transfer of a confidence factor `cf` with intercept `a` and
/// maximum support `b`. Both singleton masses are clamped at zero.
pub fn bfod(frame: &Frame, cf: f64, a: f64, b: f64) -> Result<MassFunction> {
    check_binary(frame)?;
    check_range("cf", cf, 0.0, 1.0, "[0, 1]")?;
    if !(0.0..1.0).contains(&a) {
        return Err(Error::OutOfRange {
            name: "A",
            value: a,
            range: "[0, 1)",
        });
    }
    if !(b > 0.0 && b <= 1.0) {
        return Err(Error::OutOfRange {
            name: "B",
            value: b,
            range: "(0, 1]",
        });
    }
    let slope = b / (1.0 - a);
    let yes = (slope * (cf - a)).max(0.0);
    let no = (-slope * cf + b).max(0.0);
    let omega = 1.0 - yes - no;
    if omega < -crate::mass::SUM_TOLERANCE {
        return Err(Error::NonNormalizable(format!("m(Omega) = {omega}")));
    }
    binary_mass(frame, yes, no, omega.max(0.0))
}

/// Overlap area of two isosceles triangles with base width 2, apexes one unit
/// apart and heights `u1`, `u2`.
pub fn zhu_overlap(u1: f64, u2: f64) -> f64 {
    if u1 + u2 == 0.0 {
        0.0
    } else {
        u1 * u2 / (2.0 * (u1 + u2))
    }
}

/// Overlap at maximum ambiguity, `u1 = u2 = 0.5`.
pub const ZHU_MAX_OVERLAP: f64 = 0.125;

/// Default ambiguity threshold of Zhu's model.
pub const ZHU_EPSILON: f64 = 0.1;

#[derive(Clone, Debug)]
pub struct ZhuMass {
    pub mass: MassFunction,
    pub overlap: f64,
    /// Double-hypothesis mass before renormalization, when one was formed.
    pub pair_mass: Option<f64>,
}

/// Zhu's model over adjacent clusters `lower` and `lower + 1`: singleton
/// masses are the membership values; a double hypothesis is added when the
/// two memberships differ by less than `epsilon`. The result is renormalized.
pub fn zhu_mass(
    frame: &Frame,
    lower: usize,
    u_c: f64,
    u_next: f64,
    epsilon: f64,
) -> Result<ZhuMass> {
    frame.check_index(lower + 1)?;
    check_range("membership", u_c, 0.0, 1.0, "[0, 1]")?;
    check_range("membership", u_next, 0.0, 1.0, "[0, 1]")?;
    let overlap = zhu_overlap(u_c, u_next);
    let c = FocalSet::singleton(lower);
    let next = FocalSet::singleton(lower + 1);
    let mut entries = vec![(c, u_c), (next, u_next)];
    let mut pair_mass = None;
    if (u_c - u_next).abs() < epsilon {
        let m = overlap / (2.0 * ZHU_MAX_OVERLAP);
        pair_mass = Some(m);
        entries.push((c.union(next), m));
    }
    let mass = MassFunction::normalized_from(frame, entries)?;
    Ok(ZhuMass {
        mass,
        overlap,
        pair_mass,
    })
}

/// Uncertainty category of the ratio membership-value transformation.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Uncertainty {
    #[serde(rename = "NU")]
    None,
    #[serde(rename = "SU")]
    Semi,
    #[serde(rename = "PU")]
    Perfect,
}

impl fmt::Display for Uncertainty {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Uncertainty::None => "NU",
            Uncertainty::Semi => "SU",
            Uncertainty::Perfect => "PU",
        })
    }
}

#[derive(Clone, Debug)]
pub struct RatioMv {
    pub category: Uncertainty,
    /// `max(f1, f2) / min(f1, f2)`; infinite when one value is zero.
    pub ratio: f64,
    /// Masses of `{w1}`, `{w2}` and the frame before renormalization.
    pub raw: [f64; 3],
    pub mass: MassFunction,
}

pub const RATIO_MV_ALPHA: f64 = 1.5;
pub const RATIO_MV_BETA: f64 = 3.0;

/// Ratio membership-value transformation on a binary frame.
///
/// Ratios above `beta` give no uncertainty, ratios in `(alpha, beta]` semi
/// uncertainty and ratios at or below `alpha` perfect uncertainty.
pub fn ratio_mv(frame: &Frame, f1: f64, f2: f64, alpha: f64, beta: f64) -> Result<RatioMv> {
    check_binary(frame)?;
    check_range("f1", f1, 0.0, 1.0, "[0, 1]")?;
    check_range("f2", f2, 0.0, 1.0, "[0, 1]")?;
    if !(alpha >= 1.0 && beta > alpha && beta.is_finite()) {
        return Err(Error::InvalidConfig(format!(
            "thresholds must satisfy 1 <= alpha < beta, got alpha = {alpha}, beta = {beta}"
        )));
    }
    if f1 == 0.0 && f2 == 0.0 {
        return Err(Error::NonNormalizable(
            "both membership values are zero".into(),
        ));
    }
    let (lo, hi) = if f1 <= f2 { (f1, f2) } else { (f2, f1) };
    let ratio = if lo == 0.0 { f64::INFINITY } else { hi / lo };
    let (category, raw) = if ratio > beta {
        (Uncertainty::None, [f1, f2, 0.0])
    } else if ratio > alpha {
        let lambda = (f1 - f2).abs() / (beta - alpha);
        (
            Uncertainty::Semi,
            [
                (f1 - lambda / 2.0).max(0.0),
                (f2 - lambda / 2.0).max(0.0),
                lambda,
            ],
        )
    } else {
        let share = (f1 + f2) / 3.0;
        (Uncertainty::Perfect, [share, share, share])
    };
    let mass = MassFunction::normalized_from(
        frame,
        [
            (FocalSet::singleton(0), raw[0]),
            (FocalSet::singleton(1), raw[1]),
            (frame.omega(), raw[2]),
        ],
    )?;
    Ok(RatioMv {
        category,
        ratio,
        raw,
        mass,
    })
}

/// Mean, variance and size of a one-dimensional cluster.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ClusterStats {
    pub mean: f64,
    pub variance: f64,
    pub count: usize,
}

impl ClusterStats {
    /// Sample mean and (biased) variance of the cluster members.
    pub fn from_members(members: &[f64]) -> Result<Self> {
        if members.is_empty() {
            return Err(Error::EmptyInput("cluster members"));
        }
        let n = members.len() as f64;
        let mean = members.iter().sum::<f64>() / n;
        let variance = members.iter().map(|x| (x - mean) * (x - mean)).sum::<f64>() / n;
        Ok(ClusterStats {
            mean,
            variance,
            count: members.len(),
        })
    }

    pub fn sd(&self) -> f64 {
        self.variance.sqrt()
    }
}

pub fn gaussian_density(x: f64, mean: f64, sd: f64) -> f64 {
    let z = (x - mean) / sd;
    (-0.5 * z * z).exp() / (sd * (2.0 * std::f64::consts::PI).sqrt())
}

/// Gaussian-distribution model: each focal set gets the density of `x` under
/// a Gaussian fitted to its clusters (mean of means, largest deviation), and the
/// values are renormalized over `focal_structure`.
pub fn gd_mass(
    frame: &Frame,
    x: f64,
    stats: &[ClusterStats],
    focal_structure: &[FocalSet],
) -> Result<MassFunction> {
    if stats.len() != frame.len() {
        return Err(Error::DimensionMismatch {
            expected: frame.len(),
            got: stats.len(),
        });
    }
    for s in stats {
        if !(s.variance > 0.0) || !s.mean.is_finite() {
            return Err(Error::OutOfRange {
                name: "cluster variance",
                value: s.variance,
                range: "(0, inf)",
            });
        }
    }
    if focal_structure.is_empty() {
        return Err(Error::EmptyInput("focal structure"));
    }
    let mut entries = Vec::with_capacity(focal_structure.len());
    for &set in focal_structure {
        frame.check_set(set)?;
        if set.is_empty() {
            return Err(Error::InvalidConfig("empty set in focal structure".into()));
        }
        let members: Vec<&ClusterStats> = set.indices().map(|i| &stats[i]).collect();
        let mean = members.iter().map(|s| s.mean).sum::<f64>() / members.len() as f64;
        let sd = members.iter().map(|s| s.sd()).fold(0.0, f64::max);
        entries.push((set, gaussian_density(x, mean, sd)));
    }
    MassFunction::normalized_from(frame, entries)
}
