//! Segmentation metrics, calibration error and training losses.
//!
//! Empty-set conventions: an overlap ratio is 1 when both compared sets are
//! empty and 0 when exactly one is.

use std::fmt::Write as _;

use crate::classify::{EnnModel, RbfModel};
use crate::error::{check_range, Error, Result};
use crate::util::{matrix_width, sq_dist};

/// Flat class-index array, optionally with a spatial shape.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LabelArray {
    labels: Vec<usize>,
    classes: usize,
    shape: Option<Vec<usize>>,
}

impl LabelArray {
    pub fn new(labels: Vec<usize>, classes: usize) -> Result<Self> {
        if let Some(&bad) = labels.iter().find(|&&y| y >= classes) {
            return Err(Error::BadFrame {
                index: bad,
                size: classes,
            });
        }
        Ok(LabelArray {
            labels,
            classes,
            shape: None,
        })
    }

    pub fn with_shape(mut self, shape: Vec<usize>) -> Result<Self> {
        let volume: usize = shape.iter().product();
        if volume != self.labels.len() {
            return Err(Error::DimensionMismatch {
                expected: self.labels.len(),
                got: volume,
            });
        }
        self.shape = Some(shape);
        Ok(self)
    }

    pub fn labels(&self) -> &[usize] {
        &self.labels
    }

    pub fn classes(&self) -> usize {
        self.classes
    }

    pub fn shape(&self) -> Option<&[usize]> {
        self.shape.as_deref()
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }
}

/// `N x C` probabilities, rows summing to one within `1e-6`.
#[derive(Clone, Debug, PartialEq)]
pub struct ProbArray {
    rows: Vec<Vec<f64>>,
    classes: usize,
}

impl ProbArray {
    pub fn new(rows: Vec<Vec<f64>>) -> Result<Self> {
        let classes = matrix_width(&rows, "probability array")?;
        for row in &rows {
            for &v in row {
                check_range("probability", v, 0.0, 1.0, "[0, 1]")?;
            }
            let total: f64 = row.iter().sum();
            if (total - 1.0).abs() > 1e-6 {
                return Err(Error::SumNotOne(total));
            }
        }
        Ok(ProbArray { rows, classes })
    }

    pub fn rows(&self) -> &[Vec<f64>] {
        &self.rows
    }

    pub fn classes(&self) -> usize {
        self.classes
    }

    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Overlap {
    pub dice: f64,
    pub sensitivity: f64,
    pub precision: f64,
    pub true_positives: usize,
    pub false_positives: usize,
    pub false_negatives: usize,
}

fn ratio(num: usize, den: usize, both_empty: bool) -> f64 {
    if den == 0 {
        if both_empty {
            1.0
        } else {
            0.0
        }
    } else {
        num as f64 / den as f64
    }
}

/// Dice score, sensitivity and precision of `pred` against `truth` for one class.
pub fn overlap_metrics(pred: &LabelArray, truth: &LabelArray, positive: usize) -> Result<Overlap> {
    if pred.len() != truth.len() {
        return Err(Error::DimensionMismatch {
            expected: truth.len(),
            got: pred.len(),
        });
    }
    let (mut tp, mut fp, mut fn_) = (0, 0, 0);
    for (&p, &t) in pred.labels().iter().zip(truth.labels()) {
        match (p == positive, t == positive) {
            (true, true) => tp += 1,
            (true, false) => fp += 1,
            (false, true) => fn_ += 1,
            (false, false) => {}
        }
    }
    let both_empty = tp + fp == 0 && tp + fn_ == 0;
    Ok(Overlap {
        dice: if both_empty {
            1.0
        } else {
            2.0 * tp as f64 / (fp + 2 * tp + fn_) as f64
        },
        sensitivity: ratio(tp, tp + fn_, both_empty),
        precision: ratio(tp, tp + fp, both_empty),
        true_positives: tp,
        false_positives: fp,
        false_negatives: fn_,
    })
}

/// Largest distance from a point of `from` to its nearest point of `to`.
pub fn directed_hausdorff(from: &[Vec<f64>], to: &[Vec<f64>]) -> Result<f64> {
    check_points(from, to)?;
    Ok(directed(from, to))
}

fn directed(from: &[Vec<f64>], to: &[Vec<f64>]) -> f64 {
    from.iter()
        .map(|a| {
            to.iter()
                .map(|b| sq_dist(a, b))
                .fold(f64::INFINITY, f64::min)
        })
        .fold(0.0, f64::max)
        .sqrt()
}

fn check_points(a: &[Vec<f64>], b: &[Vec<f64>]) -> Result<()> {
    let da = matrix_width(a, "point set")?;
    let db = matrix_width(b, "point set")?;
    if da != db {
        return Err(Error::DimensionMismatch {
            expected: da,
            got: db,
        });
    }
    Ok(())
}

/// Symmetric Hausdorff distance between two nonempty point sets (Euclidean).
pub fn hausdorff(s: &[Vec<f64>], g: &[Vec<f64>]) -> Result<f64> {
    check_points(s, g)?;
    Ok(directed(s, g).max(directed(g, s)))
}

/// Expected calibration error over `bins` equal-width bins on `[0, 1]`.
/// Bins are left-closed, the last one also right-closed; empty bins count zero.
pub fn ece(confidences: &[f64], correct: &[bool], bins: usize) -> Result<f64> {
    ece_masked(confidences, correct, None, bins)
}

/// [`ece`] restricted to the samples where `mask` is true.
pub fn ece_masked(
    confidences: &[f64],
    correct: &[bool],
    mask: Option<&[bool]>,
    bins: usize,
) -> Result<f64> {
    if confidences.len() != correct.len() {
        return Err(Error::DimensionMismatch {
            expected: confidences.len(),
            got: correct.len(),
        });
    }
    if let Some(mask) = mask {
        if mask.len() != confidences.len() {
            return Err(Error::DimensionMismatch {
                expected: confidences.len(),
                got: mask.len(),
            });
        }
    }
    if bins == 0 {
        return Err(Error::InvalidConfig("at least one bin is required".into()));
    }
    let mut count = vec![0usize; bins];
    let mut hits = vec![0usize; bins];
    let mut conf = vec![0.0; bins];
    let mut total = 0usize;
    for (i, (&c, &ok)) in confidences.iter().zip(correct).enumerate() {
        if mask.is_some_and(|m| !m[i]) {
            continue;
        }
        check_range("confidence", c, 0.0, 1.0, "[0, 1]")?;
        let r = ((c * bins as f64) as usize).min(bins - 1);
        count[r] += 1;
        hits[r] += ok as usize;
        conf[r] += c;
        total += 1;
    }
    if total == 0 {
        return Err(Error::EmptyInput("calibration samples"));
    }
    let mut e = 0.0;
    for r in 0..bins {
        if count[r] > 0 {
            let n = count[r] as f64;
            e += n / total as f64 * (hits[r] as f64 / n - conf[r] / n).abs();
        }
    }
    Ok(e)
}

/// `1 - 2 sum(S G) / (sum S + sum G)`; zero when both sums vanish.
pub fn dice_loss_binary(s: &[f64], g: &[f64]) -> Result<f64> {
    if s.len() != g.len() {
        return Err(Error::DimensionMismatch {
            expected: g.len(),
            got: s.len(),
        });
    }
    let overlap: f64 = s.iter().zip(g).map(|(a, b)| a * b).sum();
    let volume: f64 = s.iter().sum::<f64>() + g.iter().sum::<f64>();
    Ok(if volume == 0.0 {
        0.0
    } else {
        1.0 - 2.0 * overlap / volume
    })
}

/// Binary Dice loss plus `lambda * regularizer`.
pub fn regularized_dice_loss(s: &[f64], g: &[f64], lambda: f64, regularizer: f64) -> Result<f64> {
    Ok(dice_loss_binary(s, g)? + lambda * regularizer)
}

/// `sum_i alpha_i` of an ENN.
pub fn enn_regularizer(model: &EnnModel) -> f64 {
    model.alpha.iter().sum()
}

/// `sum_i v_i^2` of an RBF network.
pub fn rbf_regularizer(model: &RbfModel) -> f64 {
    model.weights.iter().map(|v| v * v).sum()
}

fn check_shapes(s: &ProbArray, g: &LabelArray) -> Result<()> {
    if s.len() != g.len() {
        return Err(Error::DimensionMismatch {
            expected: g.len(),
            got: s.len(),
        });
    }
    if s.classes() != g.classes() {
        return Err(Error::DimensionMismatch {
            expected: g.classes(),
            got: s.classes(),
        });
    }
    Ok(())
}

/// Sum over classes of the per-class soft Dice loss. A class absent from
/// both prediction and truth contributes zero.
pub fn dice_loss_per_class(s: &ProbArray, g: &LabelArray) -> Result<f64> {
    check_shapes(s, g)?;
    let mut loss = 0.0;
    for c in 0..s.classes() {
        let mut overlap = 0.0;
        let mut volume = 0.0;
        for (row, &y) in s.rows().iter().zip(g.labels()) {
            let truth = (y == c) as u8 as f64;
            overlap += row[c] * truth;
            volume += row[c] + truth;
        }
        if volume > 0.0 {
            loss += 1.0 - 2.0 * overlap / volume;
        }
    }
    Ok(loss)
}

/// Dice loss with all classes pooled in a single ratio.
pub fn dice_loss_pooled(s: &ProbArray, g: &LabelArray) -> Result<f64> {
    check_shapes(s, g)?;
    let mut overlap = 0.0;
    let mut volume = 0.0;
    for (row, &y) in s.rows().iter().zip(g.labels()) {
        overlap += row[y];
        volume += row.iter().sum::<f64>() + 1.0;
    }
    Ok(if volume == 0.0 {
        0.0
    } else {
        1.0 - 2.0 * overlap / volume
    })
}

/// `sum ||S - S_t||^2 / (2 N C)`.
pub fn consistency_loss(s: &ProbArray, transformed: &ProbArray) -> Result<f64> {
    if s.len() != transformed.len() || s.classes() != transformed.classes() {
        return Err(Error::DimensionMismatch {
            expected: s.len() * s.classes(),
            got: transformed.len() * transformed.classes(),
        });
    }
    let total: f64 = s
        .rows()
        .iter()
        .zip(transformed.rows())
        .map(|(a, b)| sq_dist(a, b))
        .sum();
    Ok(total / (2.0 * s.len() as f64 * s.classes() as f64))
}

/// Polynomial decay `lr0 (1 - e / Ne)^0.9`.
pub fn lr_schedule(lr0: f64, epoch: usize, total: usize) -> Result<f64> {
    if epoch > total || total == 0 {
        return Err(Error::InvalidConfig(format!(
            "epoch {epoch} outside the schedule of {total} epochs"
        )));
    }
    Ok(lr0 * (1.0 - epoch as f64 / total as f64).powf(0.9))
}

/// `metric,value` report, one row per entry.
pub fn report_csv(rows: &[(&str, f64)]) -> String {
    let mut out = String::from("metric,value\n");
    for (name, value) in rows {
        let _ = writeln!(out, "{name},{value}");
    }
    out
}
