use crate::error::{Error, Result};
use crate::mass::Frame;
use crate::util::matrix_width;

/// Feature vectors with class labels indexing a frame.
#[derive(Clone, Debug, PartialEq)]
pub struct Dataset {
    frame: Frame,
    features: Vec<Vec<f64>>,
    labels: Vec<usize>,
    dim: usize,
}

impl Dataset {
    pub fn new(frame: &Frame, features: Vec<Vec<f64>>, labels: Vec<usize>) -> Result<Self> {
        let dim = matrix_width(&features, "dataset features")?;
        if labels.len() != features.len() {
            return Err(Error::DimensionMismatch {
                expected: features.len(),
                got: labels.len(),
            });
        }
        for &y in &labels {
            frame.check_index(y)?;
        }
        Ok(Dataset {
            frame: frame.clone(),
            features,
            labels,
            dim,
        })
    }

    pub fn frame(&self) -> &Frame {
        &self.frame
    }

    pub fn classes(&self) -> usize {
        self.frame.len()
    }

    pub fn features(&self) -> &[Vec<f64>] {
        &self.features
    }

    pub fn labels(&self) -> &[usize] {
        &self.labels
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.features.len()
    }

    pub fn is_empty(&self) -> bool {
        self.features.is_empty()
    }
}
