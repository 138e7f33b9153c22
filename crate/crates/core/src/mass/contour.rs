use super::frame::Frame;
use crate::error::{check_range, Error, Result};

/// Plausibilities of the singletons of a frame.
#[derive(Clone, Debug, PartialEq)]
pub struct ContourFunction {
    frame: Frame,
    pl: Vec<f64>,
}

impl ContourFunction {
    pub fn new(frame: &Frame, pl: Vec<f64>) -> Result<Self> {
        if pl.len() != frame.len() {
            return Err(Error::DimensionMismatch {
                expected: frame.len(),
                got: pl.len(),
            });
        }
        for &v in &pl {
            check_range("plausibility", v, 0.0, 1.0, "[0, 1]")?;
        }
        Ok(ContourFunction {
            frame: frame.clone(),
            pl,
        })
    }

    /// Vacuous contour: every singleton fully plausible.
    pub fn ones(frame: &Frame) -> Self {
        ContourFunction {
            frame: frame.clone(),
            pl: vec![1.0; frame.len()],
        }
    }

    pub(crate) fn from_values_unchecked(frame: Frame, pl: Vec<f64>) -> Self {
        ContourFunction { frame, pl }
    }

    pub fn frame(&self) -> &Frame {
        &self.frame
    }

    pub fn values(&self) -> &[f64] {
        &self.pl
    }

    pub fn into_values(self) -> Vec<f64> {
        self.pl
    }

    /// Contour of the orthogonal sum of two mass functions with conflict `kappa`,
    /// computed from the operands' contours alone.
    pub fn combine(&self, other: &ContourFunction, kappa: f64) -> Result<ContourFunction> {
        if self.frame != other.frame {
            return Err(Error::FrameMismatch);
        }
        if !(kappa < 1.0) || kappa < 0.0 {
            return Err(Error::OutOfRange {
                name: "kappa",
                value: kappa,
                range: "[0, 1)",
            });
        }
        let scale = 1.0 - kappa;
        let pl = self
            .pl
            .iter()
            .zip(&other.pl)
            .map(|(a, b)| a * b / scale)
            .collect();
        Ok(ContourFunction {
            frame: self.frame.clone(),
            pl,
        })
    }

    /// Plausibilities rescaled to a probability distribution.
    pub fn normalized(&self) -> Result<Vec<f64>> {
        let total: f64 = self.pl.iter().sum();
        if !(total > 0.0) {
            return Err(Error::ZeroDenominator("contour function"));
        }
        Ok(self.pl.iter().map(|v| v / total).collect())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn combine_contours() {
        let f = Frame::indexed(2).unwrap();
        let p1 = ContourFunction::new(&f, vec![1.0, 0.5]).unwrap();
        let p2 = ContourFunction::new(&f, vec![0.5, 1.0]).unwrap();
        assert_eq!(p1.combine(&p2, 0.0).unwrap().values(), &[0.5, 0.5]);
        assert_eq!(
            p1.combine(&ContourFunction::ones(&f), 0.0)
                .unwrap()
                .values(),
            p1.values()
        );
        assert!(p1.combine(&p2, 1.0).is_err());
    }

    #[test]
    fn validates_entries() {
        let f = Frame::indexed(2).unwrap();
        assert!(ContourFunction::new(&f, vec![1.2, 0.5]).is_err());
        assert!(ContourFunction::new(&f, vec![0.5]).is_err());
        assert!(ContourFunction::new(&f, vec![0.0, 0.0])
            .unwrap()
            .normalized()
            .is_err());
    }
}
