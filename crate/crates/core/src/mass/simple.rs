use super::frame::{FocalSet, Frame};
use super::function::{Combination, MassFunction};
use crate::error::{Error, Result};

/// Simple mass function `A^w`: support `s = 1 - exp(-w)` on `A`, the rest on the frame.
#[derive(Clone, Debug, PartialEq)]
pub struct SimpleMass {
    frame: Frame,
    focal: FocalSet,
    weight: f64,
}

/// Outcome of combining two simple mass functions.
#[derive(Clone, Debug)]
pub enum SimpleCombination {
    /// Same focal set: weights of evidence add up.
    Simple(SimpleMass),
    /// Distinct focal sets: general orthogonal sum.
    General(Combination),
}

impl SimpleCombination {
    pub fn to_mass(&self) -> MassFunction {
        match self {
            SimpleCombination::Simple(s) => s.to_mass(),
            SimpleCombination::General(c) => c.mass.clone(),
        }
    }
}

impl SimpleMass {
    pub fn new(frame: &Frame, focal: FocalSet, weight: f64) -> Result<Self> {
        frame.check_set(focal)?;
        if focal.is_empty() || focal == frame.omega() {
            return Err(Error::InvalidConfig(
                "simple mass focal set must be a proper nonempty subset".into(),
            ));
        }
        if !(weight >= 0.0) {
            return Err(Error::OutOfRange {
                name: "weight of evidence",
                value: weight,
                range: "[0, inf)",
            });
        }
        Ok(SimpleMass {
            frame: frame.clone(),
            focal,
            weight,
        })
    }

    /// Builds `A^w` from a degree of support `s` in `[0, 1)`.
    pub fn from_support(frame: &Frame, focal: FocalSet, support: f64) -> Result<Self> {
        if !(0.0..1.0).contains(&support) {
            return Err(Error::OutOfRange {
                name: "support",
                value: support,
                range: "[0, 1)",
            });
        }
        SimpleMass::new(frame, focal, weight_from_support(support))
    }

    pub fn frame(&self) -> &Frame {
        &self.frame
    }

    pub fn focal(&self) -> FocalSet {
        self.focal
    }

    pub fn weight(&self) -> f64 {
        self.weight
    }

    pub fn support(&self) -> f64 {
        support_from_weight(self.weight)
    }

    pub fn to_mass(&self) -> MassFunction {
        let s = self.support();
        MassFunction::from_assignments(
            &self.frame,
            [(self.focal, s), (self.frame.omega(), 1.0 - s)],
        )
        .expect("simple mass is normalized by construction")
    }

    pub fn combine(&self, other: &SimpleMass) -> Result<SimpleCombination> {
        if self.frame != other.frame {
            return Err(Error::FrameMismatch);
        }
        if self.focal == other.focal {
            return Ok(SimpleCombination::Simple(SimpleMass {
                frame: self.frame.clone(),
                focal: self.focal,
                weight: self.weight + other.weight,
            }));
        }
        Ok(SimpleCombination::General(
            self.to_mass().combine(&other.to_mass())?,
        ))
    }
}

pub fn support_from_weight(weight: f64) -> f64 {
    -(-weight).exp_m1()
}

pub fn weight_from_support(support: f64) -> f64 {
    -(-support).ln_1p()
}
