use crate::error::{Error, Result};
use crate::mass::{FocalSet, Frame, MassFunction, SUM_TOLERANCE};
use crate::util::argmax;

/// Focal structure over `clusters` clusters: every singleton, optionally every
/// pair, and the whole frame.
pub fn focal_structure(clusters: usize, pairs: bool) -> Vec<FocalSet> {
    let mut sets: Vec<FocalSet> = (0..clusters).map(FocalSet::singleton).collect();
    if pairs {
        for a in 0..clusters {
            for b in a + 1..clusters {
                sets.push(FocalSet::from_indices([a, b]));
            }
        }
    }
    let omega = FocalSet::full(clusters);
    if !sets.contains(&omega) {
        sets.push(omega);
    }
    sets
}

/// Per-object masses over a fixed focal structure, with an explicit empty-set
/// column.
#[derive(Clone, Debug, PartialEq)]
pub struct CredalPartition {
    frame: Frame,
    focal_sets: Vec<FocalSet>,
    masses: Vec<Vec<f64>>,
    empty_mass: Vec<f64>,
}

impl CredalPartition {
    /// Validates that every row is nonnegative and sums to one together with
    /// its empty mass.
    pub fn new(
        frame: &Frame,
        focal_sets: Vec<FocalSet>,
        masses: Vec<Vec<f64>>,
        empty_mass: Vec<f64>,
    ) -> Result<Self> {
        if focal_sets.is_empty() {
            return Err(Error::EmptyInput("focal structure"));
        }
        for &set in &focal_sets {
            frame.check_set(set)?;
            if set.is_empty() {
                return Err(Error::InvalidConfig(
                    "the empty set is carried by the empty-mass column".into(),
                ));
            }
        }
        if masses.len() != empty_mass.len() {
            return Err(Error::DimensionMismatch {
                expected: masses.len(),
                got: empty_mass.len(),
            });
        }
        for (row, &e) in masses.iter().zip(&empty_mass) {
            if row.len() != focal_sets.len() {
                return Err(Error::DimensionMismatch {
                    expected: focal_sets.len(),
                    got: row.len(),
                });
            }
            if let Some(&bad) = row
                .iter()
                .chain([&e])
                .find(|v| !(**v >= 0.0) || !v.is_finite())
            {
                return Err(Error::InvalidMass(bad));
            }
            let total: f64 = row.iter().sum::<f64>() + e;
            if (total - 1.0).abs() > SUM_TOLERANCE {
                return Err(Error::SumNotOne(total));
            }
        }
        Ok(CredalPartition {
            frame: frame.clone(),
            focal_sets,
            masses,
            empty_mass,
        })
    }

    pub fn frame(&self) -> &Frame {
        &self.frame
    }

    pub fn focal_sets(&self) -> &[FocalSet] {
        &self.focal_sets
    }

    pub fn masses(&self) -> &[Vec<f64>] {
        &self.masses
    }

    pub fn empty_mass(&self) -> &[f64] {
        &self.empty_mass
    }

    pub fn len(&self) -> usize {
        self.masses.len()
    }

    pub fn is_empty(&self) -> bool {
        self.masses.is_empty()
    }

    /// Mass function of object `i`, renormalized over the nonempty focal sets.
    pub fn to_mass(&self, i: usize) -> Result<MassFunction> {
        let row = self.masses.get(i).ok_or(Error::DimensionMismatch {
            expected: self.len(),
            got: i,
        })?;
        let total: f64 = row.iter().sum();
        if total <= 0.0 {
            return Err(Error::AllMassEmpty(i));
        }
        MassFunction::normalized_from(
            &self.frame,
            self.focal_sets.iter().copied().zip(row.iter().copied()),
        )
    }

    /// Pignistic hard assignment per object; `None` for objects whose whole
    /// mass is on the empty set.
    pub fn pignistic_labels(&self) -> Vec<Option<usize>> {
        (0..self.len())
            .map(|i| self.to_mass(i).ok().map(|m| argmax(&m.pignistic())))
            .collect()
    }

    /// Flat matrix export: a header (`empty` then the focal-set keys) and one
    /// row per object.
    pub fn flat(&self) -> (Vec<String>, Vec<Vec<f64>>) {
        let mut header = vec!["empty".to_string()];
        header.extend(self.focal_sets.iter().map(|&s| self.frame.key(s)));
        let rows = self
            .masses
            .iter()
            .zip(&self.empty_mass)
            .map(|(row, &e)| std::iter::once(e).chain(row.iter().copied()).collect())
            .collect();
        (header, rows)
    }
}

/// Mass function of object `i` of `partition`.
pub fn credal_to_mass(partition: &CredalPartition, i: usize) -> Result<MassFunction> {
    partition.to_mass(i)
}
