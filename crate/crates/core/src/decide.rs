//! Decisions from mass functions.
//!
//! Point decisions break ties in favour of the lowest frame index.

use crate::error::{Error, Result};
use crate::mass::MassFunction;
use crate::util::argmax;

/// Lower and upper expected utility of a single act: each focal mass is
/// weighted by the minimum (resp. maximum) utility over its elements.
pub fn expected_utility_bounds(m: &MassFunction, utility: &[f64]) -> Result<(f64, f64)> {
    if utility.len() != m.frame().len() {
        return Err(Error::DimensionMismatch {
            expected: m.frame().len(),
            got: utility.len(),
        });
    }
    if let Some(&bad) = utility.iter().find(|u| !u.is_finite()) {
        return Err(Error::OutOfRange {
            name: "utility",
            value: bad,
            range: "finite",
        });
    }
    let mut lower = 0.0;
    let mut upper = 0.0;
    for &(set, mass) in m.focal_sets() {
        let (lo, hi) = set
            .indices()
            .map(|i| utility[i])
            .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), u| {
                (lo.min(u), hi.max(u))
            });
        lower += mass * lo;
        upper += mass * hi;
    }
    Ok((lower, upper.max(lower)))
}

/// Utilities of several acts (rows) over the frame elements (columns).
#[derive(Clone, Debug, PartialEq)]
pub struct UtilityMatrix {
    rows: Vec<Vec<f64>>,
}

impl UtilityMatrix {
    pub fn new(rows: Vec<Vec<f64>>) -> Result<Self> {
        crate::util::matrix_width(&rows, "utility matrix")?;
        Ok(UtilityMatrix { rows })
    }

    pub fn acts(&self) -> usize {
        self.rows.len()
    }

    /// Expected-utility interval of every act.
    pub fn bounds(&self, m: &MassFunction) -> Result<Vec<(f64, f64)>> {
        self.rows
            .iter()
            .map(|u| expected_utility_bounds(m, u))
            .collect()
    }
}

/// Class of maximum pignistic probability.
pub fn decide_pignistic(m: &MassFunction) -> usize {
    argmax(&m.pignistic())
}

/// Class of maximum singleton plausibility.
pub fn decide_max_plausibility(m: &MassFunction) -> usize {
    argmax(m.contour().values())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mass::{FocalSet, Frame};

    fn ab() -> Frame {
        Frame::new(["a", "b"]).unwrap()
    }

    #[test]
    fn utility_bounds() {
        let f = Frame::indexed(3).unwrap();
        let u = [1.0, 4.0, -2.0];
        let bayes = MassFunction::bayesian(&f, &[0.2, 0.5, 0.3]).unwrap();
        let (lo, hi) = expected_utility_bounds(&bayes, &u).unwrap();
        assert!((lo - 1.6).abs() < 1e-12 && lo == hi);
        let logical = MassFunction::logical(&f, FocalSet::from_indices([0, 1])).unwrap();
        assert_eq!(expected_utility_bounds(&logical, &u).unwrap(), (1.0, 4.0));
        let vac = MassFunction::vacuous(&ab());
        assert_eq!(
            expected_utility_bounds(&vac, &[0.0, 1.0]).unwrap(),
            (0.0, 1.0)
        );
        assert!(expected_utility_bounds(&vac, &[0.0]).is_err());
        let acts = UtilityMatrix::new(vec![vec![0.0, 1.0], vec![2.0, 2.0]]).unwrap();
        assert_eq!(acts.bounds(&vac).unwrap(), vec![(0.0, 1.0), (2.0, 2.0)]);
    }

    #[test]
    fn point_decisions() {
        let f = ab();
        let set = |l: &[&str]| f.set_of(l).unwrap();
        let m =
            MassFunction::from_assignments(&f, [(set(&["a"]), 0.6), (set(&["b"]), 0.4)]).unwrap();
        assert_eq!(decide_pignistic(&m), 0);
        assert_eq!(decide_max_plausibility(&m), 0);
        let m4 = MassFunction::from_assignments(
            &f,
            [
                (set(&["a"]), 0.5),
                (set(&["b"]), 0.3),
                (set(&["a", "b"]), 0.2),
            ],
        )
        .unwrap();
        assert_eq!(decide_pignistic(&m4), 0);
        let m = MassFunction::from_assignments(&f, [(set(&["a", "b"]), 0.6), (set(&["b"]), 0.4)])
            .unwrap();
        assert_eq!(decide_max_plausibility(&m), 1);
        let vac = MassFunction::vacuous(&f);
        assert_eq!(decide_pignistic(&vac), 0);
        assert_eq!(decide_max_plausibility(&vac), 0);
    }
}
