use std::cmp::Ordering;

use super::contour::ContourFunction;
use super::frame::{FocalSet, Frame};
use crate::error::{check_range, Error, Result};

/// Tolerance on the unit-sum axiom.
pub const SUM_TOLERANCE: f64 = 1e-9;

/// Conflict level at which Dempster's rule is considered undefined.
pub const TOTAL_CONFLICT: f64 = 1.0 - 1e-12;

/// Normalized mass function over a [`Frame`].
///
/// Only focal sets (strictly positive masses) are stored, sorted by their
/// bit encoding. The empty set never carries mass.
#[derive(Clone, Debug)]
pub struct MassFunction {
    frame: Frame,
    focal: Vec<(FocalSet, f64)>,
}

/// Result of Dempster's rule: the orthogonal sum and the degree of conflict.
#[derive(Clone, Debug)]
pub struct Combination {
    pub mass: MassFunction,
    pub conflict: f64,
}

impl MassFunction {
    /// Builds a mass function, enforcing the normalization axioms.
    ///
    /// Duplicate focal sets are summed and zero masses dropped. Input that does
    /// not sum to one is rejected; use [`MassFunction::normalized_from`] to
    /// rescale explicitly.
    pub fn from_assignments<I>(frame: &Frame, entries: I) -> Result<Self>
    where
        I: IntoIterator<Item = (FocalSet, f64)>,
    {
        let focal = collect_entries(frame, entries)?;
        let total: f64 = focal.iter().map(|(_, v)| v).sum();
        if (total - 1.0).abs() > SUM_TOLERANCE {
            return Err(Error::SumNotOne(total));
        }
        Ok(MassFunction {
            frame: frame.clone(),
            focal,
        })
    }

    /// Like [`MassFunction::from_assignments`] but rescales the entries so they
    /// sum to one.
    pub fn normalized_from<I>(frame: &Frame, entries: I) -> Result<Self>
    where
        I: IntoIterator<Item = (FocalSet, f64)>,
    {
        let mut focal = collect_entries(frame, entries)?;
        let total: f64 = focal.iter().map(|(_, v)| v).sum();
        if !(total > 0.0) || !total.is_finite() {
            return Err(Error::NonNormalizable(format!("total mass {total}")));
        }
        for (_, v) in &mut focal {
            *v /= total;
        }
        Ok(MassFunction {
            frame: frame.clone(),
            focal,
        })
    }

    /// Total ignorance: all mass on the frame.
    pub fn vacuous(frame: &Frame) -> Self {
        MassFunction {
            frame: frame.clone(),
            focal: vec![(frame.omega(), 1.0)],
        }
    }

    /// Logical mass function with the single focal set `set`.
    pub fn logical(frame: &Frame, set: FocalSet) -> Result<Self> {
        MassFunction::from_assignments(frame, [(set, 1.0)])
    }

    /// Bayesian mass function from a probability vector.
    pub fn bayesian(frame: &Frame, probabilities: &[f64]) -> Result<Self> {
        if probabilities.len() != frame.len() {
            return Err(Error::DimensionMismatch {
                expected: frame.len(),
                got: probabilities.len(),
            });
        }
        MassFunction::from_assignments(
            frame,
            probabilities
                .iter()
                .enumerate()
                .map(|(i, &p)| (FocalSet::singleton(i), p)),
        )
    }

    /// Consonant mass function whose contour function is `pl`.
    ///
    /// The largest entry of `pl` must be one (a normalized possibility
    /// distribution). Focal sets are the nested level cuts of `pl`.
    pub fn consonant_from_contour(contour: &ContourFunction) -> Result<Self> {
        let pl = contour.values();
        let max = pl.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
        if (max - 1.0).abs() > SUM_TOLERANCE {
            return Err(Error::NonNormalizable(format!(
                "possibility distribution has maximum {max}, expected 1"
            )));
        }
        let mut order: Vec<usize> = (0..pl.len()).collect();
        // stable: equal plausibilities keep frame order
        order.sort_by(|&a, &b| pl[b].total_cmp(&pl[a]));
        let mut entries = Vec::with_capacity(pl.len());
        let mut cut = FocalSet::EMPTY;
        for (rank, &i) in order.iter().enumerate() {
            cut = cut.union(FocalSet::singleton(i));
            let next = order.get(rank + 1).map_or(0.0, |&j| pl[j]);
            let level = if rank == 0 { 1.0 } else { pl[i] };
            entries.push((cut, level - next));
        }
        MassFunction::from_assignments(contour.frame(), entries)
    }

    pub fn frame(&self) -> &Frame {
        &self.frame
    }

    /// Focal sets and their masses, sorted by set encoding.
    pub fn focal_sets(&self) -> &[(FocalSet, f64)] {
        &self.focal
    }

    pub fn mass(&self, set: FocalSet) -> f64 {
        self.focal
            .binary_search_by_key(&set, |(s, _)| *s)
            .map_or(0.0, |i| self.focal[i].1)
    }

    /// Degree of support: total mass of the subsets of `set`.
    pub fn belief(&self, set: FocalSet) -> Result<f64> {
        self.frame.check_set(set)?;
        Ok(self
            .focal
            .iter()
            .filter(|(s, _)| s.is_subset_of(set))
            .map(|(_, v)| v)
            .sum())
    }

    /// Total mass of the focal sets intersecting `set`.
    pub fn plausibility(&self, set: FocalSet) -> Result<f64> {
        self.frame.check_set(set)?;
        Ok(self
            .focal
            .iter()
            .filter(|(s, _)| s.intersects(set))
            .map(|(_, v)| v)
            .sum())
    }

    pub fn contour(&self) -> ContourFunction {
        let mut pl = vec![0.0; self.frame.len()];
        for &(set, v) in &self.focal {
            for i in set.indices() {
                pl[i] += v;
            }
        }
        ContourFunction::from_values_unchecked(self.frame.clone(), pl)
    }

    /// Pignistic probabilities: each focal mass split evenly over its members.
    pub fn pignistic(&self) -> Vec<f64> {
        let mut bet = vec![0.0; self.frame.len()];
        for &(set, v) in &self.focal {
            let share = v / set.len() as f64;
            for i in set.indices() {
                bet[i] += share;
            }
        }
        bet
    }

    pub fn is_bayesian(&self) -> bool {
        self.focal.iter().all(|(s, _)| s.is_singleton())
    }

    pub fn is_vacuous(&self) -> bool {
        self.focal.len() == 1 && self.focal[0].0 == self.frame.omega()
    }

    /// True when the focal sets form a chain under inclusion.
    pub fn is_consonant(&self) -> bool {
        let mut sets: Vec<FocalSet> = self.focal.iter().map(|(s, _)| *s).collect();
        sets.sort_by_key(|s| s.len());
        sets.windows(2).all(|w| w[0].is_subset_of(w[1]))
    }

    /// Elementwise comparison of masses with absolute tolerance `tol`.
    pub fn approx_eq(&self, other: &MassFunction, tol: f64) -> bool {
        if self.frame != other.frame {
            return false;
        }
        let mut a = self.focal.iter().peekable();
        let mut b = other.focal.iter().peekable();
        loop {
            match (a.peek(), b.peek()) {
                (None, None) => return true,
                (Some(&&(sa, va)), Some(&&(sb, vb))) => match sa.cmp(&sb) {
                    Ordering::Equal => {
                        if (va - vb).abs() > tol {
                            return false;
                        }
                        a.next();
                        b.next();
                    }
                    Ordering::Less => {
                        if va > tol {
                            return false;
                        }
                        a.next();
                    }
                    Ordering::Greater => {
                        if vb > tol {
                            return false;
                        }
                        b.next();
                    }
                },
                (Some(&&(_, v)), None) | (None, Some(&&(_, v))) => {
                    if v > tol {
                        return false;
                    }
                    a.next();
                    b.next();
                }
            }
        }
    }

    /// Degree of conflict with `other` (mass of empty intersections).
    pub fn conflict_with(&self, other: &MassFunction) -> Result<f64> {
        self.ensure_same_frame(other)?;
        let mut products = Vec::new();
        for &(b, vb) in &self.focal {
            for &(d, vd) in &other.focal {
                if !b.intersects(d) {
                    products.push(vb * vd);
                }
            }
        }
        products.sort_by(f64::total_cmp);
        Ok(products.iter().sum())
    }

    /// Dempster's rule of combination.
    ///
    /// The products contributing to each focal set are summed in sorted order,
    /// which makes the result bitwise independent of operand order.
    pub fn combine(&self, other: &MassFunction) -> Result<Combination> {
        self.ensure_same_frame(other)?;
        let mut products: Vec<(FocalSet, f64)> =
            Vec::with_capacity(self.focal.len() * other.focal.len());
        for &(b, vb) in &self.focal {
            for &(d, vd) in &other.focal {
                products.push((b.intersect(d), vb * vd));
            }
        }
        products.sort_by(|x, y| x.0.cmp(&y.0).then(x.1.total_cmp(&y.1)));

        let mut sums: Vec<(FocalSet, f64)> = Vec::new();
        for (set, v) in products {
            match sums.last_mut() {
                Some((s, acc)) if *s == set => *acc += v,
                _ => sums.push((set, v)),
            }
        }
        let conflict = match sums.first() {
            Some((s, v)) if s.is_empty() => *v,
            _ => 0.0,
        };
        if conflict >= TOTAL_CONFLICT {
            return Err(Error::TotalConflict(conflict));
        }
        let scale = 1.0 - conflict;
        let focal = sums
            .into_iter()
            .filter(|(s, v)| !s.is_empty() && *v > 0.0)
            .map(|(s, v)| (s, v / scale))
            .collect();
        Ok(Combination {
            mass: MassFunction {
                frame: self.frame.clone(),
                focal,
            },
            conflict,
        })
    }

    /// Combines a sequence of mass functions left to right with Dempster's rule.
    pub fn combine_all<'a, I>(masses: I) -> Result<Combination>
    where
        I: IntoIterator<Item = &'a MassFunction>,
    {
        let mut iter = masses.into_iter();
        let first = iter.next().ok_or(Error::EmptyInput("no mass functions"))?;
        let mut acc = first.clone();
        let mut agreement = 1.0;
        for m in iter {
            let c = acc.combine(m)?;
            agreement *= 1.0 - c.conflict;
            acc = c.mass;
        }
        Ok(Combination {
            mass: acc,
            conflict: 1.0 - agreement,
        })
    }

    /// Classical discounting with reliability `beta`: moves a share `1 - beta`
    /// of every mass to the frame.
    pub fn discount(&self, beta: f64) -> Result<MassFunction> {
        check_range("beta", beta, 0.0, 1.0, "[0, 1]")?;
        if beta == 1.0 {
            return Ok(self.clone());
        }
        let omega = self.frame.omega();
        let mut focal: Vec<(FocalSet, f64)> = self
            .focal
            .iter()
            .filter(|(s, _)| *s != omega)
            .map(|&(s, v)| (s, beta * v))
            .filter(|(_, v)| *v > 0.0)
            .collect();
        focal.push((omega, 1.0 - beta + beta * self.mass(omega)));
        Ok(MassFunction {
            frame: self.frame.clone(),
            focal,
        })
    }

    fn ensure_same_frame(&self, other: &MassFunction) -> Result<()> {
        if self.frame == other.frame {
            Ok(())
        } else {
            Err(Error::FrameMismatch)
        }
    }
}

impl PartialEq for MassFunction {
    /// Equality up to [`SUM_TOLERANCE`] on each focal mass.
    fn eq(&self, other: &Self) -> bool {
        self.approx_eq(other, SUM_TOLERANCE)
    }
}

fn collect_entries<I>(frame: &Frame, entries: I) -> Result<Vec<(FocalSet, f64)>>
where
    I: IntoIterator<Item = (FocalSet, f64)>,
{
    let mut focal: Vec<(FocalSet, f64)> = Vec::new();
    let mut seen_any = false;
    for (set, v) in entries {
        seen_any = true;
        frame.check_set(set)?;
        if !v.is_finite() || v < 0.0 {
            return Err(Error::InvalidMass(v));
        }
        if set.is_empty() {
            if v > 0.0 {
                return Err(Error::EmptyFocal(v));
            }
            continue;
        }
        focal.push((set, v));
    }
    if !seen_any {
        return Err(Error::NoEntries);
    }
    focal.sort_by_key(|(s, _)| *s);
    let mut merged: Vec<(FocalSet, f64)> = Vec::with_capacity(focal.len());
    for (set, v) in focal {
        match merged.last_mut() {
            Some((s, acc)) if *s == set => *acc += v,
            _ => merged.push((set, v)),
        }
    }
    merged.retain(|(_, v)| *v > 0.0);
    if merged.is_empty() {
        return Err(Error::NonNormalizable("all masses are zero".into()));
    }
    Ok(merged)
}
