#![allow(dead_code)]

use evidential::{FocalSet, Frame, MassFunction};
use proptest::prelude::*;

/// Masses on frames of 2 to 4 elements with random sparse focal sets.
pub fn mass_on(size: usize) -> impl Strategy<Value = MassFunction> {
    let subsets = (1usize << size) - 1;
    proptest::collection::vec((any::<bool>(), 0.01f64..1.0), subsets).prop_map(move |raw| {
        let frame = Frame::indexed(size).unwrap();
        let mut entries: Vec<(FocalSet, f64)> = raw
            .iter()
            .enumerate()
            .filter(|(_, (keep, _))| *keep)
            .map(|(i, &(_, w))| (FocalSet::from_bits(i as u32 + 1), w))
            .collect();
        if entries.is_empty() {
            entries.push((frame.omega(), 1.0));
        }
        MassFunction::normalized_from(&frame, entries).unwrap()
    })
}

pub fn mass() -> impl Strategy<Value = MassFunction> {
    (2usize..=4).prop_flat_map(mass_on)
}

pub fn mass_pair() -> impl Strategy<Value = (MassFunction, MassFunction)> {
    (2usize..=4).prop_flat_map(|n| (mass_on(n), mass_on(n)))
}

pub fn total(m: &MassFunction) -> f64 {
    m.focal_sets().iter().map(|(_, v)| v).sum()
}

pub fn assert_normalized(m: &MassFunction) {
    assert!((total(m) - 1.0).abs() < 1e-9, "sum {}", total(m));
    assert_eq!(m.mass(FocalSet::from_bits(0)), 0.0);
}
