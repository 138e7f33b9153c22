use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// Largest supported frame; keeps power-set enumeration tractable.
pub const MAX_FRAME_SIZE: usize = 20;

/// Subset of a frame, stored as a bit mask over element indices.
///
/// Bit `i` is set when the `i`-th label of the frame belongs to the set. The
/// encoding is only meaningful together with the [`Frame`] it was built for.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct FocalSet(u32);

impl FocalSet {
    pub const EMPTY: FocalSet = FocalSet(0);

    pub fn from_bits(bits: u32) -> Self {
        FocalSet(bits)
    }

    pub fn bits(self) -> u32 {
        self.0
    }

    pub fn singleton(index: usize) -> Self {
        debug_assert!(index < MAX_FRAME_SIZE);
        FocalSet(1 << index)
    }

    /// Set containing every element of a frame of size `size`.
    pub fn full(size: usize) -> Self {
        debug_assert!(size <= MAX_FRAME_SIZE);
        FocalSet(((1u64 << size) - 1) as u32)
    }

    pub fn from_indices<I: IntoIterator<Item = usize>>(indices: I) -> Self {
        FocalSet(indices.into_iter().fold(0, |acc, i| acc | (1 << i)))
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn is_singleton(self) -> bool {
        self.len() == 1
    }

    pub fn contains(self, index: usize) -> bool {
        index < 32 && self.0 & (1 << index) != 0
    }

    pub fn intersect(self, other: FocalSet) -> FocalSet {
        FocalSet(self.0 & other.0)
    }

    pub fn union(self, other: FocalSet) -> FocalSet {
        FocalSet(self.0 | other.0)
    }

    pub fn is_subset_of(self, other: FocalSet) -> bool {
        self.0 & !other.0 == 0
    }

    pub fn intersects(self, other: FocalSet) -> bool {
        self.0 & other.0 != 0
    }

    /// Complement relative to a frame of size `size`.
    pub fn complement(self, size: usize) -> FocalSet {
        FocalSet(!self.0 & FocalSet::full(size).0)
    }

    /// Highest member index plus one (0 for the empty set).
    pub fn span(self) -> usize {
        32 - self.0.leading_zeros() as usize
    }

    pub fn indices(self) -> impl Iterator<Item = usize> {
        let bits = self.0;
        (0..32).filter(move |i| bits & (1 << i) != 0)
    }
}

impl fmt::Debug for FocalSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.indices()).finish()
    }
}

/// Ordered frame of discernment. Label order fixes the subset encoding.
#[derive(Clone, PartialEq, Eq)]
pub struct Frame {
    labels: Arc<[String]>,
}

impl Frame {
    pub fn new<I, S>(labels: I) -> Result<Self>
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let labels: Vec<String> = labels.into_iter().map(Into::into).collect();
        if labels.is_empty() || labels.len() > MAX_FRAME_SIZE {
            return Err(Error::FrameSize {
                got: labels.len(),
                max: MAX_FRAME_SIZE,
            });
        }
        for (i, label) in labels.iter().enumerate() {
            if label.is_empty() || label.contains('|') {
                return Err(Error::Parse(format!(
                    "frame label `{label}` must be nonempty and must not contain `|`"
                )));
            }
            if labels[..i].contains(label) {
                return Err(Error::DuplicateLabel(label.clone()));
            }
        }
        Ok(Frame {
            labels: labels.into(),
        })
    }

    /// Frame with labels `w1..wC`.
    pub fn indexed(size: usize) -> Result<Self> {
        Frame::new((1..=size).map(|i| format!("w{i}")))
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn label(&self, index: usize) -> &str {
        &self.labels[index]
    }

    pub fn index_of(&self, label: &str) -> Result<usize> {
        self.labels
            .iter()
            .position(|l| l == label)
            .ok_or_else(|| Error::UnknownLabel(label.to_string()))
    }

    pub fn omega(&self) -> FocalSet {
        FocalSet::full(self.len())
    }

    pub fn singleton(&self, index: usize) -> Result<FocalSet> {
        self.check_index(index)?;
        Ok(FocalSet::singleton(index))
    }

    pub fn check_index(&self, index: usize) -> Result<()> {
        if index < self.len() {
            Ok(())
        } else {
            Err(Error::BadFrame {
                index,
                size: self.len(),
            })
        }
    }

    pub fn check_set(&self, set: FocalSet) -> Result<()> {
        if set.span() > self.len() {
            Err(Error::BadFrame {
                index: set.span() - 1,
                size: self.len(),
            })
        } else {
            Ok(())
        }
    }

    pub fn set_of(&self, labels: &[&str]) -> Result<FocalSet> {
        let mut set = FocalSet::EMPTY;
        for label in labels {
            set = set.union(FocalSet::singleton(self.index_of(label)?));
        }
        Ok(set)
    }

    /// Interchange key: member labels joined by `|` in frame order.
    pub fn key(&self, set: FocalSet) -> String {
        set.indices()
            .map(|i| self.labels[i].as_str())
            .collect::<Vec<_>>()
            .join("|")
    }

    pub fn parse_key(&self, key: &str) -> Result<FocalSet> {
        if key.is_empty() {
            return Ok(FocalSet::EMPTY);
        }
        let mut set = FocalSet::EMPTY;
        for part in key.split('|') {
            set = set.union(FocalSet::singleton(self.index_of(part.trim())?));
        }
        Ok(set)
    }
}

impl fmt::Debug for Frame {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(self.labels.iter()).finish()
    }
}

impl Serialize for Frame {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        self.labels().serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for Frame {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let labels = Vec::<String>::deserialize(deserializer)?;
        Frame::new(labels).map_err(serde::de::Error::custom)
    }
}
