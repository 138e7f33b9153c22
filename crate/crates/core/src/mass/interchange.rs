//! Text interchange format for mass functions.
//!
//! A document is a JSON object with the ordered frame labels, a map from
//! focal-set keys (member labels joined by `|` in frame order) to masses, and an
//! optional free-form `metadata` object:
//!
//! ```json
//! {"frame":["a","b"],"masses":{"a":0.5,"b":0.3,"a|b":0.2}}
//! ```
//!
//! Numbers are written in shortest round-trip form, so parsing a document back
//! reproduces every mass bit for bit.

use serde::{Deserialize, Serialize};
use serde_json::{Map, Value};

use super::frame::Frame;
use super::function::MassFunction;
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MassDocument {
    pub frame: Vec<String>,
    pub masses: Map<String, Value>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub metadata: Option<Map<String, Value>>,
}

impl MassDocument {
    pub fn from_mass(mass: &MassFunction) -> Self {
        let frame = mass.frame();
        let masses = mass
            .focal_sets()
            .iter()
            .map(|&(set, v)| (frame.key(set), Value::from(v)))
            .collect();
        MassDocument {
            frame: frame.labels().to_vec(),
            masses,
            metadata: None,
        }
    }

    pub fn with_metadata(mut self, metadata: Map<String, Value>) -> Self {
        self.metadata = Some(metadata);
        self
    }

    pub fn to_mass(&self) -> Result<MassFunction> {
        let frame = Frame::new(self.frame.iter().cloned())?;
        let mut entries = Vec::with_capacity(self.masses.len());
        for (key, value) in &self.masses {
            let v = value
                .as_f64()
                .ok_or_else(|| Error::Parse(format!("mass for `{key}` is not a number")))?;
            entries.push((frame.parse_key(key)?, v));
        }
        MassFunction::from_assignments(&frame, entries)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("documents always serialize")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))
    }
}

impl MassFunction {
    pub fn to_document(&self) -> MassDocument {
        MassDocument::from_mass(self)
    }

    pub fn to_json(&self) -> String {
        self.to_document().to_json()
    }

    pub fn from_json(text: &str) -> Result<Self> {
        MassDocument::from_json(text)?.to_mass()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mass::FocalSet;

    #[test]
    fn keys_and_layout() {
        let frame = Frame::new(["a", "b"]).unwrap();
        let m = MassFunction::from_assignments(
            &frame,
            [
                (FocalSet::singleton(0), 0.5),
                (FocalSet::singleton(1), 0.3),
                (frame.omega(), 0.2),
            ],
        )
        .unwrap();
        assert_eq!(
            m.to_json(),
            r#"{"frame":["a","b"],"masses":{"a":0.5,"b":0.3,"a|b":0.2}}"#
        );
    }

    #[test]
    fn parses_unordered_keys_and_rejects_garbage() {
        let m = MassFunction::from_json(r#"{"frame":["a","b"],"masses":{"b|a":1.0}}"#).unwrap();
        assert!(m.is_vacuous());
        assert!(MassFunction::from_json(r#"{"frame":["a"],"masses":{"z":1.0}}"#).is_err());
        assert!(matches!(
            MassFunction::from_json(r#"{"frame":["a","b"],"masses":{"a":0.5}}"#),
            Err(Error::SumNotOne(_))
        ));
        assert!(MassFunction::from_json("not json").is_err());
    }

    #[test]
    fn metadata_survives() {
        let m = MassFunction::vacuous(&Frame::indexed(2).unwrap());
        let mut meta = Map::new();
        meta.insert("category".into(), Value::from("NU"));
        let doc = m.to_document().with_metadata(meta);
        let back = MassDocument::from_json(&doc.to_json()).unwrap();
        assert_eq!(back, doc);
    }
}
