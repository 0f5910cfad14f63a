//! JSON document format for explicit graded posets:
//! `{"k": int, "levels": [[nodeId, ...], ...], "covers": [[a, b], ...]}`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::poset::leveled::{LeveledPoset, NodeLabel};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PosetDocument {
    pub k: usize,
    pub levels: Vec<Vec<NodeLabel>>,
    pub covers: Vec<[NodeLabel; 2]>,
}

impl PosetDocument {
    pub fn into_poset(self) -> Result<LeveledPoset> {
        if self.k == 0 {
            return Err(Error::InvalidPoset("field `k`: must be at least 1".into()));
        }
        if self.k != self.levels.len() {
            return Err(Error::InvalidPoset(format!(
                "field `k`: declares {} levels but `levels` has {}",
                self.k,
                self.levels.len()
            )));
        }
        let covers: Vec<_> = self.covers.iter().map(|&[a, b]| (a, b)).collect();
        LeveledPoset::from_parts(self.levels, &covers)
    }
}

impl LeveledPoset {
    /// Parses and validates a poset document. Syntax errors carry the
    /// line and column; invariant violations name the offending field.
    pub fn from_json_str(text: &str) -> Result<LeveledPoset> {
        let doc: PosetDocument = serde_json::from_str(text)?;
        doc.into_poset()
    }

    pub fn to_document(&self) -> PosetDocument {
        PosetDocument {
            k: self.level_count(),
            levels: self
                .levels()
                .iter()
                .map(|l| l.iter().map(|&v| self.label(v)).collect())
                .collect(),
            covers: self.covers().map(|(a, b)| [self.label(a), self.label(b)]).collect(),
        }
    }

    pub fn to_json_string(&self) -> String {
        serde_json::to_string(&self.to_document()).expect("poset documents always serialize")
    }
}
