//! Modeling decisions and the digests that chain them.

use std::collections::BTreeSet;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::digest::{Digest, DigestBuilder};

/// One named modeling decision and its value, e.g. `k=5`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Decision {
    pub name: String,
    pub value: String,
}

impl Decision {
    pub fn new(name: impl Into<String>, value: impl fmt::Display) -> Self {
        Decision {
            name: name.into(),
            value: value.to_string(),
        }
    }
}

impl fmt::Display for Decision {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}={}", self.name, self.value)
    }
}

/// Provenance of a representation or structure: a digest over the full
/// decision chain (including data digests) plus the human-readable
/// decisions that produced it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Provenance {
    pub digest: Digest,
    pub decisions: Vec<Decision>,
}

impl Provenance {
    pub fn new(digest: Digest, decisions: Vec<Decision>) -> Self {
        Provenance { digest, decisions }
    }

    pub fn decision(&self, name: &str) -> Option<&str> {
        find(&self.decisions, name)
    }
}

pub fn find<'a>(decisions: &'a [Decision], name: &str) -> Option<&'a str> {
    decisions
        .iter()
        .find(|d| d.name == name)
        .map(|d| d.value.as_str())
}

/// Digest of the decisions whose names are not in `varied`, i.e. the fixed
/// backdrop of a comparison. Independent of decision order.
pub fn backdrop_digest(decisions: &[Decision], varied: &BTreeSet<&str>) -> Digest {
    let fixed: BTreeSet<&Decision> = decisions
        .iter()
        .filter(|d| !varied.contains(d.name.as_str()))
        .collect();
    let mut b = DigestBuilder::new("backdrop");
    for d in fixed {
        b.str(&d.name).str(&d.value);
    }
    b.finish()
}

pub fn backdrop(decisions: &[Decision], varied: &BTreeSet<&str>) -> Vec<Decision> {
    let set: BTreeSet<&Decision> = decisions
        .iter()
        .filter(|d| !varied.contains(d.name.as_str()))
        .collect();
    set.into_iter().cloned().collect()
}
