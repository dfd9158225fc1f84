use std::collections::BTreeSet;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::provenance::Decision;

/// Fixed decisions (the backdrop Φ) and varied decisions (Σ) of a comparison.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct DecisionLedger {
    pub fixed: Vec<Decision>,
    /// Decision name and the values it takes, in label order.
    pub varied: Vec<(String, Vec<String>)>,
}

impl DecisionLedger {
    pub fn new(fixed: Vec<Decision>, varied: Vec<(String, Vec<String>)>) -> Result<Self> {
        let mut names = BTreeSet::new();
        for name in fixed.iter().map(|d| &d.name).chain(varied.iter().map(|(n, _)| n)) {
            if !names.insert(name.as_str()) {
                return Err(Error::DuplicateDecision(name.clone()));
            }
        }
        Ok(DecisionLedger { fixed, varied })
    }

    pub fn varied_names(&self) -> Vec<&str> {
        self.varied.iter().map(|(n, _)| n.as_str()).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn a_name_lives_on_one_side() {
        let fixed = vec![Decision::new("k", 5)];
        assert!(DecisionLedger::new(fixed.clone(), vec![("seed".into(), vec!["1".into()])]).is_ok());
        assert!(matches!(
            DecisionLedger::new(fixed, vec![("k".into(), vec!["1".into()])]),
            Err(Error::DuplicateDecision(n)) if n == "k"
        ));
    }
}
