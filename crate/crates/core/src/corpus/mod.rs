//! Raw corpora, preprocessing into document-term matrices, symbol selection
//! and synthetic corpus generation.

mod dtm;
mod ingest;
pub mod preprocess;
mod sample;
mod stopwords;
mod synth;

pub use dtm::DocTermMatrix;
pub use ingest::{ingest_corpus, CorpusFormat};
pub use preprocess::{preprocess, preprocess_with_report, PreprocessConfig, PreprocessReport, DEFAULT_TOKEN_PATTERN};
pub use sample::sample_symbols;
pub use stopwords::default_stopwords;
pub use synth::{synth_corpus, SynthCorpus, SynthSpec};

use std::collections::HashSet;

use crate::digest::{Digest, DigestBuilder};
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Document {
    pub id: String,
    pub text: String,
}

/// Ordered documents with unique, non-empty ids.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RawCorpus {
    docs: Vec<Document>,
}

impl RawCorpus {
    pub fn new(docs: Vec<Document>) -> Result<Self> {
        if docs.is_empty() {
            return Err(Error::ZeroDocuments);
        }
        let mut seen = HashSet::with_capacity(docs.len());
        for (i, d) in docs.iter().enumerate() {
            if d.id.is_empty() {
                return Err(Error::EmptyId(i));
            }
            if !seen.insert(d.id.as_str()) {
                return Err(Error::DuplicateId(d.id.clone()));
            }
        }
        Ok(RawCorpus { docs })
    }

    pub fn docs(&self) -> &[Document] {
        &self.docs
    }

    pub fn len(&self) -> usize {
        self.docs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.docs.is_empty()
    }

    pub fn get(&self, id: &str) -> Option<&Document> {
        self.docs.iter().find(|d| d.id == id)
    }

    pub fn digest(&self) -> Digest {
        let mut b = DigestBuilder::new("corpus");
        b.u64(self.docs.len() as u64);
        for d in &self.docs {
            b.str(&d.id).str(&d.text);
        }
        b.finish()
    }
}

/// The ordered set of symbols whose geometry is measured.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SymbolSet {
    ids: Vec<String>,
    level: String,
}

impl SymbolSet {
    pub fn new(ids: Vec<String>, level: impl Into<String>) -> Result<Self> {
        if ids.len() < 2 {
            return Err(Error::TooFew {
                what: "symbols",
                needed: 2,
                got: ids.len(),
            });
        }
        let mut seen = HashSet::with_capacity(ids.len());
        for id in &ids {
            if !seen.insert(id.as_str()) {
                return Err(Error::DuplicateId(id.clone()));
            }
        }
        Ok(SymbolSet {
            ids,
            level: level.into(),
        })
    }

    pub fn ids(&self) -> &[String] {
        &self.ids
    }

    pub fn level(&self) -> &str {
        &self.level
    }

    pub fn len(&self) -> usize {
        self.ids.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ids.is_empty()
    }

    pub fn digest(&self) -> Digest {
        let mut b = DigestBuilder::new("symbols");
        b.str(&self.level).u64(self.ids.len() as u64);
        for id in &self.ids {
            b.str(id);
        }
        b.finish()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn doc(id: &str, text: &str) -> Document {
        Document {
            id: id.into(),
            text: text.into(),
        }
    }

    #[test]
    fn corpus_invariants() {
        assert!(matches!(RawCorpus::new(vec![]), Err(Error::ZeroDocuments)));
        assert!(matches!(
            RawCorpus::new(vec![doc("a", "x"), doc("a", "y")]),
            Err(Error::DuplicateId(_))
        ));
        assert!(matches!(
            RawCorpus::new(vec![doc("", "x")]),
            Err(Error::EmptyId(0))
        ));
    }

    #[test]
    fn symbol_set_needs_a_pair() {
        assert!(SymbolSet::new(vec!["a".into()], "document").is_err());
        assert!(SymbolSet::new(vec!["a".into(), "a".into()], "document").is_err());
        let s = SymbolSet::new(vec!["a".into(), "b".into()], "document").unwrap();
        let t = SymbolSet::new(vec!["b".into(), "a".into()], "document").unwrap();
        assert_ne!(s.digest(), t.digest());
    }
}
