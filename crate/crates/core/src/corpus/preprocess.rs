//! The preprocessing chain: case normalization, tokenization, stopword
//! removal, counting. Each step is exposed so the composed pipeline can be
//! checked against the individual steps.

use std::collections::{BTreeMap, BTreeSet};
use std::path::Path;

use regex::Regex;
use serde::{Deserialize, Serialize};

use super::{default_stopwords, DocTermMatrix, RawCorpus};
use crate::digest::{Digest, DigestBuilder};
use crate::error::{Error, Result};

/// Maximal runs of letters, digits and apostrophes.
pub const DEFAULT_TOKEN_PATTERN: &str = r"[\p{L}\p{N}']+";

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PreprocessConfig {
    pub lowercase: bool,
    pub token_pattern: String,
    pub stopwords: BTreeSet<String>,
    pub min_term_count: u64,
    pub max_vocab: Option<usize>,
}

impl Default for PreprocessConfig {
    fn default() -> Self {
        PreprocessConfig {
            lowercase: true,
            token_pattern: DEFAULT_TOKEN_PATTERN.into(),
            stopwords: default_stopwords(),
            min_term_count: 5,
            max_vocab: None,
        }
    }
}

impl PreprocessConfig {
    pub fn validate(&self) -> Result<()> {
        if self.max_vocab == Some(0) {
            return Err(Error::InvalidParameter("max_vocab must be >= 1".into()));
        }
        Regex::new(&self.token_pattern)
            .map_err(|e| Error::InvalidParameter(format!("token_pattern: {e}")))?;
        Ok(())
    }

    /// Reads a stopword file: one word per line, blank lines ignored.
    pub fn stopwords_from_file(path: &Path) -> Result<BTreeSet<String>> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Ok(text
            .lines()
            .map(str::trim)
            .filter(|l| !l.is_empty())
            .map(str::to_string)
            .collect())
    }

    pub fn digest(&self) -> Digest {
        let mut b = DigestBuilder::new("preprocess");
        b.field("lowercase", self.lowercase)
            .field("token_pattern", &self.token_pattern)
            .u64(self.stopwords.len() as u64);
        for w in &self.stopwords {
            b.str(w);
        }
        b.field("min_term_count", self.min_term_count)
            .field("max_vocab", format!("{:?}", self.max_vocab));
        b.finish()
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct PreprocessReport {
    pub documents: usize,
    pub tokens_after_stopwords: u64,
    pub tokens_kept: u64,
    pub vocab_before_pruning: usize,
    pub vocab_after_pruning: usize,
    /// Documents with no surviving tokens. They stay in the matrix.
    pub empty_documents: Vec<String>,
}

pub fn normalize_case(text: &str, lowercase: bool) -> String {
    if lowercase {
        text.to_lowercase()
    } else {
        text.to_string()
    }
}

pub fn tokenize<'a>(text: &'a str, pattern: &Regex) -> Vec<&'a str> {
    pattern.find_iter(text).map(|m| m.as_str()).collect()
}

pub fn remove_stopwords<'a>(tokens: Vec<&'a str>, stopwords: &BTreeSet<String>) -> Vec<&'a str> {
    tokens
        .into_iter()
        .filter(|t| !stopwords.contains(*t))
        .collect()
}

pub fn count_terms(tokens: &[&str]) -> BTreeMap<String, u32> {
    let mut counts = BTreeMap::new();
    for t in tokens {
        *counts.entry((*t).to_string()).or_insert(0) += 1;
    }
    counts
}

/// Terms surviving pruning, in lexicographic order.
fn prune(totals: &BTreeMap<String, u64>, cfg: &PreprocessConfig) -> Vec<String> {
    let mut kept: Vec<(&String, u64)> = totals
        .iter()
        .filter(|(_, &c)| c >= cfg.min_term_count.max(1))
        .map(|(t, &c)| (t, c))
        .collect();
    if let Some(cap) = cfg.max_vocab {
        // Descending frequency, lexicographic tie-break.
        kept.sort_by(|a, b| b.1.cmp(&a.1).then_with(|| a.0.cmp(b.0)));
        kept.truncate(cap);
    }
    let mut vocab: Vec<String> = kept.into_iter().map(|(t, _)| t.clone()).collect();
    vocab.sort();
    vocab
}

pub fn preprocess(corpus: &RawCorpus, cfg: &PreprocessConfig) -> Result<DocTermMatrix> {
    preprocess_with_report(corpus, cfg).map(|(m, _)| m)
}

pub fn preprocess_with_report(
    corpus: &RawCorpus,
    cfg: &PreprocessConfig,
) -> Result<(DocTermMatrix, PreprocessReport)> {
    cfg.validate()?;
    if corpus.is_empty() {
        return Err(Error::ZeroDocuments);
    }
    let pattern = Regex::new(&cfg.token_pattern)
        .map_err(|e| Error::InvalidParameter(format!("token_pattern: {e}")))?;

    let per_doc: Vec<BTreeMap<String, u32>> = corpus
        .docs()
        .iter()
        .map(|d| {
            let text = normalize_case(&d.text, cfg.lowercase);
            let tokens = remove_stopwords(tokenize(&text, &pattern), &cfg.stopwords);
            count_terms(&tokens)
        })
        .collect();

    let mut totals: BTreeMap<String, u64> = BTreeMap::new();
    for counts in &per_doc {
        for (t, &c) in counts {
            *totals.entry(t.clone()).or_insert(0) += c as u64;
        }
    }
    let vocab = prune(&totals, cfg);
    if vocab.is_empty() {
        return Err(Error::EmptyVocabulary);
    }
    let index: BTreeMap<&str, u32> = vocab
        .iter()
        .enumerate()
        .map(|(j, t)| (t.as_str(), j as u32))
        .collect();

    let rows: Vec<Vec<(u32, u32)>> = per_doc
        .iter()
        .map(|counts| {
            counts
                .iter()
                .filter_map(|(t, &c)| index.get(t.as_str()).map(|&j| (j, c)))
                .collect()
        })
        .collect();
    let doc_ids = corpus.docs().iter().map(|d| d.id.clone()).collect();
    let dtm = DocTermMatrix::from_rows(rows, vocab, doc_ids)?;

    let report = PreprocessReport {
        documents: dtm.m(),
        tokens_after_stopwords: totals.values().sum(),
        tokens_kept: dtm.total(),
        vocab_before_pruning: totals.len(),
        vocab_after_pruning: dtm.n(),
        empty_documents: dtm.empty_rows().into_iter().map(str::to_string).collect(),
    };
    Ok((dtm, report))
}
