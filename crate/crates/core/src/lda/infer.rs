use std::collections::HashMap;

use rand::Rng as _;
use rayon::prelude::*;

use super::TopicModel;
use crate::corpus::{DocTermMatrix, SymbolSet};
use crate::digest::{Digest, DigestBuilder};
use crate::error::{Error, Result};
use crate::matrix::Matrix;
use crate::provenance::{Decision, Provenance};
use crate::relations::Representation;
use crate::rng;
use crate::scalar::Scalar;

pub const DEFAULT_FOLD_ITERS: usize = 200;

/// Doc-topic distributions for an ordered set of symbols.
#[derive(Clone, Debug, PartialEq)]
pub struct DocTopicMatrix {
    /// |S|×k, each row a distribution.
    pub rows: Matrix<f64>,
    pub symbol_ids: Vec<String>,
    pub source_model: Digest,
    /// Tokens dropped because their term is not in the model vocabulary.
    pub oov_tokens: u64,
}

/// Fold-in: Gibbs-samples token assignments of the target documents with
/// the model's topic-word distributions held fixed, averaging the smoothed
/// doc-topic estimate over the second half of the iterations.
///
/// Each document draws from its own stream keyed by the model seed and the
/// document id, so the result for a document does not depend on which other
/// documents are requested or in what order.
pub fn infer_doc_topics(
    model: &TopicModel,
    dtm: &DocTermMatrix,
    symbols: &SymbolSet,
    fold_iters: usize,
) -> Result<DocTopicMatrix> {
    if fold_iters < 1 {
        return Err(Error::InvalidParameter("fold_iters must be >= 1".into()));
    }
    let model_index: HashMap<&str, u32> = model
        .vocab()
        .iter()
        .enumerate()
        .map(|(j, t)| (t.as_str(), j as u32))
        .collect();
    let col_map: Vec<Option<u32>> = dtm
        .vocab()
        .iter()
        .map(|t| model_index.get(t.as_str()).copied())
        .collect();
    if col_map.iter().all(Option::is_none) {
        return Err(Error::EmptyOverlap);
    }
    let rows: Vec<usize> = symbols
        .ids()
        .iter()
        .map(|id| dtm.row_index(id).ok_or_else(|| Error::SymbolNotFound(id.clone())))
        .collect::<Result<_>>()?;

    let k = model.cfg().k;
    let results: Vec<(Vec<f64>, u64)> = rows
        .par_iter()
        .zip(symbols.ids().par_iter())
        .map(|(&d, id)| {
            let mut words = Vec::new();
            let mut oov = 0u64;
            for &(j, c) in dtm.row(d) {
                match col_map[j as usize] {
                    Some(w) => words.extend(std::iter::repeat_n(w, c as usize)),
                    None => oov += c as u64,
                }
            }
            (fold_in_doc(model, &words, fold_iters, id), oov)
        })
        .collect();

    let mut data = Vec::with_capacity(rows.len() * k);
    let mut oov_tokens = 0;
    for (row, oov) in results {
        data.extend(row);
        oov_tokens += oov;
    }
    if oov_tokens > 0 {
        log::info!("fold-in dropped {oov_tokens} out-of-vocabulary tokens");
    }
    Ok(DocTopicMatrix {
        rows: Matrix::from_vec(rows.len(), k, data),
        symbol_ids: symbols.ids().to_vec(),
        source_model: model.training_hash().clone(),
        oov_tokens,
    })
}

fn fold_in_doc(model: &TopicModel, words: &[u32], fold_iters: usize, doc_id: &str) -> Vec<f64> {
    let cfg = model.cfg();
    let k = cfg.k;
    let alpha = cfg.alpha;
    let denom = words.len() as f64 + k as f64 * alpha;
    if words.is_empty() {
        return vec![alpha / denom; k];
    }
    let phi = model.topic_word();
    let mut rng = rng::stream(cfg.seed, &format!("lda/fold-in/{doc_id}"));
    let mut counts = vec![0u32; k];
    let mut z: Vec<usize> = words
        .iter()
        .map(|_| {
            let t = rng.random_range(0..k);
            counts[t] += 1;
            t
        })
        .collect();
    let mut weights = vec![0.0; k];
    let mut acc = vec![0.0; k];
    let burn = fold_iters / 2;
    let mut samples = 0usize;
    for it in 1..=fold_iters {
        for (i, &w) in words.iter().enumerate() {
            counts[z[i]] -= 1;
            let mut total = 0.0;
            for t in 0..k {
                total += (counts[t] as f64 + alpha) * phi[(t, w as usize)];
                weights[t] = total;
            }
            let u = rng.random::<f64>() * total;
            let t = weights.iter().position(|&c| u < c).unwrap_or(k - 1);
            z[i] = t;
            counts[t] += 1;
        }
        if it > burn {
            for (a, &c) in acc.iter_mut().zip(&counts) {
                *a += (c as f64 + alpha) / denom;
            }
            samples += 1;
        }
    }
    let total: f64 = acc.iter().sum();
    debug_assert!(samples > 0);
    acc.into_iter().map(|x| x / total).collect()
}

/// Digest of `represent_symbols` output, computable without the model.
pub fn representation_digest(training_hash: &Digest, corpus: &Digest, symbols: &Digest, fold_iters: usize) -> Digest {
    DigestBuilder::new("representation/lda")
        .digest(training_hash)
        .digest(corpus)
        .digest(symbols)
        .u64(fold_iters as u64)
        .finish()
}

/// Doc-topic rows as a generic representation, with provenance chaining the
/// model, the applied corpus, the symbols and the fold-in length.
pub fn represent_symbols<T: Scalar>(
    model: &TopicModel,
    dtm: &DocTermMatrix,
    symbols: &SymbolSet,
    fold_iters: usize,
) -> Result<Representation<T>> {
    let dt = infer_doc_topics(model, dtm, symbols, fold_iters)?;
    let corpus = dtm.digest();
    let digest = representation_digest(model.training_hash(), &corpus, &symbols.digest(), fold_iters);
    let code = if *model.train_corpus() == corpus {
        "native".to_string()
    } else {
        model.train_corpus().to_string()
    };
    let mut decisions = vec![
        Decision::new("corpus", &corpus),
        Decision::new("code", code),
        Decision::new("symbols", symbols.digest()),
    ];
    decisions.extend(model.cfg().decisions());
    decisions.push(Decision::new("fold_iters", fold_iters));
    Representation::new(dt.rows.cast(), dt.symbol_ids, Provenance::new(digest, decisions))
}
