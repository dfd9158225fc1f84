use rand::Rng as _;

use super::{DocTopicMatrix, LdaConfig, TopicModel};
use crate::corpus::DocTermMatrix;
use crate::digest::{Digest, DigestBuilder};
use crate::error::{Error, Result};
use crate::matrix::Matrix;
use crate::rng;

/// Count tables of a collapsed Gibbs chain.
pub struct GibbsState {
    k: usize,
    n_words: usize,
    /// Word index per token, documents laid out contiguously.
    words: Vec<u32>,
    /// Topic assignment per token.
    topics: Vec<u16>,
    doc_offsets: Vec<usize>,
    doc_topic: Vec<u32>,
    topic_word: Vec<u32>,
    topic_total: Vec<u32>,
}

impl GibbsState {
    fn new(dtm: &DocTermMatrix, k: usize, rng: &mut rng::Rng) -> Self {
        let n_words = dtm.n();
        let mut words = Vec::with_capacity(dtm.total() as usize);
        let mut doc_offsets = Vec::with_capacity(dtm.m() + 1);
        doc_offsets.push(0);
        for d in 0..dtm.m() {
            for &(w, c) in dtm.row(d) {
                words.extend(std::iter::repeat_n(w, c as usize));
            }
            doc_offsets.push(words.len());
        }
        let mut state = GibbsState {
            k,
            n_words,
            topics: Vec::with_capacity(words.len()),
            words,
            doc_offsets,
            doc_topic: vec![0; dtm.m() * k],
            topic_word: vec![0; k * n_words],
            topic_total: vec![0; k],
        };
        for d in 0..dtm.m() {
            for i in state.doc_offsets[d]..state.doc_offsets[d + 1] {
                let t = rng.random_range(0..k);
                state.topics.push(t as u16);
                state.add(d, state.words[i] as usize, t);
            }
        }
        state
    }

    #[inline]
    fn add(&mut self, d: usize, w: usize, t: usize) {
        self.doc_topic[d * self.k + t] += 1;
        self.topic_word[t * self.n_words + w] += 1;
        self.topic_total[t] += 1;
    }

    #[inline]
    fn remove(&mut self, d: usize, w: usize, t: usize) {
        self.doc_topic[d * self.k + t] -= 1;
        self.topic_word[t * self.n_words + w] -= 1;
        self.topic_total[t] -= 1;
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn num_docs(&self) -> usize {
        self.doc_offsets.len() - 1
    }

    pub fn total_tokens(&self) -> usize {
        self.words.len()
    }

    pub fn doc_len(&self, d: usize) -> usize {
        self.doc_offsets[d + 1] - self.doc_offsets[d]
    }

    /// `n_{d,t}` for every topic.
    pub fn doc_topic_counts(&self, d: usize) -> &[u32] {
        &self.doc_topic[d * self.k..(d + 1) * self.k]
    }

    /// `n_{t,w}` for every word.
    pub fn topic_word_counts(&self, t: usize) -> &[u32] {
        &self.topic_word[t * self.n_words..(t + 1) * self.n_words]
    }

    /// `n_t`.
    pub fn topic_totals(&self) -> &[u32] {
        &self.topic_total
    }

    fn sweep(&mut self, cfg: &LdaConfig, rng: &mut rng::Rng, weights: &mut [f64]) {
        let k = self.k;
        let v_beta = self.n_words as f64 * cfg.beta;
        for d in 0..self.num_docs() {
            for i in self.doc_offsets[d]..self.doc_offsets[d + 1] {
                let w = self.words[i] as usize;
                let old = self.topics[i] as usize;
                self.remove(d, w, old);
                let dt = &self.doc_topic[d * k..(d + 1) * k];
                let mut total = 0.0;
                for t in 0..k {
                    let p = (dt[t] as f64 + cfg.alpha)
                        * (self.topic_word[t * self.n_words + w] as f64 + cfg.beta)
                        / (self.topic_total[t] as f64 + v_beta);
                    total += p;
                    weights[t] = total;
                }
                let u = rng.random::<f64>() * total;
                let new = weights[..k].iter().position(|&c| u < c).unwrap_or(k - 1);
                self.topics[i] = new as u16;
                self.add(d, w, new);
            }
        }
    }

    fn accumulate(&self, cfg: &LdaConfig, topic_word: &mut [f64], doc_topic: &mut [f64]) {
        let k = self.k;
        let v_beta = self.n_words as f64 * cfg.beta;
        for t in 0..k {
            let denom = self.topic_total[t] as f64 + v_beta;
            let counts = self.topic_word_counts(t);
            let dst = &mut topic_word[t * self.n_words..(t + 1) * self.n_words];
            for (x, &c) in dst.iter_mut().zip(counts) {
                *x += (c as f64 + cfg.beta) / denom;
            }
        }
        let k_alpha = k as f64 * cfg.alpha;
        for d in 0..self.num_docs() {
            let denom = self.doc_len(d) as f64 + k_alpha;
            let counts = self.doc_topic_counts(d);
            for (x, &c) in doc_topic[d * k..(d + 1) * k].iter_mut().zip(counts) {
                *x += (c as f64 + cfg.alpha) / denom;
            }
        }
    }
}

/// Output of training: the model and the training-time doc-topic estimates.
pub struct TrainedLda {
    pub model: TopicModel,
    pub doc_topics: DocTopicMatrix,
    /// Iterations after which count snapshots were averaged.
    pub snapshots: Vec<usize>,
}

/// The `training_hash` a model trained on the corpus with this digest
/// under `cfg` will carry.
pub fn training_digest(corpus: &Digest, cfg: &LdaConfig) -> Digest {
    let mut b = DigestBuilder::new("lda/train");
    b.digest(corpus);
    cfg.hash_into(&mut b);
    b.finish()
}

pub fn train_lda(dtm: &DocTermMatrix, cfg: &LdaConfig) -> Result<TopicModel> {
    train_lda_observed(dtm, cfg, |_, _| {}).map(|t| t.model)
}

/// Trains, calling `observe(iteration, state)` after every sweep
/// (iterations are 1-based).
pub fn train_lda_observed(
    dtm: &DocTermMatrix,
    cfg: &LdaConfig,
    mut observe: impl FnMut(usize, &GibbsState),
) -> Result<TrainedLda> {
    cfg.validate()?;
    if dtm.m() == 0 || dtm.total() == 0 {
        return Err(Error::InvalidParameter("document-term matrix has no tokens".into()));
    }
    if cfg.k as u64 > dtm.total() {
        log::warn!("k = {} exceeds the {} training tokens", cfg.k, dtm.total());
    }
    let k = cfg.k;
    let n = dtm.n();
    let m = dtm.m();
    let mut rng = rng::stream(cfg.seed, "lda/gibbs");
    let mut state = GibbsState::new(dtm, k, &mut rng);
    let mut weights = vec![0.0; k];
    let mut tw_sum = vec![0.0; k * n];
    let mut dt_sum = vec![0.0; m * k];
    let mut snapshots = Vec::new();
    for it in 1..=cfg.iterations {
        state.sweep(cfg, &mut rng, &mut weights);
        observe(it, &state);
        if it > cfg.burn_in && (it - cfg.burn_in) % cfg.sample_lag == 0 {
            state.accumulate(cfg, &mut tw_sum, &mut dt_sum);
            snapshots.push(it);
        }
    }
    if snapshots.is_empty() {
        state.accumulate(cfg, &mut tw_sum, &mut dt_sum);
        snapshots.push(cfg.iterations);
    }
    let topic_word = normalized_rows(k, n, &tw_sum);
    let doc_topic = normalized_rows(m, k, &dt_sum);

    let train_corpus = dtm.digest();
    let training_hash = training_digest(&train_corpus, cfg);

    let model = TopicModel::new(
        cfg.clone(),
        topic_word,
        dtm.vocab().to_vec(),
        training_hash.clone(),
        train_corpus,
    )?;
    let doc_topics = DocTopicMatrix {
        rows: doc_topic,
        symbol_ids: dtm.doc_ids().to_vec(),
        source_model: training_hash,
        oov_tokens: 0,
    };
    Ok(TrainedLda {
        model,
        doc_topics,
        snapshots,
    })
}

/// Rows of a sum of normalized snapshots, renormalized to sum to 1.
pub(crate) fn normalized_rows(rows: usize, cols: usize, sums: &[f64]) -> Matrix<f64> {
    let mut out = Matrix::from_vec(rows, cols, sums.to_vec());
    for r in 0..rows {
        let row = out.row_mut(r);
        let total: f64 = row.iter().sum();
        for x in row.iter_mut() {
            *x /= total;
        }
    }
    out
}
