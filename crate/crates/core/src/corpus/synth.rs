//! Synthetic corpora drawn from the LDA generative process.

use rand::Rng as _;
use rand_distr::{Distribution, Gamma};

use super::{Document, RawCorpus};
use crate::error::{Error, Result};
use crate::rng::{self, Rng};

#[derive(Clone, Debug, PartialEq)]
pub struct SynthSpec {
    pub k_true: usize,
    /// Documents.
    pub m: usize,
    /// Vocabulary size; words are named `w0 .. w{n-1}`.
    pub n: usize,
    pub doc_len: usize,
    /// Symmetric Dirichlet concentration for both topic-word and doc-topic draws.
    pub concentration: f64,
    pub seed: u64,
    /// Seed for the topic-word draws. Corpora sharing a `topic_seed` share
    /// topics while their documents differ. Defaults to `seed`.
    pub topic_seed: Option<u64>,
}

impl SynthSpec {
    pub fn new(k_true: usize, m: usize, n: usize, doc_len: usize, concentration: f64, seed: u64) -> Self {
        SynthSpec {
            k_true,
            m,
            n,
            doc_len,
            concentration,
            seed,
            topic_seed: None,
        }
    }

    pub fn with_topic_seed(mut self, topic_seed: u64) -> Self {
        self.topic_seed = Some(topic_seed);
        self
    }

    fn validate(&self) -> Result<()> {
        let bad = |m: &str| Err(Error::InvalidParameter(m.into()));
        if self.k_true < 1 {
            return bad("k_true must be >= 1");
        }
        if self.m < 1 {
            return bad("m must be >= 1");
        }
        if self.n < self.k_true {
            return bad("n must be >= k_true");
        }
        if self.doc_len < 1 {
            return bad("doc_len must be >= 1");
        }
        if !(self.concentration > 0.0 && self.concentration.is_finite()) {
            return bad("concentration must be positive");
        }
        Ok(())
    }
}

/// A generated corpus together with its ground truth.
#[derive(Clone, Debug)]
pub struct SynthCorpus {
    pub corpus: RawCorpus,
    /// k_true rows over `n` words.
    pub topic_words: Vec<Vec<f64>>,
    /// m rows over k_true topics.
    pub doc_topics: Vec<Vec<f64>>,
}

impl SynthCorpus {
    /// Index of the largest mixture weight of each document.
    pub fn dominant_topics(&self) -> Vec<usize> {
        self.doc_topics.iter().map(|r| argmax(r)).collect()
    }
}

pub(crate) fn argmax(v: &[f64]) -> usize {
    let mut best = 0;
    for (i, &x) in v.iter().enumerate() {
        if x > v[best] {
            best = i;
        }
    }
    best
}

/// Symmetric Dirichlet draw computed in log space, so tiny concentrations
/// do not underflow every coordinate to zero.
fn dirichlet(rng: &mut Rng, dim: usize, concentration: f64) -> Vec<f64> {
    let (shape, boost) = if concentration < 1.0 {
        (concentration + 1.0, true)
    } else {
        (concentration, false)
    };
    let gamma = Gamma::new(shape, 1.0).expect("shape is positive");
    let logs: Vec<f64> = (0..dim)
        .map(|_| {
            let g: f64 = gamma.sample(rng);
            let mut l = g.ln();
            if boost {
                // Gamma(a) = Gamma(a + 1) * U^(1/a)
                let u: f64 = rng.random::<f64>().max(f64::MIN_POSITIVE);
                l += u.ln() / concentration;
            }
            l
        })
        .collect();
    let max = logs.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let w: Vec<f64> = logs.iter().map(|l| (l - max).exp()).collect();
    let total: f64 = w.iter().sum();
    w.into_iter().map(|x| x / total).collect()
}

fn categorical(rng: &mut Rng, p: &[f64]) -> usize {
    let u: f64 = rng.random();
    let mut acc = 0.0;
    for (i, &x) in p.iter().enumerate() {
        acc += x;
        if u < acc {
            return i;
        }
    }
    p.len() - 1
}

pub fn synth_corpus(spec: &SynthSpec) -> Result<SynthCorpus> {
    spec.validate()?;
    let mut topic_rng = rng::stream(spec.topic_seed.unwrap_or(spec.seed), "synth/topics");
    let mut doc_rng = rng::stream(spec.seed, "synth/docs");
    let topic_words: Vec<Vec<f64>> = (0..spec.k_true)
        .map(|_| dirichlet(&mut topic_rng, spec.n, spec.concentration))
        .collect();
    let mut doc_topics = Vec::with_capacity(spec.m);
    let mut docs = Vec::with_capacity(spec.m);
    for d in 0..spec.m {
        let mix = dirichlet(&mut doc_rng, spec.k_true, spec.concentration);
        let words: Vec<String> = (0..spec.doc_len)
            .map(|_| {
                let t = categorical(&mut doc_rng, &mix);
                format!("w{}", categorical(&mut doc_rng, &topic_words[t]))
            })
            .collect();
        docs.push(Document {
            id: d.to_string(),
            text: words.join(" "),
        });
        doc_topics.push(mix);
    }
    Ok(SynthCorpus {
        corpus: RawCorpus::new(docs)?,
        topic_words,
        doc_topics,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn single_topic_has_uniform_mixture() {
        let s = synth_corpus(&SynthSpec::new(1, 5, 10, 20, 0.5, 1)).unwrap();
        assert!(s.doc_topics.iter().all(|r| r == &vec![1.0]));
        assert_eq!(s.topic_words.len(), 1);
    }

    #[test]
    fn tiny_concentration_gives_near_one_hot_mixtures() {
        let s = synth_corpus(&SynthSpec::new(2, 50, 30, 10, 0.01, 4)).unwrap();
        let near_pure = s
            .doc_topics
            .iter()
            .filter(|r| r.iter().cloned().fold(0.0, f64::max) > 0.99)
            .count();
        assert!(near_pure >= 45, "{near_pure}");
        for r in &s.doc_topics {
            assert!((r.iter().sum::<f64>() - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn deterministic() {
        let spec = SynthSpec::new(3, 10, 40, 15, 0.3, 77);
        assert_eq!(synth_corpus(&spec).unwrap().corpus, synth_corpus(&spec).unwrap().corpus);
    }

    #[test]
    fn shared_topic_seed_shares_topics_only() {
        let a = synth_corpus(&SynthSpec::new(3, 10, 40, 15, 0.3, 1).with_topic_seed(9)).unwrap();
        let b = synth_corpus(&SynthSpec::new(3, 10, 40, 15, 0.3, 2).with_topic_seed(9)).unwrap();
        assert_eq!(a.topic_words, b.topic_words);
        assert_ne!(a.corpus, b.corpus);
    }

    #[test]
    fn invalid_parameters() {
        assert!(synth_corpus(&SynthSpec::new(0, 1, 1, 1, 1.0, 0)).is_err());
        assert!(synth_corpus(&SynthSpec::new(3, 1, 2, 1, 1.0, 0)).is_err());
        assert!(synth_corpus(&SynthSpec::new(1, 1, 1, 1, 0.0, 0)).is_err());
    }
}
