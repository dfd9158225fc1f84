use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use super::LdaConfig;
use crate::digest::Digest;
use crate::error::{Error, Result};
use crate::matrix::Matrix;
use crate::textio::{read_rows_rect, write_atomic, write_rows};

pub const MODEL_MAGIC: &str = "LDAM1";

/// A trained model. Immutable after training.
#[derive(Clone, Debug, PartialEq)]
pub struct TopicModel {
    cfg: LdaConfig,
    topic_word: Matrix<f64>,
    vocab: Vec<String>,
    training_hash: Digest,
    train_corpus: Digest,
}

impl TopicModel {
    pub(crate) fn new(
        cfg: LdaConfig,
        topic_word: Matrix<f64>,
        vocab: Vec<String>,
        training_hash: Digest,
        train_corpus: Digest,
    ) -> Result<Self> {
        if topic_word.nrows() != cfg.k || topic_word.ncols() != vocab.len() {
            return Err(Error::LengthMismatch(topic_word.ncols(), vocab.len()));
        }
        Ok(TopicModel {
            cfg,
            topic_word,
            vocab,
            training_hash,
            train_corpus,
        })
    }

    pub fn cfg(&self) -> &LdaConfig {
        &self.cfg
    }

    /// k×n, each row a distribution over `vocab`.
    pub fn topic_word(&self) -> &Matrix<f64> {
        &self.topic_word
    }

    pub fn vocab(&self) -> &[String] {
        &self.vocab
    }

    pub fn training_hash(&self) -> &Digest {
        &self.training_hash
    }

    /// Digest of the document-term matrix the model was trained on.
    pub fn train_corpus(&self) -> &Digest {
        &self.train_corpus
    }

    /// Model with topic rows reordered: row `t` becomes row `perm[t]` of `self`.
    pub fn permute_topics(&self, perm: &[usize]) -> Self {
        let n = self.vocab.len();
        let topic_word = Matrix::from_fn(self.cfg.k, n, |t, w| self.topic_word[(perm[t], w)]);
        TopicModel {
            topic_word,
            ..self.clone()
        }
    }

    pub fn to_text(&self) -> String {
        let c = &self.cfg;
        let mut out = String::new();
        writeln!(out, "{MODEL_MAGIC}").unwrap();
        writeln!(out, "training_hash {}", self.training_hash).unwrap();
        writeln!(out, "train_corpus {}", self.train_corpus).unwrap();
        writeln!(out, "k {}", c.k).unwrap();
        writeln!(out, "alpha {:.16e}", c.alpha).unwrap();
        writeln!(out, "beta {:.16e}", c.beta).unwrap();
        writeln!(out, "iterations {}", c.iterations).unwrap();
        writeln!(out, "burn_in {}", c.burn_in).unwrap();
        writeln!(out, "sample_lag {}", c.sample_lag).unwrap();
        writeln!(out, "seed {}", c.seed).unwrap();
        writeln!(out, "vocab {}", self.vocab.len()).unwrap();
        for t in &self.vocab {
            writeln!(out, "{t}").unwrap();
        }
        writeln!(out, "topic_word").unwrap();
        write_rows(&mut out, &self.topic_word);
        out
    }

    pub fn from_text(text: &str, origin: &Path) -> Result<Self> {
        let bad = |m: &str| Error::format(origin, m.to_string());
        let mut lines = text.lines();
        if lines.next() != Some(MODEL_MAGIC) {
            return Err(bad("missing LDAM1 header"));
        }
        let mut field = |name: &str| -> Result<String> {
            let line = lines.next().ok_or_else(|| bad("truncated header"))?;
            line.strip_prefix(name)
                .and_then(|r| r.strip_prefix(' '))
                .map(str::to_string)
                .ok_or_else(|| bad(&format!("expected `{name}`")))
        };
        let training_hash = Digest::parse(&field("training_hash")?).ok_or_else(|| bad("bad hash"))?;
        let train_corpus = Digest::parse(&field("train_corpus")?).ok_or_else(|| bad("bad hash"))?;
        let num = |s: String| s.parse::<f64>().map_err(|_| bad("bad number"));
        let int = |s: String| s.parse::<u64>().map_err(|_| bad("bad integer"));
        let cfg = LdaConfig {
            k: int(field("k")?)? as usize,
            alpha: num(field("alpha")?)?,
            beta: num(field("beta")?)?,
            iterations: int(field("iterations")?)? as usize,
            burn_in: int(field("burn_in")?)? as usize,
            sample_lag: int(field("sample_lag")?)? as usize,
            seed: int(field("seed")?)?,
        };
        cfg.validate()?;
        let n = int(field("vocab")?)? as usize;
        let vocab: Vec<String> = (0..n)
            .map(|_| lines.next().map(str::to_string).ok_or_else(|| bad("truncated vocab")))
            .collect::<Result<_>>()?;
        if lines.next() != Some("topic_word") {
            return Err(bad("expected `topic_word`"));
        }
        let topic_word = read_rows_rect(&mut lines, cfg.k, n, origin)?;
        TopicModel::new(cfg, topic_word, vocab, training_hash, train_corpus)
    }

    pub fn save(&self, path: &Path) -> Result<()> {
        write_atomic(path, self.to_text().as_bytes())
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Self::from_text(&text, path)
    }
}
