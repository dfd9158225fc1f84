use std::collections::BTreeSet;

use rand::Rng as _;
use serde::{Deserialize, Serialize};

use crate::digest::{Digest, DigestBuilder};
use crate::error::{Error, Result};
use crate::lda::{LdaConfig, DEFAULT_FOLD_ITERS};
use crate::relations::RelationMeasure;
use crate::rng;

/// Explicit seeds, or how many to draw from the master seed.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Seeds {
    List(Vec<u64>),
    Count(usize),
}

impl Default for Seeds {
    fn default() -> Self {
        Seeds::Count(5)
    }
}

/// LDA settings shared by every ensemble member. `alpha = None` means 1/k.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct LdaTemplate {
    pub alpha: Option<f64>,
    pub beta: f64,
    pub iterations: usize,
    pub burn_in: usize,
    pub sample_lag: usize,
    pub fold_iters: usize,
}

impl Default for LdaTemplate {
    fn default() -> Self {
        let d = LdaConfig::new(1, 0);
        LdaTemplate {
            alpha: None,
            beta: d.beta,
            iterations: d.iterations,
            burn_in: d.burn_in,
            sample_lag: d.sample_lag,
            fold_iters: DEFAULT_FOLD_ITERS,
        }
    }
}

impl LdaTemplate {
    pub fn config(&self, k: usize, seed: u64) -> LdaConfig {
        let base = LdaConfig::new(k, seed);
        LdaConfig {
            alpha: self.alpha.unwrap_or(base.alpha),
            beta: self.beta,
            iterations: self.iterations,
            burn_in: self.burn_in,
            sample_lag: self.sample_lag,
            ..base
        }
    }

    fn hash_into(&self, b: &mut DigestBuilder) {
        match self.alpha {
            Some(a) => b.str("alpha").f64(a),
            None => b.str("alpha=1/k"),
        };
        b.f64(self.beta)
            .u64(self.iterations as u64)
            .u64(self.burn_in as u64)
            .u64(self.sample_lag as u64)
            .u64(self.fold_iters as u64);
    }
}

/// The set of representation maps θ_{k,ψ} for k in `ks` and ψ in the seeds.
#[derive(Clone, Debug, PartialEq)]
pub struct EnsembleSpec {
    pub ks: Vec<usize>,
    pub seeds: Seeds,
    pub lda: LdaTemplate,
    /// Number of sampled symbols; `None` uses every document.
    pub symbols: Option<usize>,
    pub symbols_seed: u64,
    pub measure: RelationMeasure,
    /// Source of drawn seeds when `seeds` is a count.
    pub master_seed: u64,
}

impl EnsembleSpec {
    pub fn new(ks: Vec<usize>, seeds: Seeds, master_seed: u64) -> Self {
        EnsembleSpec {
            ks,
            seeds,
            lda: LdaTemplate::default(),
            symbols: None,
            symbols_seed: rng::derive_seed(master_seed, "symbols"),
            measure: RelationMeasure::Jsd2,
            master_seed,
        }
    }

    /// Explicit seeds, or `count` distinct seeds below 2^31 drawn from the
    /// master seed.
    pub fn resolved_seeds(&self) -> Vec<u64> {
        match &self.seeds {
            Seeds::List(v) => v.clone(),
            Seeds::Count(n) => {
                let mut r = rng::stream(self.master_seed, "ensemble/seeds");
                let mut seen = BTreeSet::new();
                let mut out = Vec::with_capacity(*n);
                while out.len() < *n {
                    let s = r.random_range(0..1u64 << 31);
                    if seen.insert(s) {
                        out.push(s);
                    }
                }
                out
            }
        }
    }

    /// Every (k, ψ) pair, k-major.
    pub fn members(&self) -> Result<Vec<(usize, u64)>> {
        let seeds = self.resolved_seeds();
        if self.ks.is_empty() || seeds.is_empty() {
            return Err(Error::InvalidParameter("ensemble needs at least one k and one seed".into()));
        }
        let mut seen = BTreeSet::new();
        let mut out = Vec::new();
        for &k in &self.ks {
            for &s in &seeds {
                if !seen.insert((k, s)) {
                    return Err(Error::DuplicateDecision(format!("k={k};seed={s}")));
                }
                out.push((k, s));
            }
        }
        Ok(out)
    }

    pub fn validate(&self) -> Result<()> {
        let members = self.members()?;
        for (k, s) in members {
            self.lda.config(k, s).validate()?;
        }
        if self.lda.fold_iters < 1 {
            return Err(Error::InvalidParameter("fold_iters must be >= 1".into()));
        }
        if self.measure.domain() == crate::relations::Domain::Strings {
            return Err(Error::InvalidParameter(format!(
                "{} applies to raw text, not topic mixtures",
                self.measure.id()
            )));
        }
        Ok(())
    }

    pub fn digest(&self) -> Digest {
        let mut b = DigestBuilder::new("ensemble");
        for &k in &self.ks {
            b.u64(k as u64);
        }
        b.str("seeds");
        for s in self.resolved_seeds() {
            b.u64(s);
        }
        self.lda.hash_into(&mut b);
        b.str(&match self.symbols {
            Some(n) => format!("symbols={n}"),
            None => "symbols=all".into(),
        })
        .u64(self.symbols_seed)
        .str(self.measure.id());
        b.finish()
    }
}
