use serde::{Deserialize, Serialize};

use crate::digest::DigestBuilder;
use crate::error::{Error, Result};
use crate::provenance::Decision;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LdaConfig {
    pub k: usize,
    /// Symmetric doc-topic Dirichlet parameter.
    pub alpha: f64,
    /// Symmetric topic-word Dirichlet parameter.
    pub beta: f64,
    pub iterations: usize,
    pub burn_in: usize,
    pub sample_lag: usize,
    pub seed: u64,
}

impl LdaConfig {
    /// alpha = 1/k, beta = 0.01, 1000 iterations, 500 burn-in, lag 50.
    pub fn new(k: usize, seed: u64) -> Self {
        LdaConfig {
            k,
            alpha: 1.0 / k.max(1) as f64,
            beta: 0.01,
            iterations: 1000,
            burn_in: 500,
            sample_lag: 50,
            seed,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(Error::InvalidParameter(m));
        if self.k < 1 {
            return bad("k must be >= 1".into());
        }
        if !(self.alpha > 0.0 && self.alpha.is_finite()) {
            return bad(format!("alpha must be positive, got {}", self.alpha));
        }
        if !(self.beta > 0.0 && self.beta.is_finite()) {
            return bad(format!("beta must be positive, got {}", self.beta));
        }
        if self.iterations < 1 {
            return bad("iterations must be >= 1".into());
        }
        if self.burn_in >= self.iterations {
            return bad("burn_in must be < iterations".into());
        }
        if self.sample_lag < 1 {
            return bad("sample_lag must be >= 1".into());
        }
        if self.k > u16::MAX as usize {
            return bad(format!("k must be <= {}", u16::MAX));
        }
        Ok(())
    }

    pub(crate) fn hash_into(&self, b: &mut DigestBuilder) {
        b.u64(self.k as u64)
            .f64(self.alpha)
            .f64(self.beta)
            .u64(self.iterations as u64)
            .u64(self.burn_in as u64)
            .u64(self.sample_lag as u64)
            .u64(self.seed);
    }

    pub fn decisions(&self) -> Vec<Decision> {
        vec![
            Decision::new("model", "lda-gibbs"),
            Decision::new("k", self.k),
            Decision::new("seed", self.seed),
            Decision::new("alpha", self.alpha),
            Decision::new("beta", self.beta),
            Decision::new("iterations", self.iterations),
            Decision::new("burn_in", self.burn_in),
            Decision::new("sample_lag", self.sample_lag),
            Decision::new("estimator", "snapshot-mean"),
        ]
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults_and_validation() {
        let c = LdaConfig::new(4, 1);
        assert_eq!(c.alpha, 0.25);
        c.validate().unwrap();
        assert!(LdaConfig { k: 0, ..c.clone() }.validate().is_err());
        assert!(LdaConfig { alpha: 0.0, ..c.clone() }.validate().is_err());
        assert!(LdaConfig { beta: -1.0, ..c.clone() }.validate().is_err());
        assert!(LdaConfig { burn_in: 1000, ..c.clone() }.validate().is_err());
        assert!(LdaConfig { sample_lag: 0, ..c }.validate().is_err());
    }
}
