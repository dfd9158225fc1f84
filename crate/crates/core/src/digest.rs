//! Content digests used for provenance and content-addressed storage.

use std::fmt;

use serde::{Deserialize, Serialize};
use sha2::{Digest as _, Sha256};

/// Hex-encoded SHA-256.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Digest(String);

impl Digest {
    pub fn as_str(&self) -> &str {
        &self.0
    }

    pub fn short(&self) -> &str {
        &self.0[..12.min(self.0.len())]
    }

    /// Accepts a 64 character lowercase hex string.
    pub fn parse(s: &str) -> Option<Self> {
        (s.len() == 64 && s.bytes().all(|b| b.is_ascii_digit() || (b'a'..=b'f').contains(&b)))
            .then(|| Digest(s.to_string()))
    }
}

impl fmt::Display for Digest {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

/// Incremental, length-prefixed digest builder. Every field is framed so
/// that `("ab", "c")` and `("a", "bc")` hash differently.
pub struct DigestBuilder {
    hasher: Sha256,
}

impl DigestBuilder {
    pub fn new(tag: &str) -> Self {
        let mut b = DigestBuilder {
            hasher: Sha256::new(),
        };
        b.bytes(tag.as_bytes());
        b
    }

    pub fn bytes(&mut self, data: &[u8]) -> &mut Self {
        self.hasher.update((data.len() as u64).to_le_bytes());
        self.hasher.update(data);
        self
    }

    pub fn str(&mut self, s: &str) -> &mut Self {
        self.bytes(s.as_bytes())
    }

    pub fn field(&mut self, name: &str, value: impl fmt::Display) -> &mut Self {
        self.str(name);
        self.str(&value.to_string())
    }

    pub fn u64(&mut self, v: u64) -> &mut Self {
        self.bytes(&v.to_le_bytes())
    }

    pub fn f64(&mut self, v: f64) -> &mut Self {
        self.bytes(&v.to_bits().to_le_bytes())
    }

    pub fn digest(&mut self, d: &Digest) -> &mut Self {
        self.str(d.as_str())
    }

    pub fn finish(&self) -> Digest {
        Digest(hex::encode(self.hasher.clone().finalize()))
    }
}
