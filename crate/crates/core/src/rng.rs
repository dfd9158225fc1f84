//! Seeded random streams.
//!
//! Every stochastic step draws from ChaCha20 (`rand_chacha::ChaCha20Rng`),
//! whose output stream is fixed by its algorithm and therefore identical on
//! every platform. Sub-streams are derived by hashing a master seed with a
//! purpose label, so adding a new consumer never shifts an existing one.

use rand::SeedableRng;
use rand_chacha::ChaCha20Rng;
use sha2::{Digest as _, Sha256};

pub type Rng = ChaCha20Rng;

pub fn seeded(seed: u64) -> Rng {
    Rng::seed_from_u64(seed)
}

/// Derives an independent 64-bit seed from `master` and a label.
pub fn derive_seed(master: u64, label: &str) -> u64 {
    let mut h = Sha256::new();
    h.update(master.to_le_bytes());
    h.update(label.as_bytes());
    let out = h.finalize();
    u64::from_le_bytes(out[..8].try_into().expect("sha256 output has 32 bytes"))
}

pub fn stream(master: u64, label: &str) -> Rng {
    seeded(derive_seed(master, label))
}
