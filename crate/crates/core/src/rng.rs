//! Seed derivation for reproducible, independently indexed random streams.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Stream domain for generator-matrix instantiation attempts.
pub const DOMAIN_INSTANTIATE: u64 = 1;
/// Stream domain for simulation trials.
pub const DOMAIN_TRIAL: u64 = 2;

/// A ChaCha stream keyed by `(seed, domain)` and selected by `index`, so the
/// `index`-th attempt or trial never depends on how many others ran first.
pub fn derived_rng(seed: u64, domain: u64, index: u64) -> ChaCha8Rng {
    let mut key = [0u8; 32];
    key[..8].copy_from_slice(&seed.to_le_bytes());
    key[8..16].copy_from_slice(&domain.to_le_bytes());
    let mut rng = ChaCha8Rng::from_seed(key);
    rng.set_stream(index);
    rng
}
