//! Deterministic random streams.
//!
//! Every random quantity in the crate is drawn from a [`ChaCha8Rng`] seeded
//! through SplitMix64. Independent substreams (one per trial, per batch, per
//! series term) are derived from a master seed and a stream index, so results
//! do not depend on how work is scheduled across threads.
//!
//! Reproducibility is bit-exact within one build of the crate.

use rand::SeedableRng;
pub use rand_chacha::ChaCha8Rng;

const GOLDEN_GAMMA: u64 = 0x9E37_79B9_7F4A_7C15;

/// One step of the SplitMix64 output function.
pub fn splitmix64(x: u64) -> u64 {
    let mut z = x.wrapping_add(GOLDEN_GAMMA);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Seed of substream `index` under `master`.
pub fn substream_seed(master: u64, index: u64) -> u64 {
    splitmix64(master ^ splitmix64(index.wrapping_mul(GOLDEN_GAMMA).wrapping_add(1)))
}

/// Seed derived from a master seed and a path of indices, e.g. `(n, trial)`.
pub fn derive_seed(master: u64, path: &[u64]) -> u64 {
    path.iter().fold(master, |acc, &i| substream_seed(acc, i))
}

/// Generator seeded directly from `seed`.
pub fn rng_from_seed(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Generator for substream `index` of `master`.
pub fn substream(master: u64, index: u64) -> ChaCha8Rng {
    rng_from_seed(substream_seed(master, index))
}
