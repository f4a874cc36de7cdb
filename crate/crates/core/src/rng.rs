//! Deterministic RNG stream derivation.
//!
//! Every random quantity in an experiment is drawn from a ChaCha8 stream
//! addressed by `(seed, stream)`, so the values do not depend on the order in
//! which trials, offices or SNR points are scheduled.

use rand::SeedableRng;
pub use rand_chacha::ChaCha8Rng;

/// Opens stream `stream` of the generator keyed by `seed`.
pub fn stream(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

/// SplitMix64 finalizer over `(seed, index)`; used to derive child seeds.
pub fn derive_seed(seed: u64, index: u64) -> u64 {
    let mut z = seed ^ index.wrapping_add(1).wrapping_mul(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}
