//! Seeded random streams and seed derivation.
//!
//! Every stochastic step draws from a [`SimRng`] built from a 64-bit seed.
//! Seeds for independent streams are derived with [`mix`], a SplitMix64
//! finalizer applied to `seed ^ golden·(salt+1)`. Derived seeds depend only on
//! the values mixed in, never on execution order.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub type SimRng = ChaCha8Rng;

pub fn rng_from_seed(seed: u64) -> SimRng {
    SimRng::seed_from_u64(seed)
}

const GOLDEN: u64 = 0x9E37_79B9_7F4A_7C15;

/// SplitMix64 output function.
pub fn splitmix64(mut z: u64) -> u64 {
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Derives a child seed from `seed` and a salt such as a trial index.
pub fn mix(seed: u64, salt: u64) -> u64 {
    splitmix64(seed ^ GOLDEN.wrapping_mul(salt.wrapping_add(1)))
}
