//! Deterministic randomness.
//!
//! Every random draw in this crate comes from `ChaCha8Rng` (crate
//! `rand_chacha` 0.9) seeded through `SeedableRng::seed_from_u64`. The
//! generator and the seeding path are part of the reproducibility contract:
//! the same seed yields the same arrival orders and sampled profiles on every
//! platform. Composite seeds (base seed, instance, committee size, iteration)
//! are folded with the SplitMix64 finalizer.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Name of the generator, recorded in experiment outputs.
pub const GENERATOR_NAME: &str = "chacha8/rand_chacha-0.9/seed_from_u64";

pub type Rng = ChaCha8Rng;

pub fn rng_from_seed(seed: u64) -> Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Folds a sequence of integers into one seed. Order-sensitive.
pub fn derive_seed(parts: &[u64]) -> u64 {
    parts
        .iter()
        .fold(0x6A09_E667_F3BC_C909, |acc, &p| splitmix64(acc ^ splitmix64(p)))
}

/// Stable 64-bit FNV-1a hash of a string, used to turn instance ids into seed parts.
pub fn hash_str(s: &str) -> u64 {
    s.bytes().fold(0xcbf2_9ce4_8422_2325, |h, b| {
        (h ^ u64::from(b)).wrapping_mul(0x0100_0000_01b3)
    })
}
