//! Seeding for reproducible trials.
//!
//! Every random stream is a ChaCha8 generator (`rand_chacha::ChaCha8Rng`)
//! seeded with a 64-bit value. Per-trial seeds are derived from the run seed
//! and the trial coordinates with the SplitMix64 finalizer, so a trial's
//! outcome depends only on its coordinates and not on worker scheduling.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub type TrialRng = ChaCha8Rng;

/// SplitMix64 finalizer.
pub fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Seed for trial `trial` of stream `stream` under run seed `base`.
pub fn derive_seed(base: u64, stream: u64, trial: u64) -> u64 {
    splitmix64(base ^ splitmix64(stream.wrapping_mul(0xD6E8_FEB8_6659_FD93) ^ splitmix64(trial)))
}

pub fn rng_from_seed(seed: u64) -> TrialRng {
    ChaCha8Rng::seed_from_u64(seed)
}
