//! Seeded random streams.
//!
//! Every random draw in the crate comes from a `Xoshiro256PlusPlus` generator
//! (Blackman & Vigna) seeded through SplitMix64. Independent streams are
//! derived from a base seed, a component name and an index:
//!
//! ```text
//! h      = FNV-1a-64(name)
//! stream = splitmix64(splitmix64(base ^ h) ^ index)
//! ```
//!
//! so any sub-result can be reproduced without replaying the others.

use rand::SeedableRng;
use rand_xoshiro::Xoshiro256PlusPlus;

pub type StreamRng = Xoshiro256PlusPlus;

const FNV_OFFSET: u64 = 0xcbf2_9ce4_8422_2325;
const FNV_PRIME: u64 = 0x0000_0100_0000_01b3;

pub fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

fn fnv1a(name: &str) -> u64 {
    name.bytes()
        .fold(FNV_OFFSET, |h, b| (h ^ b as u64).wrapping_mul(FNV_PRIME))
}

/// Derive the seed of stream `(name, index)` from `base`.
pub fn derive_seed(base: u64, name: &str, index: u64) -> u64 {
    splitmix64(splitmix64(base ^ fnv1a(name)) ^ index)
}

pub fn rng_from_seed(seed: u64) -> StreamRng {
    StreamRng::seed_from_u64(seed)
}

pub fn stream(base: u64, name: &str, index: u64) -> StreamRng {
    rng_from_seed(derive_seed(base, name, index))
}
