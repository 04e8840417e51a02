//! Seed derivation. Every random stream in the crate is a ChaCha8 generator
//! keyed by a 64-bit mix of (global seed, stream labels, item ordinal), so
//! results never depend on thread count or scheduling.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub type Rng = ChaCha8Rng;

/// SplitMix64 finalizer.
#[inline]
pub fn mix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Stable hash of a label (FNV-1a), independent of `std`'s randomized hasher.
pub fn label_hash(label: &str) -> u64 {
    let mut h: u64 = 0xcbf2_9ce4_8422_2325;
    for b in label.bytes() {
        h ^= u64::from(b);
        h = h.wrapping_mul(0x0000_0100_0000_01B3);
    }
    h
}

/// Derives a sub-seed from a seed and a sequence of labels.
pub fn derive_seed(seed: u64, labels: &[&str]) -> u64 {
    labels.iter().fold(mix64(seed), |acc, l| mix64(acc ^ label_hash(l)))
}

/// Seed for item `ordinal` of a labelled stream.
pub fn item_seed(stream_seed: u64, ordinal: u64) -> u64 {
    mix64(stream_seed ^ mix64(ordinal.wrapping_add(0x5851_F42D_4C95_7F2D)))
}

pub fn rng_from(seed: u64) -> Rng {
    Rng::seed_from_u64(seed)
}
