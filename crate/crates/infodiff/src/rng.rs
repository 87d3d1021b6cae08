//! Seeding discipline.
//!
//! All stochastic code in the crate draws from [`SeedableRng`]-constructed
//! ChaCha8 generators so that every output is a pure function of its seed,
//! independent of platform and thread schedule.

use rand::SeedableRng;

/// The crate-wide deterministic generator.
pub type DetRng = rand_chacha::ChaCha8Rng;

/// Builds a generator from a 64-bit seed.
pub fn rng_from_seed(seed: u64) -> DetRng {
    DetRng::seed_from_u64(seed)
}

/// FNV-1a over a string; stable across platforms and releases.
///
/// Used to derive per-cell seeds from `(dataset, algorithm, repeat)` keys so
/// any pipeline cell can be re-run in isolation.
pub fn stable_hash(key: &str) -> u64 {
    const OFFSET: u64 = 0xcbf2_9ce4_8422_2325;
    const PRIME: u64 = 0x0000_0100_0000_01b3;
    let mut h = OFFSET;
    for b in key.as_bytes() {
        h ^= u64::from(*b);
        h = h.wrapping_mul(PRIME);
    }
    h
}

/// Seed for one pipeline cell: `master ⊕ stable_hash(key)`.
pub fn cell_seed(master: u64, key: &str) -> u64 {
    master ^ stable_hash(key)
}
