//! Deterministic random-stream derivation.
//!
//! Every stochastic component draws from a ChaCha8 stream derived from a
//! master seed plus structural tags (pass index, infostate key hash, game
//! index).  Results are therefore reproducible and independent of thread
//! count or scheduling.

use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// One round of the splitmix64 output function.
fn splitmix(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Mixes a master seed with two structural tags into a derived seed.
pub fn derive_seed(seed: u64, tag_a: u64, tag_b: u64) -> u64 {
    splitmix(splitmix(seed ^ splitmix(tag_a)) ^ splitmix(tag_b.wrapping_add(0x51ed_270b)))
}

/// Builds the ChaCha8 stream for a derived seed.
pub fn stream(seed: u64, tag_a: u64, tag_b: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(derive_seed(seed, tag_a, tag_b))
}

/// Stable 64-bit FNV-1a hash of a byte string, used to tag streams by key.
pub fn fnv1a(bytes: &[u8]) -> u64 {
    let mut h = 0xcbf2_9ce4_8422_2325u64;
    for &b in bytes {
        h ^= u64::from(b);
        h = h.wrapping_mul(0x0000_0100_0000_01b3);
    }
    h
}
