//! Deterministic, addressable random streams.
//!
//! Every randomized operation draws from a ChaCha8 generator keyed by the
//! user-facing seed plus a domain tag and two integer coordinates (epoch,
//! node id, ...). A draw for one node never depends on how many draws
//! other nodes consumed, so results are independent of visit order and
//! stable under parallel scheduling.

use rand_chacha::ChaCha8Rng;
use rand_core::{RngCore, SeedableRng};

/// Domain tags keeping unrelated streams apart.
pub mod domain {
    pub const INIT: u64 = 1;
    pub const SPLIT: u64 = 2;
    pub const NEIGHBOR_SAMPLE: u64 = 3;
    pub const EDGE_SHUFFLE: u64 = 4;
    pub const NEGATIVE: u64 = 5;
    pub const PLANTED: u64 = 6;
}

fn splitmix64(mut x: u64) -> u64 {
    x = x.wrapping_add(0x9E37_79B9_7F4A_7C15);
    x = (x ^ (x >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    x = (x ^ (x >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    x ^ (x >> 31)
}

/// ChaCha8 stream keyed by `(seed, domain, a, b)`.
pub fn stream(seed: u64, domain: u64, a: u64, b: u64) -> ChaCha8Rng {
    let mut key = [0u8; 32];
    key[0..8].copy_from_slice(&splitmix64(seed).to_le_bytes());
    key[8..16].copy_from_slice(&splitmix64(domain.wrapping_add(0x1000)).to_le_bytes());
    key[16..24].copy_from_slice(&splitmix64(a.wrapping_add(0x2000)).to_le_bytes());
    key[24..32].copy_from_slice(&splitmix64(b.wrapping_add(0x3000)).to_le_bytes());
    ChaCha8Rng::from_seed(key)
}

/// Uniform draw from `[0, 1)` with 53 bits of precision.
#[inline]
pub fn uniform01(rng: &mut impl RngCore) -> f64 {
    (rng.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
}

/// Uniform index in `[0, n)`. The modulo bias is on the order of
/// `n / 2^64` and irrelevant at the sizes handled here.
#[inline]
pub fn uniform_index(rng: &mut impl RngCore, n: usize) -> usize {
    debug_assert!(n > 0);
    (rng.next_u64() % n as u64) as usize
}

/// Partial Fisher-Yates: after the call the first `m` slots hold a
/// uniform without-replacement sample and the buffer is truncated to it.
pub fn partial_fisher_yates<T>(items: &mut alloc::vec::Vec<T>, m: usize, rng: &mut impl RngCore) {
    let n = items.len();
    if m >= n {
        return;
    }
    for t in 0..m {
        let j = t + uniform_index(rng, n - t);
        items.swap(t, j);
    }
    items.truncate(m);
}

/// In-place Fisher-Yates shuffle.
pub fn shuffle<T>(items: &mut [T], rng: &mut impl RngCore) {
    for t in (1..items.len()).rev() {
        let j = uniform_index(rng, t + 1);
        items.swap(t, j);
    }
}
