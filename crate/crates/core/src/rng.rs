//! Reproducible random streams.
//!
//! Every random decision in the crate is drawn from [`ChaCha8Rng`]. A stream
//! is identified by a 64-bit master seed plus a 64-bit stream number:
//! the generator is created with `ChaCha8Rng::seed_from_u64(seed)` (which
//! expands the seed into a 256-bit key with PCG32, as documented by
//! `rand_core`) and then switched to `stream` with `set_stream`. ChaCha is
//! platform independent, so identical `(seed, stream)` pairs give identical
//! draws on every machine and regardless of how many threads are used.

use rand::SeedableRng;
pub use rand_chacha::ChaCha8Rng;

/// Stream reserved for cash-flow generation.
pub const CASHFLOW_STREAM: u64 = 0;
/// Stream reserved for random splitting inside merge search.
pub const SPLIT_STREAM: u64 = 1;
/// First stream handed to colonies; colony `c` uses `COLONY_STREAM_BASE + c`.
pub const COLONY_STREAM_BASE: u64 = 1 << 32;

pub fn stream(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

/// SplitMix64 finaliser, used to derive per-round seeds from a master seed.
pub fn derive_seed(seed: u64, tag: u64) -> u64 {
    let mut z = seed ^ tag.wrapping_mul(0x9E37_79B9_7F4A_7C15);
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}
