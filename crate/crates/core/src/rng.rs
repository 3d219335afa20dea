//! Seeded random streams.
//!
//! Every random quantity in the crate comes from ChaCha8 keyed by a 64-bit
//! seed. Independent substreams of the same seed are ChaCha stream ids, so a
//! whole experiment is reproducible from one number.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub type GraphRng = ChaCha8Rng;

/// Stream 0 of `seed`.
pub fn seeded_rng(seed: u64) -> GraphRng {
    GraphRng::seed_from_u64(seed)
}

/// Substream `stream` of `seed`. Stream 0 is the one [`seeded_rng`] returns.
pub fn substream(seed: u64, stream: u64) -> GraphRng {
    let mut rng = GraphRng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

/// Stream reserved for block `(u, v)` of a model with `ky` target blocks.
pub fn block_stream(seed: u64, u: usize, v: usize, ky: usize) -> GraphRng {
    substream(seed, 1 + (u * ky + v) as u64)
}
