//! Seeded, splittable random streams.
//!
//! Every random choice in the crate draws from a ChaCha stream selected by
//! `(seed, stream)`, so independent consumers (one per generated graph, one per
//! overlay, ...) never share state and results are a pure function of the seed.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub type Rng = ChaCha8Rng;

/// Stream 0 of `seed`.
pub fn seeded(seed: u64) -> Rng {
    split(seed, 0)
}

/// Independent stream `stream` derived from `seed`.
pub fn split(seed: u64, stream: u64) -> Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}
