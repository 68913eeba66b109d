//! Seeded random streams.
//!
//! Every stochastic component draws from a ChaCha8 generator seeded with
//! `seed_from_u64(seed)`. A single run seed is fanned out to sub-components by
//! selecting a distinct ChaCha stream id per component ([`Stream`]); the key
//! stays the same, so one seed reproduces an entire run. Shuffles are
//! Fisher-Yates as implemented by `rand::seq::SliceRandom::shuffle`.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub type Rng = ChaCha8Rng;

/// Stream ids used when splitting a run seed.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[repr(u64)]
pub enum Stream {
    Search = 0,
    Resampling = 1,
    Relief = 2,
}

pub fn stream(seed: u64, which: Stream) -> Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(which as u64);
    rng
}
