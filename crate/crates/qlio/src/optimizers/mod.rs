//! Search engines: quaternion-space particle swarm optimization for the
//! global phase and a black-hole search for one-dimensional auxiliary
//! problems.

pub mod black_hole;
pub mod pso;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Deterministic, splittable source of randomness.
///
/// A `(seed, stream_id)` pair identifies one random stream; the same pair
/// produces the same sequence on every platform, so independent runs of a
/// protocol stay reproducible while drawing from disjoint streams.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RandomSource {
    seed: u64,
    stream_id: u64,
}

impl RandomSource {
    /// Stream 0 of the given seed.
    pub fn new(seed: u64) -> Self {
        Self { seed, stream_id: 0 }
    }

    pub fn with_stream(seed: u64, stream_id: u64) -> Self {
        Self { seed, stream_id }
    }

    /// Same seed, different stream.
    pub fn stream(&self, stream_id: u64) -> Self {
        Self {
            seed: self.seed,
            stream_id,
        }
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn stream_id(&self) -> u64 {
        self.stream_id
    }

    pub(crate) fn rng(&self) -> ChaCha8Rng {
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        rng.set_stream(self.stream_id);
        rng
    }
}
