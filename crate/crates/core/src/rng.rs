//! Seeded, splittable random streams.
//!
//! Every random quantity in the crate is drawn from a ChaCha8 stream keyed by
//! a 64-bit master seed and a 64-bit stream index. Parallel batches give each
//! task its own stream index, so batch results are identical whether the tasks
//! run on the rayon pool or one after another.

use rand::SeedableRng;
pub use rand_chacha::ChaCha8Rng;

/// Stream `stream` of master seed `seed`.
pub fn stream_rng(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

/// Derives a child master seed, for APIs that only accept a seed.
pub fn child_seed(seed: u64, stream: u64) -> u64 {
    use rand::RngCore;
    stream_rng(seed, stream).next_u64()
}
