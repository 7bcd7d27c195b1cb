//! Seeded random streams.
//!
//! Every random draw in the crate comes from a ChaCha12 generator keyed by a
//! 64-bit experiment seed. Independent consumers (operator entries, signals,
//! noise, Rademacher signs, probe vectors, ...) read from distinct ChaCha
//! streams selected by a tag and an index, so per-trial work can run on any
//! thread in any order and still reproduce the same numbers.
//!
//! Gaussian variates use `rand_distr::StandardNormal` (ziggurat method).

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha12Rng;
use rand_distr::StandardNormal;

pub type StreamRng = ChaCha12Rng;

/// Stream tags. The tag occupies the top 16 bits of the ChaCha stream id.
pub mod tag {
    pub const OPERATOR: u64 = 1;
    pub const SIGNAL: u64 = 2;
    pub const NOISE: u64 = 3;
    pub const PROBE: u64 = 4;
    pub const RADEMACHER: u64 = 5;
    pub const DIRECTION: u64 = 6;
    pub const FUNCTIONAL: u64 = 7;
    pub const RESTART: u64 = 8;
    pub const CELL: u64 = 9;
    pub const ATOM: u64 = 10;
}

const INDEX_BITS: u32 = 48;

/// Generator for stream `(tag, index)` under `seed`.
pub fn stream(seed: u64, tag: u64, index: u64) -> StreamRng {
    debug_assert!(index < (1 << INDEX_BITS));
    let mut rng = ChaCha12Rng::seed_from_u64(seed);
    rng.set_stream((tag << INDEX_BITS) | (index & ((1 << INDEX_BITS) - 1)));
    rng
}

/// SplitMix64 finalizer.
pub fn mix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Child seed for a nested experiment cell, e.g. `(grid index, trial)`.
pub fn derive_seed(seed: u64, tag: u64, a: u64, b: u64) -> u64 {
    mix64(mix64(mix64(seed ^ tag.rotate_left(56)) ^ a) ^ b.rotate_left(17))
}

pub fn gaussian<R: Rng + ?Sized>(rng: &mut R) -> f64 {
    rng.sample(StandardNormal)
}

pub fn gaussian_vec<R: Rng + ?Sized>(rng: &mut R, n: usize) -> nalgebra::DVector<f64> {
    nalgebra::DVector::from_fn(n, |_, _| gaussian(rng))
}

pub fn rademacher<R: Rng + ?Sized>(rng: &mut R) -> f64 {
    if rng.random::<bool>() {
        1.0
    } else {
        -1.0
    }
}
