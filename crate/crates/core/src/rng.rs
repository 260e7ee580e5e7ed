//! Counter-based random streams.
//!
//! Every random quantity in the crate is drawn from a [`SeededStream`]. A
//! stream is a ChaCha8 key (derived from the seed) plus a stream id; the
//! generator for item `i` of a stream is positioned at word offset `i << 32`,
//! so the draws for item `i` are a pure function of `(seed, stream_id, i)`
//! regardless of the order in which items are processed.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Words reserved per item: 2^32 32-bit words (16 GiB of output).
const ITEM_SHIFT: u32 = 32;

/// Stable domain tags used to derive independent sub-streams.
pub mod tags {
    pub const WEIGHTS: u64 = 0x5745_4947;
    pub const POSITIONS: u64 = 0x504f_5349;
    pub const IRG_PAIRS: u64 = 0x4952_4750;
    pub const TRIALS: u64 = 0x5452_4941;
    pub const GRAPHS: u64 = 0x4752_4150;
    pub const QUANTILE: u64 = 0x5155_414e;
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, serde::Serialize, serde::Deserialize)]
pub struct SeededStream {
    pub seed: u64,
    pub stream_id: u64,
}

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

impl SeededStream {
    pub fn new(seed: u64, stream_id: u64) -> Self {
        Self { seed, stream_id }
    }

    pub fn from_seed(seed: u64) -> Self {
        Self::new(seed, 0)
    }

    /// An independent stream identified by `tag` below this one.
    pub fn child(&self, tag: u64) -> Self {
        let id = splitmix64(self.stream_id ^ splitmix64(tag.wrapping_add(0x6a09_e667_f3bc_c909)));
        Self::new(self.seed, id)
    }

    /// Generator positioned at the start of the stream.
    pub fn rng(&self) -> ChaCha8Rng {
        self.rng_at(0)
    }

    /// Generator positioned at the block reserved for item `index`.
    pub fn rng_at(&self, index: u64) -> ChaCha8Rng {
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        rng.set_stream(self.stream_id);
        rng.set_word_pos((index as u128) << ITEM_SHIFT);
        rng
    }
}

/// Uniform on the half-open interval (0, 1].
#[inline]
pub fn uniform_open0<R: Rng + ?Sized>(rng: &mut R) -> f64 {
    1.0 - rng.random::<f64>()
}

/// Uniform on [0, 1).
#[inline]
pub fn uniform<R: Rng + ?Sized>(rng: &mut R) -> f64 {
    rng.random::<f64>()
}
