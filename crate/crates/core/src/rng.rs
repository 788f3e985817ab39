//! Deterministic, splittable random streams.
//!
//! A stream is identified by a `(seed, stream_id)` pair and expands into a
//! ChaCha8 generator keyed by the seed and positioned on the stream id.
//! Child streams are derived by hashing, so every random quantity in a run
//! (a direction, a probe evaluation, the output selection) owns its own
//! stream and results do not depend on evaluation order.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Generator type handed to environments and samplers.
pub type StreamRng = ChaCha8Rng;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct RngStream {
    seed: u64,
    stream_id: u64,
}

/// Tags separating the derivation namespaces used across the crate.
pub mod tags {
    pub const DIRECTION: u64 = 0x0d17;
    pub const PROBE: u64 = 0x9a0b;
    pub const ITERATION: u64 = 0x17e7;
    pub const OUTPUT: u64 = 0x5e1e;
    pub const EVALUATION: u64 = 0xe7a1;
    pub const REPLICATE: u64 = 0x4e91;
    pub const DATA: u64 = 0xda7a;
}

#[inline]
fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

impl RngStream {
    pub const fn new(seed: u64, stream_id: u64) -> Self {
        RngStream { seed, stream_id }
    }

    pub const fn root(seed: u64) -> Self {
        RngStream::new(seed, 0)
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn stream_id(&self) -> u64 {
        self.stream_id
    }

    /// Child stream for `(tag, index)`. Same seed, hashed stream id.
    pub fn derive(&self, tag: u64, index: u64) -> RngStream {
        let h = splitmix64(self.stream_id ^ splitmix64(tag));
        RngStream::new(
            self.seed,
            splitmix64(h ^ index.wrapping_mul(0xd1b5_4a32_d192_ed03)),
        )
    }

    /// Child stream for a multi-index, e.g. `(iteration, direction, side)`.
    pub fn derive_path(&self, tag: u64, path: &[u64]) -> RngStream {
        path.iter()
            .fold(self.derive(tag, path.len() as u64), |s, &i| {
                s.derive(tag, i)
            })
    }

    /// Fresh generator positioned at the start of this stream.
    pub fn generator(&self) -> StreamRng {
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        rng.set_stream(self.stream_id);
        rng
    }
}
