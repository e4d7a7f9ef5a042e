//! Seed mixing and counter-based uniform streams.
//!
//! Everything here is built on the SplitMix64 output finalizer, so streams are
//! reproducible bit-for-bit on any platform. A stream keyed by `key` yields
//! `finalize(key + (j + 1) * GAMMA)` as its `j`-th 64-bit output, which is
//! exactly the SplitMix64 sequence started from state `key`, but addressable
//! by counter.

/// Identifier written into sample manifests.
pub const GENERATOR_ID: &str = "splitmix64-ctr";

const GAMMA: u64 = 0x9e37_79b9_7f4a_7c15;

/// SplitMix64 finalizer (Stafford variant 13).
#[inline]
pub fn finalize(mut z: u64) -> u64 {
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Mixes a master seed with a stream index into an independent 64-bit key.
///
/// `mix(seed, i) = finalize(seed ^ finalize(i + GAMMA))`. Used for
/// per-element sample streams and for per-run seeds.
#[inline]
pub fn mix(seed: u64, index: u64) -> u64 {
    finalize(seed ^ finalize(index.wrapping_add(GAMMA)))
}

/// Maps the 53 high bits of `x` to `[0, 1)`.
#[inline]
pub fn unit_f64(x: u64) -> f64 {
    (x >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
}

/// Counter-addressable uniform stream.
#[derive(Debug, Clone, Copy)]
pub struct CounterStream {
    key: u64,
}

impl CounterStream {
    pub fn new(key: u64) -> Self {
        CounterStream { key }
    }

    #[inline]
    pub fn u64_at(&self, j: u64) -> u64 {
        finalize(self.key.wrapping_add(j.wrapping_add(1).wrapping_mul(GAMMA)))
    }

    #[inline]
    pub fn unit_at(&self, j: u64) -> f64 {
        unit_f64(self.u64_at(j))
    }
}

/// Named substreams of a run seed.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[repr(u64)]
pub enum Substream {
    Mutation = 1,
    Selection = 2,
}

pub fn substream_seed(run_seed: u64, stream: Substream) -> u64 {
    mix(run_seed, stream as u64)
}
