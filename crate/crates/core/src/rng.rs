//! Seeded random streams.
//!
//! Every stream is a ChaCha8 generator keyed by a 64-bit seed. Child streams
//! are derived from `(parent seed, key)` with a SplitMix64-style mixer, so
//! stream `r` of a master seed is a pure function of the two numbers and does
//! not depend on how many draws the parent has made or on execution order.

use rand::{Rng, RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;

const GOLDEN: u64 = 0x9e37_79b9_7f4a_7c15;

fn mix64(mut z: u64) -> u64 {
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Seed of child stream `key` under `parent`.
pub fn derive_seed(parent: u64, key: u64) -> u64 {
    mix64(parent ^ mix64(key.wrapping_add(GOLDEN)))
}

/// Deterministic random stream with hierarchical stream derivation.
#[derive(Debug, Clone)]
pub struct SeededRng {
    seed: u64,
    inner: ChaCha8Rng,
}

impl SeededRng {
    pub fn new(seed: u64) -> Self {
        Self {
            seed,
            inner: ChaCha8Rng::seed_from_u64(seed),
        }
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    /// Independent child stream; ignores the parent's current position.
    pub fn derive(&self, key: u64) -> SeededRng {
        SeededRng::new(derive_seed(self.seed, key))
    }

    /// Child stream for a path of keys, e.g. `(replicate, stage)`.
    pub fn derive_path(&self, keys: &[u64]) -> SeededRng {
        let seed = keys.iter().fold(self.seed, |s, &k| derive_seed(s, k));
        SeededRng::new(seed)
    }

    /// Child stream seeded from the next draw of this one, so successive
    /// forks differ.
    pub fn fork(&mut self) -> SeededRng {
        SeededRng::new(self.inner.next_u64())
    }

    /// Uniform draw in [0, 1).
    pub fn uniform(&mut self) -> f64 {
        self.inner.random::<f64>()
    }

    /// Uniform index in 0..upper.
    pub fn index(&mut self, upper: usize) -> usize {
        self.inner.random_range(0..upper)
    }
}

impl RngCore for SeededRng {
    fn next_u32(&mut self) -> u32 {
        self.inner.next_u32()
    }

    fn next_u64(&mut self) -> u64 {
        self.inner.next_u64()
    }

    fn fill_bytes(&mut self, dst: &mut [u8]) {
        self.inner.fill_bytes(dst)
    }
}

/// Stream-derivation keys that separate the purposes a single seed feeds.
pub(crate) mod keys {
    pub const MEMBERSHIP: u64 = 0x6d65_6d62;
    pub const GRAPH: u64 = 0x6772_6170;
    pub const CLUSTER: u64 = 0x636c_7573;
    pub const BOOTSTRAP: u64 = 0x626f_6f74;
    pub const PARAMS: u64 = 0x7061_7261;
    pub const ACTIVENESS: u64 = 0x6163_7476;
    pub const STAGE: u64 = 0x7374_6167;
    pub const REPLICATE: u64 = 0x7265_706c;
    pub const TEST: u64 = 0x7465_7374;
}
