//! Deterministic random streams.
//!
//! Every chain and simulation draws from a [`ChaCha8Rng`], whose output is
//! specified by the ChaCha stream cipher and is identical across platforms.
//! Independent streams are keyed by mixing a master seed with a role tag and
//! an index through SplitMix64.

use rand::SeedableRng;
pub use rand_chacha::ChaCha8Rng as Rng;

/// Role tags for [`derive_seed`]; distinct roles never share a stream.
pub mod role {
    pub const SAMPLE: u64 = 1;
    pub const TRACE: u64 = 2;
    pub const CONTAGION: u64 = 3;
    pub const NULL: u64 = 4;
}

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Stable sub-seed for stream `index` of `role` under `master`.
pub fn derive_seed(master: u64, role: u64, index: u64) -> u64 {
    splitmix64(splitmix64(splitmix64(master) ^ role) ^ index)
}

pub fn stream(master: u64, role: u64, index: u64) -> Rng {
    Rng::seed_from_u64(derive_seed(master, role, index))
}
