//! Deterministic seed derivation.
//!
//! Every random stream in a campaign is keyed by the master seed plus the
//! indices that identify its place in the experiment (campaign, comparison,
//! run, arm). Results are therefore independent of scheduling and worker
//! count: a run's stream depends only on where it sits, never on when it
//! executes.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Stream tags keep the derived streams for different purposes disjoint.
pub const STREAM_RUN: u64 = 0x52554e; // "RUN"
pub const STREAM_CTRL: u64 = 0x4354524c; // "CTRL"
pub const STREAM_ORACLE: u64 = 0x4f5241; // "ORA"

#[inline]
fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e3779b97f4a7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58476d1ce4e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d049bb133111eb);
    z ^ (z >> 31)
}

/// Mixes a master seed with a path of indices into a single 64-bit seed.
pub fn derive_seed(master: u64, path: &[u64]) -> u64 {
    let mut state = splitmix64(master);
    for &w in path {
        state = splitmix64(state ^ splitmix64(w));
    }
    state
}

pub fn rng_from_seed(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Identifies one comparison inside one campaign; yields per-run seeds.
#[derive(Debug, Clone, Copy)]
pub struct SeedCtx {
    pub master: u64,
    pub campaign: u64,
    pub comparison: u64,
}

impl SeedCtx {
    pub fn run_seed(&self, run: u64, arm: u64) -> u64 {
        derive_seed(
            self.master,
            &[STREAM_RUN, self.campaign, self.comparison, run, arm],
        )
    }
}
