//! Deterministic random streams.
//!
//! Every run owns one 64-bit seed derived from `(base_seed, run_index)`.
//! Each equipment and each CCF group draws from its own ChaCha stream
//! selected by a stable hash of its identifier, so unrelated components
//! never perturb each other's draws.

use rand_chacha::ChaCha8Rng;
use rand_core::{RngCore, SeedableRng};

fn splitmix64(mut x: u64) -> u64 {
    x = x.wrapping_add(0x9e37_79b9_7f4a_7c15);
    x = (x ^ (x >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    x = (x ^ (x >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    x ^ (x >> 31)
}

/// Seed of run `run_index` in a batch started from `base_seed`.
pub fn run_seed(base_seed: u64, run_index: u32) -> u64 {
    splitmix64(splitmix64(base_seed) ^ (run_index as u64).wrapping_mul(0xd6e8_feb8_6659_fd93))
}

/// One ChaCha8 stream of a run.
#[derive(Debug, Clone)]
pub struct RandomStream(ChaCha8Rng);

impl RandomStream {
    pub fn new(run_seed: u64, stream: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(run_seed);
        rng.set_stream(stream);
        Self(rng)
    }

    /// Uniform variate in the open interval (0, 1).
    pub fn uniform(&mut self) -> f64 {
        ((self.0.next_u64() >> 11) as f64 + 0.5) * (1.0 / (1u64 << 53) as f64)
    }

    pub fn exponential(&mut self, rate: f64) -> f64 {
        if rate > 0.0 {
            sample_exponential(rate, self.uniform())
        } else {
            f64::INFINITY
        }
    }
}

/// Inverse-transform exponential sample: `-ln(u) / rate`. A non-positive
/// rate never fires and yields an infinite duration.
pub fn sample_exponential(rate: f64, u: f64) -> f64 {
    if rate > 0.0 {
        -libm::log(u) / rate
    } else {
        f64::INFINITY
    }
}
