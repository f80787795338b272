//! Seeded SplitMix64 stream used by every randomized sweep.

use rand_core::{RngCore, SeedableRng};
use rand_xoshiro::SplitMix64;

/// Uniform deviates from SplitMix64 (state = seed, increment
/// `0x9e3779b97f4a7c15`), 53-bit mantissa conversion.
#[derive(Debug, Clone)]
pub struct SweepRng(SplitMix64);

impl SweepRng {
    pub fn new(seed: u64) -> Self {
        Self(SplitMix64::seed_from_u64(seed))
    }

    pub fn next_u64(&mut self) -> u64 {
        self.0.next_u64()
    }

    /// Uniform in `[0, 1)`.
    pub fn unit(&mut self) -> f64 {
        (self.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
    }

    /// Uniform in `[lo, hi)`.
    pub fn uniform(&mut self, lo: f64, hi: f64) -> f64 {
        lo + (hi - lo) * self.unit()
    }
}
