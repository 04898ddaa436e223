//! Version-pinned 64-bit linear congruential generator.
//!
//! `state ← state · 6364136223846793005 + 1442695040888963407 (mod 2^64)`
//! (Knuth's MMIX constants). Uniform doubles take the top 53 bits of the
//! updated state. The sequence is part of the report format: changing either
//! constant changes every random-mode model.

use num_complex::Complex64;
use std::f64::consts::TAU;

pub const LCG_MULTIPLIER: u64 = 6_364_136_223_846_793_005;
pub const LCG_INCREMENT: u64 = 1_442_695_040_888_963_407;

#[derive(Debug, Clone)]
pub struct Lcg64 {
    state: u64,
}

impl Lcg64 {
    pub fn new(seed: u64) -> Self {
        // One warm-up step so that seed 0 does not start at state 0.
        let mut rng = Self { state: seed };
        rng.next_u64();
        rng
    }

    pub fn next_u64(&mut self) -> u64 {
        self.state = self
            .state
            .wrapping_mul(LCG_MULTIPLIER)
            .wrapping_add(LCG_INCREMENT);
        self.state
    }

    /// Uniform in `[0, 1)`.
    pub fn next_f64(&mut self) -> f64 {
        (self.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
    }

    pub fn uniform(&mut self, lo: f64, hi: f64) -> f64 {
        lo + (hi - lo) * self.next_f64()
    }

    /// Modulus uniform in `[r_lo, r_hi]`, phase uniform in `[0, 2π)`; modulus drawn first.
    pub fn polar(&mut self, r_lo: f64, r_hi: f64) -> Complex64 {
        let r = self.uniform(r_lo, r_hi);
        let phase = TAU * self.next_f64();
        Complex64::from_polar(r, phase)
    }

    /// Components uniform in `[-1, 1)`.
    pub fn complex_box(&mut self) -> Complex64 {
        let re = self.uniform(-1.0, 1.0);
        let im = self.uniform(-1.0, 1.0);
        Complex64::new(re, im)
    }
}
