//! Reproducible random streams.
//!
//! Every random input is drawn from a xoshiro256** generator whose 256-bit
//! state is filled from a single `u64` by four SplitMix64 steps (the
//! reference seeding procedure). Sub-seeds for independent trials are
//! derived with the SplitMix64 finalizer:
//!
//! ```text
//! mix(z):  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9
//!          z = (z ^ (z >> 27)) * 0x94D049BB133111EB
//!          z ^ (z >> 31)
//! sub_seed(seed, stream, index) = mix(mix(seed ^ stream) + (index + 1) * 0x9E3779B97F4A7C15)
//! ```
//!
//! Uniforms are `(next_u64 >> 11) * 2^-53` in `[0, 1)`. Gaussians use the
//! cosine branch of Box–Muller on two consecutive uniforms `u1, u2`:
//! `sqrt(-2 ln(1 - u1)) * cos(2π u2)`.

use rand_core::{RngCore, SeedableRng};
use rand_xoshiro::Xoshiro256StarStar;

const GOLDEN_GAMMA: u64 = 0x9E37_79B9_7F4A_7C15;

#[inline]
pub fn splitmix_mix(mut z: u64) -> u64 {
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Seed for trial `index` of the campaign identified by `stream`.
pub fn sub_seed(seed: u64, stream: u64, index: u64) -> u64 {
    splitmix_mix(splitmix_mix(seed ^ stream).wrapping_add(index.wrapping_add(1).wrapping_mul(GOLDEN_GAMMA)))
}

/// Stable 64-bit tag for a campaign name (FNV-1a).
pub fn stream_tag(name: &str) -> u64 {
    name.bytes().fold(0xcbf2_9ce4_8422_2325u64, |h, b| (h ^ b as u64).wrapping_mul(0x0100_0000_01b3))
}

pub struct Stream {
    inner: Xoshiro256StarStar,
}

impl Stream {
    pub fn new(seed: u64) -> Self {
        Stream { inner: Xoshiro256StarStar::seed_from_u64(seed) }
    }

    pub fn next_u64(&mut self) -> u64 {
        self.inner.next_u64()
    }

    /// Uniform in `[0, 1)`.
    pub fn uniform(&mut self) -> f64 {
        (self.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
    }

    pub fn uniform_in(&mut self, lo: f64, hi: f64) -> f64 {
        lo + (hi - lo) * self.uniform()
    }

    /// `exp` of a uniform draw on `[ln lo, ln hi]`.
    pub fn log_uniform(&mut self, lo: f64, hi: f64) -> f64 {
        let (a, b) = (lo.ln(), hi.ln());
        (a + (b - a) * self.uniform()).exp()
    }

    pub fn gaussian(&mut self) -> f64 {
        let u1 = self.uniform();
        let u2 = self.uniform();
        (-2.0 * (1.0 - u1).ln()).sqrt() * (std::f64::consts::TAU * u2).cos()
    }

    pub fn below(&mut self, n: usize) -> usize {
        (self.uniform() * n as f64) as usize % n.max(1)
    }
}
