//! The 64-bit linear congruential generator used for random placements.
//!
//! `state ← state·6364136223846793005 + 1442695040888963407 (mod 2^64)`,
//! starting from the seed; each draw advances once and returns the top 53 bits
//! of the new state as a float in `[0, 1)`. The recurrence is simple enough to
//! port anywhere, so sweeps can be reproduced outside this crate.

use std::f64::consts::TAU;

use crate::geom::{Length, Point2};

pub const MULTIPLIER: u64 = 6364136223846793005;
pub const INCREMENT: u64 = 1442695040888963407;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Lcg64 {
    state: u64,
}

impl Lcg64 {
    pub fn new(seed: u64) -> Self {
        Self { state: seed }
    }

    pub fn next_u64(&mut self) -> u64 {
        self.state = self.state.wrapping_mul(MULTIPLIER).wrapping_add(INCREMENT);
        self.state
    }

    /// Uniform in `[0, 1)`.
    pub fn next_f64(&mut self) -> f64 {
        (self.next_u64() >> 11) as f64 / (1u64 << 53) as f64
    }

    /// Uniform in `[lo, hi)`.
    pub fn uniform(&mut self, lo: f64, hi: f64) -> f64 {
        lo + (hi - lo) * self.next_f64()
    }

    /// Uniform in the disc of radius `radius` around `center`: angle first,
    /// then `radius·√u` for the distance.
    pub fn point_in_disc(&mut self, center: Point2, radius: Length) -> Point2 {
        let theta = TAU * self.next_f64();
        let rho = radius * self.next_f64().sqrt();
        Point2::new(center.x + rho * theta.cos(), center.y + rho * theta.sin())
    }
}
