#![allow(dead_code)]

use std::collections::BTreeSet;
use std::f64::consts::{FRAC_PI_2, TAU};

use hunt_core::geom::{Point2, Segment};
use hunt_core::harness::Lcg64;

/// Tiles `(u, v)` of size `r` whose open interior meets the truncated sector
/// of angle `2π/2^z` and radius `d`, in the tile frame, found row by row.
///
/// Row `v` starts at height `y = v·r`. At height `y` the region is the interval
/// `[y·cot φ, √(d² − y²)]`, which only shrinks as `y` grows, so the open tile
/// meets the region iff that interval at the bottom edge reaches strictly into
/// `(u·r, (u+1)·r)` and is not a single point.
pub fn tile_oracle(z: u32, d: f64, r: f64) -> BTreeSet<(u64, u64)> {
    assert!(z >= 2);
    let phi = TAU / 2f64.powi(z as i32);
    let cot = if phi >= FRAC_PI_2 { 0.0 } else { phi.cos() / phi.sin() };
    let n = (d / r).ceil() as u64 + 1;
    let mut out = BTreeSet::new();
    for v in 0..=n {
        let y = v as f64 * r;
        if y >= d {
            break;
        }
        let lo = y * cot;
        let hi = (d * d - y * y).sqrt();
        if lo >= hi {
            break;
        }
        for u in 0..=n {
            let (x0, x1) = (u as f64 * r, (u + 1) as f64 * r);
            if lo < x1 && hi > x0 {
                out.insert((u, v));
            }
        }
    }
    out
}

/// Earliest arc length along `seg` at which `q` is within `r`, by bisection on
/// the distance, which decreases up to the closest approach.
pub fn detection_by_bisection(seg: Segment, q: Point2, r: f64) -> Option<f64> {
    let len = seg.length();
    let dist = |t: f64| seg.point_at(t).distance(q);
    if dist(0.0) <= r {
        return Some(0.0);
    }
    if len == 0.0 {
        return None;
    }
    let dir = (seg.b - seg.a) * (1.0 / len);
    let t_close = (q - seg.a).dot(dir).clamp(0.0, len);
    if dist(t_close) > r {
        return None;
    }
    let (mut lo, mut hi) = (0.0, t_close);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if dist(mid) <= r {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Some(hi)
}

pub fn log_uniform(rng: &mut Lcg64, lo: f64, hi: f64) -> f64 {
    rng.uniform(lo.ln(), hi.ln()).exp()
}

pub fn int_in(rng: &mut Lcg64, lo: u32, hi: u32) -> u32 {
    lo + (rng.next_u64() % u64::from(hi - lo + 1)) as u32
}

/// Uniform point of the annulus `lo ≤ |p − center| ≤ hi`.
pub fn point_in_annulus(rng: &mut Lcg64, center: Point2, lo: f64, hi: f64) -> Point2 {
    let rho = rng.uniform(lo * lo, hi * hi).sqrt();
    let a = rng.uniform(0.0, TAU);
    center + Point2::new(rho * a.cos(), rho * a.sin())
}
