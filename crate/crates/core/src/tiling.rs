//! Tilings of size `r` anchored at the sector apex and aligned with the
//! sector's clockwise ray, and the tile columns that cover the truncated
//! sector `S*` (sector ∩ disc of radius `D`).
//!
//! Everything is computed in the *tile frame*: the apex is the origin, the
//! clockwise ray runs along +x and the sector opens into the upper half-plane.
//! Tile `(u, v)` is the square `[u·r, (u+1)·r] × [v·r, (v+1)·r]`. A tile is
//! kept when its interior meets the region, so tiles touching `S*` only along
//! an edge or at a corner are dropped; the closed tiles that remain still
//! cover every point of `S*`.

use std::f64::consts::FRAC_PI_2;

use crate::advice::SectorSpec;
use crate::error::{HuntError, Result};
use crate::geom::{Length, Point2, Radians};

/// Upper limit on tile columns the exact calculators will walk.
pub const MAX_COLUMNS: u64 = 10_000_000;

/// Rigid motion between world coordinates and the tile frame.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TileFrame {
    pub apex: Point2,
    /// World direction of the frame's +x axis (the clockwise ray).
    pub x_axis: Point2,
    /// World direction of the frame's +y axis (a quarter turn counterclockwise).
    pub y_axis: Point2,
}

impl TileFrame {
    pub fn new(apex: Point2, cw_ray_angle: Radians) -> Self {
        Self {
            apex,
            x_axis: cw_ray_angle.direction(),
            y_axis: Radians(cw_ray_angle.0 + FRAC_PI_2).direction(),
        }
    }

    pub fn to_world(&self, fx: f64, fy: f64) -> Point2 {
        Point2::new(
            self.apex.x + self.x_axis.x * fx + self.y_axis.x * fy,
            self.apex.y + self.x_axis.y * fx + self.y_axis.y * fy,
        )
    }

    pub fn to_frame(&self, p: Point2) -> Point2 {
        let d = p - self.apex;
        Point2::new(d.dot(self.x_axis), d.dot(self.y_axis))
    }
}

/// The truncated sector `S*`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct WedgeRegion {
    pub apex: Point2,
    pub cw_ray_angle: Radians,
    pub wedge_angle: Radians,
    pub radius: Length,
}

impl WedgeRegion {
    pub fn new(sector: &SectorSpec, radius: Length) -> Self {
        Self {
            apex: sector.apex,
            cw_ray_angle: sector.cw_ray_angle,
            wedge_angle: sector.width(),
            radius,
        }
    }

    pub fn frame(&self) -> TileFrame {
        TileFrame::new(self.apex, self.cw_ray_angle)
    }

    /// Closed-set membership, with a relative slack of 1e-12.
    pub fn contains(&self, p: Point2) -> bool {
        let f = self.frame().to_frame(p);
        let eps = 1e-12 * self.radius;
        if f.norm() > self.radius + eps || f.y < -eps {
            return false;
        }
        let phi = self.wedge_angle.0;
        if phi >= FRAC_PI_2 {
            f.x >= -eps
        } else {
            let (sin, cos) = phi.sin_cos();
            f.x * sin - f.y * cos >= -eps && f.x >= -eps
        }
    }
}

/// One column of tiles: rows `0..=v_max` at horizontal index `u`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct ColumnRange {
    pub u: u64,
    pub v_max: u64,
}

/// Closed-form column heights for a wedge of half-open angle `phi ≤ π/2`.
#[derive(Clone, Copy, Debug)]
pub struct ColumnProfile {
    tile: Length,
    radius: Length,
    phi: f64,
    sin: f64,
    cos: f64,
    columns: u64,
}

impl ColumnProfile {
    pub fn new(wedge_angle: Radians, radius: Length, tile: Length) -> Result<Self> {
        Self::with_limit(wedge_angle, radius, tile, MAX_COLUMNS)
    }

    /// Like [`ColumnProfile::new`] with a caller-chosen column limit.
    pub fn with_limit(wedge_angle: Radians, radius: Length, tile: Length, limit: u64) -> Result<Self> {
        if !(tile > 0.0 && tile < radius && radius.is_finite()) {
            return Err(HuntError::Precondition(format!(
                "tile size must satisfy 0 < r < D (r = {tile}, D = {radius})"
            )));
        }
        let phi = wedge_angle.0;
        if !(phi > 0.0 && phi <= FRAC_PI_2) {
            return Err(HuntError::Precondition(format!(
                "wedge angle {phi} outside (0, π/2]"
            )));
        }
        let ratio = (radius / tile).ceil();
        if ratio > limit as f64 {
            return Err(HuntError::ColumnGuard { columns: ratio, limit });
        }
        let (sin, cos) = phi.sin_cos();
        Ok(Self { tile, radius, phi, sin, cos, columns: ratio as u64 })
    }

    pub fn columns(&self) -> u64 {
        self.columns
    }

    pub fn tile(&self) -> Length {
        self.tile
    }

    /// Highest point of the region above the strip `[u·r, (u+1)·r]`.
    pub fn y_max(&self, u: u64) -> f64 {
        let d = self.radius;
        let a = u as f64 * self.tile;
        let b = ((u + 1) as f64 * self.tile).min(d);
        if a >= d {
            return 0.0;
        }
        if self.phi >= FRAC_PI_2 {
            return (d * d - a * a).max(0.0).sqrt();
        }
        // Rises along the upper ray until the kink at x = D cos φ, then follows the arc.
        let kink = d * self.cos;
        if b <= kink {
            b * self.sin / self.cos
        } else if a >= kink {
            (d * d - a * a).max(0.0).sqrt()
        } else {
            d * self.sin
        }
    }

    /// Index of the farthest tile row of column `u` (rows start at 0).
    pub fn v_max(&self, u: u64) -> u64 {
        // Heights a rounding error away from a whole number of tiles only
        // touch the next row along its bottom edge.
        let mut rows = self.y_max(u) / self.tile;
        let whole = rows.round();
        if (rows - whole).abs() <= 1e-9 * whole.max(1.0) {
            rows = whole;
        }
        let rows = rows.ceil();
        if rows <= 1.0 {
            0
        } else {
            rows as u64 - 1
        }
    }

    /// Largest `v_max` over all columns.
    pub fn tallest(&self) -> u64 {
        let top = if self.phi >= FRAC_PI_2 { self.radius } else { self.radius * self.sin };
        ((top / self.tile).ceil() as u64).saturating_sub(1)
    }
}

fn check_region(region: &WedgeRegion, r: Length) -> Result<ColumnProfile> {
    ColumnProfile::new(region.wedge_angle, region.radius, r)
}

/// Columns of the tiling of size `r` whose tiles meet `S*`, in order along the
/// clockwise ray.
pub fn enumerate_columns(region: &WedgeRegion, r: Length) -> Result<Vec<ColumnRange>> {
    let profile = check_region(region, r)?;
    Ok((0..profile.columns())
        .map(|u| ColumnRange { u, v_max: profile.v_max(u) })
        .collect())
}

/// Number of tiles of size `r` meeting `S*`.
pub fn count_tiles(region: &WedgeRegion, r: Length) -> Result<u64> {
    let profile = check_region(region, r)?;
    Ok((0..profile.columns()).map(|u| profile.v_max(u) + 1).sum())
}

/// The tile-count ceiling `69·(D²/(2^z r²) + D/r)`.
pub fn tile_count_bound(z: u32, d: Length, r: Length) -> f64 {
    69.0 * (d * d / (2f64.powi(z as i32) * r * r) + d / r)
}
