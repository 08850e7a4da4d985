//! Canonical advice: the oracle splits the plane around the start point into
//! `2^z` equal sectors and hands the agent the index of the one holding the
//! treasure as a fixed-width, big-endian bit string.
//!
//! Sector `i` holds the directions `θ` with `i·2π/2^z < θ ≤ (i+1)·2π/2^z`,
//! counted counterclockwise from North. Its counterclockwise ray `L` belongs to
//! it, its clockwise ray `L'` does not.

use std::f64::consts::TAU;
use std::fmt;
use std::str::FromStr;

use crate::error::{HuntError, Result};
use crate::geom::{ccw_angle_from_north, Point2, Radians};

/// Largest advice size accepted; beyond this sector widths fall below f64 resolution.
pub const MAX_ADVICE_BITS: u32 = 40;

#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct AdviceString {
    bits: Vec<bool>,
}

impl AdviceString {
    pub fn empty() -> Self {
        Self::default()
    }

    pub fn from_bits(bits: Vec<bool>) -> Result<Self> {
        if bits.len() > MAX_ADVICE_BITS as usize {
            return Err(HuntError::Precondition(format!(
                "advice of {} bits exceeds the {MAX_ADVICE_BITS}-bit limit",
                bits.len()
            )));
        }
        Ok(Self { bits })
    }

    /// Fixed-width big-endian encoding of `index` on `z` bits.
    pub fn from_index(index: u64, z: u32) -> Result<Self> {
        if z > MAX_ADVICE_BITS {
            return Err(HuntError::Precondition(format!(
                "advice size {z} exceeds the {MAX_ADVICE_BITS}-bit limit"
            )));
        }
        if index >= 1u64 << z {
            return Err(HuntError::Precondition(format!(
                "sector index {index} does not fit in {z} bits"
            )));
        }
        let bits = (0..z).rev().map(|k| (index >> k) & 1 == 1).collect();
        Ok(Self { bits })
    }

    /// Advice size `z`.
    pub fn len(&self) -> u32 {
        self.bits.len() as u32
    }

    pub fn is_empty(&self) -> bool {
        self.bits.is_empty()
    }

    pub fn bits(&self) -> &[bool] {
        &self.bits
    }

    /// Big-endian integer value of the bits.
    pub fn index(&self) -> u64 {
        self.bits.iter().fold(0, |acc, &b| (acc << 1) | u64::from(b))
    }
}

impl fmt::Display for AdviceString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for &b in &self.bits {
            f.write_str(if b { "1" } else { "0" })?;
        }
        Ok(())
    }
}

impl FromStr for AdviceString {
    type Err = HuntError;

    fn from_str(s: &str) -> Result<Self> {
        let bits = s
            .trim()
            .chars()
            .map(|c| match c {
                '0' => Ok(false),
                '1' => Ok(true),
                other => Err(HuntError::Config(format!("advice contains {other:?}"))),
            })
            .collect::<Result<Vec<_>>>()?;
        AdviceString::from_bits(bits)
    }
}

/// Index of the sector of size `2π/2^z` containing direction `theta ∈ (0, 2π]`.
pub fn sector_index(theta: Radians, z: u32) -> u64 {
    let count = 1u64 << z;
    let scaled = theta.canonical().0 / TAU * count as f64;
    let j = scaled.ceil() as i64 - 1;
    j.clamp(0, count as i64 - 1) as u64
}

/// The oracle side: advice of size `z` naming the sector of `q` around `p`.
pub fn encode_advice(p: Point2, q: Point2, z: u32) -> Result<AdviceString> {
    if z > MAX_ADVICE_BITS {
        return Err(HuntError::Precondition(format!(
            "advice size {z} exceeds the {MAX_ADVICE_BITS}-bit limit"
        )));
    }
    let theta = ccw_angle_from_north(p, q).map_err(|_| {
        HuntError::Degenerate("treasure at the start point has no sector".into())
    })?;
    AdviceString::from_index(sector_index(theta, z), z)
}

/// A decoded advice sector with apex at the agent's start point.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SectorSpec {
    pub index: u64,
    pub z: u32,
    pub apex: Point2,
    /// Angle of the clockwise boundary ray `L'` (excluded from the sector).
    pub cw_ray_angle: Radians,
    /// Angle of the counterclockwise boundary ray `L` (included).
    pub ccw_ray_angle: Radians,
}

impl SectorSpec {
    pub fn width(&self) -> Radians {
        Radians(TAU / (1u64 << self.z) as f64)
    }

    /// Whether `point` falls in this sector under the half-open boundary rule.
    /// The apex itself belongs to no sector.
    pub fn contains(&self, point: Point2) -> bool {
        match ccw_angle_from_north(self.apex, point) {
            Ok(theta) => sector_index(theta, self.z) == self.index,
            Err(_) => false,
        }
    }
}

/// The agent side: recover the sector from the advice bits.
pub fn decode_sector(w: &AdviceString, apex: Point2) -> SectorSpec {
    let z = w.len();
    let index = w.index();
    let width = TAU / (1u64 << z) as f64;
    SectorSpec {
        index,
        z,
        apex,
        cw_ray_angle: Radians(index as f64 * width),
        ccw_ray_angle: Radians((index + 1) as f64 * width),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn index_five_on_four_bits() {
        let w = AdviceString::from_index(5, 4).unwrap();
        assert_eq!(w.to_string(), "0101");
    }

    #[test]
    fn encode_sector_five() {
        // direction in the middle of sector 5 of 16
        let theta = Radians(5.5 * TAU / 16.0);
        let q = theta.direction() * 3.0;
        let w = encode_advice(Point2::ORIGIN, q, 4).unwrap();
        assert_eq!(w.to_string(), "0101");
    }

    #[test]
    fn zero_bits_is_empty() {
        let w = encode_advice(Point2::ORIGIN, Point2::new(3.0, -7.0), 0).unwrap();
        assert!(w.is_empty());
        assert_eq!(w.to_string(), "");
    }

    #[test]
    fn west_is_sector_zero_of_four() {
        let w = encode_advice(Point2::ORIGIN, Point2::new(-2.0, 0.0), 2).unwrap();
        assert_eq!(w.to_string(), "00");
    }

    #[test]
    fn north_belongs_to_last_sector() {
        let w = encode_advice(Point2::ORIGIN, Point2::new(0.0, 1.0), 3).unwrap();
        assert_eq!(w.index(), 7);
    }

    #[test]
    fn treasure_at_start_rejected() {
        assert!(matches!(
            encode_advice(Point2::new(1.0, 2.0), Point2::new(1.0, 2.0), 3),
            Err(HuntError::Degenerate(_))
        ));
    }

    #[test]
    fn decode_0101() {
        let s = decode_sector(&"0101".parse().unwrap(), Point2::ORIGIN);
        assert_eq!(s.index, 5);
        assert!((s.cw_ray_angle.0 - 5.0 * TAU / 16.0).abs() < 1e-15);
        assert!((s.ccw_ray_angle.0 - 6.0 * TAU / 16.0).abs() < 1e-15);
    }

    #[test]
    fn decode_empty_is_full_plane() {
        let s = decode_sector(&AdviceString::empty(), Point2::ORIGIN);
        assert_eq!(s.index, 0);
        assert_eq!(s.cw_ray_angle.0, 0.0);
        assert_eq!(s.ccw_ray_angle.0, TAU);
    }

    #[test]
    fn decode_111() {
        let s = decode_sector(&"111".parse().unwrap(), Point2::ORIGIN);
        assert_eq!(s.index, 7);
        assert_eq!(s.z, 3);
        assert_eq!(s.ccw_ray_angle.0, TAU);
    }

    #[test]
    fn boundary_rays() {
        // L (ccw ray, included) of sector 0 with z = 2 is due West; L' is North.
        let s = decode_sector(&"00".parse().unwrap(), Point2::ORIGIN);
        assert!(s.contains(Point2::new(-1.0, 0.0)));
        assert!(!s.contains(Point2::new(0.0, 1.0)));
        assert!(!s.contains(Point2::ORIGIN));
        let last = decode_sector(&"11".parse().unwrap(), Point2::ORIGIN);
        assert!(last.contains(Point2::new(0.0, 1.0)));
        let south = decode_sector(&"01".parse().unwrap(), Point2::ORIGIN);
        assert!(south.contains(Point2::new(0.0, -1.0)));
        assert!(!south.contains(Point2::new(-1.0, 0.0)));
        assert!((south.cw_ray_angle.0 - PI / 2.0).abs() < 1e-15);
    }

    #[test]
    fn bad_advice_text() {
        assert!("01a".parse::<AdviceString>().is_err());
    }
}
