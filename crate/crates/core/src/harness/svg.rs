//! Standalone SVG pictures of a trajectory prefix with its search region.
//!
//! World coordinates are written with `y` negated so North points up.

use std::f64::consts::{FRAC_PI_2, TAU};
use std::fmt::Write as _;
use std::path::Path;

use crate::error::{HuntError, Result};
use crate::geom::{Length, Point2, Polyline, Radians};
use crate::tiling::{enumerate_columns, WedgeRegion};

pub const MAX_RENDER_SEGMENTS: usize = 100_000;
pub const MAX_RENDER_TILES: u64 = 20_000;

#[derive(Clone, Debug)]
pub struct SvgScene<'a> {
    pub trajectory: &'a Polyline,
    /// Sector and disc to outline.
    pub region: Option<WedgeRegion>,
    /// Draw the tiles of this size covering the region.
    pub tiles: Option<Length>,
    pub treasure: Option<Point2>,
    /// Vision radius drawn around the treasure.
    pub r: Length,
}

fn flip(p: Point2) -> (f64, f64) {
    (p.x, -p.y + 0.0)
}

fn arc_points(region: &WedgeRegion, n: usize) -> impl Iterator<Item = Point2> + '_ {
    (0..=n).map(move |k| {
        let a = region.cw_ray_angle.0 + region.wedge_angle.0 * k as f64 / n as f64;
        region.apex + Radians(a).direction() * region.radius
    })
}

pub fn render_svg(scene: &SvgScene<'_>) -> Result<String> {
    let line = scene.trajectory;
    if line.segment_count() > MAX_RENDER_SEGMENTS {
        return Err(HuntError::Precondition(format!(
            "{} segments exceed the rendering limit of {MAX_RENDER_SEGMENTS}",
            line.segment_count()
        )));
    }
    let mut pts: Vec<Point2> = line.vertices().to_vec();
    if let Some(region) = &scene.region {
        pts.push(region.apex);
        pts.extend(arc_points(region, 64));
    }
    if let Some(q) = scene.treasure {
        pts.push(q + Point2::new(scene.r, scene.r));
        pts.push(q - Point2::new(scene.r, scene.r));
    }
    let (mut lo_x, mut lo_y, mut hi_x, mut hi_y) = (f64::MAX, f64::MAX, f64::MIN, f64::MIN);
    for p in &pts {
        let (x, y) = flip(*p);
        lo_x = lo_x.min(x);
        lo_y = lo_y.min(y);
        hi_x = hi_x.max(x);
        hi_y = hi_y.max(y);
    }
    let span = (hi_x - lo_x).max(hi_y - lo_y).max(1e-9);
    let margin = 0.05 * span;
    let (vx, vy) = (lo_x - margin, lo_y - margin);
    let (vw, vh) = (hi_x - lo_x + 2.0 * margin, hi_y - lo_y + 2.0 * margin);
    let stroke = span / 400.0;

    let mut out = String::new();
    let _ = writeln!(out, r#"<?xml version="1.0" encoding="UTF-8"?>"#);
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" version="1.1" viewBox="{vx} {vy} {vw} {vh}" width="800" height="{}">"#,
        (800.0 * vh / vw).round().max(1.0)
    );
    let _ = writeln!(out, r##"<rect x="{vx}" y="{vy}" width="{vw}" height="{vh}" fill="#ffffff"/>"##);

    if let (Some(region), Some(tile)) = (&scene.region, scene.tiles) {
        if region.wedge_angle.0 <= FRAC_PI_2 {
            let cols = enumerate_columns(region, tile)?;
            let count: u64 = cols.iter().map(|c| c.v_max + 1).sum();
            if count > MAX_RENDER_TILES {
                return Err(HuntError::Precondition(format!(
                    "{count} tiles exceed the rendering limit of {MAX_RENDER_TILES}"
                )));
            }
            let frame = region.frame();
            let _ = writeln!(out, r##"<g fill="none" stroke="#b0b0b0" stroke-width="{}">"##, stroke / 2.0);
            for c in cols {
                for v in 0..=c.v_max {
                    let (x0, y0) = (c.u as f64 * tile, v as f64 * tile);
                    let corners = [(x0, y0), (x0 + tile, y0), (x0 + tile, y0 + tile), (x0, y0 + tile)];
                    let mut d = String::new();
                    for (x, y) in corners {
                        let (sx, sy) = flip(frame.to_world(x, y));
                        let _ = write!(d, "{sx},{sy} ");
                    }
                    let _ = writeln!(out, r#"<polygon points="{}"/>"#, d.trim_end());
                }
            }
            let _ = writeln!(out, "</g>");
        }
    }

    if let Some(region) = &scene.region {
        let (ax, ay) = flip(region.apex);
        let rad = region.radius;
        let _ = writeln!(out, r##"<g fill="none" stroke="#2060c0" stroke-width="{stroke}">"##);
        if region.wedge_angle.0 >= TAU {
            let _ = writeln!(out, r#"<circle cx="{ax}" cy="{ay}" r="{rad}"/>"#);
        } else {
            let from = region.apex + region.cw_ray_angle.direction() * rad;
            let to = region.apex + Radians(region.cw_ray_angle.0 + region.wedge_angle.0).direction() * rad;
            let (fx, fy) = flip(from);
            let (tx, ty) = flip(to);
            let large = u8::from(region.wedge_angle.0 > std::f64::consts::PI);
            let _ = writeln!(out, r#"<line x1="{ax}" y1="{ay}" x2="{fx}" y2="{fy}"/>"#);
            let _ = writeln!(out, r#"<line x1="{ax}" y1="{ay}" x2="{tx}" y2="{ty}"/>"#);
            let _ = writeln!(out, r#"<path d="M {fx} {fy} A {rad} {rad} 0 {large} 1 {tx} {ty}"/>"#);
        }
        let _ = writeln!(out, "</g>");
    }

    if line.segment_count() > 0 {
        let mut d = String::new();
        for v in line.vertices() {
            let (x, y) = flip(*v);
            let _ = write!(d, "{x},{y} ");
        }
        let _ = writeln!(
            out,
            r##"<polyline fill="none" stroke="#202020" stroke-width="{stroke}" stroke-linejoin="round" points="{}"/>"##,
            d.trim_end()
        );
    }

    let (sx, sy) = flip(line.start());
    let _ = writeln!(out, r##"<circle cx="{sx}" cy="{sy}" r="{}" fill="#2060c0"/>"##, 2.0 * stroke);
    if let Some(q) = scene.treasure {
        let (qx, qy) = flip(q);
        let _ = writeln!(
            out,
            r##"<circle cx="{qx}" cy="{qy}" r="{}" fill="none" stroke="#c03020" stroke-width="{stroke}" stroke-dasharray="{} {}"/>"##,
            scene.r,
            3.0 * stroke,
            2.0 * stroke
        );
        let _ = writeln!(out, r##"<circle cx="{qx}" cy="{qy}" r="{}" fill="#c03020"/>"##, 2.5 * stroke);
    }
    let _ = writeln!(out, "</svg>");
    Ok(out)
}

pub fn write_svg(scene: &SvgScene<'_>, path: &Path) -> Result<()> {
    std::fs::write(path, render_svg(scene)?)?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::advice::{decode_sector, AdviceString};
    use crate::traversal::spiral;

    #[test]
    fn spiral_polyline() {
        let line = spiral(2.0, 1.0, Point2::ORIGIN).unwrap().materialize(100).unwrap();
        let svg = render_svg(&SvgScene { trajectory: &line, region: None, tiles: None, treasure: None, r: 1.0 }).unwrap();
        let points = svg.split("points=\"").nth(1).unwrap().split('"').next().unwrap();
        assert_eq!(points.split(' ').count(), 10);
        assert!(svg.contains("viewBox"));
        assert!(svg.trim_end().ends_with("</svg>"));
    }

    #[test]
    fn sector_seven_of_eight_with_tiles() {
        let w = AdviceString::from_index(7, 3).unwrap();
        let region = WedgeRegion::new(&decode_sector(&w, Point2::ORIGIN), 5.0);
        let line = Polyline::new(Point2::ORIGIN);
        let svg = render_svg(&SvgScene {
            trajectory: &line,
            region: Some(region),
            tiles: Some(1.0),
            treasure: Some(Point2::new(-1.0, 4.0)),
            r: 1.0,
        })
        .unwrap();
        let tiles = crate::tiling::count_tiles(&region, 1.0).unwrap();
        assert_eq!(svg.matches("<polygon").count() as u64, tiles);
        assert_eq!(svg.matches("<line").count(), 2);
        assert!(svg.contains(" A 5 5 0 0 1 "));
    }

    #[test]
    fn empty_trajectory_has_markers_only() {
        let line = Polyline::new(Point2::new(1.0, 1.0));
        let svg = render_svg(&SvgScene { trajectory: &line, region: None, tiles: None, treasure: Some(Point2::new(3.0, 1.0)), r: 0.5 })
            .unwrap();
        assert!(!svg.contains("<polyline"));
        assert_eq!(svg.matches("<circle").count(), 3);
    }

    #[test]
    fn viewbox_has_margin() {
        let line = Polyline::from_vertices([Point2::ORIGIN, Point2::new(10.0, 0.0)]).unwrap();
        let svg = render_svg(&SvgScene { trajectory: &line, region: None, tiles: None, treasure: None, r: 1.0 }).unwrap();
        assert!(svg.contains(r#"viewBox="-0.5 -0.5 11 1""#), "{svg}");
    }

    #[test]
    fn too_many_segments() {
        let line = Polyline::from_vertices((0..=MAX_RENDER_SEGMENTS + 1).map(|k| Point2::new(k as f64, 0.0))).unwrap();
        let scene = SvgScene { trajectory: &line, region: None, tiles: None, treasure: None, r: 1.0 };
        assert!(render_svg(&scene).is_err());
    }
}
