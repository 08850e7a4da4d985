mod common;

use std::collections::BTreeSet;
use std::f64::consts::TAU;

use proptest::prelude::*;

use hunt_core::advice::{decode_sector, encode_advice, sector_index, AdviceString};
use hunt_core::geom::{earliest_detection_on_segment, polyline_length, Point2, Radians, Segment};
use hunt_core::sim::{run, run_with, RunOptions};
use hunt_core::strategies::{large_vision, MediumParams, StrategyKind};
use hunt_core::tiling::{count_tiles, enumerate_columns, WedgeRegion};
use hunt_core::traversal::{basic_cost, basic_traversal};

use common::{detection_by_bisection, tile_oracle};

fn point() -> impl Strategy<Value = Point2> {
    (-100.0..100.0f64, -100.0..100.0f64).prop_map(|(x, y)| Point2::new(x, y))
}

/// A point of the truncated sector named by `w`, from polar fractions.
fn point_in_sector(w: &AdviceString, start: Point2, d: f64, fa: f64, fr: f64) -> Point2 {
    let sector = decode_sector(w, start);
    let width = sector.width().0;
    // stay off the boundary rays, which belong to one side only
    let a = sector.cw_ray_angle.0 + width * (1e-6 + (1.0 - 2e-6) * fa);
    start + Radians(a).direction() * (d * fr.sqrt().max(1e-3))
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 256, failure_persistence: None, ..ProptestConfig::default() })]

    #[test]
    fn advice_names_the_treasure_sector(p in point(), q in point(), z in 0u32..=40) {
        prop_assume!(p.distance(q) > 1e-6);
        let w = encode_advice(p, q, z).unwrap();
        prop_assert_eq!(w.len(), z);
        let sector = decode_sector(&w, p);
        prop_assert!(sector.contains(q));
        let round: AdviceString = w.to_string().parse().unwrap_or_else(|_| AdviceString::empty());
        prop_assert_eq!(round, w);
    }

    #[test]
    fn sectors_partition_the_circle(theta in 1e-9..TAU, z in 0u32..=20) {
        let j = sector_index(Radians(theta), z);
        let width = TAU / 2f64.powi(z as i32);
        prop_assert!(j < 1u64 << z);
        prop_assert!(theta > j as f64 * width - 1e-9 && theta <= (j + 1) as f64 * width + 1e-9);
    }

    #[test]
    fn detection_matches_bisection(a in point(), b in point(), q in point(), r in 0.01..50.0f64) {
        let seg = Segment::new(a, b);
        let fast = earliest_detection_on_segment(a, b, q, r);
        let slow = detection_by_bisection(seg, q, r);
        match (fast, slow) {
            (Some(t), Some(u)) => prop_assert!((t - u).abs() <= 1e-9 * (1.0 + seg.length()), "{t} vs {u}"),
            (None, None) => {}
            // disagreement is only allowed at tangency
            (f, s) => prop_assert!((seg.distance_to(q) - r).abs() < 1e-9, "{f:?} vs {s:?}"),
        }
        if let Some(t) = fast {
            prop_assert!(seg.point_at(t).distance(q) <= r + 1e-9);
        }
    }

    #[test]
    fn detection_is_monotone_in_radius(a in point(), b in point(), q in point(), r in 0.01..50.0f64, grow in 0.0..20.0f64) {
        if let Some(t) = earliest_detection_on_segment(a, b, q, r) {
            let wider = earliest_detection_on_segment(a, b, q, r + grow);
            prop_assert!(wider.is_some_and(|u| u <= t + 1e-9 * (1.0 + t)));
        }
    }

    #[test]
    fn every_point_has_exactly_one_sector(q in point()) {
        prop_assume!(q.norm() > 1e-9);
        for z in 0u32..=20 {
            let own = encode_advice(Point2::ORIGIN, q, z).unwrap().index();
            let count = 1u64 << z;
            let owners: Vec<u64> = if z <= 8 {
                (0..count).collect()
            } else {
                vec![(own + count - 1) % count, own, (own + 1) % count]
            };
            let holding: Vec<u64> = owners
                .into_iter()
                .filter(|&j| decode_sector(&AdviceString::from_index(j, z).unwrap(), Point2::ORIGIN).contains(q))
                .collect();
            prop_assert_eq!(holding, vec![own]);
        }
    }

    #[test]
    fn tiling_matches_row_oracle(z in 2u32..=10, ratio in 1.01..40.0f64, d in 0.5..1000.0f64) {
        let r = d / ratio;
        let w = AdviceString::from_index(0, z).unwrap();
        let region = WedgeRegion::new(&decode_sector(&w, Point2::ORIGIN), d);
        let got: BTreeSet<(u64, u64)> = enumerate_columns(&region, r)
            .unwrap()
            .into_iter()
            .flat_map(|c| (0..=c.v_max).map(move |v| (c.u, v)))
            .collect();
        prop_assert_eq!(&got, &tile_oracle(z, d, r));
        prop_assert_eq!(count_tiles(&region, r).unwrap(), got.len() as u64);
    }

    #[test]
    fn tiles_cover_the_region(z in 2u32..=10, ratio in 1.01..40.0f64, fa in 0.0..1.0f64, fr in 0.0..1.0f64) {
        let (d, r) = (10.0, 10.0 / ratio);
        let w = AdviceString::from_index(0, z).unwrap();
        let region = WedgeRegion::new(&decode_sector(&w, Point2::ORIGIN), d);
        let p = region.frame().to_frame(point_in_sector(&w, Point2::ORIGIN, d, fa, fr));
        let (u, v) = ((p.x / r).floor() as u64, (p.y / r).floor() as u64);
        let cols = enumerate_columns(&region, r).unwrap();
        // a point on a tile edge may belong to the neighbour only
        let near = |cu: u64, cv: u64| cu + 1 >= u && cu <= u + 1 && cv + 1 >= v && cv <= v + 1;
        prop_assert!(cols.iter().any(|c| (0..=c.v_max).any(|cv| near(c.u, cv))));
    }

    #[test]
    fn basic_traversal_sees_the_whole_region(
        z in 0u32..=6,
        index in 0u64..64,
        d in 2.0..60.0f64,
        ratio in 1.2..30.0f64,
        fa in 0.0..1.0f64,
        fr in 0.0..1.0f64,
    ) {
        let r = d / ratio;
        let w = AdviceString::from_index(index % (1 << z), z).unwrap();
        let start = Point2::new(3.0, -7.0);
        let q = point_in_sector(&w, start, d, fa, fr);
        let full = basic_cost(z, d, r).unwrap();
        let out = run(basic_traversal(&w, d, r, start).unwrap(), q, r, full + 1.0).unwrap();
        prop_assert!(out.found, "{q} missed");
        prop_assert!(out.cost <= full + 1e-9 * full);
    }

    #[test]
    fn calculator_matches_polyline(z in 0u32..=12, d in 1.0..500.0f64, ratio in 1.01..200.0f64) {
        let r = d / ratio;
        let w = AdviceString::from_index(0, z).unwrap();
        let line = basic_traversal(&w, d, r, Point2::ORIGIN).unwrap().materialize(10_000_000).unwrap();
        let exact = basic_cost(z, d, r).unwrap();
        prop_assert!((polyline_length(&line) - exact).abs() <= 1e-9 * exact);
    }

    #[test]
    fn shortcuts_do_not_change_costs(
        kind in prop::sample::select(vec![StrategyKind::Small, StrategyKind::Medium, StrategyKind::Universal]),
        z in 0u32..=5,
        q in point(),
        r in 1.1..6.0f64,
    ) {
        prop_assume!(q.norm() > r / 0.9);
        let params = MediumParams::new(0.5, 3).unwrap();
        let w = encode_advice(Point2::ORIGIN, q, z).unwrap();
        let stream = || kind.stream(&w, params, Point2::ORIGIN, q.norm(), r).unwrap();
        let fast = run(stream(), q, r, 1e12).unwrap();
        let plain = run_with(stream(), q, r, 1e12, RunOptions { skip_retraces: false, skip_far_runs: false }).unwrap();
        prop_assert!(fast.found && plain.found);
        prop_assert!((fast.cost - plain.cost).abs() <= 1e-9 * plain.cost);
        let again = run(stream(), q, r, 1e12).unwrap();
        prop_assert_eq!(fast, again);
    }

    #[test]
    fn large_vision_within_constant(d in 2.0..1000.0f64, f in 0.0..1.0f64, fa in 0.0..1.0f64, fr in 0.0..1.0f64) {
        let r = 0.9 * d + f * (0.1 * d - 5.0 / 6.0).max(0.0);
        prop_assume!(d - r >= 5.0 / 6.0);
        let a = TAU * fa;
        let q = Radians(a).direction() * (d * fr.sqrt());
        let out = run(large_vision(Point2::ORIGIN), q, r, 1e9).unwrap();
        prop_assert!(out.found);
        prop_assert!(out.cost <= 116.0 * (d - r));
    }
}
