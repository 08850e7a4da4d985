//! Running a trajectory against a hidden treasure, the cost bounds the
//! simulated costs are checked against, and a brute-force worst-placement
//! search.

use rayon::prelude::*;

use crate::advice::{encode_advice, AdviceString};
use crate::error::{HuntError, Result};
use crate::geom::{earliest_detection_on_segment, Length, Point2, DETECTION_TOLERANCE};
use crate::strategies::{MediumParams, StrategyKind};
use crate::traversal::{basic_cost_bound, TrajectoryStream};

/// Result of executing a stream against a treasure.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct RunOutcome {
    pub found: bool,
    /// Arc length walked until the first detection, or the cap.
    pub cost: Length,
    pub detection_point: Option<Point2>,
    /// Moves started, degenerate ones and skipped ones included.
    pub segments_executed: u64,
}

/// Shortcuts the engine may take. Both are exact: they only skip detection
/// tests that cannot succeed.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct RunOptions {
    /// Skip runs that retrace geometry already walked by the same stream.
    pub skip_retraces: bool,
    /// Skip runs whose bounding box stays farther than `r` from the treasure.
    pub skip_far_runs: bool,
}

impl Default for RunOptions {
    fn default() -> Self {
        Self { skip_retraces: true, skip_far_runs: true }
    }
}

/// Walk `stream` until the agent gets within `r` of `treasure` or has walked
/// `cost_cap`.
pub fn run(stream: TrajectoryStream, treasure: Point2, r: Length, cost_cap: Length) -> Result<RunOutcome> {
    run_with(stream, treasure, r, cost_cap, RunOptions::default())
}

pub fn run_with(
    stream: TrajectoryStream,
    treasure: Point2,
    r: Length,
    cost_cap: Length,
    opts: RunOptions,
) -> Result<RunOutcome> {
    if !(r > 0.0 && cost_cap > 0.0) {
        return Err(HuntError::Precondition(format!(
            "need r > 0 and a positive cost cap, got r = {r}, cap = {cost_cap}"
        )));
    }
    let mut pos = stream.start();
    if pos.distance(treasure) <= r + DETECTION_TOLERANCE {
        return Ok(RunOutcome { found: true, cost: 0.0, detection_point: Some(pos), segments_executed: 0 });
    }
    let unfound = |segments| RunOutcome { found: false, cost: cost_cap, detection_point: None, segments_executed: segments };
    let margin = r + 1e-9 * (1.0 + r + treasure.norm());
    let mut cost = 0.0;
    let mut segments = 0u64;
    for item in stream {
        let run = item?;
        let start = run.start();
        if start.distance(pos) > 1e-9 * (1.0 + pos.norm()) {
            return Err(HuntError::Structural(format!(
                "run starts at {start} but the agent is at {pos}"
            )));
        }
        let skip = (opts.skip_retraces && run.is_retrace())
            || (opts.skip_far_runs && run.bounds().distance_to(treasure) > margin);
        if skip {
            if cost + run.len() > cost_cap {
                return Ok(unfound(segments));
            }
            cost += run.len();
            segments += run.move_count() as u64;
            pos = run.end();
            continue;
        }
        for seg in run.moves() {
            segments += 1;
            if let Some(t) = earliest_detection_on_segment(seg.a, seg.b, treasure, r) {
                if cost + t > cost_cap {
                    return Ok(unfound(segments));
                }
                return Ok(RunOutcome {
                    found: true,
                    cost: cost + t,
                    detection_point: Some(seg.point_at(t)),
                    segments_executed: segments,
                });
            }
            let l = seg.length();
            if cost + l > cost_cap {
                return Ok(unfound(segments));
            }
            cost += l;
        }
        pos = run.end();
    }
    Ok(unfound(segments))
}

/// Vision regime of a `(D, r)` pair.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Regime {
    /// `r ≤ 1`
    Small,
    /// `1 < r < 0.9·D`
    Medium,
    /// `r ≥ 0.9·D`
    Large,
}

impl Regime {
    pub fn classify(d: Length, r: Length) -> Regime {
        if r <= 1.0 {
            Regime::Small
        } else if r >= 0.9 * d {
            Regime::Large
        } else {
            Regime::Medium
        }
    }

    /// The strategy designed for this regime.
    pub fn strategy(&self) -> StrategyKind {
        match self {
            Regime::Small => StrategyKind::Small,
            Regime::Medium => StrategyKind::Medium,
            Regime::Large => StrategyKind::Large,
        }
    }
}

fn area_term(z: u32, d: Length, r: Length) -> Length {
    d * d / (2f64.powi(z as i32) * r)
}

/// Explicit ceiling for small vision:
/// `2^20·(D + D²/(2^z r)·(log₂D + log₂(1/r) + 2))`.
///
/// Let `a = ⌈log₂D⌉`, `b` the smallest even integer `≥ ⌈log₂(1/r)⌉`, and
/// `i = a + b/2 − 1`, the diagonal of `Π₁` holding the cell `B(a, b)` that is
/// sure to reveal the treasure; `2^{2i} ≤ 16·D²/r`. The phase-doubling argument
/// then bounds the cost by `2048·16·i·D²/(2^z r)` without a usable sector, and
/// with one by either `16·D` (the ray `L′` reveals the treasure) or
/// `64·138·4·16·(i+1)·D²/(2^z r)`. As `i + 1 ≤ log₂D + log₂(1/r) + 2` for
/// `D ≥ 1` and `r ≤ 1`, every case stays below the envelope. Logarithms are
/// clamped at zero so the value stays positive outside that range.
pub fn small_vision_bound(z: u32, d: Length, r: Length) -> Length {
    let logs = d.max(1.0).log2() + (1.0 / r).max(1.0).log2() + 2.0;
    2f64.powi(20) * (d + area_term(z, d, r) * logs)
}

/// `c·2^{7s+1}·138·(D²/(2^z r) + D)·D^α`.
pub fn medium_vision_bound(z: u32, d: Length, r: Length, params: MediumParams) -> Length {
    params.threads() as f64
        * 2f64.powi(7 * params.s as i32 + 1)
        * basic_cost_bound(z, d, r)
        * d.powf(params.alpha)
}

/// `116·(D − r)`.
pub fn large_vision_bound(d: Length, r: Length) -> Length {
    116.0 * (d - r)
}

/// Upper bound on the cost of `kind` for a treasure at distance at most `d`.
/// Universal pays at most 24 times the bound of the strategy for the regime.
pub fn upper_bound(kind: StrategyKind, z: u32, d: Length, r: Length, params: MediumParams) -> Length {
    match kind {
        StrategyKind::Basic => basic_cost_bound(z, d, r),
        StrategyKind::Small => small_vision_bound(z, d, r),
        StrategyKind::Medium => medium_vision_bound(z, d, r, params),
        StrategyKind::Large => large_vision_bound(d, r),
        StrategyKind::Universal => {
            24.0 * upper_bound(Regime::classify(d, r).strategy(), z, d, r, params)
        }
    }
}

/// Lower bounds on the optimal cost with `z` bits of advice.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct LowerBoundReport {
    /// `(1/800)·(D²/(2^z r) + D)`, only valid for `r < 0.9·D`.
    pub medium_bound: Option<Length>,
    /// `(1/256)·(D²/(2^z r))·(log₂D + log₂(1/r))`.
    pub small_formula: Length,
    /// `D − r`.
    pub trivial: Length,
    /// The larger of the two formulas above, and at least zero.
    pub small_bound: Length,
}

pub fn lower_bounds(z: u32, d: Length, r: Length) -> Result<LowerBoundReport> {
    if !(r > 0.0 && r < d && d.is_finite()) {
        return Err(HuntError::Precondition(format!("need 0 < r < D, got r = {r}, D = {d}")));
    }
    let area = area_term(z, d, r);
    let medium_bound = (r < 0.9 * d).then(|| (area + d) / 800.0);
    let small_formula = area * (d.log2() + (1.0 / r).log2()) / 256.0;
    let trivial = d - r;
    Ok(LowerBoundReport { medium_bound, small_formula, trivial, small_bound: small_formula.max(trivial).max(0.0) })
}

/// Limit on the number of placements one adversarial search may simulate.
pub const MAX_CANDIDATES: usize = 1_000_000;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct AdversaryConfig {
    pub z: u32,
    pub d: Length,
    pub r: Length,
    pub grid_step: Length,
    pub start: Point2,
    pub cost_cap: Length,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct AdversaryResult {
    pub worst: Point2,
    pub cost: Length,
    pub candidates: usize,
}

/// Candidate treasure positions, sorted lexicographically: the centers of
/// every other tile of the odd tile rows (counted from the North) of the
/// size-`2r` tiling of the square of side `√2·D/2` whose South-West corner is
/// the start, plus a grid of pitch `grid_step` over the disc of radius `D`.
pub fn adversary_candidates(cfg: &AdversaryConfig) -> Result<Vec<Point2>> {
    let AdversaryConfig { d, r, grid_step: step, start, .. } = *cfg;
    if !(r > 0.0 && d > 0.0 && d.is_finite()) {
        return Err(HuntError::Precondition(format!("need r > 0 and D > 0, got r = {r}, D = {d}")));
    }
    if !(step > 0.0 && step <= r) {
        return Err(HuntError::Precondition(format!("grid step {step} must be in (0, r]")));
    }
    let per_axis = 2.0 * (d / step).floor() + 1.0;
    if per_axis * per_axis > 4.0 * MAX_CANDIDATES as f64 {
        return Err(HuntError::Precondition(format!(
            "grid of pitch {step} over radius {d} exceeds {MAX_CANDIDATES} candidates"
        )));
    }
    let mut out = Vec::new();
    let side = std::f64::consts::SQRT_2 * d / 2.0;
    let tiles = (side / (2.0 * r)).floor() as u64;
    for row in (1..=tiles).step_by(2) {
        for col in (1..=tiles).step_by(2) {
            let x = (col as f64 - 0.5) * 2.0 * r;
            let y = side - (row as f64 - 0.5) * 2.0 * r;
            out.push(Point2::new(start.x + x, start.y + y));
        }
    }
    let n = (d / step).floor() as i64;
    for a in -n..=n {
        for b in -n..=n {
            let (x, y) = (a as f64 * step, b as f64 * step);
            if (a, b) != (0, 0) && x.hypot(y) <= d {
                out.push(Point2::new(start.x + x, start.y + y));
            }
        }
        if out.len() > MAX_CANDIDATES {
            return Err(HuntError::Precondition(format!("more than {MAX_CANDIDATES} candidates")));
        }
    }
    out.sort_by(|p, q| p.x.total_cmp(&q.x).then(p.y.total_cmp(&q.y)));
    out.dedup();
    Ok(out)
}

/// Brute-force worst placement: simulate `factory(advice)` against every
/// candidate, the advice being the canonical one for that candidate. Ties go
/// to the lexicographically smallest candidate. A candidate the strategy does
/// not find within the cap is an error.
pub fn adversarial_placement<F>(factory: F, cfg: &AdversaryConfig) -> Result<AdversaryResult>
where
    F: Fn(&AdviceString) -> Result<TrajectoryStream> + Sync,
{
    let candidates = adversary_candidates(cfg)?;
    let costs = candidates
        .par_iter()
        .map(|&q| {
            let w = encode_advice(cfg.start, q, cfg.z)?;
            let outcome = run(factory(&w)?, q, cfg.r, cfg.cost_cap)?;
            if !outcome.found {
                return Err(HuntError::Precondition(format!(
                    "treasure at {q} not found within the cap {}",
                    cfg.cost_cap
                )));
            }
            Ok(outcome.cost)
        })
        .collect::<Result<Vec<_>>>()?;
    let mut best = 0;
    for (k, &c) in costs.iter().enumerate() {
        if c > costs[best] {
            best = k;
        }
    }
    let worst = *candidates
        .get(best)
        .ok_or_else(|| HuntError::Precondition("no candidate placements".into()))?;
    Ok(AdversaryResult { worst, cost: costs[best], candidates: candidates.len() })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geom::Segment;
    use crate::strategies::{large_vision, small_vision};
    use crate::traversal::{spiral, Run, RayPath, Path};
    use std::sync::Arc;

    fn segment_stream(a: Point2, b: Point2) -> TrajectoryStream {
        let dir = (b - a) * (1.0 / a.distance(b));
        let path = Arc::new(Path::Ray(RayPath { origin: a, direction: dir, length: a.distance(b) }));
        TrajectoryStream::from_path(path)
    }

    #[test]
    fn single_segment_detection() {
        let out = run(segment_stream(Point2::ORIGIN, Point2::new(10.0, 0.0)), Point2::new(5.0, 3.0), 3.0, 100.0).unwrap();
        assert!(out.found);
        assert_eq!(out.cost, 5.0);
        assert_eq!(out.detection_point, Some(Point2::new(5.0, 0.0)));
    }

    #[test]
    fn treasure_at_start() {
        let out = run(large_vision(Point2::new(1.0, 1.0)), Point2::new(1.5, 1.0), 0.5, 10.0).unwrap();
        assert_eq!(out, RunOutcome { found: true, cost: 0.0, detection_point: Some(Point2::new(1.0, 1.0)), segments_executed: 0 });
    }

    #[test]
    fn cap_reached() {
        let out = run(spiral(4.0, 1.0, Point2::ORIGIN).unwrap(), Point2::new(100.0, 0.0), 1.0, 50.0).unwrap();
        assert!(!out.found);
        assert_eq!(out.cost, 50.0);
        let out = run(spiral(4.0, 1.0, Point2::ORIGIN).unwrap(), Point2::new(100.0, 0.0), 1.0, 500.0).unwrap();
        assert!(!out.found);
        assert_eq!(out.cost, 500.0);
    }

    #[test]
    fn bad_arguments() {
        assert!(run(large_vision(Point2::ORIGIN), Point2::new(3.0, 0.0), 0.0, 10.0).is_err());
        assert!(run(large_vision(Point2::ORIGIN), Point2::new(3.0, 0.0), 1.0, 0.0).is_err());
    }

    #[test]
    fn gaps_are_structural_errors() {
        let a = Run::full(Arc::new(Path::Ray(RayPath { origin: Point2::ORIGIN, direction: Point2::new(1.0, 0.0), length: 1.0 })));
        let b = Run::full(Arc::new(Path::Ray(RayPath { origin: Point2::new(5.0, 5.0), direction: Point2::new(1.0, 0.0), length: 1.0 })));
        let s = TrajectoryStream::new(Point2::ORIGIN, vec![Ok(a), Ok(b)].into_iter());
        assert!(matches!(run(s, Point2::new(50.0, 0.0), 1.0, 100.0), Err(HuntError::Structural(_))));
    }

    #[test]
    fn large_vision_due_north() {
        for (d, r) in [(10.0, 9.5), (100.0, 91.0), (7.0, 6.5)] {
            let out = run(large_vision(Point2::ORIGIN), Point2::new(0.0, d), r, 1e6).unwrap();
            assert!(out.found);
            assert!(out.cost <= 116.0 * (d - r), "{d} {r} {}", out.cost);
        }
    }

    #[test]
    fn shortcuts_do_not_change_outcomes() {
        let w: AdviceString = "10".parse().unwrap();
        let q = Point2::new(0.3, -2.9);
        let fast = run(small_vision(&w, Point2::ORIGIN), q, 0.2, 1e7).unwrap();
        let slow = run_with(small_vision(&w, Point2::ORIGIN), q, 0.2, 1e7, RunOptions { skip_retraces: false, skip_far_runs: false }).unwrap();
        assert!(fast.found);
        assert!((fast.cost - slow.cost).abs() <= 1e-12 * slow.cost);
        assert!(fast.detection_point.unwrap().distance(slow.detection_point.unwrap()) < 1e-9);
    }

    #[test]
    fn lower_bound_values() {
        let lb = lower_bounds(0, 100.0, 1.0).unwrap();
        assert_eq!(lb.medium_bound, Some(12.625));
        assert_eq!(lb.trivial, 99.0);
        let lb = lower_bounds(0, 20.0, 1.0).unwrap();
        assert_eq!(lb.medium_bound, Some(0.525));
        let lb = lower_bounds(0, 100.0, 95.0).unwrap();
        assert_eq!(lb.medium_bound, None);
        assert_eq!(lb.trivial, 5.0);
        let far = lower_bounds(40, 100.0, 1.0).unwrap().medium_bound.unwrap();
        assert!((far - 100.0 / 800.0).abs() < 1e-6);
        assert!(lower_bounds(0, 1.0, 1.0).is_err());
    }

    #[test]
    fn regimes() {
        assert_eq!(Regime::classify(10.0, 1.0), Regime::Small);
        assert_eq!(Regime::classify(10.0, 0.5), Regime::Small);
        assert_eq!(Regime::classify(10.0, 8.9), Regime::Medium);
        assert_eq!(Regime::classify(10.0, 9.0), Regime::Large);
        let p = MediumParams::default();
        assert_eq!(upper_bound(StrategyKind::Large, 0, 10.0, 9.5, p), 58.0);
        assert_eq!(upper_bound(StrategyKind::Universal, 0, 10.0, 9.5, p), 24.0 * 58.0);
        assert_eq!(upper_bound(StrategyKind::Basic, 2, 2.0, 1.0, p), 414.0);
    }

    #[test]
    fn candidate_pattern() {
        let cfg = AdversaryConfig { z: 0, d: 8.0, r: 1.0, grid_step: 1.0, start: Point2::ORIGIN, cost_cap: 1e6 };
        let c = adversary_candidates(&cfg).unwrap();
        // side 4√2 ≈ 5.66 holds 2×2 tiles of size 2; one shaded tile, plus the
        // 196 nonzero lattice points of the radius-8 disc
        assert_eq!(c.len(), 197);
        assert!(c.contains(&Point2::new(1.0, 4.0 * std::f64::consts::SQRT_2 - 1.0)));
        assert!(!c.contains(&Point2::ORIGIN));
        assert!(c.windows(2).all(|w| (w[0].x, w[0].y) < (w[1].x, w[1].y)));
        let bad = AdversaryConfig { grid_step: 2.0, ..cfg };
        assert!(adversary_candidates(&bad).is_err());
        let huge = AdversaryConfig { grid_step: 0.001, ..cfg };
        assert!(adversary_candidates(&huge).is_err());
    }

    #[test]
    fn large_vision_adversary_within_bounds() {
        let cfg = AdversaryConfig { z: 0, d: 10.0, r: 9.2, grid_step: 1.0, start: Point2::ORIGIN, cost_cap: 1e5 };
        let res = adversarial_placement(|_| Ok(large_vision(Point2::ORIGIN)), &cfg).unwrap();
        assert!(res.cost >= cfg.d - cfg.r - 1e-12 && res.cost <= 116.0 * (cfg.d - cfg.r));
    }

    #[test]
    fn segment_helper_roundtrip() {
        let s = segment_stream(Point2::ORIGIN, Point2::new(3.0, 4.0)).materialize(10).unwrap();
        let segs: Vec<Segment> = s.segments().collect();
        assert_eq!(segs.len(), 1);
        assert!(segs[0].b.distance(Point2::new(3.0, 4.0)) < 1e-15);
        assert_eq!(s.length(), 5.0);
    }
}
