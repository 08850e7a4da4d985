//! Trajectory building blocks and Basic Traversal.
//!
//! A trajectory is produced lazily as a sequence of [`Run`]s. A run is a
//! contiguous piece of an indexed [`Path`] (a spiral, a column sweep or a
//! straight line), walked forwards or backwards and possibly cut short at an
//! arbitrary point of one of its segments. Because paths compute any vertex
//! from its index, a run costs a few words of memory no matter how many
//! segments it spans, and reversing an already emitted prefix never requires
//! buffering its segments.
//!
//! Runs that walk back over geometry the same stream has already emitted are
//! flagged as retraces. The simulator may skip their detection tests: a
//! retrace cannot reveal anything the forward pass did not.

use std::f64::consts::FRAC_1_SQRT_2;
use std::fmt;
use std::sync::Arc;

use crate::advice::{decode_sector, AdviceString};
use crate::error::{HuntError, Result};
use crate::geom::{Aabb, Length, Point2, Polyline, Segment};
use crate::tiling::{ColumnProfile, TileFrame, WedgeRegion};

/// Column limit for sweeps that are generated as trajectories. Their length is
/// still computed column by column, so this bounds the work per sweep; the
/// stricter [`crate::tiling::MAX_COLUMNS`] applies to [`basic_cost`].
pub const MAX_SWEEP_COLUMNS: u64 = 1 << 30;

/// The square spiral `X(D, r)`: `(E,r), (S,r), (W,2r), (N,2r), …, (E,(2k+1)r)`
/// with `k = ⌈D/r⌉`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SpiralPath {
    start: Point2,
    pitch: Length,
    turns: u64,
}

impl SpiralPath {
    pub fn new(d: Length, r: Length, start: Point2) -> Result<Self> {
        check_radii(d, r)?;
        let turns = (d / r).ceil();
        if turns > 1e15 {
            return Err(HuntError::Precondition(format!("spiral with {turns} turns")));
        }
        Ok(Self { start, pitch: r, turns: turns as u64 })
    }

    /// `k = ⌈D/r⌉`.
    pub fn turns(&self) -> u64 {
        self.turns
    }

    pub fn pitch(&self) -> Length {
        self.pitch
    }

    pub fn segment_count(&self) -> usize {
        (4 * self.turns + 1) as usize
    }

    pub fn vertex(&self, n: usize) -> Point2 {
        let m = (n / 4) as f64;
        let (ux, uy) = match n % 4 {
            0 => (-m, m),
            1 => (m + 1.0, m),
            2 => (m + 1.0, -m - 1.0),
            _ => (-m - 1.0, -m - 1.0),
        };
        Point2::new(self.start.x + ux * self.pitch, self.start.y + uy * self.pitch)
    }

    /// Closed form `(2k+1)²·r`.
    pub fn length(&self) -> Length {
        let side = (2 * self.turns + 1) as f64;
        side * side * self.pitch
    }

    pub fn bounds(&self) -> Aabb {
        let k = self.turns as f64;
        Aabb {
            min: Point2::new(self.start.x - k * self.pitch, self.start.y - k * self.pitch),
            max: Point2::new(self.start.x + (k + 1.0) * self.pitch, self.start.y + k * self.pitch),
        }
    }
}

/// Procedure Basic Traversal with Advice: a column-by-column sweep of the
/// tiles covering `S*`, visiting the center of every tile.
#[derive(Clone, Copy, Debug)]
pub struct SweepPath {
    frame: TileFrame,
    profile: ColumnProfile,
    length: Length,
    bounds: Aabb,
}

impl SweepPath {
    pub fn new(region: &WedgeRegion, r: Length) -> Result<Self> {
        let profile = ColumnProfile::with_limit(region.wedge_angle, region.radius, r, MAX_SWEEP_COLUMNS)?;
        let frame = region.frame();
        let length = sweep_length(&profile);
        let width = profile.columns() as f64 * r;
        let height = (profile.tallest() + 1) as f64 * r;
        let bounds = Aabb::from_points([
            frame.to_world(0.0, 0.0),
            frame.to_world(width, 0.0),
            frame.to_world(0.0, height),
            frame.to_world(width, height),
        ]);
        Ok(Self { frame, profile, length, bounds })
    }

    pub fn profile(&self) -> &ColumnProfile {
        &self.profile
    }

    pub fn frame(&self) -> &TileFrame {
        &self.frame
    }

    pub fn segment_count(&self) -> usize {
        3 * self.profile.columns() as usize
    }

    fn center(&self, u: u64, v: u64) -> Point2 {
        let r = self.profile.tile();
        self.frame.to_world((u as f64 + 0.5) * r, (v as f64 + 0.5) * r)
    }

    /// Vertex 0 is the apex; then each column contributes the bottom tile
    /// center, the top tile center and the bottom center again.
    pub fn vertex(&self, n: usize) -> Point2 {
        if n == 0 {
            return self.frame.apex;
        }
        let u = ((n - 1) / 3) as u64;
        match (n - 1) % 3 {
            1 => self.center(u, self.profile.v_max(u)),
            _ => self.center(u, 0),
        }
    }

    pub fn length(&self) -> Length {
        self.length
    }
}

/// `r/√2` to reach the first tile center, `2·v_max·r` up and down each column,
/// and `r` between consecutive columns.
fn sweep_length(profile: &ColumnProfile) -> Length {
    let r = profile.tile();
    let columns = profile.columns();
    let rows: u64 = (0..columns).map(|u| profile.v_max(u)).sum();
    r * FRAC_1_SQRT_2 + (2 * rows + columns - 1) as f64 * r
}

/// A straight leg of prescribed length, accounted at exactly that length.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct RayPath {
    pub origin: Point2,
    pub direction: Point2,
    pub length: Length,
}

impl RayPath {
    pub fn end(&self) -> Point2 {
        self.origin + self.direction * self.length
    }
}

/// A finite trajectory whose vertices are addressable by index.
#[derive(Clone, Debug)]
pub enum Path {
    Spiral(SpiralPath),
    Sweep(SweepPath),
    Ray(RayPath),
}

impl Path {
    pub fn segment_count(&self) -> usize {
        match self {
            Path::Spiral(s) => s.segment_count(),
            Path::Sweep(s) => s.segment_count(),
            Path::Ray(_) => 1,
        }
    }

    pub fn vertex(&self, n: usize) -> Point2 {
        match self {
            Path::Spiral(s) => s.vertex(n),
            Path::Sweep(s) => s.vertex(n),
            Path::Ray(l) => {
                if n == 0 {
                    l.origin
                } else {
                    l.end()
                }
            }
        }
    }

    pub fn start(&self) -> Point2 {
        self.vertex(0)
    }

    pub fn end(&self) -> Point2 {
        self.vertex(self.segment_count())
    }

    /// Total length, from the closed forms where they exist.
    pub fn length(&self) -> Length {
        match self {
            Path::Spiral(s) => s.length(),
            Path::Sweep(s) => s.length(),
            Path::Ray(l) => l.length,
        }
    }

    pub fn bounds(&self) -> Aabb {
        match self {
            Path::Spiral(s) => s.bounds(),
            Path::Sweep(s) => s.bounds,
            Path::Ray(l) => Aabb::from_points([l.origin, l.end()]),
        }
    }
}

/// A point on segment `seg` of a path (between vertices `seg` and `seg + 1`).
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Cut {
    pub seg: usize,
    pub point: Point2,
}

/// A contiguous stretch of a [`Path`], walked in either direction.
#[derive(Clone)]
pub struct Run {
    path: Arc<Path>,
    lo: Cut,
    hi: Cut,
    reversed: bool,
    retrace: bool,
    len: Length,
}

impl fmt::Debug for Run {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Run")
            .field("lo", &self.lo)
            .field("hi", &self.hi)
            .field("reversed", &self.reversed)
            .field("retrace", &self.retrace)
            .field("len", &self.len)
            .finish()
    }
}

impl Run {
    /// The whole path, forwards.
    pub fn full(path: Arc<Path>) -> Run {
        let n = path.segment_count();
        let lo = Cut { seg: 0, point: path.vertex(0) };
        let hi = Cut { seg: n - 1, point: path.vertex(n) };
        let len = path.length();
        Run { path, lo, hi, reversed: false, retrace: false, len }
    }

    /// The same stretch walked the other way. The result is always a retrace.
    pub fn reversed(&self) -> Run {
        Run { reversed: !self.reversed, retrace: true, ..self.clone() }
    }

    pub fn path(&self) -> &Arc<Path> {
        &self.path
    }

    pub fn is_retrace(&self) -> bool {
        self.retrace
    }

    pub fn is_reversed(&self) -> bool {
        self.reversed
    }

    /// Accounted length; exact closed form for whole paths, the requested
    /// distance for cut runs.
    pub fn len(&self) -> Length {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0.0
    }

    pub fn start(&self) -> Point2 {
        if self.reversed {
            self.hi.point
        } else {
            self.lo.point
        }
    }

    pub fn end(&self) -> Point2 {
        if self.reversed {
            self.lo.point
        } else {
            self.hi.point
        }
    }

    /// Number of moves, degenerate ones included.
    pub fn move_count(&self) -> usize {
        self.hi.seg - self.lo.seg + 1
    }

    pub fn bounds(&self) -> Aabb {
        self.path.bounds()
    }

    /// The moves of this run in walking order, zero-length ones included.
    pub fn moves(&self) -> RunMoves<'_> {
        RunMoves { run: self, next: 0, count: self.move_count(), at: self.start() }
    }

    /// Point reached by the `m`-th move (0-based).
    fn move_target(&self, m: usize, count: usize) -> Point2 {
        if m + 1 == count {
            self.end()
        } else if self.reversed {
            self.path.vertex(self.hi.seg - m)
        } else {
            self.path.vertex(self.lo.seg + m + 1)
        }
    }

    /// The first `dist` units of this run. Returns the run unchanged when it
    /// is not longer than `dist`.
    pub fn truncated(&self, dist: Length) -> Run {
        let mut acc = 0.0;
        for (m, seg) in self.moves().enumerate() {
            let l = seg.length();
            if acc + l >= dist {
                let t = if l > 0.0 { ((dist - acc) / l).clamp(0.0, 1.0) } else { 0.0 };
                let point = seg.a.lerp(seg.b, t);
                let mut out = self.clone();
                if self.reversed {
                    out.lo = Cut { seg: self.hi.seg - m, point };
                } else {
                    out.hi = Cut { seg: self.lo.seg + m, point };
                }
                out.len = dist;
                return out;
            }
            acc += l;
        }
        self.clone()
    }
}

pub struct RunMoves<'a> {
    run: &'a Run,
    next: usize,
    count: usize,
    at: Point2,
}

impl Iterator for RunMoves<'_> {
    type Item = Segment;

    fn next(&mut self) -> Option<Segment> {
        if self.next >= self.count {
            return None;
        }
        let to = self.run.move_target(self.next, self.count);
        let seg = Segment::new(self.at, to);
        self.at = to;
        self.next += 1;
        Some(seg)
    }

    fn size_hint(&self) -> (usize, Option<usize>) {
        let left = self.count - self.next;
        (left, Some(left))
    }
}

type RunIter = Box<dyn Iterator<Item = Result<Run>> + Send>;

/// A lazily generated, possibly infinite trajectory starting at a fixed point.
///
/// The stream ends after yielding its first error.
pub struct TrajectoryStream {
    start: Point2,
    runs: RunIter,
    failed: bool,
}

impl TrajectoryStream {
    pub fn new(start: Point2, runs: impl Iterator<Item = Result<Run>> + Send + 'static) -> Self {
        Self { start, runs: Box::new(runs), failed: false }
    }

    pub fn from_path(path: Arc<Path>) -> Self {
        let start = path.start();
        Self::new(start, std::iter::once(Ok(Run::full(path))))
    }

    /// A stream that stays at `start`.
    pub fn empty(start: Point2) -> Self {
        Self::new(start, std::iter::empty())
    }

    pub fn start(&self) -> Point2 {
        self.start
    }

    /// This stream followed by `next` (which should start where this one ends).
    pub fn followed_by(self, next: TrajectoryStream) -> TrajectoryStream {
        let start = self.start;
        TrajectoryStream::new(start, Iterator::chain(self, next))
    }

    /// Walk `length` units of this stream and come back along the same way.
    pub fn out_and_back(self, length: Length) -> TrajectoryStream {
        let start = self.start;
        TrajectoryStream::new(start, OutAndBack::new(self, length))
    }

    /// Non-degenerate segments in walking order.
    pub fn segments(self) -> impl Iterator<Item = Result<Segment>> + Send {
        self.flat_map(|run| -> Box<dyn Iterator<Item = Result<Segment>> + Send> {
            match run {
                Ok(run) => Box::new(
                    run.moves()
                        .filter(|s| !s.is_degenerate())
                        .map(Ok)
                        .collect::<Vec<_>>()
                        .into_iter(),
                ),
                Err(e) => Box::new(std::iter::once(Err(e))),
            }
        })
    }

    /// Materialize the first `length` units (or the whole stream if it is
    /// shorter), failing if that needs more than `max_segments` segments.
    pub fn prefix(self, length: Length, max_segments: usize) -> Result<Polyline> {
        let mut line = Polyline::new(self.start);
        let mut acc = 0.0;
        if length <= 0.0 {
            return Ok(line);
        }
        for run in self {
            let run = run?;
            for seg in run.moves() {
                if seg.is_degenerate() {
                    continue;
                }
                if line.segment_count() >= max_segments {
                    return Err(HuntError::Precondition(format!(
                        "prefix needs more than {max_segments} segments"
                    )));
                }
                let l = seg.length();
                if acc + l >= length {
                    line.push(seg.point_at(length - acc));
                    return Ok(line);
                }
                acc += l;
                line.push(seg.b);
            }
        }
        Ok(line)
    }

    /// Materialize the whole (finite) stream.
    pub fn materialize(self, max_segments: usize) -> Result<Polyline> {
        self.prefix(f64::INFINITY, max_segments)
    }
}

impl Iterator for TrajectoryStream {
    type Item = Result<Run>;

    fn next(&mut self) -> Option<Result<Run>> {
        if self.failed {
            return None;
        }
        let item = self.runs.next();
        if matches!(item, Some(Err(_))) {
            self.failed = true;
        }
        item
    }
}

/// Prefix of an inner stream followed by the exact reversal of that prefix.
/// Only run descriptors are remembered, never segments.
struct OutAndBack {
    inner: TrajectoryStream,
    remaining: Length,
    trace: Vec<Run>,
    going_back: bool,
}

impl OutAndBack {
    fn new(inner: TrajectoryStream, length: Length) -> Self {
        Self { inner, remaining: length.max(0.0), trace: Vec::new(), going_back: length <= 0.0 }
    }
}

impl Iterator for OutAndBack {
    type Item = Result<Run>;

    fn next(&mut self) -> Option<Result<Run>> {
        if !self.going_back {
            match self.inner.next() {
                Some(Ok(run)) => {
                    let run = if run.len() <= self.remaining {
                        self.remaining -= run.len();
                        run
                    } else {
                        let cut = run.truncated(self.remaining);
                        self.remaining = 0.0;
                        cut
                    };
                    if self.remaining <= 0.0 {
                        self.going_back = true;
                    }
                    self.trace.push(run.clone());
                    return Some(Ok(run));
                }
                Some(Err(e)) => {
                    self.going_back = true;
                    self.trace.clear();
                    return Some(Err(e));
                }
                None => self.going_back = true,
            }
        }
        self.trace.pop().map(|run| Ok(run.reversed()))
    }
}

fn check_radii(d: Length, r: Length) -> Result<()> {
    if !(r > 0.0 && r < d && d.is_finite()) {
        return Err(HuntError::Precondition(format!(
            "need 0 < r < D, got r = {r}, D = {d}"
        )));
    }
    Ok(())
}

pub fn ray_path(origin: Point2, direction: Point2, length: Length) -> Arc<Path> {
    Arc::new(Path::Ray(RayPath { origin, direction, length }))
}

/// Out along a ray for `length` and straight back.
pub fn ray_out_and_back(origin: Point2, direction: Point2, length: Length) -> TrajectoryStream {
    let run = Run::full(ray_path(origin, direction, length));
    let back = run.reversed();
    TrajectoryStream::new(origin, [Ok(run), Ok(back)].into_iter())
}

pub fn spiral_path(d: Length, r: Length, start: Point2) -> Result<Arc<Path>> {
    Ok(Arc::new(Path::Spiral(SpiralPath::new(d, r, start)?)))
}

/// The spiral `X(D, r)` around `start`.
pub fn spiral(d: Length, r: Length, start: Point2) -> Result<TrajectoryStream> {
    Ok(TrajectoryStream::from_path(spiral_path(d, r, start)?))
}

pub fn sweep_path(w: &AdviceString, d: Length, r: Length, start: Point2) -> Result<Arc<Path>> {
    if w.len() < 2 {
        return Err(HuntError::Precondition(format!(
            "column sweep needs at least 2 advice bits, got {}",
            w.len()
        )));
    }
    check_radii(d, r)?;
    let region = WedgeRegion::new(&decode_sector(w, start), d);
    Ok(Arc::new(Path::Sweep(SweepPath::new(&region, r)?)))
}

/// Procedure Basic Traversal with Advice.
pub fn basic_traversal_with_advice(
    w: &AdviceString,
    d: Length,
    r: Length,
    start: Point2,
) -> Result<TrajectoryStream> {
    Ok(TrajectoryStream::from_path(sweep_path(w, d, r, start)?))
}

/// The path followed by Algorithm Basic Traversal: the column sweep when the
/// advice has at least two bits, the spiral otherwise.
pub fn basic_traversal_path(w: &AdviceString, d: Length, r: Length, start: Point2) -> Result<Arc<Path>> {
    if w.len() >= 2 {
        sweep_path(w, d, r, start)
    } else {
        spiral_path(d, r, start)
    }
}

/// Algorithm Basic Traversal (known `D` and `r`).
pub fn basic_traversal(w: &AdviceString, d: Length, r: Length, start: Point2) -> Result<TrajectoryStream> {
    Ok(TrajectoryStream::from_path(basic_traversal_path(w, d, r, start)?))
}

/// Exact length `C(z, D, r)` of Basic Traversal, without building segments.
///
/// Spirals use the closed form; sweeps walk the column heights, and refuse
/// (with [`HuntError::ColumnGuard`]) when there are more than
/// [`crate::tiling::MAX_COLUMNS`] columns.
pub fn basic_cost(z: u32, d: Length, r: Length) -> Result<Length> {
    check_radii(d, r)?;
    if z < 2 {
        return Ok(SpiralPath::new(d, r, Point2::ORIGIN)?.length());
    }
    let width = crate::geom::Radians(std::f64::consts::TAU / 2f64.powi(z as i32));
    Ok(sweep_length(&ColumnProfile::new(width, d, r)?))
}

/// A cheap lower bound on [`basic_cost`], valid even past the column guard.
///
/// Every column is entered, so the sweep is at least `(⌈D/r⌉ − 1)·r` long; and
/// since column `u` climbs to the top of the region over its strip, the
/// vertical travel is at least `2·area(S*)/r − 2·⌈D/r⌉·r`.
pub fn basic_cost_lower_bound(z: u32, d: Length, r: Length) -> Result<Length> {
    check_radii(d, r)?;
    if z < 2 {
        return basic_cost(z, d, r);
    }
    let area = std::f64::consts::PI * d * d / 2f64.powi(z as i32);
    Ok((2.0 * area / r - d - 2.0 * r).max(d - r))
}

/// The Basic Traversal ceiling `138·(D²/(2^z r) + D)`.
pub fn basic_cost_bound(z: u32, d: Length, r: Length) -> Length {
    138.0 * (d * d / (2f64.powi(z as i32) * r) + d)
}
