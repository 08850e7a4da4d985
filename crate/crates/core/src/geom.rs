//! Planar primitives: points, north-referenced angles, segments, polylines and
//! the first-detection computation of a moving point against a vision disc.
//!
//! Angles follow a compass convention: they are measured counterclockwise from
//! North (the +y axis). Direction angles are canonicalized into `(0, 2π]`, so
//! due North is `2π` rather than `0`.

use std::f64::consts::TAU;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use crate::error::{HuntError, Result};

/// Lengths and costs, in abstract plane units.
pub type Length = f64;

/// Absolute slack applied to "within distance r" tests.
pub const DETECTION_TOLERANCE: f64 = 1e-12;

#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct Point2 {
    pub x: f64,
    pub y: f64,
}

impl Point2 {
    pub const ORIGIN: Point2 = Point2 { x: 0.0, y: 0.0 };

    pub const fn new(x: f64, y: f64) -> Self {
        Self { x, y }
    }

    pub fn is_finite(self) -> bool {
        self.x.is_finite() && self.y.is_finite()
    }

    pub fn dot(self, other: Point2) -> f64 {
        self.x * other.x + self.y * other.y
    }

    pub fn norm(self) -> f64 {
        self.x.hypot(self.y)
    }

    pub fn norm_sq(self) -> f64 {
        self.dot(self)
    }

    pub fn distance(self, other: Point2) -> f64 {
        (other - self).norm()
    }

    /// Point at fraction `t` of the way from `self` to `other`.
    pub fn lerp(self, other: Point2, t: f64) -> Point2 {
        Point2::new(
            self.x + t * (other.x - self.x),
            self.y + t * (other.y - self.y),
        )
    }
}

impl Add for Point2 {
    type Output = Point2;
    fn add(self, rhs: Point2) -> Point2 {
        Point2::new(self.x + rhs.x, self.y + rhs.y)
    }
}

impl Sub for Point2 {
    type Output = Point2;
    fn sub(self, rhs: Point2) -> Point2 {
        Point2::new(self.x - rhs.x, self.y - rhs.y)
    }
}

impl Mul<f64> for Point2 {
    type Output = Point2;
    fn mul(self, k: f64) -> Point2 {
        Point2::new(self.x * k, self.y * k)
    }
}

impl Neg for Point2 {
    type Output = Point2;
    fn neg(self) -> Point2 {
        Point2::new(-self.x, -self.y)
    }
}

impl fmt::Display for Point2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.x, self.y)
    }
}

/// An angle in radians, counted counterclockwise from North.
#[derive(Clone, Copy, Debug, PartialEq, PartialOrd)]
pub struct Radians(pub f64);

impl Radians {
    pub fn value(self) -> f64 {
        self.0
    }

    /// Folds the angle into `(0, 2π]`.
    pub fn canonical(self) -> Radians {
        let mut v = self.0.rem_euclid(TAU);
        if v <= 0.0 {
            v = TAU;
        }
        Radians(v)
    }

    /// Unit vector pointing in this direction.
    pub fn direction(self) -> Point2 {
        let (sin, cos) = self.0.sin_cos();
        Point2::new(-sin, cos)
    }
}

/// Counterclockwise angle from North of the vector `origin → target`, in `(0, 2π]`.
pub fn ccw_angle_from_north(origin: Point2, target: Point2) -> Result<Radians> {
    let v = target - origin;
    if !v.is_finite() {
        return Err(HuntError::Degenerate("non-finite point".into()));
    }
    if v.x == 0.0 && v.y == 0.0 {
        return Err(HuntError::Degenerate(format!(
            "angle from {origin} to itself is undefined"
        )));
    }
    // `+ 0.0` folds a negative zero so that due South lands on +π.
    let theta = (-v.x + 0.0).atan2(v.y);
    Ok(Radians(if theta <= 0.0 { theta + TAU } else { theta }))
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Segment {
    pub a: Point2,
    pub b: Point2,
}

impl Segment {
    pub const fn new(a: Point2, b: Point2) -> Self {
        Self { a, b }
    }

    pub fn length(&self) -> Length {
        self.a.distance(self.b)
    }

    pub fn is_degenerate(&self) -> bool {
        self.a == self.b
    }

    /// Point at arc length `t` from `a`, clamped to the segment.
    pub fn point_at(&self, t: Length) -> Point2 {
        let len = self.length();
        if len == 0.0 || t <= 0.0 {
            self.a
        } else if t >= len {
            self.b
        } else {
            self.a.lerp(self.b, t / len)
        }
    }

    pub fn reversed(&self) -> Segment {
        Segment::new(self.b, self.a)
    }

    pub fn distance_to(&self, q: Point2) -> f64 {
        let d = self.b - self.a;
        let len_sq = d.norm_sq();
        if len_sq == 0.0 {
            return self.a.distance(q);
        }
        let t = ((q - self.a).dot(d) / len_sq).clamp(0.0, 1.0);
        self.a.lerp(self.b, t).distance(q)
    }
}

/// Smallest arc length `t ∈ [0, |ab|]` at which a point moving from `a` to `b`
/// is within distance `r` of `q`, or `None` if it never gets that close.
///
/// Tangency within [`DETECTION_TOLERANCE`] counts as a detection; the returned
/// position then sits at the point of closest approach.
pub fn earliest_detection_on_segment(a: Point2, b: Point2, q: Point2, r: Length) -> Option<Length> {
    let reach = r + DETECTION_TOLERANCE;
    let f = a - q;
    let c = f.norm_sq() - r * r;
    if f.norm_sq() <= reach * reach {
        return Some(0.0);
    }
    let d = b - a;
    let len = d.norm();
    if len == 0.0 {
        return None;
    }
    let u = d * (1.0 / len);
    let half_b = f.dot(u);
    if half_b >= 0.0 {
        // moving away from q; the start was already outside the disc
        return None;
    }
    // Closest approach along the infinite line, then the closed-disc test.
    let t_closest = -half_b;
    let closest_sq = (f.norm_sq() - half_b * half_b).max(0.0);
    if closest_sq > reach * reach {
        return None;
    }
    let disc = (half_b * half_b - c).max(0.0);
    // Stable root pair: big = -b + √disc has no cancellation, small = c / big.
    let big = -half_b + disc.sqrt();
    let t = if big > 0.0 { (c / big).max(0.0) } else { t_closest };
    let t = t.min(t_closest);
    (t <= len).then_some(t)
}

/// An ordered list of vertices with cached cumulative arc lengths.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct Polyline {
    vertices: Vec<Point2>,
    cumulative: Vec<Length>,
}

impl Polyline {
    pub fn new(start: Point2) -> Self {
        Self {
            vertices: vec![start],
            cumulative: vec![0.0],
        }
    }

    pub fn from_vertices(vertices: impl IntoIterator<Item = Point2>) -> Result<Self> {
        let mut it = vertices.into_iter();
        let first = it
            .next()
            .ok_or_else(|| HuntError::Degenerate("polyline needs at least one vertex".into()))?;
        let mut line = Polyline::new(first);
        for v in it {
            line.push(v);
        }
        Ok(line)
    }

    pub fn push(&mut self, p: Point2) {
        let last = *self.vertices.last().expect("polyline is never empty");
        let total = *self.cumulative.last().expect("polyline is never empty");
        self.vertices.push(p);
        self.cumulative.push(total + last.distance(p));
    }

    pub fn vertices(&self) -> &[Point2] {
        &self.vertices
    }

    pub fn cumulative(&self) -> &[Length] {
        &self.cumulative
    }

    pub fn start(&self) -> Point2 {
        self.vertices[0]
    }

    pub fn end(&self) -> Point2 {
        *self.vertices.last().expect("polyline is never empty")
    }

    pub fn segment_count(&self) -> usize {
        self.vertices.len() - 1
    }

    pub fn segments(&self) -> impl Iterator<Item = Segment> + '_ {
        self.vertices.windows(2).map(|w| Segment::new(w[0], w[1]))
    }

    pub fn length(&self) -> Length {
        *self.cumulative.last().expect("polyline is never empty")
    }

    /// The same vertices walked backwards.
    pub fn reversed(&self) -> Polyline {
        Polyline::from_vertices(self.vertices.iter().rev().copied())
            .expect("polyline is never empty")
    }

    /// Point at arc length `t` along the polyline (clamped to its ends).
    pub fn point_at(&self, t: Length) -> Point2 {
        if t <= 0.0 {
            return self.start();
        }
        let idx = self.cumulative.partition_point(|&c| c < t);
        if idx >= self.vertices.len() {
            return self.end();
        }
        if idx == 0 {
            return self.start();
        }
        Segment::new(self.vertices[idx - 1], self.vertices[idx]).point_at(t - self.cumulative[idx - 1])
    }

    /// Axis-aligned bounding box `(min, max)`.
    pub fn bounds(&self) -> (Point2, Point2) {
        let mut lo = self.vertices[0];
        let mut hi = lo;
        for v in &self.vertices[1..] {
            lo = Point2::new(lo.x.min(v.x), lo.y.min(v.y));
            hi = Point2::new(hi.x.max(v.x), hi.y.max(v.y));
        }
        (lo, hi)
    }
}

/// Sum of Euclidean segment lengths.
pub fn polyline_length(p: &Polyline) -> Length {
    p.segments().map(|s| s.length()).sum()
}

/// Axis-aligned box used to reject far-away trajectory pieces quickly.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Aabb {
    pub min: Point2,
    pub max: Point2,
}

impl Aabb {
    pub fn from_points(points: impl IntoIterator<Item = Point2>) -> Aabb {
        let mut it = points.into_iter();
        let first = it.next().unwrap_or(Point2::ORIGIN);
        it.fold(Aabb { min: first, max: first }, |b, p| Aabb {
            min: Point2::new(b.min.x.min(p.x), b.min.y.min(p.y)),
            max: Point2::new(b.max.x.max(p.x), b.max.y.max(p.y)),
        })
    }

    pub fn distance_to(&self, q: Point2) -> f64 {
        let dx = (self.min.x - q.x).max(0.0).max(q.x - self.max.x);
        let dy = (self.min.y - q.y).max(0.0).max(q.y - self.max.y);
        dx.hypot(dy)
    }
}
