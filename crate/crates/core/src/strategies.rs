//! The search strategies, each an infinite [`TrajectoryStream`]:
//!
//! * small vision (`r ≤ 1`): doubling prefixes of the diagonal sweep `Π₁` of
//!   matrix `B`, interleaved with the ray `L′` when the advice names a sector;
//! * medium vision (`1 < r < 0.9D`): budgeted filling of the dots of matrix `A`;
//! * large vision (`r ≥ 0.9D`): twelve rays of doubling length;
//! * universal: the three above, round robin with doubling prefixes;
//! * the multi-agent split, where agent `i` plays universal in sector `i − 1`.

use std::collections::HashMap;
use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;
use std::sync::{Arc, Mutex};

use crate::advice::{decode_sector, AdviceString};
use crate::error::{HuntError, Result};
use crate::geom::{Length, Point2, Radians};
use crate::traversal::{
    basic_cost, basic_cost_bound, basic_cost_lower_bound, basic_traversal, basic_traversal_path,
    ray_out_and_back, Path, Run, TrajectoryStream,
};

/// Default column branching constant `s`.
pub const DEFAULT_S: u32 = 20;

/// Cell `B(i, j)`: Basic Traversal with `D = 2^i`, `r = 2^-j`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct MatrixCellB {
    pub i: u32,
    pub j: u32,
}

impl MatrixCellB {
    pub fn new(i: u32, j: u32) -> Result<Self> {
        if i == 0 || j == 0 || !j.is_multiple_of(2) {
            return Err(HuntError::Precondition(format!("B({i},{j}) needs i ≥ 1 and even j ≥ 2")));
        }
        Ok(Self { i, j })
    }

    pub fn distance(&self) -> Length {
        2f64.powi(self.i as i32)
    }

    pub fn radius(&self) -> Length {
        2f64.powi(-(self.j as i32))
    }
}

/// Cells of `Π₁` in order: diagonal `Γ[i] = B(i,2), B(i−1,4), …, B(1,2i)`.
pub fn diagonal_cells() -> impl Iterator<Item = MatrixCellB> + Send {
    (1u32..).flat_map(|i| (0..i).map(move |m| MatrixCellB { i: i - m, j: 2 * (m + 1) }))
}

/// Cell `A[i, j]`: Basic Traversal with `D = 2^{js}`, `r = 2^i`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct MatrixCellA {
    pub i: u32,
    pub j: u32,
}

impl MatrixCellA {
    pub fn distance(&self, s: u32) -> Length {
        2f64.powi((self.j * s) as i32)
    }

    pub fn radius(&self) -> Length {
        2f64.powi(self.i as i32)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Dot {
    pub cell: MatrixCellA,
    /// Thread index `k ∈ [1, c]`.
    pub thread: u32,
}

/// Parameters of the medium vision schedule.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct MediumParams {
    pub alpha: f64,
    pub s: u32,
}

impl Default for MediumParams {
    fn default() -> Self {
        Self { alpha: 0.5, s: DEFAULT_S }
    }
}

impl MediumParams {
    pub fn new(alpha: f64, s: u32) -> Result<Self> {
        let p = Self { alpha, s };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.alpha > 0.0 && self.alpha.is_finite()) {
            return Err(HuntError::Precondition(format!("alpha must be positive, got {}", self.alpha)));
        }
        if self.s == 0 {
            return Err(HuntError::Precondition("s must be at least 1".into()));
        }
        Ok(())
    }

    /// Number of threads `c = ⌈1/α⌉`.
    pub fn threads(&self) -> u32 {
        (1.0 / self.alpha).ceil().max(1.0) as u32
    }

    /// First column holding `c` dots: the smallest `j` with `j·s ≥ c`.
    pub fn first_column(&self) -> u32 {
        self.threads().div_ceil(self.s).max(1)
    }
}

/// Row of the `k`-th dot (1-based) of column `j`.
fn dot_row(j: u32, k: u32, c: u32, s: u32) -> u32 {
    let n = j * s;
    let x = n / c;
    let q = n - c * x;
    let p = c - q;
    if k <= p {
        1 + (k - 1) * x
    } else {
        p * x + (k - p - 1) * (x + 1) + 1
    }
}

/// The `c` dots of column `j`: the first rows of its `c` segments, `p` of
/// length `⌊js/c⌋` followed by `q` of length `⌈js/c⌉`.
pub fn dots_of_column(j: u32, c: u32, s: u32) -> Result<Vec<Dot>> {
    if c == 0 || j == 0 || j * s < c {
        return Err(HuntError::Precondition(format!(
            "column {j} has {} entries, fewer than {c} threads",
            j * s
        )));
    }
    Ok((1..=c)
        .map(|k| Dot { cell: MatrixCellA { i: dot_row(j, k, c, s), j }, thread: k })
        .collect())
}

/// The dot whose fill is guaranteed to reveal a treasure at distance at most
/// `d` with vision radius `r`.
///
/// Column `j` is the first with `2^{js} ≥ d` that holds dots. The row target
/// is the largest `i` with `2^i ≤ r`, but at least 1 since row 1 is the lowest
/// row of the matrix.
pub fn special_dot(d: Length, r: Length, params: MediumParams) -> Result<Dot> {
    params.validate()?;
    if !(r > 1.0 && r < d && d.is_finite()) {
        return Err(HuntError::Precondition(format!("need 1 < r < D, got r = {r}, D = {d}")));
    }
    let (c, s) = (params.threads(), params.s);
    let mut j = 1u32;
    while 2f64.powi((j * s) as i32) < d {
        j += 1;
    }
    let j = j.max(params.first_column());
    let i = (r.log2().floor() as u32).max(1);
    dots_of_column(j, c, s)?
        .into_iter()
        .rfind(|dot| dot.cell.i <= i)
        .ok_or_else(|| HuntError::Structural(format!("column {j} has no dot at or below row {i}")))
}

/// Memoized `C(z, D, r)` values, shared between clones.
#[derive(Clone, Debug)]
pub struct CostTable {
    z: u32,
    costs: Arc<Mutex<HashMap<(u64, u64), Length>>>,
}

impl CostTable {
    pub fn new(z: u32) -> Self {
        Self { z, costs: Arc::default() }
    }

    pub fn z(&self) -> u32 {
        self.z
    }

    pub fn cost(&self, d: Length, r: Length) -> Result<Length> {
        let key = (d.to_bits(), r.to_bits());
        if let Some(&c) = self.costs.lock().expect("cost table poisoned").get(&key) {
            return Ok(c);
        }
        let c = basic_cost(self.z, d, r)?;
        self.costs.lock().expect("cost table poisoned").insert(key, c);
        Ok(c)
    }

    /// Cost `G` of filling cell `A[i, j]`: Basic Traversal there and back.
    /// Cells with `r′ ≥ D′` are seen from the start point and cost nothing.
    pub fn fill_cost(&self, cell: MatrixCellA, s: u32) -> Result<Length> {
        let (d, r) = (cell.distance(s), cell.radius());
        if r >= d {
            return Ok(0.0);
        }
        Ok(2.0 * self.cost(d, r)?)
    }

    /// Whether filling `cell` fits in `budget`, without computing costs that
    /// provably exceed it.
    fn affordable(&self, cell: MatrixCellA, s: u32, budget: Length) -> Result<bool> {
        let (d, r) = (cell.distance(s), cell.radius());
        if r >= d {
            return Ok(true);
        }
        if 2.0 * basic_cost_lower_bound(self.z, d, r)? > budget {
            return Ok(false);
        }
        Ok(self.fill_cost(cell, s)? <= budget)
    }
}

type PathMap = HashMap<(u64, u64), Arc<Path>>;

/// Memoized Basic Traversal paths for one advice string and start point.
#[derive(Clone, Debug)]
pub struct TraversalCache {
    advice: AdviceString,
    start: Point2,
    paths: Arc<Mutex<PathMap>>,
}

impl TraversalCache {
    pub fn new(advice: AdviceString, start: Point2) -> Self {
        Self { advice, start, paths: Arc::default() }
    }

    pub fn advice(&self) -> &AdviceString {
        &self.advice
    }

    pub fn start(&self) -> Point2 {
        self.start
    }

    pub fn path(&self, d: Length, r: Length) -> Result<Arc<Path>> {
        let key = (d.to_bits(), r.to_bits());
        if let Some(p) = self.paths.lock().expect("path cache poisoned").get(&key) {
            return Ok(p.clone());
        }
        let p = basic_traversal_path(&self.advice, d, r, self.start)?;
        self.paths.lock().expect("path cache poisoned").insert(key, p.clone());
        Ok(p)
    }

    /// Basic Traversal for `(d, r)` followed by its reverse.
    fn there_and_back(&self, d: Length, r: Length) -> Vec<Result<Run>> {
        match self.path(d, r) {
            Ok(p) => {
                let run = Run::full(p);
                let back = run.reversed();
                vec![Ok(run), Ok(back)]
            }
            Err(e) => vec![Err(e)],
        }
    }
}

/// `Π₁ = Γ[1] Γ[2] …`, each cell traversed and reversed.
fn diagonal_sweep(cache: TraversalCache) -> TrajectoryStream {
    let start = cache.start();
    let runs = diagonal_cells().flat_map(move |cell| cache.there_and_back(cell.distance(), cell.radius()));
    TrajectoryStream::new(start, runs)
}

/// Algorithm Small vision.
pub fn small_vision(w: &AdviceString, start: Point2) -> TrajectoryStream {
    small_vision_with(TraversalCache::new(w.clone(), start))
}

fn small_vision_with(cache: TraversalCache) -> TrajectoryStream {
    let start = cache.start();
    if cache.advice().len() < 2 {
        return diagonal_sweep(cache);
    }
    let ray = decode_sector(cache.advice(), start).cw_ray_angle.direction();
    let runs = (1..).flat_map(move |p: i32| {
        let len = 2f64.powi(p);
        diagonal_sweep(cache.clone())
            .out_and_back(len)
            .followed_by(ray_out_and_back(start, ray, len))
    });
    TrajectoryStream::new(start, runs)
}

/// A dot filled by the medium vision schedule.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct FillEvent {
    pub dot: Dot,
    pub phase: u64,
    /// Budget of the phase in which the dot was filled.
    pub budget: Length,
    /// Cost `G` of the fill: Basic Traversal and its reverse.
    pub cost: Length,
}

/// One phase of the medium vision schedule.
#[derive(Clone, Debug, PartialEq)]
pub struct Phase {
    pub index: u64,
    pub budget: Length,
    pub events: Vec<FillEvent>,
}

/// Phase-by-phase generator of the medium vision fill order.
pub struct MediumPlanner {
    params: MediumParams,
    c: u32,
    costs: CostTable,
    /// Next unfilled column of each thread.
    cursors: Vec<u32>,
    phase: u64,
    done: bool,
}

impl MediumPlanner {
    pub fn new(z: u32, params: MediumParams) -> Result<Self> {
        Self::with_costs(CostTable::new(z), params)
    }

    pub fn with_costs(costs: CostTable, params: MediumParams) -> Result<Self> {
        params.validate()?;
        let c = params.threads();
        let j0 = params.first_column();
        Ok(Self { params, c, costs, cursors: vec![j0; c as usize], phase: 0, done: false })
    }

    fn dot(&self, j: u32, k: u32) -> Dot {
        Dot { cell: MatrixCellA { i: dot_row(j, k, self.c, self.params.s), j }, thread: k }
    }

    fn step(&mut self) -> Result<Phase> {
        let (s, z) = (self.params.s, self.costs.z());
        self.phase += 1;
        let lead = self.dot(self.cursors[self.c as usize - 1], self.c);
        let budget = phase_budget(z, lead.cell, s);
        let mut events = vec![FillEvent {
            dot: lead,
            phase: self.phase,
            budget,
            cost: self.costs.fill_cost(lead.cell, s)?,
        }];
        self.cursors[self.c as usize - 1] += 1;
        for k in (1..self.c).rev() {
            loop {
                let dot = self.dot(self.cursors[k as usize - 1], k);
                if !self.costs.affordable(dot.cell, s, budget)? {
                    break;
                }
                let cost = self.costs.fill_cost(dot.cell, s)?;
                events.push(FillEvent { dot, phase: self.phase, budget, cost });
                self.cursors[k as usize - 1] += 1;
            }
        }
        Ok(Phase { index: self.phase, budget, events })
    }
}

impl Iterator for MediumPlanner {
    type Item = Result<Phase>;

    fn next(&mut self) -> Option<Result<Phase>> {
        if self.done {
            return None;
        }
        let phase = self.step();
        self.done = phase.is_err();
        Some(phase)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum ScheduleEnd {
    /// `max_phases` phases were planned; the schedule itself never ends.
    PhaseLimit,
    /// The next phase needed a cost the calculator refused to compute.
    Guard(String),
}

/// A finite prefix of the medium vision schedule.
#[derive(Clone, Debug, PartialEq)]
pub struct DotSchedule {
    pub z: u32,
    pub params: MediumParams,
    pub c: u32,
    pub phases: Vec<Phase>,
    pub end: ScheduleEnd,
}

impl DotSchedule {
    pub fn events(&self) -> impl Iterator<Item = &FillEvent> {
        self.phases.iter().flat_map(|p| p.events.iter())
    }

    /// Total cost of all fills through phase `p` (1-based).
    pub fn cost_through_phase(&self, p: u64) -> Length {
        self.events().filter(|e| e.phase <= p).map(|e| e.cost).sum()
    }
}

/// Plan up to `max_phases` phases of medium vision.
pub fn medium_schedule(z: u32, params: MediumParams, max_phases: u64) -> Result<DotSchedule> {
    let mut planner = MediumPlanner::new(z, params)?;
    let c = planner.c;
    let mut phases = Vec::new();
    let mut end = ScheduleEnd::PhaseLimit;
    while (phases.len() as u64) < max_phases {
        match planner.next() {
            Some(Ok(p)) => phases.push(p),
            Some(Err(e)) => {
                end = ScheduleEnd::Guard(e.to_string());
                break;
            }
            None => unreachable!("planner only stops after an error"),
        }
    }
    Ok(DotSchedule { z, params, c, phases, end })
}

/// Algorithm Medium vision.
pub fn medium_vision(w: &AdviceString, params: MediumParams, start: Point2) -> Result<TrajectoryStream> {
    params.validate()?;
    let cache = TraversalCache::new(w.clone(), start);
    Ok(medium_vision_with(cache, CostTable::new(w.len()), params))
}

fn medium_vision_with(cache: TraversalCache, costs: CostTable, params: MediumParams) -> TrajectoryStream {
    let start = cache.start();
    let planner = match MediumPlanner::with_costs(costs, params) {
        Ok(p) => p,
        Err(e) => return TrajectoryStream::new(start, std::iter::once(Err(e))),
    };
    let s = params.s;
    let runs = planner.flat_map(move |phase| -> Box<dyn Iterator<Item = Result<Run>> + Send> {
        match phase {
            Ok(phase) => {
                let cache = cache.clone();
                Box::new(phase.events.into_iter().flat_map(move |ev| {
                    let (d, r) = (ev.dot.cell.distance(s), ev.dot.cell.radius());
                    if r >= d {
                        Vec::new()
                    } else {
                        cache.there_and_back(d, r)
                    }
                }))
            }
            Err(e) => Box::new(std::iter::once(Err(e))),
        }
    });
    TrajectoryStream::new(start, runs)
}

/// The twelve half-lines `L_0 … L_11` from the start, `π/6` apart and
/// counterclockwise from North, so that `L_12 = L_0`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct RayFan;

impl RayFan {
    pub const COUNT: usize = 12;

    pub fn angles() -> [Radians; 12] {
        std::array::from_fn(|i| Radians(PI * i as f64 / 6.0))
    }
}

/// Algorithm Large vision. Uses no advice.
pub fn large_vision(start: Point2) -> TrajectoryStream {
    let runs = (1..).flat_map(move |j: i32| {
        let len = 2f64.powi(j);
        RayFan::angles()
            .into_iter()
            .flat_map(move |a| ray_out_and_back(start, a.direction(), len))
    });
    TrajectoryStream::new(start, runs)
}

/// Algorithm Universal: small, medium and large vision in round robin, each
/// restarted from its beginning for `2^p` and back in phase `p`.
pub fn universal(w: &AdviceString, params: MediumParams, start: Point2) -> Result<TrajectoryStream> {
    params.validate()?;
    let cache = TraversalCache::new(w.clone(), start);
    let costs = CostTable::new(w.len());
    let runs = (1..).flat_map(move |p: i32| {
        let len = 2f64.powi(p);
        small_vision_with(cache.clone())
            .out_and_back(len)
            .followed_by(medium_vision_with(cache.clone(), costs.clone(), params).out_and_back(len))
            .followed_by(large_vision(start).out_and_back(len))
    });
    Ok(TrajectoryStream::new(start, runs))
}

/// Advice size `⌊log₂ k⌋` used by a team of `k` agents.
pub fn team_advice_size(k: u64) -> Result<u32> {
    if k == 0 {
        return Err(HuntError::Precondition("a team needs at least one agent".into()));
    }
    Ok(63 - k.leading_zeros())
}

/// Trajectory of agent `label` (1-based) in a team of `k`: universal with the
/// advice naming sector `label − 1` of `2^⌊log₂ k⌋`, or `None` for the agents
/// beyond `2^⌊log₂ k⌋`, which stay idle.
pub fn multi_agent_stream(
    k: u64,
    label: u64,
    params: MediumParams,
    start: Point2,
) -> Result<Option<TrajectoryStream>> {
    if label == 0 || label > k {
        return Err(HuntError::Precondition(format!("label {label} outside 1..={k}")));
    }
    let z = team_advice_size(k)?;
    if label > 1u64 << z {
        return Ok(None);
    }
    let w = AdviceString::from_index(label - 1, z)?;
    universal(&w, params, start).map(Some)
}

/// Strategy selector for the harness.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum StrategyKind {
    /// Basic Traversal with `D` and `r` known.
    Basic,
    Small,
    Medium,
    Large,
    Universal,
}

impl StrategyKind {
    pub fn name(&self) -> &'static str {
        match self {
            StrategyKind::Basic => "basic",
            StrategyKind::Small => "small",
            StrategyKind::Medium => "medium",
            StrategyKind::Large => "large",
            StrategyKind::Universal => "universal",
        }
    }

    /// Build the stream for advice `w`. `d` and `r` are only used by
    /// [`StrategyKind::Basic`], the one strategy that knows them.
    pub fn stream(
        &self,
        w: &AdviceString,
        params: MediumParams,
        start: Point2,
        d: Length,
        r: Length,
    ) -> Result<TrajectoryStream> {
        match self {
            StrategyKind::Basic => basic_traversal(w, d, r, start),
            StrategyKind::Small => Ok(small_vision(w, start)),
            StrategyKind::Medium => medium_vision(w, params, start),
            StrategyKind::Large => Ok(large_vision(start)),
            StrategyKind::Universal => universal(w, params, start),
        }
    }
}

impl fmt::Display for StrategyKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for StrategyKind {
    type Err = HuntError;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "basic" => Ok(StrategyKind::Basic),
            "small" => Ok(StrategyKind::Small),
            "medium" => Ok(StrategyKind::Medium),
            "large" => Ok(StrategyKind::Large),
            "universal" => Ok(StrategyKind::Universal),
            other => Err(HuntError::Config(format!("unknown strategy {other:?}"))),
        }
    }
}

/// Budget of a medium vision phase led by `cell`.
pub fn phase_budget(z: u32, cell: MatrixCellA, s: u32) -> Length {
    2.0 * basic_cost_bound(z, cell.distance(s), cell.radius())
}
