//! Parameter sweeps: one simulated hunt per (strategy, z, D, r) combination,
//! written as CSV.

use std::io::Write;
use std::path::Path;

use rayon::prelude::*;

use super::config::{ExperimentConfig, Placement};
use super::lcg::Lcg64;
use crate::advice::{encode_advice, AdviceString};
use crate::error::Result;
use crate::geom::{Length, Point2};
use crate::sim::{adversarial_placement, run, upper_bound, AdversaryConfig, RunOutcome};
use crate::strategies::{MediumParams, StrategyKind};

pub const CSV_HEADER: [&str; 12] =
    ["strategy", "z", "D", "r", "alpha", "s", "seed", "actual_distance", "found", "cost", "bound", "ratio"];

#[derive(Clone, Debug, PartialEq)]
pub struct SweepRow {
    pub strategy: StrategyKind,
    pub z: u32,
    pub d: Length,
    pub r: Length,
    pub params: MediumParams,
    /// Seed of the row's placement, for random placements.
    pub seed: Option<u64>,
    pub treasure: Point2,
    pub actual_distance: Length,
    pub found: bool,
    /// Detection cost, or the cap when `found` is false.
    pub cost: Length,
    pub bound: Length,
    pub ratio: f64,
}

/// One hunt: the advice handed out (none when the treasure sits on the start
/// point) and the outcome.
#[derive(Clone, Debug, PartialEq)]
pub struct Hunt {
    pub advice: Option<AdviceString>,
    pub outcome: RunOutcome,
}

/// Simulate `kind` with canonical advice of size `z` against `treasure`.
#[allow(clippy::too_many_arguments)]
pub fn simulate(
    kind: StrategyKind,
    z: u32,
    params: MediumParams,
    start: Point2,
    treasure: Point2,
    d: Length,
    r: Length,
    cost_cap: Length,
) -> Result<Hunt> {
    if treasure == start {
        let outcome = RunOutcome { found: true, cost: 0.0, detection_point: Some(start), segments_executed: 0 };
        return Ok(Hunt { advice: None, outcome });
    }
    let w = encode_advice(start, treasure, z)?;
    let outcome = run(kind.stream(&w, params, start, d, r)?, treasure, r, cost_cap)?;
    Ok(Hunt { advice: Some(w), outcome })
}

/// The cost cap for a bound: `cap_mult` times the bound, or `cap_mult` itself
/// when the bound is not positive.
pub fn cost_cap(bound: Length, cap_mult: f64) -> Length {
    let cap = cap_mult * bound;
    if cap > 0.0 && cap.is_finite() {
        cap
    } else if cap.is_infinite() {
        f64::MAX
    } else {
        cap_mult
    }
}

struct Job {
    strategy: StrategyKind,
    z: u32,
    d: Length,
    r: Length,
    seed: Option<u64>,
}

pub fn run_sweep(cfg: &ExperimentConfig) -> Result<Vec<SweepRow>> {
    cfg.validate()?;
    let mut jobs = Vec::new();
    for &strategy in &cfg.strategies {
        for &z in &cfg.z {
            for d in cfg.d.values() {
                for r in cfg.r.values(d) {
                    let seed = match cfg.placement {
                        Placement::Random { seed } => Some(seed.wrapping_add(jobs.len() as u64)),
                        _ => None,
                    };
                    jobs.push(Job { strategy, z, d, r, seed });
                }
            }
        }
    }
    jobs.par_iter().map(|job| sweep_row(cfg, job)).collect()
}

fn sweep_row(cfg: &ExperimentConfig, job: &Job) -> Result<SweepRow> {
    let Job { strategy, z, d, r, seed } = *job;
    let params = cfg.params;
    let start = cfg.start;
    let bound = upper_bound(strategy, z, d, r, params);
    let cap = cost_cap(bound, cfg.cap_mult);
    let (treasure, found, cost) = match cfg.placement {
        Placement::Explicit(q) => {
            let h = simulate(strategy, z, params, start, q, d, r, cap)?;
            (q, h.outcome.found, h.outcome.cost)
        }
        Placement::Random { .. } => {
            let q = Lcg64::new(seed.unwrap_or(0)).point_in_disc(start, d);
            let h = simulate(strategy, z, params, start, q, d, r, cap)?;
            (q, h.outcome.found, h.outcome.cost)
        }
        Placement::Adversarial { grid_step } => {
            let adv = AdversaryConfig { z, d, r, grid_step, start, cost_cap: cap };
            let res = adversarial_placement(|w| strategy.stream(w, params, start, d, r), &adv)?;
            (res.worst, true, res.cost)
        }
    };
    let ratio = if cost == 0.0 { 0.0 } else { cost / bound };
    Ok(SweepRow {
        strategy,
        z,
        d,
        r,
        params,
        seed,
        treasure,
        actual_distance: start.distance(treasure),
        found,
        cost,
        bound,
        ratio,
    })
}

/// Round-trip exact decimal form (17 significant digits).
pub fn format_float(x: f64) -> String {
    format!("{x:.16e}")
}

pub fn write_csv<W: Write>(rows: &[SweepRow], out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(CSV_HEADER)?;
    for row in rows {
        w.write_record([
            row.strategy.name().to_string(),
            row.z.to_string(),
            format_float(row.d),
            format_float(row.r),
            format_float(row.params.alpha),
            row.params.s.to_string(),
            row.seed.map(|s| s.to_string()).unwrap_or_default(),
            format_float(row.actual_distance),
            row.found.to_string(),
            format_float(row.cost),
            format_float(row.bound),
            format_float(row.ratio),
        ])?;
    }
    w.flush()?;
    Ok(())
}

pub fn write_csv_file(rows: &[SweepRow], path: &Path) -> Result<()> {
    write_csv(rows, std::io::BufWriter::new(std::fs::File::create(path)?))
}
