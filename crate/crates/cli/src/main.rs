use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand};

use hunt_core::harness::{self, sweep::cost_cap, ExperimentConfig, SvgScene};
use hunt_core::sim::{adversarial_placement, lower_bounds, upper_bound, AdversaryConfig, Regime};
use hunt_core::tiling::WedgeRegion;
use hunt_core::{decode_sector, MediumParams, Point2, StrategyKind};

#[derive(Parser)]
#[command(name = "hunt", version, about = "Treasure hunt in the plane with advice")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run one strategy against one treasure position.
    Simulate(SimulateArgs),
    /// Run a parameter sweep from a config file and write CSV.
    Sweep {
        config: PathBuf,
        /// Output path, overriding the config's [output] csv.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Search for the costliest treasure position.
    Adversary(AdversaryArgs),
    /// Draw a trajectory prefix as SVG.
    Render(RenderArgs),
}

fn parse_point(s: &str) -> Result<Point2, String> {
    let (x, y) = s.split_once(',').ok_or("expected x,y")?;
    let x: f64 = x.trim().parse().map_err(|_| format!("bad coordinate {x:?}"))?;
    let y: f64 = y.trim().parse().map_err(|_| format!("bad coordinate {y:?}"))?;
    if !(x.is_finite() && y.is_finite()) {
        return Err("coordinates must be finite".into());
    }
    Ok(Point2::new(x, y))
}

#[derive(Args)]
struct StrategyArgs {
    /// basic | small | medium | large | universal
    #[arg(long)]
    strategy: StrategyKind,
    /// Advice size in bits.
    #[arg(long)]
    z: u32,
    #[arg(long, default_value_t = 0.5)]
    alpha: f64,
    #[arg(long, default_value_t = hunt_core::strategies::DEFAULT_S)]
    s: u32,
    #[arg(long, value_parser = parse_point, allow_hyphen_values = true, default_value = "0,0")]
    start: Point2,
    /// Cost cap as a multiple of the strategy's upper bound.
    #[arg(long = "cap-mult", default_value_t = 1e4)]
    cap_mult: f64,
}

impl StrategyArgs {
    fn params(&self) -> Result<MediumParams> {
        Ok(MediumParams::new(self.alpha, self.s)?)
    }
}

#[derive(Args)]
struct SimulateArgs {
    #[command(flatten)]
    strategy: StrategyArgs,
    #[arg(long, value_parser = parse_point, allow_hyphen_values = true)]
    treasure: Point2,
    /// Vision radius.
    #[arg(long)]
    r: f64,
    /// Distance bound D for the bound and for basic; defaults to the true distance.
    #[arg(long)]
    d: Option<f64>,
}

#[derive(Args)]
struct AdversaryArgs {
    #[command(flatten)]
    strategy: StrategyArgs,
    #[arg(long)]
    d: f64,
    #[arg(long)]
    r: f64,
    /// Pitch of the candidate grid (at most r).
    #[arg(long = "grid-step")]
    grid_step: f64,
}

#[derive(Args)]
struct RenderArgs {
    #[command(flatten)]
    strategy: StrategyArgs,
    #[arg(long, value_parser = parse_point, allow_hyphen_values = true)]
    treasure: Point2,
    #[arg(long)]
    r: f64,
    #[arg(long)]
    d: Option<f64>,
    /// Prefix length to draw; defaults to the detection cost.
    #[arg(long)]
    length: Option<f64>,
    /// Draw the tiles of size r covering the sector.
    #[arg(long)]
    tiles: bool,
    #[arg(long)]
    out: PathBuf,
}

fn check_radius(r: f64) -> Result<()> {
    if !(r > 0.0 && r.is_finite()) {
        bail!("--r must be positive");
    }
    Ok(())
}

fn simulate(a: &SimulateArgs) -> Result<ExitCode> {
    let sa = &a.strategy;
    check_radius(a.r)?;
    let params = sa.params()?;
    let d = a.d.unwrap_or_else(|| sa.start.distance(a.treasure));
    let bound = upper_bound(sa.strategy, sa.z, d, a.r, params);
    let cap = cost_cap(bound, sa.cap_mult);
    let hunt = harness::simulate(sa.strategy, sa.z, params, sa.start, a.treasure, d, a.r, cap)?;
    let o = hunt.outcome;
    println!("strategy: {}", sa.strategy);
    match &hunt.advice {
        Some(w) => println!("advice: {}", if w.is_empty() { "(empty)".to_string() } else { w.to_string() }),
        None => println!("advice: (none, treasure at start)"),
    }
    println!("distance: {d}");
    println!("regime: {:?}", Regime::classify(d, a.r));
    println!("found: {}", o.found);
    println!("cost: {}", o.cost);
    if let Some(p) = o.detection_point {
        println!("detection point: {p}");
    }
    println!("segments: {}", o.segments_executed);
    println!("bound: {bound}");
    if bound > 0.0 {
        println!("ratio: {}", o.cost / bound);
    }
    Ok(if o.found { ExitCode::SUCCESS } else { ExitCode::from(2) })
}

fn sweep(config: &Path, out: &Option<PathBuf>) -> Result<ExitCode> {
    let cfg = ExperimentConfig::load(config).with_context(|| format!("reading {}", config.display()))?;
    let path = out.clone().or_else(|| cfg.csv.clone()).context("no output path: pass --out or set [output] csv")?;
    let rows = harness::run_sweep(&cfg)?;
    harness::write_csv_file(&rows, &path).with_context(|| format!("writing {}", path.display()))?;
    let missed = rows.iter().filter(|r| !r.found).count();
    println!("{} rows written to {}", rows.len(), path.display());
    if missed > 0 {
        eprintln!("{missed} rows hit the cost cap");
        return Ok(ExitCode::from(2));
    }
    Ok(ExitCode::SUCCESS)
}

fn adversary(a: &AdversaryArgs) -> Result<ExitCode> {
    let sa = &a.strategy;
    check_radius(a.r)?;
    let params = sa.params()?;
    let bound = upper_bound(sa.strategy, sa.z, a.d, a.r, params);
    let cfg = AdversaryConfig {
        z: sa.z,
        d: a.d,
        r: a.r,
        grid_step: a.grid_step,
        start: sa.start,
        cost_cap: cost_cap(bound, sa.cap_mult),
    };
    let (kind, start, d, r) = (sa.strategy, sa.start, a.d, a.r);
    let res = adversarial_placement(|w| kind.stream(w, params, start, d, r), &cfg)?;
    println!("candidates: {}", res.candidates);
    println!("worst treasure: {}", res.worst);
    println!("worst cost: {}", res.cost);
    if let Ok(lb) = lower_bounds(sa.z, a.d, a.r) {
        match lb.medium_bound {
            Some(m) => println!("lower bound (1/800 formula): {m}"),
            None => println!("lower bound (D - r): {}", lb.trivial),
        }
    }
    println!("upper bound: {bound}");
    Ok(ExitCode::SUCCESS)
}

fn render(a: &RenderArgs) -> Result<ExitCode> {
    let sa = &a.strategy;
    check_radius(a.r)?;
    let params = sa.params()?;
    let d = a.d.unwrap_or_else(|| sa.start.distance(a.treasure));
    let bound = upper_bound(sa.strategy, sa.z, d, a.r, params);
    let hunt = harness::simulate(sa.strategy, sa.z, params, sa.start, a.treasure, d, a.r, cost_cap(bound, sa.cap_mult))?;
    let length = a.length.unwrap_or(hunt.outcome.cost);
    let w = hunt.advice.clone().unwrap_or_default();
    let line = sa
        .strategy
        .stream(&w, params, sa.start, d, a.r)?
        .prefix(length, harness::svg::MAX_RENDER_SEGMENTS)?;
    let region = WedgeRegion::new(&decode_sector(&w, sa.start), d.max(a.r));
    let scene = SvgScene {
        trajectory: &line,
        region: Some(region),
        tiles: (a.tiles && w.len() >= 2 && a.r < d).then_some(a.r),
        treasure: Some(a.treasure),
        r: a.r,
    };
    harness::write_svg(&scene, &a.out).with_context(|| format!("writing {}", a.out.display()))?;
    println!("{} segments, length {}, written to {}", line.segment_count(), line.length(), a.out.display());
    Ok(ExitCode::SUCCESS)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let result = match &cli.command {
        Command::Simulate(a) => simulate(a),
        Command::Sweep { config, out } => sweep(config, out),
        Command::Adversary(a) => adversary(a),
        Command::Render(a) => render(a),
    };
    match result {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}
