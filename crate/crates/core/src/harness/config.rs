//! Experiment configuration: flat `key = value` lines grouped under
//! `[section]` headers, `#` or `;` starting a comment.
//!
//! ```text
//! [experiment]
//! strategy = small, universal
//! z = 0, 2, 4
//! alpha = 0.5
//! s = 3
//! D = logspace(4, 64, 5)
//! r = 0.25, 0.5
//! cap_mult = 1e4
//! start = 0, 0
//!
//! [placement]
//! mode = random
//! seed = 42
//!
//! [output]
//! csv = results.csv
//! ```
//!
//! `r` may be replaced by `r_over_D`, a list of radii relative to each `D`.
//! Placement modes are `explicit` (with `treasure = x, y`), `random` (with
//! `seed`) and `adversarial` (with `grid_step`).

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use crate::error::{HuntError, Result};
use crate::geom::{Length, Point2};
use crate::strategies::{MediumParams, StrategyKind};

/// A list of values, given explicitly or as `logspace(lo, hi, n)`.
#[derive(Clone, Debug, PartialEq)]
pub enum RangeSpec {
    List(Vec<f64>),
    LogSpaced { lo: f64, hi: f64, n: usize },
}

impl RangeSpec {
    pub fn values(&self) -> Vec<f64> {
        match *self {
            RangeSpec::List(ref v) => v.clone(),
            RangeSpec::LogSpaced { lo, hi, n } => {
                if n == 1 {
                    return vec![lo];
                }
                let (a, b) = (lo.ln(), hi.ln());
                (0..n)
                    .map(|k| match k {
                        0 => lo,
                        k if k == n - 1 => hi,
                        k => (a + (b - a) * k as f64 / (n - 1) as f64).exp(),
                    })
                    .collect()
            }
        }
    }

    fn parse(key: &str, text: &str) -> Result<Self> {
        let text = text.trim();
        if let Some(inner) = text.strip_prefix("logspace(").and_then(|t| t.strip_suffix(')')) {
            let parts = parse_list::<f64>(key, inner)?;
            let [lo, hi, n] = parts[..] else {
                return Err(config_err(key, "logspace takes (lo, hi, n)"));
            };
            if !(lo > 0.0 && hi >= lo && n >= 1.0 && n.fract() == 0.0) {
                return Err(config_err(key, "logspace needs 0 < lo ≤ hi and a whole n ≥ 1"));
            }
            return Ok(RangeSpec::LogSpaced { lo, hi, n: n as usize });
        }
        Ok(RangeSpec::List(parse_list(key, text)?))
    }
}

/// How the vision radius of each row is chosen.
#[derive(Clone, Debug, PartialEq)]
pub enum RadiusSpec {
    Absolute(RangeSpec),
    /// Fractions of the row's `D`.
    RelativeToD(RangeSpec),
}

impl RadiusSpec {
    pub fn values(&self, d: Length) -> Vec<Length> {
        match self {
            RadiusSpec::Absolute(r) => r.values(),
            RadiusSpec::RelativeToD(f) => f.values().into_iter().map(|f| f * d).collect(),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum Placement {
    Explicit(Point2),
    /// Uniform in the disc of radius `D`; row `k` draws from seed `seed + k`.
    Random { seed: u64 },
    /// Worst case over the candidate search with this grid pitch.
    Adversarial { grid_step: Length },
}

#[derive(Clone, Debug, PartialEq)]
pub struct ExperimentConfig {
    pub strategies: Vec<StrategyKind>,
    pub z: Vec<u32>,
    pub params: MediumParams,
    pub d: RangeSpec,
    pub r: RadiusSpec,
    pub placement: Placement,
    pub cap_mult: f64,
    pub start: Point2,
    pub csv: Option<PathBuf>,
}

fn config_err(key: &str, msg: &str) -> HuntError {
    HuntError::Config(format!("{key}: {msg}"))
}

fn parse_list<T: std::str::FromStr>(key: &str, text: &str) -> Result<Vec<T>> {
    let items = text
        .split(',')
        .map(|t| t.trim().parse::<T>().map_err(|_| config_err(key, &format!("cannot parse {:?}", t.trim()))))
        .collect::<Result<Vec<T>>>()?;
    if items.is_empty() {
        return Err(config_err(key, "empty list"));
    }
    Ok(items)
}

fn parse_point(key: &str, text: &str) -> Result<Point2> {
    match parse_list::<f64>(key, text)?[..] {
        [x, y] if x.is_finite() && y.is_finite() => Ok(Point2::new(x, y)),
        _ => Err(config_err(key, "expected a point `x, y`")),
    }
}

const KNOWN_KEYS: &[(&str, &str)] = &[
    ("experiment", "strategy"),
    ("experiment", "z"),
    ("experiment", "alpha"),
    ("experiment", "s"),
    ("experiment", "D"),
    ("experiment", "r"),
    ("experiment", "r_over_D"),
    ("experiment", "cap_mult"),
    ("experiment", "start"),
    ("placement", "mode"),
    ("placement", "seed"),
    ("placement", "treasure"),
    ("placement", "grid_step"),
    ("output", "csv"),
];

impl ExperimentConfig {
    pub fn load(path: &Path) -> Result<Self> {
        Self::parse(&std::fs::read_to_string(path)?)
    }

    pub fn parse(text: &str) -> Result<Self> {
        let mut entries: BTreeMap<(String, String), String> = BTreeMap::new();
        let mut section = String::new();
        for (n, raw) in text.lines().enumerate() {
            let line = raw.split(['#', ';']).next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            if let Some(name) = line.strip_prefix('[').and_then(|l| l.strip_suffix(']')) {
                section = name.trim().to_string();
                continue;
            }
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| HuntError::Config(format!("line {}: expected `key = value`", n + 1)))?;
            let key = key.trim().to_string();
            if !KNOWN_KEYS.contains(&(section.as_str(), key.as_str())) {
                return Err(HuntError::Config(format!("line {}: unknown key [{section}] {key}", n + 1)));
            }
            if entries.insert((section.clone(), key.clone()), value.trim().to_string()).is_some() {
                return Err(HuntError::Config(format!("line {}: duplicate key {key}", n + 1)));
            }
        }
        let get = |s: &str, k: &str| entries.get(&(s.to_string(), k.to_string())).map(String::as_str);
        let need = |s: &str, k: &str| get(s, k).ok_or_else(|| HuntError::Config(format!("missing [{s}] {k}")));

        let strategies = parse_list::<String>("strategy", need("experiment", "strategy")?)?
            .iter()
            .map(|s| s.parse())
            .collect::<Result<Vec<StrategyKind>>>()?;
        let z = parse_list::<u32>("z", need("experiment", "z")?)?;
        let alpha = get("experiment", "alpha").map_or(Ok(0.5), |v| {
            v.parse::<f64>().map_err(|_| config_err("alpha", "not a number"))
        })?;
        let s = get("experiment", "s").map_or(Ok(crate::strategies::DEFAULT_S), |v| {
            v.parse::<u32>().map_err(|_| config_err("s", "not a positive integer"))
        })?;
        let params = MediumParams::new(alpha, s).map_err(|e| HuntError::Config(e.to_string()))?;
        let d = RangeSpec::parse("D", need("experiment", "D")?)?;
        let r = match (get("experiment", "r"), get("experiment", "r_over_D")) {
            (Some(v), None) => RadiusSpec::Absolute(RangeSpec::parse("r", v)?),
            (None, Some(v)) => RadiusSpec::RelativeToD(RangeSpec::parse("r_over_D", v)?),
            _ => return Err(HuntError::Config("give exactly one of r and r_over_D".into())),
        };
        let cap_mult = get("experiment", "cap_mult").map_or(Ok(1e4), |v| {
            v.parse::<f64>().map_err(|_| config_err("cap_mult", "not a number"))
        })?;
        let start = get("experiment", "start").map_or(Ok(Point2::ORIGIN), |v| parse_point("start", v))?;
        let placement = match need("placement", "mode")? {
            "explicit" => Placement::Explicit(parse_point("treasure", need("placement", "treasure")?)?),
            "random" => Placement::Random {
                seed: need("placement", "seed")?
                    .parse()
                    .map_err(|_| config_err("seed", "not an unsigned integer"))?,
            },
            "adversarial" => Placement::Adversarial {
                grid_step: need("placement", "grid_step")?
                    .parse()
                    .map_err(|_| config_err("grid_step", "not a number"))?,
            },
            other => return Err(config_err("mode", &format!("unknown placement {other:?}"))),
        };
        let csv = get("output", "csv").map(PathBuf::from);
        let cfg = ExperimentConfig { strategies, z, params, d, r, placement, cap_mult, start, csv };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |m: &str| Err(HuntError::Config(m.into()));
        if self.strategies.is_empty() || self.z.is_empty() {
            return bad("strategy and z lists must be nonempty");
        }
        let ds = self.d.values();
        if ds.is_empty() || ds.iter().any(|&d| !(d > 0.0 && d.is_finite())) {
            return bad("D values must be positive and finite");
        }
        for &d in &ds {
            let rs = self.r.values(d);
            if rs.is_empty() || rs.iter().any(|&r| !(r > 0.0 && r.is_finite())) {
                return bad("r values must be positive and finite");
            }
        }
        if self.z.iter().any(|&z| z > crate::advice::MAX_ADVICE_BITS) {
            return bad("z exceeds the advice size limit");
        }
        if !(self.cap_mult > 0.0 && self.cap_mult.is_finite()) {
            return bad("cap_mult must be positive");
        }
        if let Placement::Adversarial { grid_step } = self.placement {
            if grid_step.is_nan() || grid_step <= 0.0 {
                return bad("grid_step must be positive");
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const SAMPLE: &str = "
[experiment]
strategy = small, universal   # two strategies
z = 0, 2, 4
alpha = 0.25
s = 3
D = logspace(4, 64, 3)
r = 0.5
start = 1, -2

[placement]
mode = random
seed = 42

[output]
csv = out.csv
";

    #[test]
    fn parses_sample() {
        let c = ExperimentConfig::parse(SAMPLE).unwrap();
        assert_eq!(c.strategies, vec![StrategyKind::Small, StrategyKind::Universal]);
        assert_eq!(c.z, vec![0, 2, 4]);
        assert_eq!(c.params, MediumParams { alpha: 0.25, s: 3 });
        let d = c.d.values();
        assert_eq!(d.len(), 3);
        assert_eq!((d[0], d[2]), (4.0, 64.0));
        assert!((d[1] - 16.0).abs() < 1e-12);
        assert_eq!(c.r.values(4.0), vec![0.5]);
        assert_eq!(c.placement, Placement::Random { seed: 42 });
        assert_eq!(c.cap_mult, 1e4);
        assert_eq!(c.start, Point2::new(1.0, -2.0));
        assert_eq!(c.csv, Some(PathBuf::from("out.csv")));
    }

    #[test]
    fn relative_radii() {
        let text = SAMPLE.replace("r = 0.5", "r_over_D = 0.9, 0.95");
        let c = ExperimentConfig::parse(&text).unwrap();
        assert_eq!(c.r.values(20.0), vec![18.0, 19.0]);
    }

    #[test]
    fn rejects_bad_input() {
        for (from, to) in [
            ("z = 0, 2, 4", "z = 0, two"),
            ("alpha = 0.25", "alpha = 0"),
            ("s = 3", "s = 0"),
            ("mode = random", "mode = sometimes"),
            ("seed = 42", "seed = -1"),
            ("strategy = small, universal", "strategy = tiny"),
            ("D = logspace(4, 64, 3)", "D = logspace(4, 64)"),
            ("D = logspace(4, 64, 3)", "D = 0"),
            ("csv = out.csv", "csvv = out.csv"),
            ("r = 0.5", "r = 0.5\nr_over_D = 0.9"),
            ("r = 0.5", "r = 0.5\nr = 0.6"),
            ("start = 1, -2", "start = 1"),
            ("[placement]", "[placement]\nwhat"),
        ] {
            let text = SAMPLE.replace(from, to);
            assert!(ExperimentConfig::parse(&text).is_err(), "{to}");
        }
    }

    #[test]
    fn other_placements() {
        let c = ExperimentConfig::parse(&SAMPLE.replace("mode = random\nseed = 42", "mode = explicit\ntreasure = 3, 4"))
            .unwrap();
        assert_eq!(c.placement, Placement::Explicit(Point2::new(3.0, 4.0)));
        let c = ExperimentConfig::parse(&SAMPLE.replace("mode = random\nseed = 42", "mode = adversarial\ngrid_step = 0.25"))
            .unwrap();
        assert_eq!(c.placement, Placement::Adversarial { grid_step: 0.25 });
        assert!(ExperimentConfig::parse(&SAMPLE.replace("seed = 42", "")).is_err());
    }
}
