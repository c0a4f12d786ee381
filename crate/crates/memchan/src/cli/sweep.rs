//! Parameter sweeps over model families, with deterministic CSV output.

use std::io::Write;

use serde::{Deserialize, Serialize};

use crate::channels::capacity_from_rate;
use crate::cli::config::{MarkovKind, RouteName, RunConfig, SweepModel, SweepSpec};
use crate::env::{ClassicalIsingEnv, DiagonalParams, Environment, MarkovEnv};
use crate::error::{Error, Result};
use crate::rates::{
    entropy_rate_brute, entropy_rate_thermo, entropy_rate_transfer, markov_entropy_rate,
    params_to_ising, EntropyRateResult,
};

/// Row flags (stable CSV tokens).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Flag {
    #[serde(rename = "transition-point")]
    TransitionPoint,
    #[serde(rename = "negative-bound-floored")]
    NegativeBoundFloored,
    #[serde(rename = "indeterminate-fit")]
    IndeterminateFit,
    #[serde(rename = "cap-exceeded")]
    CapExceeded,
}

impl Flag {
    pub fn token(&self) -> &'static str {
        match self {
            Flag::TransitionPoint => "transition-point",
            Flag::NegativeBoundFloored => "negative-bound-floored",
            Flag::IndeterminateFit => "indeterminate-fit",
            Flag::CapExceeded => "cap-exceeded",
        }
    }
}

/// One route's rate and capacity at a grid point; `None` cells mean the
/// route was unavailable there (the flags say why).
#[derive(Debug, Clone)]
pub struct RouteOutcome {
    pub route: RouteName,
    pub rate: Option<f64>,
    pub capacity: Option<f64>,
}

#[derive(Debug, Clone)]
pub struct SweepPoint {
    pub param: f64,
    pub outcomes: Vec<RouteOutcome>,
    pub flags: Vec<Flag>,
}

/// Full sweep result: config echo, seed, tool version, per-point records.
#[derive(Debug, Clone)]
pub struct RunReport {
    pub version: String,
    pub config_echo: String,
    pub seed: u64,
    pub axis_name: String,
    pub routes: Vec<RouteName>,
    pub points: Vec<SweepPoint>,
}

/// Evenly spaced grid endpoints-inclusive. The affine form
/// `(min (steps-1-i) + max i) / (steps-1)` makes symmetric ranges mirror
/// bitwise: for `min = -max`, `grid[steps-1-i] == -grid[i]` exactly.
pub fn sweep_grid(min: f64, max: f64, steps: usize) -> Vec<f64> {
    let span = (steps - 1) as f64;
    (0..steps)
        .map(|i| (min * (span - i as f64) + max * i as f64) / span)
        .collect()
}

fn transition_flag(params: &DiagonalParams) -> bool {
    params.c == 0.0
}

fn push_unique(flags: &mut Vec<Flag>, flag: Flag) {
    if !flags.contains(&flag) {
        flags.push(flag);
    }
}

fn evaluate_point(spec: &SweepSpec, value: f64) -> SweepPoint {
    let mut flags = Vec::new();
    let mut outcomes = Vec::new();
    for &route in &spec.routes {
        let rate: Result<EntropyRateResult> = match &spec.model {
            SweepModel::Wolf => crate::env::wolf_env(value).abc_params().and_then(|params| {
                if transition_flag(&params) {
                    push_unique(&mut flags, Flag::TransitionPoint);
                }
                match route {
                    RouteName::ClosedTransfer => Ok(entropy_rate_transfer(&params)),
                    RouteName::Thermo => entropy_rate_thermo(&params_to_ising(&params, 1.0)?),
                    RouteName::Brute => entropy_rate_brute(
                        &Environment::Wolf { g: value },
                        spec.brute_sites.as_deref().expect("validated"),
                    ),
                }
            }),
            SweepModel::Params { a, b, c } => {
                let (a, b, c) = axis_assign(&spec.axis.name, value, *a, *b, *c);
                DiagonalParams::new(a, b, c).and_then(|params| {
                    if transition_flag(&params) {
                        push_unique(&mut flags, Flag::TransitionPoint);
                    }
                    match route {
                        RouteName::ClosedTransfer => Ok(entropy_rate_transfer(&params)),
                        RouteName::Thermo => entropy_rate_thermo(&params_to_ising(&params, 1.0)?),
                        RouteName::Brute => Err(Error::Unsupported(
                            "brute route needs a state-generating model".into(),
                        )),
                    }
                })
            }
            SweepModel::Ising { coupling, field, beta } => {
                let (coupling, field, beta) =
                    ising_assign(&spec.axis.name, value, *coupling, *field, *beta);
                ClassicalIsingEnv::new(coupling, field, beta).and_then(|env| match route {
                    RouteName::ClosedTransfer => {
                        Ok(entropy_rate_transfer(&crate::rates::ising_to_params(&env)?))
                    }
                    RouteName::Thermo => entropy_rate_thermo(&env),
                    RouteName::Brute => {
                        entropy_rate_brute(&Environment::Ising(env), spec.brute_sites.as_deref().expect("validated"))
                    }
                })
            }
            SweepModel::Markov { chain } => build_markov(*chain, value).and_then(|env| match route {
                RouteName::ClosedTransfer => Ok(markov_entropy_rate(&env)),
                RouteName::Thermo => unreachable!("rejected by validate()"),
                RouteName::Brute => entropy_rate_brute(
                    &Environment::Markov(env),
                    spec.brute_sites.as_deref().expect("validated"),
                ),
            }),
        };
        match rate {
            Ok(rate) => {
                let capacity = capacity_from_rate(&rate, 2);
                if capacity.floored {
                    push_unique(&mut flags, Flag::NegativeBoundFloored);
                }
                outcomes.push(RouteOutcome {
                    route,
                    rate: Some(rate.rate),
                    capacity: Some(capacity.value),
                });
            }
            Err(Error::CapExceeded { .. }) => {
                push_unique(&mut flags, Flag::CapExceeded);
                outcomes.push(RouteOutcome { route, rate: None, capacity: None });
            }
            Err(Error::NoIsingImage) => {
                push_unique(&mut flags, Flag::TransitionPoint);
                outcomes.push(RouteOutcome { route, rate: None, capacity: None });
            }
            Err(_) => {
                outcomes.push(RouteOutcome { route, rate: None, capacity: None });
            }
        }
    }
    SweepPoint { param: value, outcomes, flags }
}

fn axis_assign(name: &str, value: f64, a: f64, b: f64, c: f64) -> (f64, f64, f64) {
    match name {
        "a" => (value, b, c),
        "b" => (a, value, c),
        _ => (a, b, value),
    }
}

fn ising_assign(name: &str, value: f64, coupling: f64, field: f64, beta: f64) -> (f64, f64, f64) {
    match name {
        "coupling" => (value, field, beta),
        "field" => (coupling, value, beta),
        _ => (coupling, field, value),
    }
}

fn build_markov(kind: MarkovKind, q: f64) -> Result<MarkovEnv> {
    match kind {
        MarkovKind::Iid => MarkovEnv::iid(&[1.0 - q, q]),
        MarkovKind::Flip => MarkovEnv::symmetric_flip(q),
    }
}

/// Runs a sweep. Grid points are independent; evaluation order is the grid
/// order so the report is deterministic for a fixed config and seed.
pub fn run_sweep(config: &RunConfig) -> Result<RunReport> {
    let spec = config
        .sweep
        .as_ref()
        .ok_or_else(|| Error::Config("config has no sweep section".into()))?;
    spec.validate()?;
    let grid = sweep_grid(spec.axis.min, spec.axis.max, spec.axis.steps);
    let points = grid.iter().map(|&v| evaluate_point(spec, v)).collect();
    Ok(RunReport {
        version: env!("CARGO_PKG_VERSION").to_string(),
        config_echo: config.echo(),
        seed: config.seed.unwrap_or(0),
        axis_name: spec.axis.name.clone(),
        routes: spec.routes.clone(),
        points,
    })
}

/// 12 significant digits, locale-independent; signed zero prints as zero.
pub fn format_sig(x: f64) -> String {
    let x = if x == 0.0 { 0.0 } else { x };
    format!("{x:.11e}")
}

impl RunReport {
    /// CSV with `#` header comments (tool version, config echo, seed),
    /// stable column order, 12 significant digits.
    pub fn write_csv<W: Write>(&self, mut w: W) -> Result<()> {
        writeln!(w, "# memchan {}", self.version)?;
        writeln!(w, "# config {}", self.config_echo)?;
        writeln!(w, "# seed {}", self.seed)?;
        let mut header = vec![self.axis_name.clone()];
        for route in &self.routes {
            header.push(format!("rate_{}", route.column()));
            header.push(format!("capacity_{}", route.column()));
        }
        header.push("flags".into());
        writeln!(w, "{}", header.join(","))?;
        for point in &self.points {
            let mut row = vec![format_sig(point.param)];
            for outcome in &point.outcomes {
                row.push(outcome.rate.map(format_sig).unwrap_or_default());
                row.push(outcome.capacity.map(format_sig).unwrap_or_default());
            }
            let flags: Vec<&str> = point.flags.iter().map(|f| f.token()).collect();
            row.push(flags.join(";"));
            writeln!(w, "{}", row.join(","))?;
        }
        Ok(())
    }

    pub fn to_csv_string(&self) -> Result<String> {
        let mut buf = Vec::new();
        self.write_csv(&mut buf)?;
        String::from_utf8(buf).map_err(|e| Error::Config(format!("non-utf8 csv: {e}")))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rates::binary_entropy;

    fn wolf_config(steps: usize) -> RunConfig {
        RunConfig::from_json(&format!(
            r#"{{
                "sweep": {{
                    "model": {{"kind": "wolf"}},
                    "axis": {{"name": "g", "min": -2.0, "max": 2.0, "steps": {steps}}},
                    "routes": ["closed-transfer"]
                }},
                "seed": 1
            }}"#
        ))
        .unwrap()
    }

    #[test]
    fn grid_is_bitwise_symmetric_for_symmetric_ranges() {
        let grid = sweep_grid(-2.0, 2.0, 401);
        assert_eq!(grid.len(), 401);
        assert_eq!(grid[0], -2.0);
        assert_eq!(grid[400], 2.0);
        for i in 0..401 {
            // signed zero at the midpoint compares equal numerically; the
            // magnitudes must mirror bitwise
            assert_eq!(grid[400 - i], -grid[i], "asymmetry at {i}");
            assert_eq!(grid[400 - i].abs().to_bits(), grid[i].abs().to_bits());
        }
        assert_eq!(grid[200], 0.0);
    }

    #[test]
    fn wolf_sweep_matches_closed_form() {
        let report = run_sweep(&wolf_config(81)).unwrap();
        for point in &report.points {
            let g = point.param;
            let q = point.outcomes[0].capacity.unwrap();
            let expected = 1.0 - binary_entropy(g.abs() / (1.0 + g.abs()));
            assert!((q - expected).abs() < 1e-12, "g={g}: {q} vs {expected}");
        }
        // transition point is flagged at g = 0
        let mid = &report.points[40];
        assert_eq!(mid.param, 0.0);
        assert!(mid.flags.contains(&Flag::TransitionPoint));
        assert_eq!(mid.outcomes[0].capacity.unwrap(), 1.0);
    }

    #[test]
    fn params_point_sweep() {
        let cfg = RunConfig::from_json(
            r#"{"sweep": {"model": {"kind": "params", "a": 1.0, "b": 1.0},
                "axis": {"name": "c", "min": 1.0, "max": 2.0, "steps": 2},
                "routes": ["closed-transfer"]}}"#,
        )
        .unwrap();
        let report = run_sweep(&cfg).unwrap();
        // capacity 0 at c = 1 (uniform chain saturates one bit of noise)
        assert!((report.points[0].outcomes[0].capacity.unwrap() - 0.0).abs() < 1e-12);
    }

    #[test]
    fn markov_iid_capacity_value() {
        let cfg = RunConfig::from_json(
            r#"{"sweep": {"model": {"kind": "markov"},
                "axis": {"name": "q", "min": 0.1, "max": 0.2, "steps": 2},
                "routes": ["closed-transfer"]}}"#,
        )
        .unwrap();
        let report = run_sweep(&cfg).unwrap();
        let q01 = report.points[0].outcomes[0].capacity.unwrap();
        assert!((q01 - 0.5310044064107188).abs() < 1e-10);
    }

    #[test]
    fn csv_is_deterministic_and_structured() {
        let cfg = wolf_config(11);
        let a = run_sweep(&cfg).unwrap().to_csv_string().unwrap();
        let b = run_sweep(&cfg).unwrap().to_csv_string().unwrap();
        assert_eq!(a, b);
        let lines: Vec<&str> = a.lines().collect();
        assert!(lines[0].starts_with("# memchan "));
        assert!(lines[1].starts_with("# config "));
        assert!(lines[2].starts_with("# seed "));
        assert_eq!(lines[3], "g,rate_closed-transfer,capacity_closed-transfer,flags");
        assert_eq!(lines.len(), 4 + 11);
    }

    #[test]
    fn capped_grid_points_are_flagged_and_run_continues() {
        let cfg = RunConfig::from_json(
            r#"{"sweep": {"model": {"kind": "wolf"},
                "axis": {"name": "g", "min": 0.3, "max": 0.6, "steps": 3},
                "routes": ["closed-transfer", "brute"],
                "brute_sites": [16, 17, 18]}}"#,
        )
        .unwrap();
        let report = run_sweep(&cfg).unwrap();
        assert_eq!(report.points.len(), 3);
        for point in &report.points {
            // 2^17 exceeds the default cap: brute cell empty, row flagged
            assert!(point.outcomes[0].capacity.is_some());
            assert!(point.outcomes[1].capacity.is_none());
            assert!(point.flags.contains(&Flag::CapExceeded));
        }
        let csv = report.to_csv_string().unwrap();
        assert!(csv.contains("cap-exceeded"));
    }

    #[test]
    fn thermo_cell_empty_at_transition() {
        let cfg = RunConfig::from_json(
            r#"{"sweep": {"model": {"kind": "wolf"},
                "axis": {"name": "g", "min": -1.0, "max": 1.0, "steps": 3},
                "routes": ["closed-transfer", "thermo"]}}"#,
        )
        .unwrap();
        let report = run_sweep(&cfg).unwrap();
        let mid = &report.points[1];
        assert_eq!(mid.param, 0.0);
        assert!(mid.outcomes[0].capacity.is_some());
        assert!(mid.outcomes[1].capacity.is_none());
        assert!(mid.flags.contains(&Flag::TransitionPoint));
    }
}
