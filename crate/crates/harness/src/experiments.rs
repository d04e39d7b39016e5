//! Reproducible experiments over synthetic markets.
//!
//! Every experiment derives trial `t`'s market from `base seed + t`, runs
//! the selected methods, and averages the per-iteration fairness (minimum
//! college utility) and efficiency (average college utility) curves across
//! trials. Methods halt at different iterations, so shorter curves are
//! padded with their final value before averaging and across methods. CSV
//! output embeds the full config as `#` comment lines; identical configs
//! produce byte-identical files.

use std::fmt;
use std::str::FromStr;
use std::time::Instant;

use serde::{Deserialize, Serialize};

use setmatch::error::{Error, Result};
use setmatch::market::{generate, MarketConfig};
use setmatch::maxmin::deterministic::run_deterministic;
use setmatch::maxmin::stochastic::run_stochastic;
use setmatch::model::Instance;
use setmatch::stability::propose_phase_trace;
use setmatch::utility::{avg_utility, min_utility};

use crate::baseline::baseline_greedy_trace;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Method {
    Gsa,
    Greedy,
    Deterministic,
    Stochastic,
}

impl Method {
    pub const ALL: [Method; 4] = [
        Method::Gsa,
        Method::Greedy,
        Method::Deterministic,
        Method::Stochastic,
    ];
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let name = match self {
            Method::Gsa => "gsa",
            Method::Greedy => "greedy",
            Method::Deterministic => "deterministic",
            Method::Stochastic => "stochastic",
        };
        f.write_str(name)
    }
}

impl FromStr for Method {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Method, String> {
        match s {
            "gsa" => Ok(Method::Gsa),
            "greedy" => Ok(Method::Greedy),
            "deterministic" => Ok(Method::Deterministic),
            "stochastic" => Ok(Method::Stochastic),
            other => Err(format!(
                "unknown method '{other}' (expected gsa, greedy, deterministic, stochastic)"
            )),
        }
    }
}

/// Full reproducibility contract for one experiment invocation.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunConfig {
    pub market: MarketConfig,
    pub trials: usize,
    pub methods: Vec<Method>,
    /// Improvement-iteration budget for the deterministic method.
    pub max_iterations: usize,
    pub epsilon: f64,
    pub delta: f64,
}

impl RunConfig {
    pub fn new(market: MarketConfig) -> RunConfig {
        RunConfig {
            market,
            trials: 20,
            methods: Method::ALL.to_vec(),
            max_iterations: 10_000,
            epsilon: setmatch::maxmin::stochastic::DEFAULT_EPSILON,
            delta: setmatch::maxmin::stochastic::DEFAULT_DELTA,
        }
    }

    fn check(&self) -> Result<()> {
        if self.trials == 0 {
            return Err(Error::InfeasibleConfig("trials must be at least 1".into()));
        }
        if self.methods.is_empty() {
            return Err(Error::InfeasibleConfig("methods must be non-empty".into()));
        }
        Ok(())
    }
}

/// Mean curves for one method, aligned and padded across trials.
#[derive(Debug, Clone)]
pub struct MethodCurve {
    pub method: Method,
    pub mean_min: Vec<f64>,
    pub mean_avg: Vec<f64>,
    /// Total wall-clock seconds spent in this method across all trials.
    pub seconds: f64,
}

impl MethodCurve {
    pub fn final_min(&self) -> f64 {
        *self.mean_min.last().unwrap_or(&0.0)
    }

    pub fn final_avg(&self) -> f64 {
        *self.mean_avg.last().unwrap_or(&0.0)
    }
}

#[derive(Debug, Clone)]
pub struct ExperimentResult {
    pub curves: Vec<MethodCurve>,
}

impl ExperimentResult {
    pub fn curve(&self, method: Method) -> Option<&MethodCurve> {
        self.curves.iter().find(|c| c.method == method)
    }
}

/// One method's `(min, avg)` curve on one instance. Point 0 is the
/// method's own starting state: empty for gsa, greedy, and stochastic,
/// the propose-phase result for deterministic.
fn run_method(
    method: Method,
    inst: &Instance,
    cfg: &RunConfig,
    seed: u64,
) -> Result<Vec<(f64, f64)>> {
    let mut curve = Vec::new();
    match method {
        Method::Gsa => {
            curve.push((0.0, 0.0));
            let outcome = propose_phase_trace(inst);
            for round in &outcome.rounds {
                curve.push((min_utility(inst, round).1, avg_utility(inst, round)));
            }
        }
        Method::Greedy => {
            curve.push((0.0, 0.0));
            curve.extend(baseline_greedy_trace(inst).curve);
        }
        Method::Deterministic => {
            let trajectory = run_deterministic(inst, cfg.max_iterations);
            curve.extend(
                trajectory
                    .points
                    .iter()
                    .map(|p| (p.min_utility, p.avg_utility)),
            );
        }
        Method::Stochastic => {
            let trajectory = run_stochastic(inst, cfg.epsilon, cfg.delta, seed)?;
            curve.extend(
                trajectory
                    .points
                    .iter()
                    .map(|p| (p.min_utility, p.avg_utility)),
            );
        }
    }
    Ok(curve)
}

fn pad_to(curve: &mut Vec<(f64, f64)>, len: usize) {
    let last = *curve.last().expect("curves are never empty");
    curve.resize(len, last);
}

type TrialCurve = Vec<(f64, f64)>;

/// Generates `trials` markets and averages each method's per-iteration
/// curves across them.
pub fn run_fairness_experiment(cfg: &RunConfig) -> Result<ExperimentResult> {
    cfg.check()?;
    let mut per_method: Vec<(Vec<TrialCurve>, f64)> = vec![(Vec::new(), 0.0); cfg.methods.len()];
    for trial in 0..cfg.trials {
        let mut market = cfg.market.clone();
        market.seed = cfg.market.seed.wrapping_add(trial as u64);
        let inst = generate(&market)?;
        for (slot, &method) in cfg.methods.iter().enumerate() {
            let started = Instant::now();
            let curve = run_method(method, &inst, cfg, market.seed)?;
            per_method[slot].1 += started.elapsed().as_secs_f64();
            per_method[slot].0.push(curve);
        }
    }
    // pad every trial curve to the longest seen anywhere, then average
    let longest = per_method
        .iter()
        .flat_map(|(curves, _)| curves.iter().map(Vec::len))
        .max()
        .unwrap_or(0);
    let curves = cfg
        .methods
        .iter()
        .zip(per_method)
        .map(|(&method, (mut trials, seconds))| {
            for curve in &mut trials {
                pad_to(curve, longest);
            }
            let scale = 1.0 / trials.len() as f64;
            let mut mean_min = vec![0.0; longest];
            let mut mean_avg = vec![0.0; longest];
            for curve in &trials {
                for (i, &(min, avg)) in curve.iter().enumerate() {
                    mean_min[i] += min * scale;
                    mean_avg[i] += avg * scale;
                }
            }
            MethodCurve {
                method,
                mean_min,
                mean_avg,
                seconds,
            }
        })
        .collect();
    Ok(ExperimentResult { curves })
}

/// Runs the fairness experiment once per lambda value.
pub fn run_lambda_sweep(cfg: &RunConfig, lambdas: &[f64]) -> Result<Vec<(f64, ExperimentResult)>> {
    if lambdas.is_empty() {
        return Err(Error::InfeasibleConfig(
            "lambda list must be non-empty".into(),
        ));
    }
    lambdas
        .iter()
        .map(|&lambda| {
            let mut swept = cfg.clone();
            swept.market.lambda = lambda;
            run_fairness_experiment(&swept).map(|r| (lambda, r))
        })
        .collect()
}

/// Default sweep values.
pub const DEFAULT_LAMBDAS: [f64; 3] = [0.3, 1.0, 2.0];

/// One market-size point of a scaling run.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ScalePoint {
    pub n_students: usize,
    pub m_colleges: usize,
    pub max_quota: u32,
}

impl FromStr for ScalePoint {
    type Err = String;

    /// Parses `"500x10x4"` as students x colleges x max quota.
    fn from_str(s: &str) -> std::result::Result<ScalePoint, String> {
        let parts: Vec<&str> = s.split('x').collect();
        if parts.len() != 3 {
            return Err(format!("expected NxMxQ, got '{s}'"));
        }
        let parse = |p: &str| {
            p.trim()
                .parse::<usize>()
                .map_err(|e| format!("bad number '{p}': {e}"))
        };
        Ok(ScalePoint {
            n_students: parse(parts[0])?,
            m_colleges: parse(parts[1])?,
            max_quota: parse(parts[2])? as u32,
        })
    }
}

#[derive(Debug, Clone)]
pub struct ScalingRow {
    pub method: Method,
    pub point: ScalePoint,
    pub seconds: f64,
    pub final_min: f64,
    pub final_avg: f64,
}

/// Runtime and final-quality table across market sizes.
pub fn run_scaling(cfg: &RunConfig, points: &[ScalePoint]) -> Result<Vec<ScalingRow>> {
    cfg.check()?;
    if points.is_empty() {
        return Err(Error::InfeasibleConfig(
            "scaling needs at least one point".into(),
        ));
    }
    let mut rows = Vec::new();
    for &point in points {
        let mut scaled = cfg.clone();
        scaled.market.n_students = point.n_students;
        scaled.market.m_colleges = point.m_colleges;
        scaled.market.max_quota = point.max_quota;
        let result = run_fairness_experiment(&scaled)?;
        for curve in result.curves {
            rows.push(ScalingRow {
                method: curve.method,
                point,
                seconds: curve.seconds,
                final_min: curve.final_min(),
                final_avg: curve.final_avg(),
            });
        }
    }
    Ok(rows)
}

fn config_header(cfg: &RunConfig) -> String {
    serde_json::to_string(cfg).expect("config serialization cannot fail")
}

/// Curve CSV: `method,iteration,min_utility,avg_utility` with the config
/// embedded as comment lines.
pub fn curves_to_csv(cfg: &RunConfig, result: &ExperimentResult) -> String {
    let mut out = String::new();
    out.push_str(&format!("# config: {}\n", config_header(cfg)));
    out.push_str("method,iteration,min_utility,avg_utility\n");
    for curve in &result.curves {
        for (i, (min, avg)) in curve.mean_min.iter().zip(&curve.mean_avg).enumerate() {
            out.push_str(&format!("{},{},{:.6},{:.6}\n", curve.method, i, min, avg));
        }
    }
    out
}

/// Scaling CSV: one row per method and market-size point.
pub fn scaling_to_csv(cfg: &RunConfig, rows: &[ScalingRow]) -> String {
    let mut out = String::new();
    out.push_str(&format!("# config: {}\n", config_header(cfg)));
    out.push_str("method,n_students,m_colleges,max_quota,seconds,final_min,final_avg\n");
    for row in rows {
        out.push_str(&format!(
            "{},{},{},{},{:.6},{:.6},{:.6}\n",
            row.method,
            row.point.n_students,
            row.point.m_colleges,
            row.point.max_quota,
            row.seconds,
            row.final_min,
            row.final_avg
        ));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn small_config() -> RunConfig {
        let mut market = MarketConfig::new(12, 3, 7);
        market.max_quota = 2;
        market.sets_per_college = 8;
        let mut cfg = RunConfig::new(market);
        cfg.trials = 3;
        cfg
    }

    #[test]
    fn single_method_single_trial_gives_one_curve() {
        let mut cfg = small_config();
        cfg.trials = 1;
        cfg.methods = vec![Method::Greedy];
        let result = run_fairness_experiment(&cfg).unwrap();
        assert_eq!(result.curves.len(), 1);
        let curve = &result.curves[0].mean_min;
        assert!(!curve.is_empty());
        for pair in curve.windows(2) {
            assert!(pair[1] >= pair[0], "greedy min curve decreased");
        }
    }

    #[test]
    fn curves_share_a_length_after_padding() {
        let result = run_fairness_experiment(&small_config()).unwrap();
        let lengths: Vec<usize> = result.curves.iter().map(|c| c.mean_min.len()).collect();
        assert!(
            lengths.windows(2).all(|w| w[0] == w[1]),
            "lengths {lengths:?}"
        );
        for curve in &result.curves {
            assert!(curve.mean_min.iter().all(|v| v.is_finite()));
            assert!(curve.mean_avg.iter().all(|v| v.is_finite()));
        }
    }

    #[test]
    fn repeated_runs_emit_identical_csv() {
        let cfg = small_config();
        let a = curves_to_csv(&cfg, &run_fairness_experiment(&cfg).unwrap());
        let b = curves_to_csv(&cfg, &run_fairness_experiment(&cfg).unwrap());
        assert_eq!(a, b);
    }

    #[test]
    fn improvement_methods_have_monotone_mean_curves() {
        let result = run_fairness_experiment(&small_config()).unwrap();
        for method in [Method::Deterministic, Method::Stochastic] {
            let curve = result.curve(method).unwrap();
            for pair in curve.mean_min.windows(2) {
                assert!(pair[1] >= pair[0] - 1e-12, "{method} mean min decreased");
            }
        }
    }

    #[test]
    fn sweep_produces_one_result_per_lambda() {
        let mut cfg = small_config();
        cfg.trials = 2;
        cfg.methods = vec![Method::Greedy, Method::Deterministic];
        let swept = run_lambda_sweep(&cfg, &DEFAULT_LAMBDAS).unwrap();
        assert_eq!(swept.len(), 3);
        assert_eq!(swept[0].0, 0.3);
    }

    #[test]
    fn swept_utilities_respect_the_lambda_bound() {
        let mut cfg = small_config();
        cfg.trials = 2;
        for (lambda, result) in run_lambda_sweep(&cfg, &[0.0, 2.0]).unwrap() {
            for curve in &result.curves {
                assert!(
                    curve.mean_avg.iter().all(|&v| v <= 1.0 + lambda + 1e-12),
                    "lambda {lambda}: a mean exceeded the bound"
                );
            }
        }
    }

    #[test]
    fn scaling_covers_every_point_and_method() {
        let mut cfg = small_config();
        cfg.trials = 1;
        cfg.methods = vec![Method::Gsa, Method::Stochastic];
        let points = [
            ScalePoint {
                n_students: 8,
                m_colleges: 2,
                max_quota: 2,
            },
            ScalePoint {
                n_students: 16,
                m_colleges: 2,
                max_quota: 2,
            },
        ];
        let rows = run_scaling(&cfg, &points).unwrap();
        assert_eq!(rows.len(), 4);
        assert!(rows.iter().all(|r| r.seconds >= 0.0));
        let csv = scaling_to_csv(&cfg, &rows);
        assert_eq!(csv.lines().count(), 2 + 4);
    }

    #[test]
    fn scale_points_parse() {
        let p: ScalePoint = "500x10x4".parse().unwrap();
        assert_eq!(
            p,
            ScalePoint {
                n_students: 500,
                m_colleges: 10,
                max_quota: 4
            }
        );
        assert!("500x10".parse::<ScalePoint>().is_err());
    }

    #[test]
    fn empty_configs_are_rejected() {
        let mut cfg = small_config();
        cfg.trials = 0;
        assert!(run_fairness_experiment(&cfg).is_err());
        let mut cfg = small_config();
        cfg.methods.clear();
        assert!(run_fairness_experiment(&cfg).is_err());
        assert!(run_lambda_sweep(&small_config(), &[]).is_err());
        assert!(run_scaling(&small_config(), &[]).is_err());
    }
}
