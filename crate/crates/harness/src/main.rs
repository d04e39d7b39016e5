use std::path::PathBuf;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand};

use setmatch::io::{load_instance, save_instance};
use setmatch::market::{generate, MarketConfig};
use setmatch::oracle::{oracle_report_with_cap, DEFAULT_ENUMERATION_CAP};
use setmatch::stability::{propose_phase, swap_refinement};
use setmatch_harness::experiments::{
    curves_to_csv, run_fairness_experiment, run_lambda_sweep, run_scaling, scaling_to_csv, Method,
    RunConfig, ScalePoint, DEFAULT_LAMBDAS,
};
use setmatch_harness::golden::verify_golden;
use setmatch_harness::trace::refinement_to_csv;

/// Matching engine and experiment harness for many-to-one markets where
/// colleges rank sets of students.
#[derive(Parser)]
#[command(name = "setmatch", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
struct MarketArgs {
    /// Students in the market.
    #[arg(long, default_value_t = 50)]
    students: usize,
    /// Colleges in the market.
    #[arg(long, default_value_t = 5)]
    colleges: usize,
    /// Quotas are drawn uniformly from 1..=max-quota.
    #[arg(long, default_value_t = 2)]
    max_quota: u32,
    /// Diversity weight shared by every college.
    #[arg(long, default_value_t = 1.0)]
    lambda: f64,
    /// Ranked sets requested per college.
    #[arg(long, default_value_t = 25)]
    sets: usize,
    /// Comma-separated background labels.
    #[arg(long, value_delimiter = ',')]
    backgrounds: Option<Vec<String>>,
    /// Keep only the first T entries of each student's preference list.
    #[arg(long)]
    truncate: Option<usize>,
    /// Probability that a ranked-set slot draws from the college's own
    /// specialization.
    #[arg(long, default_value_t = 0.7)]
    bias: f64,
}

impl MarketArgs {
    fn to_config(&self, seed: u64) -> MarketConfig {
        let mut config = MarketConfig::new(self.students, self.colleges, seed);
        config.max_quota = self.max_quota;
        config.lambda = self.lambda;
        config.sets_per_college = self.sets;
        config.pref_list_truncation = self.truncate;
        config.specialization_bias = self.bias;
        if let Some(backgrounds) = &self.backgrounds {
            config.backgrounds = backgrounds.clone();
        }
        config
    }
}

#[derive(Args, Clone)]
struct ExperimentArgs {
    /// Independent markets to average over (trial t uses seed + t).
    #[arg(long, default_value_t = 20)]
    trials: usize,
    /// Comma-separated subset of gsa, greedy, deterministic, stochastic.
    #[arg(long, value_delimiter = ',')]
    methods: Option<Vec<Method>>,
    /// Improvement-iteration budget for the deterministic method.
    #[arg(long, default_value_t = 10_000)]
    iterations: usize,
    /// Sampling accuracy parameter in [1/e, 1).
    #[arg(long, default_value_t = setmatch::maxmin::stochastic::DEFAULT_EPSILON)]
    epsilon: f64,
    /// Pool-padding parameter in (0, 1).
    #[arg(long, default_value_t = setmatch::maxmin::stochastic::DEFAULT_DELTA)]
    delta: f64,
}

impl ExperimentArgs {
    fn to_config(&self, market: MarketConfig) -> RunConfig {
        let mut cfg = RunConfig::new(market);
        cfg.trials = self.trials;
        if let Some(methods) = &self.methods {
            cfg.methods = methods.clone();
        }
        cfg.max_iterations = self.iterations;
        cfg.epsilon = self.epsilon;
        cfg.delta = self.delta;
        cfg
    }
}

#[derive(Subcommand)]
enum Command {
    /// Generate a synthetic market instance file.
    Generate {
        #[command(flatten)]
        market: MarketArgs,
        #[arg(long)]
        seed: u64,
        /// Output instance file.
        #[arg(long, short)]
        out: PathBuf,
    },
    /// Run the fairness/efficiency experiment and write curves.csv.
    Run {
        #[command(flatten)]
        market: MarketArgs,
        #[command(flatten)]
        experiment: ExperimentArgs,
        #[arg(long)]
        seed: u64,
        /// Output directory.
        #[arg(long, short)]
        out: PathBuf,
    },
    /// Repeat the experiment across lambda values, one curves file each.
    Sweep {
        #[command(flatten)]
        market: MarketArgs,
        #[command(flatten)]
        experiment: ExperimentArgs,
        #[arg(long)]
        seed: u64,
        /// Comma-separated lambda values.
        #[arg(long, value_delimiter = ',')]
        lambdas: Option<Vec<f64>>,
        #[arg(long, short)]
        out: PathBuf,
    },
    /// Measure runtime and final quality across market sizes.
    Scale {
        #[command(flatten)]
        market: MarketArgs,
        #[command(flatten)]
        experiment: ExperimentArgs,
        #[arg(long)]
        seed: u64,
        /// Comma-separated size points, each students x colleges x quota
        /// (e.g. 50x5x4,100x10x4).
        #[arg(long, value_delimiter = ',')]
        points: Vec<ScalePoint>,
        #[arg(long, short)]
        out: PathBuf,
    },
    /// Replay the shipped golden traces and report pass/fail per check.
    Verify {
        /// Directory holding a1_counterexample.json and a2_cycle.json.
        #[arg(long, default_value = "fixtures")]
        fixtures: PathBuf,
        /// Also write the two refinement traces as CSV into this directory.
        #[arg(long)]
        trace_out: Option<PathBuf>,
    },
    /// Enumerate a small instance: stable matchings and max-min optimum.
    Oracle {
        /// Instance file to analyze.
        instance: PathBuf,
        /// Refuse instances whose assignment-space bound exceeds this.
        #[arg(long, default_value_t = DEFAULT_ENUMERATION_CAP)]
        cap: u128,
        /// Also write the report to this path.
        #[arg(long, short)]
        out: Option<PathBuf>,
    },
}

fn main() -> Result<()> {
    match Cli::parse().command {
        Command::Generate { market, seed, out } => {
            let config = market.to_config(seed);
            let inst = generate(&config)?;
            let header = vec![format!(
                "market config: {}",
                serde_json::to_string(&config).expect("config serializes")
            )];
            save_instance(&out, &inst, &header)?;
            println!(
                "wrote {} ({} students, {} colleges)",
                out.display(),
                inst.n_students(),
                inst.n_colleges()
            );
        }
        Command::Run {
            market,
            experiment,
            seed,
            out,
        } => {
            let cfg = experiment.to_config(market.to_config(seed));
            let result = run_fairness_experiment(&cfg)?;
            std::fs::create_dir_all(&out).with_context(|| format!("creating {}", out.display()))?;
            let path = out.join("curves.csv");
            std::fs::write(&path, curves_to_csv(&cfg, &result))
                .with_context(|| format!("writing {}", path.display()))?;
            for curve in &result.curves {
                println!(
                    "{}: final min {:.6}, final avg {:.6}, {:.3}s",
                    curve.method,
                    curve.final_min(),
                    curve.final_avg(),
                    curve.seconds
                );
            }
            println!("wrote {}", path.display());
        }
        Command::Sweep {
            market,
            experiment,
            seed,
            lambdas,
            out,
        } => {
            let cfg = experiment.to_config(market.to_config(seed));
            let lambdas = lambdas.unwrap_or_else(|| DEFAULT_LAMBDAS.to_vec());
            let results = run_lambda_sweep(&cfg, &lambdas)?;
            std::fs::create_dir_all(&out).with_context(|| format!("creating {}", out.display()))?;
            for (lambda, result) in &results {
                let mut swept = cfg.clone();
                swept.market.lambda = *lambda;
                let path = out.join(format!("curves_lambda_{lambda}.csv"));
                std::fs::write(&path, curves_to_csv(&swept, result))
                    .with_context(|| format!("writing {}", path.display()))?;
                println!("wrote {}", path.display());
            }
        }
        Command::Scale {
            market,
            experiment,
            seed,
            points,
            out,
        } => {
            if points.is_empty() {
                bail!("--points requires at least one NxMxQ entry");
            }
            let cfg = experiment.to_config(market.to_config(seed));
            let rows = run_scaling(&cfg, &points)?;
            std::fs::create_dir_all(&out).with_context(|| format!("creating {}", out.display()))?;
            let path = out.join("scaling.csv");
            std::fs::write(&path, scaling_to_csv(&cfg, &rows))
                .with_context(|| format!("writing {}", path.display()))?;
            println!("wrote {}", path.display());
        }
        Command::Verify {
            fixtures,
            trace_out,
        } => {
            let report = verify_golden(&fixtures)?;
            for check in &report.checks {
                let status = if check.pass { "pass" } else { "FAIL" };
                if check.detail.is_empty() {
                    println!("{status}  {}", check.name);
                } else {
                    println!("{status}  {} ({})", check.name, check.detail);
                }
            }
            if let Some(dir) = trace_out {
                std::fs::create_dir_all(&dir)
                    .with_context(|| format!("creating {}", dir.display()))?;
                for name in ["a1_counterexample", "a2_cycle"] {
                    let inst = load_instance(&fixtures.join(format!("{name}.json")))?;
                    let outcome = swap_refinement(&inst, propose_phase(&inst), None);
                    let path = dir.join(format!("{name}_trace.csv"));
                    std::fs::write(&path, refinement_to_csv(&outcome))
                        .with_context(|| format!("writing {}", path.display()))?;
                    println!("wrote {}", path.display());
                }
            }
            if !report.passed() {
                std::process::exit(1);
            }
        }
        Command::Oracle { instance, cap, out } => {
            let inst = load_instance(&instance)?;
            let report = oracle_report_with_cap(&inst, cap)?;
            let mut text = String::new();
            text.push_str(&format!("instance: {}\n", instance.display()));
            text.push_str(&format!("feasible matchings: {}\n", report.total_feasible));
            text.push_str(&format!("stable matchings: {}\n", report.stable.len()));
            for m in &report.stable {
                text.push_str(&format!("  stable: {}\n", m.canonical_key()));
            }
            text.push_str(&format!("max-min optimum: {:.6}\n", report.optimum));
            text.push_str(&format!(
                "optimum matching: {}\n",
                report.argmax.canonical_key()
            ));
            print!("{text}");
            if let Some(path) = out {
                std::fs::write(&path, text)
                    .with_context(|| format!("writing {}", path.display()))?;
            }
        }
    }
    Ok(())
}
