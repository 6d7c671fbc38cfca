//! Benchmark orchestrator: ingest -> preprocess -> (optional search) ->
//! validate -> time -> statistics -> report, from one declarative config.
//!
//! Exit codes: 0 success, 2 invalid configuration, 3 data/processing error.

mod commands;
mod config;
mod manifest;
mod store;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use commands::run::{run_benchmark, Stage};
use commands::stats_cmd::DirectionArg;
use config::{load_config, Benchmark, ConfigError};

#[derive(Parser)]
#[command(
    name = "idsbench",
    version,
    about = "Flow-based intrusion-detection classifier benchmark"
)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Args)]
struct CommonOverrides {
    /// Benchmark configuration (TOML).
    #[arg(long, env = "IDSBENCH_CONFIG")]
    config: PathBuf,
    /// Override the config's master seed.
    #[arg(long, env = "IDSBENCH_SEED")]
    seed: Option<u64>,
    /// Override the output directory.
    #[arg(long, env = "IDSBENCH_OUT")]
    out: Option<PathBuf>,
    /// Worker threads for parallel rounds.
    #[arg(long, env = "IDSBENCH_WORKERS")]
    workers: Option<usize>,
    /// Restrict the metric set (comma separated).
    #[arg(long, env = "IDSBENCH_METRIC", value_delimiter = ',')]
    metric: Option<Vec<String>>,
    /// Override significance levels (comma separated).
    #[arg(long, env = "IDSBENCH_ALPHA", value_delimiter = ',')]
    alpha: Option<Vec<f64>>,
    /// Reduced-ensemble profile (RF 100 trees, ETC 200 trees).
    #[arg(long)]
    desk_scale: bool,
}

impl CommonOverrides {
    fn resolve(&self) -> Result<Benchmark, ConfigError> {
        let mut bench = load_config(&self.config)?;
        if let Some(seed) = self.seed {
            bench.master_seed = seed;
        }
        if let Some(out) = &self.out {
            bench.output_dir = out.clone();
        }
        if let Some(workers) = self.workers {
            bench.workers = Some(workers);
        }
        if let Some(metrics) = &self.metric {
            for m in metrics {
                if !config::ALL_METRICS.contains(&m.as_str()) {
                    return Err(ConfigError(format!("unknown metric {m:?}")));
                }
            }
            bench.metrics = metrics.clone();
        }
        if let Some(alphas) = &self.alpha {
            if alphas.iter().any(|&a| !(a > 0.0 && a < 1.0)) {
                return Err(ConfigError("alphas must lie in (0, 1)".into()));
            }
            bench.alphas = alphas.clone();
        }
        if self.desk_scale {
            bench = bench.desk_scale();
        }
        Ok(bench)
    }
}

#[derive(Subcommand)]
enum Cmd {
    /// Run the whole benchmark: validation, timing, statistics, reports.
    Run {
        #[command(flatten)]
        common: CommonOverrides,
    },
    /// Parse a dataset file, optionally sample it, and write the binary cache.
    Ingest {
        /// Input delimited text file.
        #[arg(long)]
        data: PathBuf,
        /// Builtin schema id or descriptor path.
        #[arg(long)]
        schema: String,
        /// Output cache file.
        #[arg(long)]
        out: PathBuf,
        /// Stratified sample as NORMAL,ATTACK counts.
        #[arg(long, value_delimiter = ',')]
        sample: Option<Vec<usize>>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Fit and persist every round's model without scoring.
    Train {
        #[command(flatten)]
        common: CommonOverrides,
        /// Where to store model files (default: <out>/models).
        #[arg(long)]
        models: Option<PathBuf>,
    },
    /// Score models persisted by `train`; outputs match `run` exactly
    /// (timing columns aside).
    Evaluate {
        #[command(flatten)]
        common: CommonOverrides,
        /// Where `train` stored the model files.
        #[arg(long)]
        models: Option<PathBuf>,
    },
    /// Friedman + Nemenyi over results matrices or published mean ranks.
    Stats {
        /// Results-matrix CSV(s); metric name taken from the file stem.
        #[arg(long)]
        results: Vec<PathBuf>,
        /// Mean-ranks CSV (classifier,metric... header) instead of matrices.
        #[arg(long)]
        mean_ranks: Option<PathBuf>,
        /// Number of datasets behind the mean ranks.
        #[arg(long)]
        datasets: Option<usize>,
        /// Ranking direction: auto (by metric name) | higher | lower.
        #[arg(long, default_value = "auto")]
        direction: String,
        #[arg(long, value_delimiter = ',', default_values_t = vec![0.05, 0.1])]
        alpha: Vec<f64>,
        #[arg(long, default_value = "stats_out")]
        out: PathBuf,
    },
    /// Rebuild statistics from a results directory written by `run`.
    Report {
        #[arg(long)]
        results_dir: PathBuf,
        #[arg(long, value_delimiter = ',', default_values_t = vec![0.05, 0.1])]
        alpha: Vec<f64>,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match dispatch(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            if e.downcast_ref::<ConfigError>().is_some() {
                ExitCode::from(2)
            } else {
                ExitCode::from(3)
            }
        }
    }
}

fn dispatch(cli: Cli) -> anyhow::Result<()> {
    match cli.cmd {
        Cmd::Run { common } => {
            let bench = common.resolve()?;
            run_benchmark(&bench, Stage::Full, None)
        }
        Cmd::Ingest {
            data,
            schema,
            out,
            sample,
            seed,
        } => {
            let sample = match sample {
                None => None,
                Some(v) if v.len() == 2 => Some((v[0], v[1])),
                Some(v) => {
                    return Err(ConfigError(format!(
                        "--sample takes NORMAL,ATTACK (2 counts), got {}",
                        v.len()
                    ))
                    .into())
                }
            };
            commands::ingest::ingest(&data, &schema, &out, sample, seed)
        }
        Cmd::Train { common, models } => {
            let bench = common.resolve()?;
            let models_dir = models.unwrap_or_else(|| bench.output_dir.join("models"));
            run_benchmark(&bench, Stage::TrainOnly, Some(&models_dir))
        }
        Cmd::Evaluate { common, models } => {
            let bench = common.resolve()?;
            let models_dir = models.unwrap_or_else(|| bench.output_dir.join("models"));
            run_benchmark(&bench, Stage::EvaluateOnly, Some(&models_dir))
        }
        Cmd::Stats {
            results,
            mean_ranks,
            datasets,
            direction,
            alpha,
            out,
        } => {
            let direction = DirectionArg::parse(&direction)?;
            match (mean_ranks, results.is_empty()) {
                (Some(ranks_file), _) => {
                    let d = datasets.ok_or_else(|| {
                        anyhow::anyhow!("--datasets N is required with --mean-ranks")
                    })?;
                    commands::stats_cmd::stats_from_mean_ranks(&ranks_file, d, &alpha, &out)
                }
                (None, false) => {
                    commands::stats_cmd::stats_from_matrices(&results, &direction, &alpha, &out)
                }
                (None, true) => Err(anyhow::anyhow!(
                    "provide --results matrix.csv (repeatable) or --mean-ranks ranks.csv"
                )),
            }
        }
        Cmd::Report { results_dir, alpha } => commands::report_cmd::report(&results_dir, &alpha),
    }
}
