//! `chanlab` — experiments on random covariant quantum channels.
//!
//! Exit codes: 0 success, 2 configuration error, 3 statistical-gate failure.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use chanlab::experiments::{run_experiment, ConfigError, ExperimentConfig};
use chanlab::weingarten::{
    evaluate_query, rational_string, rational_to_f64, MomentQuery, MomentTarget,
};

#[derive(Parser)]
#[command(name = "chanlab", version, about = "Random covariant quantum channel laboratory")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
struct RunArgs {
    /// TOML experiment configuration.
    #[arg(long)]
    config: PathBuf,
    /// Override the config's master seed.
    #[arg(long)]
    seed: Option<u64>,
    /// Output directory (overrides the config's `out`; default `./out`).
    #[arg(long)]
    out: Option<PathBuf>,
    /// Worker threads for the sample loop (default: all cores).
    #[arg(long)]
    threads: Option<usize>,
}

#[derive(Subcommand)]
enum Command {
    /// Limit-law histogram of s·λ₁, s·λ₂, or λ₃.
    Histogram(RunArgs),
    /// Monte Carlo moments vs. the exact Weingarten oracle, with a z gate.
    OracleCheck(RunArgs),
    /// Eigenvalue statistics of the scaled C matrix.
    Spectral(RunArgs),
    /// PPT fraction over a (d, s) grid for one channel family.
    PptScan(RunArgs),
    /// Certificate rates for compositions of two random diagonal channels.
    Ppt2(RunArgs),
    /// Evaluate one exact oracle moment and print it as JSON.
    Oracle {
        /// lambda1|lambda2|lambda3|trace-a|trace-b|trace-c|entry-a|entry-b2|entry-c2
        #[arg(long)]
        target: String,
        #[arg(long)]
        d: u32,
        #[arg(long)]
        s: u32,
        #[arg(long)]
        p: usize,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => code,
        Err(err) => {
            eprintln!("error: {err:#}");
            let code = if err.downcast_ref::<ConfigError>().is_some() { 2 } else { 1 };
            ExitCode::from(code)
        }
    }
}

fn run(cli: Cli) -> anyhow::Result<ExitCode> {
    match cli.command {
        Command::Histogram(args) => run_kind(args, "histogram"),
        Command::OracleCheck(args) => run_kind(args, "oracle-check"),
        Command::Spectral(args) => run_kind(args, "spectral"),
        Command::PptScan(args) => run_kind(args, "ppt-scan"),
        Command::Ppt2(args) => run_kind(args, "ppt2"),
        Command::Oracle { target, d, s, p } => {
            let target = parse_target(&target)?;
            let query = MomentQuery { target, d, s, p };
            let exact = evaluate_query(&query)
                .map_err(|e| anyhow::anyhow!(ConfigError::Invalid(e.to_string())))?;
            let doc = serde_json::json!({
                "query": query,
                "exact": rational_string(&exact),
                "approx": rational_to_f64(&exact),
            });
            println!("{}", serde_json::to_string(&doc)?);
            Ok(ExitCode::SUCCESS)
        }
    }
}

fn run_kind(args: RunArgs, expected_kind: &str) -> anyhow::Result<ExitCode> {
    if let Some(threads) = args.threads {
        rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build_global()
            .map_err(|e| anyhow::anyhow!("failed to size the thread pool: {e}"))?;
    }
    let text = std::fs::read_to_string(&args.config).map_err(|e| {
        anyhow::anyhow!(ConfigError::Invalid(format!("{}: {e}", args.config.display())))
    })?;
    let mut cfg = ExperimentConfig::from_toml(&text)?;
    if cfg.kind_name() != expected_kind {
        return Err(ConfigError::KindMismatch {
            expected: expected_kind.to_string(),
            found: cfg.kind_name().to_string(),
        }
        .into());
    }
    if let Some(seed) = args.seed {
        cfg.set_seed(seed);
    }
    if let Some(out) = args.out {
        cfg.set_out(out);
    }
    let out_dir = cfg.out().cloned().unwrap_or_else(|| PathBuf::from("out"));
    let report = run_experiment(&cfg, &out_dir)?;
    println!(
        "wrote {} and {} in {:.2}s",
        report.samples_csv.display(),
        report.summary_json.display(),
        report.elapsed_seconds
    );
    if report.gate_failed {
        eprintln!("statistical gate failed (see summary.json)");
        return Ok(ExitCode::from(3));
    }
    Ok(ExitCode::SUCCESS)
}

fn parse_target(text: &str) -> anyhow::Result<MomentTarget> {
    let t = match text {
        "lambda1" => MomentTarget::Lambda1,
        "lambda2" => MomentTarget::Lambda2,
        "lambda3" => MomentTarget::Lambda3,
        "trace-a" => MomentTarget::TraceA,
        "trace-b" => MomentTarget::TraceB,
        "trace-c" => MomentTarget::TraceC,
        "entry-a" => MomentTarget::EntryA,
        "entry-b2" => MomentTarget::EntryB2,
        "entry-c2" => MomentTarget::EntryC2,
        other => {
            return Err(ConfigError::Invalid(format!("unknown oracle target `{other}`")).into());
        }
    };
    Ok(t)
}
