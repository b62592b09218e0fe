use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use fda_anomaly::io::RunConfig;
use fda_anomaly::pipeline;
use fda_anomaly::{Embedding, Method, OutlyingnessMode};

#[derive(Parser)]
#[command(name = "fda-anomaly", version, about = "Frame-level video anomaly detection on reconstruction residuals")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Train the reconstruction model on the training videos
    Fit(RunArgs),
    /// Write FDAR residual tensors for the test videos
    Residuals(RunArgs),
    /// Embed residuals and flag anomalous frames
    Detect(RunArgs),
    /// Score detections against the label files
    Evaluate(RunArgs),
    /// Export MS-Plot points as CSV and SVG
    Plot(RunArgs),
    /// Run fit, residuals, detect, evaluate and plot in order
    Run(RunArgs),
    /// Generate the seeded synthetic video and contamination sample
    Synth(SynthArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum MethodArg {
    Msplot,
    Fbplot,
    Tvdmss,
    Ed,
    Og,
}

impl From<MethodArg> for Method {
    fn from(m: MethodArg) -> Self {
        match m {
            MethodArg::Msplot => Method::MsPlot,
            MethodArg::Fbplot => Method::FbPlot,
            MethodArg::Tvdmss => Method::Tvdmss,
            MethodArg::Ed => Method::ExtremalDepth,
            MethodArg::Og => Method::Outliergram,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum ModeArg {
    /// Unscaled absolute deviation from the pointwise median
    Abs,
    /// Signed deviation scaled by the pointwise MAD
    Signed,
}

#[derive(Args)]
struct RunArgs {
    /// JSON run configuration
    #[arg(long)]
    config: PathBuf,
    /// Output directory
    #[arg(long, default_value = "fda-out")]
    out: PathBuf,
    #[arg(long, value_enum)]
    method: Option<MethodArg>,
    #[arg(long, value_enum)]
    mode: Option<ModeArg>,
    /// Block grid size, or "full" for one point per pixel
    #[arg(long)]
    grid: Option<String>,
    /// Tail probability of the robust-distance cutoff
    #[arg(long)]
    tail_prob: Option<f64>,
    #[arg(long)]
    seed: Option<u64>,
}

#[derive(Args)]
struct SynthArgs {
    #[arg(long, default_value = "fda-synth")]
    out: PathBuf,
    #[arg(long, default_value_t = 1)]
    seed: u64,
}

fn parse_grid(text: &str) -> Result<Embedding> {
    if text == "full" {
        return Ok(Embedding::Flatten);
    }
    let g: usize = text
        .parse()
        .with_context(|| format!("--grid expects a positive integer or \"full\", got {text:?}"))?;
    if g == 0 {
        bail!("--grid must be positive");
    }
    Ok(Embedding::Blocks(g))
}

fn load_config(args: &RunArgs) -> Result<RunConfig> {
    let mut cfg = RunConfig::load(&args.config)?;
    if let Some(m) = args.method {
        cfg.detector.method = m.into();
    }
    if let Some(m) = args.mode {
        cfg.detector.mode = match m {
            ModeArg::Abs => OutlyingnessMode::PaperAbs,
            ModeArg::Signed => OutlyingnessMode::SignedScaled,
        };
    }
    if let Some(g) = &args.grid {
        cfg.embedding = parse_grid(g)?;
    }
    if let Some(q) = args.tail_prob {
        cfg.detector.cutoff.tail_prob = q;
    }
    if let Some(s) = args.seed {
        cfg.seed = s;
    }
    cfg.validate()?;
    Ok(cfg)
}

fn configure_threads() -> Result<()> {
    let Ok(text) = std::env::var("FDA_ANOMALY_THREADS") else {
        return Ok(());
    };
    let n: usize = text
        .trim()
        .parse()
        .ok()
        .filter(|&n| n > 0)
        .with_context(|| format!("FDA_ANOMALY_THREADS must be a positive integer, got {text:?}"))?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build_global()
        .context("configuring the thread pool")?;
    Ok(())
}

fn print_paths(what: &str, paths: &[PathBuf]) {
    for p in paths {
        eprintln!("{what} {}", p.display());
    }
}

fn run(command: Command) -> Result<()> {
    match command {
        Command::Synth(args) => {
            let cfg = pipeline::write_synthetic_suite(&args.out, args.seed)?;
            println!("{}", cfg.display());
        }
        Command::Fit(args) => {
            let cfg = load_config(&args)?;
            let (_, report) = pipeline::fit_stage(&cfg, &args.out)?;
            let last = report.pass_mse.last().copied().unwrap_or_default();
            eprintln!("model {} (training mse {last:.6e})", pipeline::model_path(&args.out).display());
        }
        Command::Residuals(args) => {
            let cfg = load_config(&args)?;
            print_paths("residuals", &pipeline::residual_stage(&cfg, &args.out)?);
        }
        Command::Detect(args) => {
            let cfg = load_config(&args)?;
            let results = pipeline::detect_stage(&cfg, &args.out)?;
            for (v, r) in cfg.dataset.test_videos.iter().zip(&results) {
                let note = if r.exact_fit { " (exact fit)" } else { "" };
                eprintln!(
                    "{}: {} of {} frames flagged{note}",
                    v.display_name(),
                    r.n_flagged(),
                    r.labels.len()
                );
            }
        }
        Command::Evaluate(args) => {
            let cfg = load_config(&args)?;
            let report = pipeline::evaluate_stage(&cfg, &args.out)?;
            print!("{}", report.to_csv());
        }
        Command::Plot(args) => {
            let cfg = load_config(&args)?;
            print_paths("plot", &pipeline::plot_stage(&cfg, &args.out)?);
        }
        Command::Run(args) => {
            let cfg = load_config(&args)?;
            let report = pipeline::run_all(&cfg, &args.out)?;
            print!("{}", report.to_csv());
            report_location(&args.out);
        }
    }
    Ok(())
}

fn report_location(out: &Path) {
    eprintln!("report {}", out.join("report.json").display());
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match configure_threads().and_then(|()| run(cli.command)) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}
