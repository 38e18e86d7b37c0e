use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use qnil_cli::{run, ExperimentConfig, ExperimentKind};

/// Numerical experiments on rank-one perturbations of nilpotent operators.
#[derive(Parser)]
#[command(name = "qnil", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Resolvent-norm grid, component counts and contour SVG.
    Pseudospec(RunArgs),
    /// Trichotomy classification over an alpha grid.
    #[command(name = "perturb_sweep")]
    PerturbSweep(RunArgs),
    /// Inclusion and disconnectedness checks on T~ + alpha F and its adjoint reading.
    Probe(RunArgs),
    /// Separating curves, the 2/t < delta chain and semicontinuity trials.
    Pipeline(RunArgs),
    /// Annulus zero counts against the explicit bound.
    Zerocount(RunArgs),
    /// Search for a resolvent-bound certificate on a separating curve.
    Certificate(RunArgs),
    /// Parse and check a config without running it.
    Validate(ValidateArgs),
}

#[derive(Args)]
struct RunArgs {
    /// Experiment config, or a manifest from an earlier run.
    #[arg(long)]
    config: PathBuf,
    /// Output directory (overrides `output_dir` in the config).
    #[arg(long)]
    out: Option<PathBuf>,
    /// Worker threads.
    #[arg(long, env = "QNIL_THREADS")]
    threads: Option<usize>,
    /// Seed for randomized experiments (overrides the config).
    #[arg(long)]
    seed: Option<u64>,
}

#[derive(Args)]
struct ValidateArgs {
    #[arg(long)]
    config: PathBuf,
    #[arg(long)]
    seed: Option<u64>,
}

fn load(path: &Path, seed: Option<u64>) -> Result<ExperimentConfig, qnil_cli::ConfigError> {
    ExperimentConfig::load_with_seed(path, seed)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (kind, args) = match cli.command {
        Command::Validate(v) => {
            return match load(&v.config, v.seed) {
                Ok(cfg) => {
                    println!("ok: {} config for a {:?} model of dimension {}", cfg.experiment, cfg.gallery.kind, cfg.gallery.dim);
                    ExitCode::SUCCESS
                }
                Err(e) => {
                    eprintln!("{e}");
                    ExitCode::from(2)
                }
            };
        }
        Command::Pseudospec(a) => (ExperimentKind::Pseudospec, a),
        Command::PerturbSweep(a) => (ExperimentKind::PerturbSweep, a),
        Command::Probe(a) => (ExperimentKind::Probe, a),
        Command::Pipeline(a) => (ExperimentKind::Pipeline, a),
        Command::Zerocount(a) => (ExperimentKind::Zerocount, a),
        Command::Certificate(a) => (ExperimentKind::Certificate, a),
    };
    let cfg = match load(&args.config, args.seed) {
        Ok(cfg) => cfg,
        Err(e) => {
            eprintln!("{e}");
            return ExitCode::from(2);
        }
    };
    if cfg.experiment != kind {
        eprintln!("config error: {} describes a `{}` experiment, not `{kind}`", args.config.display(), cfg.experiment);
        return ExitCode::from(2);
    }
    let Some(out) = args.out.clone().or_else(|| cfg.output_dir.clone()) else {
        eprintln!("config error (key `output_dir`): no output directory; set `output_dir` or pass --out");
        return ExitCode::from(2);
    };
    if let Some(n) = args.threads {
        if n == 0 {
            eprintln!("config error: --threads must be positive");
            return ExitCode::from(2);
        }
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(n).build_global() {
            eprintln!("cannot configure {n} threads: {e}");
            return ExitCode::from(2);
        }
    }
    match run(&cfg, &out) {
        Ok(manifest) => {
            if let Ok(summary) = std::fs::read_to_string(out.join("summary.txt")) {
                print!("{summary}");
            }
            println!("wrote {} artifact(s) to {} in {} ms", manifest.artifacts.len() + 1, out.display(), manifest.timing.elapsed_ms);
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("{e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
