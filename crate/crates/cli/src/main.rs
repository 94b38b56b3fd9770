use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use tsphen_cli::{commands, CliError, ProjectConfig};

#[derive(Parser)]
#[command(name = "tsphen", version, about = "Time-series phenotyping pipeline")]
struct Cli {
    /// Project config file (`key = value` lines)
    #[arg(long, short, global = true)]
    config: Option<PathBuf>,
    /// Worker threads (default: all cores)
    #[arg(long, global = true)]
    threads: Option<usize>,
    #[command(flatten)]
    overrides: Overrides,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Overrides {
    #[arg(long, global = true)]
    input: Option<PathBuf>,
    #[arg(long, global = true)]
    labels: Option<PathBuf>,
    #[arg(long, global = true)]
    catalog: Option<PathBuf>,
    #[arg(long, short, global = true)]
    output: Option<PathBuf>,
    #[arg(long, global = true)]
    n_perm: Option<usize>,
    #[arg(long, global = true)]
    k_folds: Option<usize>,
    #[arg(long, global = true)]
    seed: Option<u64>,
    #[arg(long, global = true)]
    regularization: Option<f64>,
    #[arg(long, global = true)]
    top_k: Option<usize>,
    /// Fit the normalization on training folds only
    #[arg(long, global = true)]
    fold_normalization: Option<bool>,
}

#[derive(Subcommand)]
enum Command {
    /// Read and validate the inputs; writes nothing
    IngestCheck,
    /// Extract the feature matrix
    Compute,
    /// Filter, rank, normalize, classify and project
    Analyze,
    /// Summarize the analysis
    Report,
}

fn config(cli: &Cli) -> Result<ProjectConfig, CliError> {
    let mut cfg = match &cli.config {
        Some(path) => ProjectConfig::load(path)?,
        None => ProjectConfig::default(),
    };
    let o = &cli.overrides;
    if let Some(v) = &o.input {
        cfg.input = Some(v.clone());
    }
    if let Some(v) = &o.labels {
        cfg.labels = Some(v.clone());
    }
    if let Some(v) = &o.catalog {
        cfg.catalog = Some(v.clone());
    }
    if let Some(v) = &o.output {
        cfg.output = v.clone();
    }
    cfg.n_perm = o.n_perm.unwrap_or(cfg.n_perm);
    cfg.k_folds = o.k_folds.unwrap_or(cfg.k_folds);
    cfg.seed = o.seed.unwrap_or(cfg.seed);
    cfg.regularization = o.regularization.unwrap_or(cfg.regularization);
    cfg.top_k = o.top_k.unwrap_or(cfg.top_k);
    cfg.fold_normalization = o.fold_normalization.unwrap_or(cfg.fold_normalization);
    cfg.validate()?;
    Ok(cfg)
}

fn run(cli: &Cli) -> Result<String, CliError> {
    if let Some(n) = cli.threads {
        if n == 0 {
            return Err(CliError::Config("--threads must be positive".into()));
        }
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .map_err(|e| CliError::Config(format!("thread pool: {e}")))?;
    }
    let cfg = config(cli)?;
    match cli.command {
        Command::IngestCheck => commands::ingest_check(&cfg),
        Command::Compute => commands::compute(&cfg),
        Command::Analyze => commands::analyze(&cfg),
        Command::Report => commands::report(&cfg),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(text) => {
            print!("{text}");
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
