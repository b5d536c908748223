//! `cmsf`: run the filtering pipelines over a recorded bundle, score predictions,
//! render overlays and generate the synthetic fixture.

mod eval;
mod output;
mod render;
mod run;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{ArgAction, Parser, Subcommand};
use cmsf_core::evaluation::DEFAULT_BETA_SQ;
use cmsf_core::fixtures::DEFAULT_SEED;
use cmsf_core::{Split, Variant};

#[derive(Debug, Parser)]
#[command(name = "cmsf", version, about = "Training-free audio-visual segmentation by cross-modality filtering")]
struct Cli {
    /// Increase diagnostic output (repeatable).
    #[arg(short, long, action = ArgAction::Count, global = true)]
    verbose: u8,

    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Run one pipeline variant over a dataset split using a recorded bundle.
    Run(RunArgs),
    /// Score prediction directories against ground truth.
    Eval(EvalArgs),
    /// Alpha-blend a mask over an image.
    Render(RenderArgs),
    /// Write the synthetic fixture bundle and mini dataset.
    MakeFixtures(MakeFixturesArgs),
}

#[derive(Debug, clap::Args)]
pub struct RunArgs {
    #[arg(long)]
    pub bundle: PathBuf,
    #[arg(long)]
    pub dataset: PathBuf,
    #[arg(long)]
    pub split: Split,
    #[arg(long, value_parser = parse_variant)]
    pub variant: Variant,
    /// JSON file with pipeline thresholds; omitted fields keep their defaults.
    #[arg(long)]
    pub config: Option<PathBuf>,
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Debug, clap::Args)]
pub struct EvalArgs {
    /// Output directory of a `run` (repeatable).
    #[arg(long, required = true)]
    pub pred: Vec<PathBuf>,
    #[arg(long)]
    pub dataset: PathBuf,
    /// Split of predictions that carry no run manifest; must agree with those that do.
    #[arg(long)]
    pub split: Option<Split>,
    #[arg(long, default_value_t = DEFAULT_BETA_SQ)]
    pub beta_sq: f64,
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Debug, clap::Args)]
pub struct RenderArgs {
    #[arg(long)]
    pub image: PathBuf,
    #[arg(long)]
    pub mask: PathBuf,
    /// Output PNG path.
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Debug, clap::Args)]
pub struct MakeFixturesArgs {
    #[arg(long)]
    pub out: PathBuf,
    #[arg(long, default_value_t = DEFAULT_SEED)]
    pub seed: u64,
}

fn parse_variant(s: &str) -> Result<Variant, String> {
    s.parse().map_err(|e: cmsf_core::CmsfError| e.to_string())
}

fn main() -> ExitCode {
    // Usage errors exit with 2 from inside `parse`.
    let cli = Cli::parse();
    let level = match cli.verbose {
        0 => log::LevelFilter::Warn,
        1 => log::LevelFilter::Info,
        _ => log::LevelFilter::Debug,
    };
    env_logger::Builder::new().filter_level(level).format_timestamp(None).init();

    let result = match cli.command {
        Command::Run(a) => run::cmd_run(&a),
        Command::Eval(a) => eval::cmd_eval(&a),
        Command::Render(a) => render::cmd_render(&a),
        Command::MakeFixtures(a) => cmsf_core::fixtures::make_fixtures(&a.out, a.seed)
            .map(|_| ())
            .map_err(Into::into),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}
