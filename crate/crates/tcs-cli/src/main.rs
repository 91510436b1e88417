//! `tcs` — multi-objective test case selection experiments from the command
//! line: run optimizers, evaluate result directories, and generate synthetic
//! benchmark instances.

mod evaluate;
mod manifest;
mod run;
mod synth;

use clap::{Parser, Subcommand};

#[derive(Parser)]
#[command(
    name = "tcs",
    version,
    about = "Multi-objective test case selection: optimize, evaluate, synthesize"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run optimizer configurations against an instance, one result file per
    /// (algorithm, seed) pair.
    Run(run::RunArgs),
    /// Evaluate a directory of result files: reference front, quality
    /// indicators, and statistical comparison between algorithms.
    Evaluate(evaluate::EvaluateArgs),
    /// Generate a synthetic coverage instance (and optionally a fault
    /// matrix) with a fixed seed.
    Synth(synth::SynthArgs),
}

fn main() {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn"))
        .format_timestamp(None)
        .init();
    let cli = Cli::parse();
    let outcome = match cli.command {
        Command::Run(args) => run::cmd_run(&args),
        Command::Evaluate(args) => evaluate::cmd_evaluate(&args),
        Command::Synth(args) => synth::cmd_synth(&args),
    };
    if let Err(err) = outcome {
        eprintln!("error: {err:#}");
        std::process::exit(2);
    }
}
