use std::io::{self, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::Result;
use clap::{Parser, Subcommand, ValueEnum};
use socialai_cli::{export, llm_eval, load_tree, play, replay, run, sample, ExportFormat, PolicyKind, RunConfig};
use socialai_core::bonuses::{BonusKind, BonusParams};

#[derive(Parser)]
#[command(name = "socialai", version, about = "Social grid-world environments: sample, run, replay, evaluate, export")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Clone, Copy, ValueEnum)]
enum BonusArg {
    Cb,
    Cbl,
    None,
}

#[derive(Subcommand)]
enum Cmd {
    /// Run episodes with a scripted policy.
    Run {
        /// Shipped tree name or path to a tree JSON file.
        #[arg(long)]
        tree: String,
        #[arg(long, default_value_t = 100)]
        episodes: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, value_enum, default_value = "oracle")]
        policy: PolicyKind,
        #[arg(long, value_enum, default_value = "none")]
        bonus: BonusArg,
        #[arg(long, default_value_t = 1.0)]
        bonus_t: f64,
        #[arg(long, default_value_t = 1.0)]
        bonus_c: f64,
        #[arg(long, default_value_t = 2.0)]
        bonus_m: f64,
        /// Output directory for trajectories and the summary.
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, default_value_t = 1)]
        jobs: usize,
    },
    /// Play one episode from the terminal.
    Play {
        #[arg(long)]
        tree: String,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Save the trajectory here on exit.
        #[arg(long)]
        save: Option<PathBuf>,
    },
    /// Evaluate a language-model provider on a fixed test set.
    LlmEval {
        /// asocialbox, colorboxes or colorboxes-gen.
        testset: String,
        /// http, mock:oracle, mock:garbage, mock:random[:SEED] or mock:const:TEXT.
        #[arg(long, default_value = "http")]
        provider: String,
        #[arg(long)]
        history: Option<usize>,
        #[arg(long)]
        budget: Option<usize>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Render a recorded trajectory.
    Export {
        file: PathBuf,
        #[arg(long, value_enum, default_value = "transcript")]
        format: ExportFormat,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Check that a recorded trajectory replays identically.
    Replay { file: PathBuf },
    /// Print sampled parameter sets, one JSON object per line.
    Sample {
        #[arg(long)]
        tree: String,
        #[arg(long, default_value_t = 10)]
        n: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

fn write_out(out: Option<PathBuf>, text: &str) -> Result<()> {
    match out {
        Some(p) => std::fs::write(p, text)?,
        None => io::stdout().write_all(text.as_bytes())?,
    }
    Ok(())
}

fn main_inner(cli: Cli) -> Result<bool> {
    match cli.cmd {
        Cmd::Run { tree, episodes, seed, policy, bonus, bonus_t, bonus_c, bonus_m, out, jobs } => {
            let cfg = RunConfig {
                tree: load_tree(&tree)?,
                episodes,
                seed,
                policy,
                bonus: match bonus {
                    BonusArg::Cb => BonusKind::Cb,
                    BonusArg::Cbl => BonusKind::Cbl,
                    BonusArg::None => BonusKind::None,
                },
                bonus_params: BonusParams::new(bonus_t, bonus_c, bonus_m)?,
                jobs,
            };
            let s = run(&cfg, out.as_deref())?;
            println!(
                "episodes {} success_rate {:.4} mean_reward {:.4} mean_steps {:.2} bonus_total {:.4}",
                s.episodes, s.success_rate, s.mean_reward, s.mean_steps, s.bonus_total
            );
        }
        Cmd::Play { tree, seed, save } => {
            let set = sample(&load_tree(&tree)?, 1, seed).remove(0);
            println!("{}", serde_json::to_string(&set)?);
            println!("keys: w forward, a left, d right, t toggle, n no-op, x done, s T N [KEY] speak, q quit");
            play(&set, seed, io::stdin().lock(), io::stdout(), save)?;
        }
        Cmd::LlmEval { testset, provider, history, budget, out } => {
            let r = llm_eval(&testset, &provider, history, budget)?;
            eprintln!(
                "{} {}: {}/{} successes, {} errored, no_op fraction {:.3}",
                r.testset, r.provider, r.successes, r.evaluated, r.errored, r.no_op_fraction
            );
            write_out(out, &(serde_json::to_string_pretty(&r)? + "\n"))?;
        }
        Cmd::Export { file, format, out } => write_out(out, &export(&file, format)?)?,
        Cmd::Replay { file } => {
            let ok = replay(&file)?;
            println!("{}", if ok { "replay identical" } else { "replay differs" });
            return Ok(ok);
        }
        Cmd::Sample { tree, n, seed } => {
            for set in sample(&load_tree(&tree)?, n, seed) {
                println!("{}", serde_json::to_string(&set)?);
            }
        }
    }
    Ok(true)
}

fn main() -> ExitCode {
    match main_inner(Cli::parse()) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::FAILURE,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}
