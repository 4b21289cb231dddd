//! Implementation of the `socialai` command-line tool.

use std::fs::{self, File};
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};

use anyhow::{anyhow, bail, Context, Result};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use socialai_core::baselines::{Guesser, Oracle, Policy, RandomPolicy};
use socialai_core::bonuses::{BonusKind, BonusParams, EpisodicCounts};
use socialai_core::episode::{AgentAction, Episode, Trajectory};
use socialai_core::grid::primitive;
use socialai_core::lang::{Speaker, Utterance};
use socialai_core::param_tree::{self, ParamSet, ParamTree};
use socialai_core::rng;
use socialai_core::textworld::{render_obs, render_transcript};
use socialai_core::EnvParams;
use socialai_llm::{default_config, run_eval, EvalReport, ProviderSpec, TestSet};

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum, Serialize, Deserialize)]
pub enum PolicyKind {
    Oracle,
    Random,
    Guesser,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum ExportFormat {
    Transcript,
    Jsonl,
}

/// A shipped tree name or a path to a tree JSON file.
pub fn load_tree(arg: &str) -> Result<ParamTree> {
    if param_tree::SHIPPED.iter().any(|(n, _)| *n == arg) {
        return Ok(param_tree::shipped(arg)?);
    }
    ParamTree::load(arg).with_context(|| format!("loading tree {arg}"))
}

/// `n` parameter sets drawn top-down from the tree.
pub fn sample(tree: &ParamTree, n: usize, seed: u64) -> Vec<ParamSet> {
    let mut r = rng::stream(seed, rng::tag::SAMPLER);
    (0..n).map(|_| tree.sample(&mut r)).collect()
}

pub fn episode_seed(run_seed: u64, index: usize) -> u64 {
    rng::derive(run_seed, index as u64)
}

#[derive(Clone, Debug)]
pub struct RunConfig {
    pub tree: ParamTree,
    pub episodes: usize,
    pub seed: u64,
    pub policy: PolicyKind,
    pub bonus: BonusKind,
    pub bonus_params: BonusParams,
    pub jobs: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EpisodeSummary {
    pub index: usize,
    pub seed: u64,
    pub params: ParamSet,
    pub success: bool,
    pub steps: usize,
    pub reward: f64,
    pub bonus_total: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RunSummary {
    pub seed: u64,
    pub policy: PolicyKind,
    pub episodes: usize,
    pub success_rate: f64,
    pub mean_reward: f64,
    pub mean_steps: f64,
    pub bonus_total: f64,
    pub per_episode: Vec<EpisodeSummary>,
}

pub struct EpisodeOutput {
    pub summary: EpisodeSummary,
    pub trajectory: Trajectory,
    pub bonuses: Vec<f64>,
}

fn make_policy(kind: PolicyKind, params: &EnvParams, seed: u64) -> Result<Box<dyn Policy>> {
    Ok(match kind {
        PolicyKind::Oracle => Box::new(Oracle),
        PolicyKind::Random => Box::new(RandomPolicy::new(seed)),
        PolicyKind::Guesser => Box::new(Guesser::new(params, seed)?),
    })
}

/// Per-step exploration bonus of the new observation.
fn step_bonus(kind: BonusKind, counts: &mut EpisodicCounts, p: &BonusParams, ep: &Episode) -> f64 {
    let env = ep.env();
    match kind {
        BonusKind::None => 0.0,
        BonusKind::Cb => counts.cb(&ep.observation().view, p),
        BonusKind::Cbl => env
            .dialogue
            .entries()
            .iter()
            .filter(|e| e.speaker == Speaker::Peer && e.step == env.step)
            .map(|e| counts.cbl(&e.text, p))
            .sum(),
    }
}

pub fn run_one(cfg: &RunConfig, index: usize, params: &ParamSet) -> Result<EpisodeOutput> {
    let seed = episode_seed(cfg.seed, index);
    let mut ep = Episode::from_param_set(params, seed)?;
    let mut policy = make_policy(cfg.policy, &ep.env().params, seed)?;
    let mut counts = EpisodicCounts::new();
    let mut bonuses = Vec::new();
    while !ep.is_done() {
        let a = policy.act(ep.env())?;
        ep.step(&a)?;
        bonuses.push(step_bonus(cfg.bonus, &mut counts, &cfg.bonus_params, &ep));
    }
    let trajectory = ep.into_trajectory();
    let summary = EpisodeSummary {
        index,
        seed,
        params: params.clone(),
        success: trajectory.success(),
        steps: trajectory.steps.len(),
        reward: trajectory.total_reward(),
        bonus_total: bonuses.iter().sum(),
    };
    Ok(EpisodeOutput { summary, trajectory, bonuses })
}

/// Run `cfg.episodes` episodes; with `out`, write one trajectory file per
/// episode, bonus traces and `summary.json` there.
pub fn run(cfg: &RunConfig, out: Option<&Path>) -> Result<RunSummary> {
    let sets = sample(&cfg.tree, cfg.episodes, cfg.seed);
    let pool = rayon::ThreadPoolBuilder::new().num_threads(cfg.jobs.max(1)).build()?;
    let outputs: Vec<EpisodeOutput> =
        pool.install(|| sets.par_iter().enumerate().map(|(i, s)| run_one(cfg, i, s)).collect::<Result<_>>())?;
    let n = outputs.len().max(1) as f64;
    let per_episode: Vec<_> = outputs.iter().map(|o| o.summary.clone()).collect();
    let summary = RunSummary {
        seed: cfg.seed,
        policy: cfg.policy,
        episodes: outputs.len(),
        success_rate: per_episode.iter().filter(|e| e.success).count() as f64 / n,
        mean_reward: per_episode.iter().map(|e| e.reward).sum::<f64>() / n,
        mean_steps: per_episode.iter().map(|e| e.steps as f64).sum::<f64>() / n,
        bonus_total: per_episode.iter().map(|e| e.bonus_total).sum(),
        per_episode,
    };
    if let Some(dir) = out {
        fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
        for o in &outputs {
            let i = o.summary.index;
            let f = File::create(dir.join(format!("episode_{i:05}.jsonl")))?;
            o.trajectory.write_jsonl(BufWriter::new(f))?;
            if cfg.bonus != BonusKind::None {
                fs::write(dir.join(format!("bonus_{i:05}.json")), serde_json::to_string(&o.bonuses)?)?;
            }
        }
        fs::write(dir.join("summary.json"), serde_json::to_string_pretty(&summary)? + "\n")?;
    }
    Ok(summary)
}

pub fn read_trajectory(path: &Path) -> Result<Trajectory> {
    let f = File::open(path).with_context(|| format!("opening {}", path.display()))?;
    Ok(Trajectory::read_jsonl(BufReader::new(f))?)
}

pub fn export(path: &Path, format: ExportFormat) -> Result<String> {
    let t = read_trajectory(path)?;
    Ok(match format {
        ExportFormat::Transcript => render_transcript(&t)?,
        ExportFormat::Jsonl => t.to_jsonl(),
    })
}

/// Re-simulate a recorded trajectory; true when every step matches.
pub fn replay(path: &Path) -> Result<bool> {
    Ok(read_trajectory(path)?.verify()?)
}

pub fn llm_eval(testset: &str, provider: &str, history: Option<usize>, budget: Option<usize>) -> Result<EvalReport> {
    let ts = TestSet::shipped(testset)?;
    let spec = ProviderSpec::parse(provider)?;
    let mut cfg = default_config(&ts)?;
    if let Some(h) = history {
        if h == 0 {
            bail!("history must be at least 1");
        }
        cfg.history_steps = h;
    }
    if let Some(b) = budget.or(socialai_llm::provider::budget_from_env()?) {
        cfg.budget = b;
    }
    Ok(run_eval(&spec, &ts, &cfg)?)
}

/// Parse one line of `play` input into an action. `None` means quit.
///
/// Keys: `w` forward, `a` left, `d` right, `t` toggle, `n` or empty no-op,
/// `x` done, `q` quit, and `s TEMPLATE NOUN [KEY]` to speak while doing KEY.
pub fn parse_key(line: &str) -> Result<Option<AgentAction>> {
    let words: Vec<&str> = line.split_whitespace().collect();
    let prim = |k: &str| -> Result<u8> {
        Ok(match k {
            "w" => primitive::FORWARD,
            "a" => primitive::TURN_LEFT,
            "d" => primitive::TURN_RIGHT,
            "t" => primitive::TOGGLE,
            "n" => primitive::NO_OP,
            "x" => primitive::DONE,
            _ => bail!("unknown key {k}"),
        })
    };
    match words.as_slice() {
        [] => Ok(Some(AgentAction::new(primitive::NO_OP))),
        ["q"] => Ok(None),
        ["s", t, n, rest @ ..] => {
            let u = Utterance::new(t.parse()?, n.parse()?)?;
            let p = match rest {
                [] => primitive::NO_OP,
                [k] => prim(k)?,
                _ => bail!("too many words"),
            };
            Ok(Some(AgentAction::speak(p, u)))
        }
        [k] => Ok(Some(AgentAction::new(prim(k)?))),
        _ => Err(anyhow!("cannot parse {line:?}")),
    }
}

fn draw(ep: &Episode, out: &mut impl Write) -> Result<()> {
    writeln!(out, "{}", ep.env().render_ascii())?;
    writeln!(out, "{}", render_obs(&ep.observation())?)?;
    for e in ep.env().dialogue.entries() {
        writeln!(out, "  [{}] {:?}: {}", e.step, e.speaker, e.text)?;
    }
    Ok(())
}

/// Interactive session reading keys line by line.
pub fn play(
    params: &ParamSet,
    seed: u64,
    input: impl BufRead,
    mut out: impl Write,
    save: Option<PathBuf>,
) -> Result<Trajectory> {
    let mut ep = Episode::from_param_set(params, seed)?;
    draw(&ep, &mut out)?;
    for line in input.lines() {
        let line = line?;
        let action = match parse_key(&line) {
            Ok(Some(a)) => a,
            Ok(None) => break,
            Err(e) => {
                writeln!(out, "{e}")?;
                continue;
            }
        };
        let r = ep.step(&action)?;
        draw(&ep, &mut out)?;
        writeln!(out, "step {} reward {:.3} done {}", r.info.step, r.reward, r.done)?;
        if r.done {
            writeln!(out, "{}", if r.info.success { "Success!" } else { "Episode over." })?;
            break;
        }
    }
    let t = ep.into_trajectory();
    if let Some(p) = save {
        t.write_jsonl(BufWriter::new(File::create(&p)?))?;
        writeln!(out, "saved {}", p.display())?;
    }
    Ok(t)
}
