use serde::{Deserialize, Serialize};
use socialai_core::envs::EnvParams;
use socialai_core::episode::Episode;
use socialai_core::grid::primitive;
use socialai_core::textworld::{act_line, action_name, render_obs, NEW_EPISODE, SUCCESS};

use crate::prompt::{build_prompt, match_action, truncate_words, PastStep, PromptConfig};
use crate::provider::{CompletionProvider, ProviderSpec};
use crate::testset::TestSet;
use crate::Result;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EpisodeRecord {
    pub seed: u64,
    pub generations: Vec<String>,
    pub actions: Vec<String>,
    pub success: bool,
    /// Provider failure; such episodes are left out of the success rate.
    pub error: Option<String>,
    pub transcript: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EvalReport {
    pub testset: String,
    pub provider: String,
    pub params: EnvParams,
    pub step_limit: u32,
    pub evaluated: usize,
    pub successes: usize,
    pub errored: usize,
    pub success_rate: f64,
    pub no_op_fraction: f64,
    pub episodes: Vec<EpisodeRecord>,
}

pub fn run_episode(
    spec: &ProviderSpec,
    cfg: &PromptConfig,
    params: &EnvParams,
    seed: u64,
    step_limit: u32,
) -> Result<EpisodeRecord> {
    let mut provider = spec.instantiate(params, seed, step_limit)?;
    run_episode_with(provider.as_mut(), cfg, params, seed, step_limit)
}

/// Play one episode with the prompt, complete, match, step loop.
pub fn run_episode_with(
    provider: &mut dyn CompletionProvider,
    cfg: &PromptConfig,
    params: &EnvParams,
    seed: u64,
    step_limit: u32,
) -> Result<EpisodeRecord> {
    let mut ep = Episode::new(params, seed)?;
    let mut obs = render_obs(&ep.observation())?;
    let mut lines = vec![NEW_EPISODE.to_string(), obs.clone()];
    let mut history: Vec<PastStep> = Vec::new();
    let mut rec = EpisodeRecord {
        seed,
        generations: Vec::new(),
        actions: Vec::new(),
        success: false,
        error: None,
        transcript: String::new(),
    };
    for _ in 0..step_limit {
        if ep.is_done() {
            break;
        }
        let prompt = build_prompt(cfg, &history, &obs, provider.context_limit());
        let generated = match provider.complete(&prompt, cfg.budget) {
            Ok(g) => truncate_words(&g, cfg.budget),
            Err(e) => {
                rec.error = Some(e.to_string());
                break;
            }
        };
        let action = match_action(&generated);
        let r = ep.step(&action)?;
        rec.generations.push(generated);
        rec.actions.push(action_name(action.primitive).to_string());
        lines.push(act_line(action.primitive));
        let next = render_obs(&r.obs)?;
        lines.push(next.clone());
        history.push(PastStep { obs: std::mem::replace(&mut obs, next), action: action.primitive });
        if r.info.success {
            rec.success = true;
            lines.push(SUCCESS.to_string());
            break;
        }
    }
    rec.transcript = lines.join("\n") + "\n";
    Ok(rec)
}

/// Evaluate a provider on every seed of a test set.
pub fn run_eval(spec: &ProviderSpec, testset: &TestSet, cfg: &PromptConfig) -> Result<EvalReport> {
    let params = testset.params()?;
    let episodes = testset
        .seeds
        .iter()
        .map(|&s| run_episode(spec, cfg, &params, s, testset.step_limit))
        .collect::<Result<Vec<_>>>()?;
    Ok(EvalReport::new(testset, spec.name(), params, episodes))
}

impl EvalReport {
    pub fn new(testset: &TestSet, provider: String, params: EnvParams, episodes: Vec<EpisodeRecord>) -> Self {
        let ok: Vec<_> = episodes.iter().filter(|e| e.error.is_none()).collect();
        let successes = ok.iter().filter(|e| e.success).count();
        let n_actions: usize = ok.iter().map(|e| e.actions.len()).sum();
        let no_ops = ok.iter().flat_map(|e| &e.actions).filter(|a| *a == action_name(primitive::NO_OP)).count();
        EvalReport {
            testset: testset.name.clone(),
            provider,
            params,
            step_limit: testset.step_limit,
            evaluated: ok.len(),
            successes,
            errored: episodes.len() - ok.len(),
            success_rate: if ok.is_empty() { 0.0 } else { successes as f64 / ok.len() as f64 },
            no_op_fraction: if n_actions == 0 { 0.0 } else { no_ops as f64 / n_actions as f64 },
            episodes,
        }
    }
}

/// Prompt configuration with the test set's in-context block and defaults.
pub fn default_config(testset: &TestSet) -> Result<PromptConfig> {
    Ok(PromptConfig::new(testset.in_context_text()?))
}
