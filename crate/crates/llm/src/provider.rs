use std::time::Duration;

use rand::Rng as _;
use serde_json::{json, Value};
use socialai_core::baselines::{oracle_action, random_text_action};
use socialai_core::envs::EnvParams;
use socialai_core::episode::Episode;
use socialai_core::rng::{self, Rng};
use socialai_core::textworld::action_name;

use crate::{Error, Result};

pub const ENV_BASE_URL: &str = "SOCIALAI_LLM_BASE_URL";
pub const ENV_API_KEY: &str = "SOCIALAI_LLM_API_KEY";
pub const ENV_MODEL: &str = "SOCIALAI_LLM_MODEL";
pub const ENV_BUDGET: &str = "SOCIALAI_LLM_BUDGET";
pub const ENV_CONTEXT: &str = "SOCIALAI_LLM_CONTEXT_BYTES";

pub trait CompletionProvider {
    fn complete(&mut self, prompt: &str, budget: usize) -> Result<String>;

    /// Largest prompt the provider accepts, in bytes.
    fn context_limit(&self) -> Option<usize> {
        None
    }
}

/// Replays a fixed list of completions, then answers with an empty string.
#[derive(Clone, Debug)]
pub struct Scripted {
    replies: std::vec::IntoIter<String>,
}

impl Scripted {
    pub fn new(replies: Vec<String>) -> Self {
        Self { replies: replies.into_iter() }
    }

    /// Completions that reproduce the oracle's actions on one episode.
    pub fn oracle(params: &EnvParams, seed: u64, steps: u32) -> Result<Self> {
        let mut ep = Episode::new(params, seed)?;
        let mut replies = Vec::new();
        for _ in 0..steps {
            if ep.is_done() {
                break;
            }
            let a = oracle_action(ep.env());
            replies.push(format!(" {}\n", action_name(a.primitive)));
            ep.step(&a)?;
        }
        Ok(Self::new(replies))
    }
}

impl CompletionProvider for Scripted {
    fn complete(&mut self, _prompt: &str, _budget: usize) -> Result<String> {
        Ok(self.replies.next().unwrap_or_default())
    }
}

#[derive(Clone, Debug)]
pub struct Constant(pub String);

impl CompletionProvider for Constant {
    fn complete(&mut self, _prompt: &str, _budget: usize) -> Result<String> {
        Ok(self.0.clone())
    }
}

/// Names a uniformly random text action each call.
#[derive(Clone, Debug)]
pub struct RandomText {
    rng: Rng,
}

impl RandomText {
    pub fn new(seed: u64) -> Self {
        Self { rng: rng::stream(seed, rng::tag::POLICY) }
    }
}

impl CompletionProvider for RandomText {
    fn complete(&mut self, _prompt: &str, _budget: usize) -> Result<String> {
        let p = random_text_action(&mut self.rng);
        let pad = if self.rng.gen_bool(0.5) { " " } else { "" };
        Ok(format!("{pad}{}", action_name(p)))
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HttpConfig {
    pub base_url: String,
    pub api_key: Option<String>,
    pub model: String,
    pub context_limit: Option<usize>,
}

impl HttpConfig {
    pub fn from_env() -> Result<Self> {
        let var = |k: &str| std::env::var(k).ok().filter(|v| !v.is_empty());
        let base_url = var(ENV_BASE_URL).ok_or_else(|| Error::Config(format!("{ENV_BASE_URL} is not set")))?;
        let model = var(ENV_MODEL).ok_or_else(|| Error::Config(format!("{ENV_MODEL} is not set")))?;
        let context_limit = match var(ENV_CONTEXT) {
            Some(v) => Some(v.parse().map_err(|_| Error::Config(format!("{ENV_CONTEXT}: not a number: {v}")))?),
            None => None,
        };
        Ok(Self { base_url, api_key: var(ENV_API_KEY), model, context_limit })
    }
}

/// Generation budget from the environment, if set.
pub fn budget_from_env() -> Result<Option<usize>> {
    match std::env::var(ENV_BUDGET) {
        Ok(v) if !v.is_empty() => {
            v.parse().map(Some).map_err(|_| Error::Config(format!("{ENV_BUDGET}: not a number: {v}")))
        }
        _ => Ok(None),
    }
}

/// Client for an OpenAI-style `/completions` endpoint.
pub struct Http {
    cfg: HttpConfig,
    agent: ureq::Agent,
}

impl Http {
    pub fn new(cfg: HttpConfig) -> Self {
        let agent = ureq::Agent::config_builder().timeout_global(Some(Duration::from_secs(120))).build().into();
        Self { cfg, agent }
    }
}

fn completion_text(v: &Value) -> Option<String> {
    let choice = v.get("choices")?.get(0)?;
    choice
        .get("text")
        .or_else(|| choice.get("message").and_then(|m| m.get("content")))
        .and_then(Value::as_str)
        .map(str::to_string)
}

impl CompletionProvider for Http {
    fn complete(&mut self, prompt: &str, budget: usize) -> Result<String> {
        let url = format!("{}/completions", self.cfg.base_url.trim_end_matches('/'));
        let body = json!({
            "model": self.cfg.model,
            "prompt": prompt,
            "max_tokens": budget,
            "temperature": 0,
        });
        let mut req = self.agent.post(&url);
        if let Some(key) = &self.cfg.api_key {
            req = req.header("Authorization", &format!("Bearer {key}"));
        }
        let mut resp = req.send_json(&body).map_err(|e| Error::Provider(e.to_string()))?;
        let v: Value = resp.body_mut().read_json().map_err(|e| Error::Provider(e.to_string()))?;
        completion_text(&v).ok_or_else(|| Error::Provider(format!("unexpected response: {v}")))
    }

    fn context_limit(&self) -> Option<usize> {
        self.cfg.context_limit
    }
}

/// Provider selection, instantiated once per evaluated episode.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ProviderSpec {
    MockOracle,
    MockConstant(String),
    MockRandom(u64),
    Http(HttpConfig),
}

impl ProviderSpec {
    /// `mock:oracle`, `mock:garbage`, `mock:const:TEXT`, `mock:random[:SEED]`
    /// or `http` (configured from the environment).
    pub fn parse(s: &str) -> Result<Self> {
        match s {
            "http" => return Ok(Self::Http(HttpConfig::from_env()?)),
            "mock:oracle" => return Ok(Self::MockOracle),
            "mock:garbage" => return Ok(Self::MockConstant("xyz".into())),
            "mock:random" => return Ok(Self::MockRandom(0)),
            _ => {}
        }
        if let Some(text) = s.strip_prefix("mock:const:") {
            return Ok(Self::MockConstant(text.into()));
        }
        if let Some(seed) = s.strip_prefix("mock:random:") {
            let seed = seed.parse().map_err(|_| Error::Config(format!("bad random seed: {seed}")))?;
            return Ok(Self::MockRandom(seed));
        }
        Err(Error::Config(format!("unknown provider {s}")))
    }

    pub fn name(&self) -> String {
        match self {
            Self::MockOracle => "mock:oracle".into(),
            Self::MockConstant(t) => format!("mock:const:{t}"),
            Self::MockRandom(s) => format!("mock:random:{s}"),
            Self::Http(c) => format!("http:{}", c.model),
        }
    }

    pub fn instantiate(&self, params: &EnvParams, seed: u64, step_limit: u32) -> Result<Box<dyn CompletionProvider>> {
        Ok(match self {
            Self::MockOracle => Box::new(Scripted::oracle(params, seed, step_limit)?),
            Self::MockConstant(t) => Box::new(Constant(t.clone())),
            Self::MockRandom(s) => Box::new(RandomText::new(rng::derive(*s, seed))),
            Self::Http(c) => Box::new(Http::new(c.clone())),
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_specs() {
        assert_eq!(ProviderSpec::parse("mock:oracle").unwrap(), ProviderSpec::MockOracle);
        assert_eq!(ProviderSpec::parse("mock:garbage").unwrap(), ProviderSpec::MockConstant("xyz".into()));
        assert_eq!(ProviderSpec::parse("mock:random:7").unwrap(), ProviderSpec::MockRandom(7));
        assert_eq!(
            ProviderSpec::parse("mock:const:turn left").unwrap(),
            ProviderSpec::MockConstant("turn left".into())
        );
        assert!(ProviderSpec::parse("gpt").is_err());
    }

    #[test]
    fn response_shapes() {
        assert_eq!(completion_text(&json!({"choices": [{"text": " toggle"}]})).unwrap(), " toggle");
        let chat = json!({"choices": [{"message": {"content": "turn left"}}]});
        assert_eq!(completion_text(&chat).unwrap(), "turn left");
        assert!(completion_text(&json!({})).is_none());
    }
}
