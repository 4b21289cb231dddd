use serde::{Deserialize, Serialize};
use socialai_core::baselines::oracle_action;
use socialai_core::envs::EnvParams;
use socialai_core::episode::Episode;
use socialai_core::param_tree;

use crate::{Error, Result};

pub const NAMES: [&str; 3] = ["asocialbox", "colorboxes", "colorboxes-gen"];

const MANIFESTS: [(&str, &str); 3] = [
    ("asocialbox", include_str!("../data/testsets/asocialbox.json")),
    ("colorboxes", include_str!("../data/testsets/colorboxes.json")),
    ("colorboxes-gen", include_str!("../data/testsets/colorboxes-gen.json")),
];

const IN_CONTEXT: [(&str, &str); 3] = [
    ("asocialbox.txt", include_str!("../data/in_context/asocialbox.txt")),
    ("colorboxes.txt", include_str!("../data/in_context/colorboxes.txt")),
    ("colorboxes_gen.txt", include_str!("../data/in_context/colorboxes_gen.txt")),
];

/// A fixed evaluation set: one environment configuration, a list of seeds,
/// the in-context examples shown to the model and the step limit.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct TestSet {
    pub name: String,
    /// Name of a shipped parameter tree with a single leaf.
    pub tree: String,
    pub in_context: String,
    pub step_limit: u32,
    pub seeds: Vec<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub regenerated_lines: Option<(usize, usize)>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

impl TestSet {
    pub fn shipped(name: &str) -> Result<Self> {
        let (_, text) = MANIFESTS
            .iter()
            .find(|(n, _)| *n == name)
            .ok_or_else(|| Error::Config(format!("unknown test set {name}; expected one of {NAMES:?}")))?;
        Ok(serde_json::from_str(text)?)
    }

    pub fn params(&self) -> Result<EnvParams> {
        let leaves = param_tree::shipped(&self.tree)?.enumerate();
        match leaves.as_slice() {
            [(set, _)] => Ok(EnvParams::from_param_set(set)?),
            _ => Err(Error::Config(format!("tree {} must have exactly one leaf", self.tree))),
        }
    }

    pub fn in_context_text(&self) -> Result<&'static str> {
        IN_CONTEXT
            .iter()
            .find(|(n, _)| *n == self.in_context)
            .map(|(_, t)| *t)
            .ok_or_else(|| Error::Config(format!("unknown in-context block {}", self.in_context)))
    }
}

/// Whether the oracle finishes the episode successfully within `limit` steps.
pub fn oracle_solves_within(params: &EnvParams, seed: u64, limit: u32) -> Result<bool> {
    let mut ep = Episode::new(params, seed)?;
    for _ in 0..limit {
        if ep.is_done() {
            break;
        }
        if ep.step(&oracle_action(ep.env()))?.info.success {
            return Ok(true);
        }
    }
    Ok(false)
}

/// The first `n` seeds, counting from zero, that the oracle solves within
/// `limit` steps. This is how the shipped seed lists were chosen.
pub fn select_seeds(params: &EnvParams, n: usize, limit: u32) -> Result<Vec<u64>> {
    let mut out = Vec::with_capacity(n);
    let mut seed = 0;
    while out.len() < n {
        if oracle_solves_within(params, seed, limit)? {
            out.push(seed);
        }
        seed += 1;
    }
    Ok(out)
}
