//! Parameter trees: alternating parameter/value nodes sampled top-down.
//!
//! A parameter node selects exactly one of its value children; a value node
//! continues into all of its parameter children. Trees are stored as JSON:
//!
//! ```json
//! {"param": "Env_type", "values": [
//!   {"value": "InformationSeeking", "weight": 1.0, "params": [ ... ]}
//! ]}
//! ```

use indexmap::IndexMap;
use rand::distributions::{Distribution, WeightedIndex};
use rand::Rng;
use serde::{Deserialize, Serialize};
use std::path::Path;

use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ParamNode {
    pub param: String,
    pub values: Vec<ValueNode>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ValueNode {
    pub value: String,
    #[serde(default = "default_weight")]
    pub weight: f64,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub params: Vec<ParamNode>,
}

fn default_weight() -> f64 {
    1.0
}

/// A sampled assignment, in sampling order.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct ParamSet(pub IndexMap<String, String>);

impl ParamSet {
    pub fn get(&self, param: &str) -> Option<&str> {
        self.0.get(param).map(String::as_str)
    }

    pub fn insert(&mut self, param: impl Into<String>, value: impl Into<String>) {
        self.0.insert(param.into(), value.into());
    }

    pub fn from_pairs<'a>(pairs: impl IntoIterator<Item = (&'a str, &'a str)>) -> Self {
        Self(pairs.into_iter().map(|(k, v)| (k.to_string(), v.to_string())).collect())
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct ParamTree {
    root: ParamNode,
}

impl ParamTree {
    pub fn new(root: ParamNode) -> Result<Self> {
        validate(&root, "", &mut Vec::new())?;
        Ok(Self { root })
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let root: ParamNode =
            serde_json::from_str(text).map_err(|e| Error::Tree { path: "/".into(), msg: e.to_string() })?;
        Self::new(root)
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        Self::from_json(&std::fs::read_to_string(path)?)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&self.root).expect("tree serializes")
    }

    pub fn root(&self) -> &ParamNode {
        &self.root
    }

    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> ParamSet {
        let mut out = ParamSet::default();
        sample_node(&self.root, rng, &mut out);
        out
    }

    /// Replace the weights of the parameter node at `path`, written as
    /// alternating parameter and value names, e.g.
    /// `Env_type/InformationSeeking/Problem`.
    pub fn set_weights(&mut self, path: &str, weights: &[f64]) -> Result<()> {
        let node = find_mut(&mut self.root, path)?;
        if weights.len() != node.values.len() {
            return Err(Error::Tree {
                path: path.into(),
                msg: format!("expected {} weights, got {}", node.values.len(), weights.len()),
            });
        }
        check_weights(weights.iter().copied(), path)?;
        for (v, w) in node.values.iter_mut().zip(weights) {
            v.weight = *w;
        }
        Ok(())
    }

    /// Every assignment the tree can produce, with its probability.
    pub fn enumerate(&self) -> Vec<(ParamSet, f64)> {
        enumerate_nodes(std::slice::from_ref(&self.root))
    }
}

fn check_weights(weights: impl Iterator<Item = f64> + Clone, path: &str) -> Result<()> {
    if let Some(w) = weights.clone().find(|w| !w.is_finite() || *w < 0.0) {
        return Err(Error::Tree { path: path.into(), msg: format!("invalid weight {w}") });
    }
    if weights.sum::<f64>() <= 0.0 {
        return Err(Error::Tree { path: path.into(), msg: "weights sum to zero".into() });
    }
    Ok(())
}

fn validate(node: &ParamNode, prefix: &str, ancestors: &mut Vec<String>) -> Result<()> {
    let path = format!("{prefix}/{}", node.param);
    let err = |msg: String| Error::Tree { path: path.clone(), msg };
    if node.param.is_empty() {
        return Err(err("empty parameter name".into()));
    }
    if ancestors.contains(&node.param) {
        return Err(err("parameter repeated along path".into()));
    }
    if node.values.is_empty() {
        return Err(err("parameter node has no values".into()));
    }
    check_weights(node.values.iter().map(|v| v.weight), &path)?;
    for (i, v) in node.values.iter().enumerate() {
        if node.values[..i].iter().any(|u| u.value == v.value) {
            return Err(err(format!("duplicate value {}", v.value)));
        }
        ancestors.push(node.param.clone());
        let vpath = format!("{path}/{}", v.value);
        for child in &v.params {
            validate(child, &vpath, ancestors)?;
        }
        // siblings under one value must be distinct too
        for (j, c) in v.params.iter().enumerate() {
            if v.params[..j].iter().any(|d| d.param == c.param) {
                return Err(Error::Tree { path: vpath.clone(), msg: format!("duplicate parameter {}", c.param) });
            }
        }
        ancestors.pop();
    }
    Ok(())
}

fn sample_node<R: Rng + ?Sized>(node: &ParamNode, rng: &mut R, out: &mut ParamSet) {
    let dist = WeightedIndex::new(node.values.iter().map(|v| v.weight)).expect("weights validated");
    let chosen = &node.values[dist.sample(rng)];
    out.insert(node.param.clone(), chosen.value.clone());
    for child in &chosen.params {
        sample_node(child, rng, out);
    }
}

fn find_mut<'a>(root: &'a mut ParamNode, path: &str) -> Result<&'a mut ParamNode> {
    let parts: Vec<&str> = path.split('/').filter(|s| !s.is_empty()).collect();
    let not_found = || Error::Tree { path: path.into(), msg: "no such parameter node".into() };
    if parts.first() != Some(&root.param.as_str()) || parts.len().is_multiple_of(2) {
        return Err(not_found());
    }
    let mut node = root;
    for pair in parts[1..].chunks(2) {
        let value = node.values.iter_mut().find(|v| v.value == pair[0]).ok_or_else(not_found)?;
        node = value.params.iter_mut().find(|p| p.param == pair[1]).ok_or_else(not_found)?;
    }
    Ok(node)
}

fn enumerate_nodes(nodes: &[ParamNode]) -> Vec<(ParamSet, f64)> {
    let Some((first, rest)) = nodes.split_first() else {
        return vec![(ParamSet::default(), 1.0)];
    };
    let total: f64 = first.values.iter().map(|v| v.weight).sum();
    let tails = enumerate_nodes(rest);
    let mut out = Vec::new();
    for v in first.values.iter().filter(|v| v.weight > 0.0) {
        for (sub, p_sub) in enumerate_nodes(&v.params) {
            for (tail, p_tail) in &tails {
                let mut set = ParamSet::default();
                set.insert(first.param.clone(), v.value.clone());
                set.0.extend(sub.0.clone());
                set.0.extend(tail.0.clone());
                out.push((set, v.weight / total * p_sub * p_tail));
            }
        }
    }
    out
}

/// Example trees bundled with the crate, by name.
pub const SHIPPED: [(&str, &str); 15] = [
    ("pointing_train", include_str!("../data/trees/pointing_train.json")),
    ("pointing_test", include_str!("../data/trees/pointing_test.json")),
    ("rr_role_a", include_str!("../data/trees/rr_role_a.json")),
    ("rr_asocial_single", include_str!("../data/trees/rr_asocial_single.json")),
    ("rr_role_b_single", include_str!("../data/trees/rr_role_b_single.json")),
    ("rr_asocial_group", include_str!("../data/trees/rr_asocial_group.json")),
    ("rr_role_b_group", include_str!("../data/trees/rr_role_b_group.json")),
    ("scaf_test", include_str!("../data/trees/scaf_test.json")),
    ("scaf_4", include_str!("../data/trees/scaf_4.json")),
    ("scaf_8", include_str!("../data/trees/scaf_8.json")),
    ("llm_asocialbox", include_str!("../data/trees/llm_asocialbox.json")),
    ("llm_colorboxes", include_str!("../data/trees/llm_colorboxes.json")),
    ("adversarial", include_str!("../data/trees/adversarial.json")),
    ("ja_misleading", include_str!("../data/trees/ja_misleading.json")),
    ("imitation", include_str!("../data/trees/imitation.json")),
];

pub fn shipped(name: &str) -> Result<ParamTree> {
    let (_, text) = SHIPPED
        .iter()
        .find(|(n, _)| *n == name)
        .ok_or_else(|| Error::Tree { path: "/".into(), msg: format!("no shipped tree named {name}") })?;
    ParamTree::from_json(text)
}
