//! Reset/step loop, reward, and replayable trajectories.

use std::io::{BufRead, Write};

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::envs::{EnvParams, EnvState, TickReport};
use crate::error::{Error, Result};
use crate::grid::{primitive, View};
use crate::lang::{DialogueEntry, Utterance};
use crate::param_tree::ParamSet;
use crate::peer::Phase;

/// A primitive action plus optional speech. Speaking and moving may co-occur.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct AgentAction {
    pub primitive: u8,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub utterance: Option<Utterance>,
}

impl AgentAction {
    pub fn new(primitive: u8) -> Self {
        Self { primitive, utterance: None }
    }

    pub fn speak(primitive: u8, utterance: Utterance) -> Self {
        Self { primitive, utterance: Some(utterance) }
    }

    /// Build from the `(primitive, template, noun)` triple form, where a
    /// missing speech part is `None`.
    pub fn from_triple(primitive: u8, speech: Option<(u8, u8)>) -> Result<Self> {
        if primitive >= primitive::COUNT {
            return Err(Error::InvalidAction(format!("primitive {primitive} out of range")));
        }
        let utterance = speech.map(|(t, n)| Utterance::new(t, n)).transpose()?;
        Ok(Self { primitive, utterance })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Observation {
    pub view: View,
    pub dialogue: Vec<DialogueEntry>,
}

impl Observation {
    pub fn of(env: &EnvState) -> Self {
        Self { view: env.view(), dialogue: env.dialogue.entries().to_vec() }
    }

    /// Flat 7·7·8 integer array, row-major.
    pub fn flat_view(&self) -> Vec<u8> {
        self.view.iter().flatten().flat_map(|c| c.0).collect()
    }

    /// Hex SHA-256 of the view bytes and dialogue lines.
    pub fn hash(&self) -> String {
        let mut h = Sha256::new();
        h.update(self.flat_view());
        for e in &self.dialogue {
            h.update(format!("{:?}:{}:{}\n", e.speaker, e.step, e.text).as_bytes());
        }
        h.finalize().iter().map(|b| format!("{b:02x}")).collect()
    }
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct StepInfo {
    pub step: u32,
    pub success: bool,
    pub blocked: bool,
    pub intro_satisfied: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub peer_phase: Option<Phase>,
    #[serde(default)]
    pub peer_stuck: bool,
    /// Adversarial episodes: the agent ate while watched.
    #[serde(default)]
    pub caught: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct StepResult {
    pub obs: Observation,
    pub reward: f64,
    pub done: bool,
    pub info: StepInfo,
}

/// Reward for succeeding at `step` of an episode with horizon `max_steps`.
pub fn reward(step: u32, max_steps: u32) -> f64 {
    1.0 - 0.9 * step as f64 / max_steps as f64
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TrajectoryHeader {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub params: Option<ParamSet>,
    pub env_params: EnvParams,
    pub seed: u64,
    pub max_steps: u32,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct StepRecord {
    pub action: AgentAction,
    pub reward: f64,
    pub done: bool,
    pub info: StepInfo,
    pub obs_hash: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Trajectory {
    pub header: TrajectoryHeader,
    pub steps: Vec<StepRecord>,
}

impl Trajectory {
    pub fn actions(&self) -> impl Iterator<Item = &AgentAction> {
        self.steps.iter().map(|s| &s.action)
    }

    pub fn total_reward(&self) -> f64 {
        self.steps.iter().map(|s| s.reward).sum()
    }

    pub fn success(&self) -> bool {
        self.steps.last().is_some_and(|s| s.info.success)
    }

    /// One JSON header line followed by one line per step.
    pub fn write_jsonl(&self, mut out: impl Write) -> Result<()> {
        serde_json::to_writer(&mut out, &self.header)?;
        out.write_all(b"\n")?;
        for s in &self.steps {
            serde_json::to_writer(&mut out, s)?;
            out.write_all(b"\n")?;
        }
        Ok(())
    }

    pub fn to_jsonl(&self) -> String {
        let mut buf = Vec::new();
        self.write_jsonl(&mut buf).expect("writing to memory");
        String::from_utf8(buf).expect("json is utf-8")
    }

    pub fn read_jsonl(input: impl BufRead) -> Result<Self> {
        let mut lines = input.lines().filter(|l| l.as_ref().map_or(true, |l| !l.trim().is_empty()));
        let header = match lines.next() {
            Some(l) => serde_json::from_str(&l?)?,
            None => return Err(Error::InvalidAction("empty trajectory file".into())),
        };
        let steps = lines.map(|l| Ok(serde_json::from_str(&l?)?)).collect::<Result<Vec<_>>>()?;
        Ok(Self { header, steps })
    }

    /// Re-execute the recorded actions from scratch.
    pub fn replay(&self) -> Result<Trajectory> {
        let mut ep = Episode::with_max_steps(&self.header.env_params, self.header.seed, self.header.max_steps)?;
        ep.set_param_set(self.header.params.clone());
        for a in self.actions() {
            ep.step(a)?;
        }
        Ok(ep.into_trajectory())
    }

    /// Replay reproduces every recorded reward, flag and observation hash.
    pub fn verify(&self) -> Result<bool> {
        Ok(self.replay()?.steps == self.steps)
    }
}

/// A running episode that records its own trajectory.
#[derive(Clone, Debug)]
pub struct Episode {
    env: EnvState,
    trajectory: Trajectory,
}

impl Episode {
    pub fn new(params: &EnvParams, seed: u64) -> Result<Self> {
        Self::with_max_steps(params, seed, crate::envs::DEFAULT_MAX_STEPS)
    }

    pub fn with_max_steps(params: &EnvParams, seed: u64, max_steps: u32) -> Result<Self> {
        let mut env = EnvState::new(params, seed)?;
        env.max_steps = max_steps;
        let header = TrajectoryHeader { params: None, env_params: params.clone(), seed, max_steps };
        Ok(Self { env, trajectory: Trajectory { header, steps: Vec::new() } })
    }

    pub fn from_param_set(set: &ParamSet, seed: u64) -> Result<Self> {
        let mut ep = Self::new(&EnvParams::from_param_set(set)?, seed)?;
        ep.set_param_set(Some(set.clone()));
        Ok(ep)
    }

    pub fn set_param_set(&mut self, set: Option<ParamSet>) {
        self.trajectory.header.params = set;
    }

    pub fn observation(&self) -> Observation {
        Observation::of(&self.env)
    }

    pub fn env(&self) -> &EnvState {
        &self.env
    }

    pub fn is_done(&self) -> bool {
        self.env.done
    }

    pub fn trajectory(&self) -> &Trajectory {
        &self.trajectory
    }

    pub fn into_trajectory(self) -> Trajectory {
        self.trajectory
    }

    pub fn info(&self) -> StepInfo {
        let peer = self.env.peer.as_ref();
        StepInfo {
            step: self.env.step,
            success: self.env.success,
            blocked: self.env.blocked,
            intro_satisfied: self.env.intro_done,
            peer_phase: peer.map(|p| p.phase),
            peer_stuck: peer.is_some_and(|p| p.stuck),
            caught: self.env.caught,
        }
    }

    pub fn step(&mut self, action: &AgentAction) -> Result<StepResult> {
        let TickReport { success, .. } = self.env.tick(action.primitive, action.utterance)?;
        let reward = if success { reward(self.env.step, self.env.max_steps) } else { 0.0 };
        let obs = self.observation();
        let info = self.info();
        self.trajectory.steps.push(StepRecord {
            action: *action,
            reward,
            done: self.env.done,
            info: info.clone(),
            obs_hash: obs.hash(),
        });
        Ok(StepResult { obs, reward, done: self.env.done, info })
    }
}
