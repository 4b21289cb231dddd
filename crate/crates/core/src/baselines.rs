//! Scripted reference policies: an oracle, a uniform random policy, and a
//! guesser that solves the mechanics but ignores the peer's cue.

use rand::Rng as _;

use crate::envs::tasks::{self, Actor, Step};
use crate::envs::{CueType, EnvParams, EnvState, EnvType, IntroSequence};
use crate::episode::{AgentAction, Episode, Trajectory};
use crate::error::{Error, Result};
use crate::grid::{in_view, line_of_sight, primitive, AgentPose, Direction, Position};
use crate::lang::{Utterance, NOUNS, TEMPLATES};
use crate::peer::Phase;
use crate::planner::{self, Plan};
use crate::rng::{self, Rng};

pub trait Policy {
    fn act(&mut self, env: &EnvState) -> Result<AgentAction>;
}

/// Run one episode to completion.
pub fn run_episode(params: &EnvParams, seed: u64, policy: &mut dyn Policy) -> Result<Trajectory> {
    let mut ep = Episode::new(params, seed)?;
    while !ep.is_done() {
        let a = policy.act(ep.env())?;
        ep.step(&a)?;
    }
    Ok(ep.into_trajectory())
}

fn me(env: &EnvState) -> Actor {
    Actor { pose: env.agent, other: env.peer_pose().map(|p| p.pos) }
}

fn step_or_noop(s: Step) -> u8 {
    match s {
        Step::Act(a) => a,
        _ => primitive::NO_OP,
    }
}

/// Policy that knows the intended solution of every environment.
#[derive(Clone, Copy, Debug, Default)]
pub struct Oracle;

impl Policy for Oracle {
    fn act(&mut self, env: &EnvState) -> Result<AgentAction> {
        Ok(oracle_action(env))
    }
}

pub fn oracle_action(env: &EnvState) -> AgentAction {
    let actor = me(env);
    match env.params.env_type {
        EnvType::AdversarialPeer => AgentAction::new(sneak_and_eat(env, actor)),
        EnvType::Collaboration => {
            let role = env.layout.side_of(env.agent.pos).unwrap_or(env.params.role);
            let a = match tasks::role_step(env, actor, role, None) {
                Step::Act(a) => a,
                _ => tasks::park(env, actor),
            };
            AgentAction::new(a)
        }
        EnvType::InformationSeeking => {
            if let Some(a) = intro_action(env, actor) {
                return a;
            }
            let social = env.peer.is_some();
            if social && env.params.help {
                return AgentAction::new(tasks::eat(env, actor).unwrap_or_else(|| tasks::park(env, actor)));
            }
            if social
                && env.params.cue == CueType::Imitation
                && env.peer.as_ref().is_some_and(|p| p.phase != Phase::Done)
            {
                return AgentAction::new(tasks::park(env, actor));
            }
            AgentAction::new(step_or_noop(tasks::solve(env, actor, env.layout.correct, true)))
        }
    }
}

fn contact_spot(env: &EnvState, p: Position, peer: Position, strict: bool) -> bool {
    env.grid.is_walkable(p)
        && p != peer
        && !env.layout.reserved.contains(&p)
        && Direction::aligned(p, peer).is_some()
        && line_of_sight(&env.grid, p, peer)
        && (!strict || tasks::is_parking(env, p, Some(peer)))
}

/// Perform the introductory sequence, or `None` once it is complete.
pub fn intro_action(env: &EnvState, actor: Actor) -> Option<AgentAction> {
    if env.intro_done {
        return None;
    }
    let peer = env.peer_pose()?;
    let intro = env.params.intro;
    if intro == IntroSequence::No {
        return None;
    }
    let help = |p: u8| {
        if intro.needs_ask() {
            AgentAction::speak(p, Utterance::help_please())
        } else {
            AgentAction::new(p)
        }
    };
    if !intro.needs_eye_contact() || env.eye_contact() {
        return Some(help(primitive::NO_OP));
    }
    if let Some(d) = Direction::aligned(env.agent.pos, peer.pos) {
        if contact_spot(env, env.agent.pos, peer.pos, false) {
            return Some(AgentAction::new(planner::turn_towards(env.agent, d).unwrap_or(primitive::NO_OP)));
        }
    }
    let passable = actor.passable(env);
    for strict in [true, false] {
        match planner::walk_to(&env.grid, actor.pose, |p| contact_spot(env, p, peer.pos, strict), &passable) {
            Plan::Act(a) => return Some(AgentAction::new(a)),
            Plan::Arrived => return Some(AgentAction::new(primitive::NO_OP)),
            Plan::Unreachable => {}
        }
    }
    Some(AgentAction::new(primitive::NO_OP))
}

/// Number of peer orientations from which `cell` is visible.
fn exposure(env: &EnvState, peer: Position, cell: Position) -> usize {
    Direction::ALL.iter().filter(|&&d| in_view(&env.grid, AgentPose::new(peer, d), cell)).count()
}

fn sneak_and_eat(env: &EnvState, actor: Actor) -> u8 {
    let (Some(apple), Some(peer)) = (tasks::fresh_apples(env).first().copied(), env.peer_pose()) else {
        return primitive::NO_OP;
    };
    if env.agent.front() == apple {
        return if env.seen_by_peer() { primitive::NO_OP } else { primitive::TOGGLE };
    }
    let passable = actor.passable(env);
    let best = apple
        .neighbors()
        .into_iter()
        .filter(|p| *p == env.agent.pos || passable(*p))
        .filter_map(|p| {
            let len = if p == env.agent.pos {
                0
            } else {
                planner::shortest_path(&env.grid, env.agent.pos, |q| q == p, &passable)?.len()
            };
            Some((exposure(env, peer.pos, p), len, p))
        })
        .min();
    match best {
        Some((_, _, cell)) => {
            let dir = Direction::between(cell, apple).expect("neighbour of the apple");
            match planner::reach_pose(&env.grid, env.agent, cell, dir, passable) {
                Plan::Act(a) => a,
                _ => primitive::NO_OP,
            }
        }
        None => primitive::NO_OP,
    }
}

/// Uniform random policy over primitives, optionally speaking.
#[derive(Clone, Debug)]
pub struct RandomPolicy {
    rng: Rng,
    pub speech_prob: f64,
}

impl RandomPolicy {
    pub fn new(seed: u64) -> Self {
        Self { rng: rng::stream(seed, rng::tag::POLICY), speech_prob: 0.0 }
    }

    pub fn with_speech(seed: u64, speech_prob: f64) -> Self {
        Self { speech_prob, ..Self::new(seed) }
    }
}

impl Policy for RandomPolicy {
    fn act(&mut self, _env: &EnvState) -> Result<AgentAction> {
        let p = self.rng.gen_range(0..primitive::COUNT);
        if self.speech_prob > 0.0 && self.rng.gen_bool(self.speech_prob) {
            let u =
                Utterance::new(self.rng.gen_range(0..TEMPLATES.len()) as u8, self.rng.gen_range(0..NOUNS.len()) as u8)?;
            return Ok(AgentAction::speak(p, u));
        }
        Ok(AgentAction::new(p))
    }
}

/// Text-mode actions available to language-model agents.
pub const TEXT_ACTIONS: [u8; 4] = [primitive::TURN_LEFT, primitive::TURN_RIGHT, primitive::FORWARD, primitive::TOGGLE];

pub fn random_text_action(rng: &mut Rng) -> u8 {
    TEXT_ACTIONS[rng.gen_range(0..TEXT_ACTIONS.len())]
}

/// Completes the introduction and operates objects competently but picks
/// which object to use at random, ignoring the cue. Gives up once blocked.
#[derive(Clone, Debug)]
pub struct Guesser {
    pub choice: usize,
}

impl Guesser {
    pub fn new(params: &EnvParams, seed: u64) -> Result<Self> {
        if params.env_type != EnvType::InformationSeeking || params.n_objects != 2 {
            return Err(Error::Policy("the guesser needs a two-object information-seeking environment".into()));
        }
        let mut rng = rng::stream(seed, rng::tag::POLICY);
        Ok(Self { choice: rng.gen_range(0..2) })
    }
}

impl Policy for Guesser {
    fn act(&mut self, env: &EnvState) -> Result<AgentAction> {
        if env.blocked {
            return Ok(AgentAction::new(primitive::DONE));
        }
        let actor = me(env);
        if let Some(a) = intro_action(env, actor) {
            return Ok(a);
        }
        Ok(AgentAction::new(step_or_noop(tasks::solve(env, actor, self.choice, true))))
    }
}
