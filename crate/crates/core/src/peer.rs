//! The scripted social peer.

use rand::seq::SliceRandom;
use rand::Rng as _;
use serde::{Deserialize, Serialize};

use crate::envs::tasks::{self, Actor, Step};
use crate::envs::{social_kind, CueType, EnvParams, EnvState, EnvType, Layout, Role};
use crate::grid::{primitive, AgentPose, Color, Direction, Position, SocialKind, ToggleEffect};
use crate::planner::{self, Plan};
use crate::rng::Rng;

pub const PATROL_TURN_PROB: f64 = 0.2;
pub const MISLEADING_EVERY: u32 = 3;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Phase {
    WaitIntro,
    Pointing,
    LanguageColor,
    LanguageFeedback,
    Demonstrating,
    Helping,
    /// Walking to a parking cell; `reset` restores the room on arrival.
    Retreating {
        reset: bool,
    },
    Done,
    RoleScript(Role),
    Patrol,
}

/// What the peer does in one tick.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct PeerAction {
    pub primitive: u8,
    pub point: Option<Direction>,
    pub utterance: Option<String>,
    /// Restore the room to its initial configuration.
    pub reset: bool,
}

impl PeerAction {
    fn act(primitive: u8) -> Self {
        Self { primitive, ..Self::default() }
    }
}

#[derive(Clone, Debug)]
pub struct Peer {
    pub pose: AgentPose,
    pub color: Color,
    pub social: SocialKind,
    pub phase: Phase,
    pub point: Option<Direction>,
    pub last_action: u8,
    /// Box opened when holding the box side of a color-matching problem.
    pub box_choice: Option<usize>,
    pub ate: bool,
    /// Set when the current target could not be reached.
    pub stuck: bool,
    rng: Rng,
}

/// Distance band spoken by the feedback cue.
pub fn feedback_word(distance: i32) -> &'static str {
    match distance {
        d if d <= 1 => "Hot",
        2 => "Warm",
        3 | 4 => "Medium",
        _ => "Cold",
    }
}

impl Peer {
    pub fn new(params: &EnvParams, layout: &Layout, pose: AgentPose, mut rng: Rng) -> Self {
        let phase = match params.env_type {
            EnvType::AdversarialPeer => Phase::Patrol,
            EnvType::Collaboration => Phase::RoleScript(if params.role == Role::A { Role::B } else { Role::A }),
            EnvType::InformationSeeking => Phase::WaitIntro,
        };
        let box_choice = (!layout.boxes.is_empty()).then(|| rng.gen_range(0..layout.boxes.len()));
        Self {
            pose,
            color: layout.peer_color,
            social: social_kind(params.env_type),
            phase,
            point: None,
            last_action: primitive::NO_OP,
            box_choice,
            ate: false,
            stuck: false,
            rng,
        }
    }

    pub fn observe_toggle(&mut self, effect: ToggleEffect) {
        if let ToggleEffect::AppleEaten(_) = effect {
            self.ate = true;
        }
    }

    fn actor(&self, env: &EnvState) -> Actor {
        Actor { pose: self.pose, other: Some(env.agent.pos) }
    }

    fn after_intro(params: &EnvParams) -> Phase {
        if params.help {
            return Phase::Helping;
        }
        match params.cue {
            CueType::Pointing => Phase::Pointing,
            CueType::LanguageColor => Phase::LanguageColor,
            CueType::LanguageFeedback => Phase::LanguageFeedback,
            CueType::Imitation => Phase::Demonstrating,
        }
    }

    fn face_agent(&self, env: &EnvState) -> u8 {
        if self.pose.pos == env.agent.pos {
            return primitive::NO_OP;
        }
        let dir = tasks::facing(self.pose.pos, env.agent.pos);
        planner::turn_towards(self.pose, dir).unwrap_or(primitive::NO_OP)
    }

    fn run(&mut self, step: Step) -> u8 {
        self.stuck = step == Step::Stuck;
        match step {
            Step::Act(a) => a,
            _ => primitive::NO_OP,
        }
    }

    /// Choose this tick's action. Called after the agent acted.
    pub fn decide(&mut self, env: &EnvState) -> PeerAction {
        if self.phase == Phase::WaitIntro {
            if !env.intro_done {
                let mut action = PeerAction::act(self.face_agent(env));
                if env.params.misleading_cues && (env.step - 1).is_multiple_of(MISLEADING_EVERY) {
                    if let Some(inst) = env.layout.instruments.choose(&mut self.rng) {
                        action.utterance = Some(inst.color.name().to_string());
                    }
                }
                return action;
            }
            self.phase = Self::after_intro(&env.params);
        }
        let actor = self.actor(env);
        let correct = env.layout.correct;
        match self.phase {
            Phase::WaitIntro => unreachable!("handled above"),
            Phase::Pointing => self.pointing(env),
            Phase::LanguageColor => {
                self.phase = Phase::Done;
                let color = env.correct_color().map(|c| c.name().to_string());
                PeerAction { primitive: self.face_agent(env), utterance: color, ..PeerAction::default() }
            }
            Phase::LanguageFeedback => {
                let word = env.layout.correct_instrument().map(|i| feedback_word(env.agent.pos.manhattan(i.pos)));
                PeerAction {
                    primitive: self.face_agent(env),
                    utterance: word.map(str::to_string),
                    ..PeerAction::default()
                }
            }
            Phase::Helping => match tasks::solve(env, actor, correct, false) {
                Step::Finished => {
                    self.phase = Phase::Retreating { reset: false };
                    self.decide(env)
                }
                s => PeerAction::act(self.run(s)),
            },
            Phase::Demonstrating => match tasks::solve(env, actor, correct, true) {
                Step::Finished => {
                    self.phase = Phase::Retreating { reset: true };
                    self.decide(env)
                }
                s => PeerAction::act(self.run(s)),
            },
            Phase::Retreating { reset } => {
                if tasks::is_parking(env, self.pose.pos, Some(env.agent.pos)) {
                    if !reset {
                        self.phase = Phase::Done;
                        return PeerAction::act(self.face_agent(env));
                    }
                    if self.room_clear(env) {
                        self.phase = Phase::Done;
                        return PeerAction { reset: true, ..PeerAction::default() };
                    }
                    return PeerAction::act(primitive::NO_OP);
                }
                let a = tasks::park(env, actor);
                self.stuck = a == primitive::NO_OP;
                PeerAction::act(a)
            }
            Phase::Done => PeerAction::act(primitive::NO_OP),
            Phase::RoleScript(role) => {
                let a = match tasks::role_step(env, actor, role, self.box_choice) {
                    Step::Act(a) => a,
                    _ => tasks::park(env, actor),
                };
                PeerAction::act(a)
            }
            Phase::Patrol => {
                if self.rng.gen_bool(PATROL_TURN_PROB) {
                    PeerAction::act(primitive::TURN_RIGHT)
                } else {
                    PeerAction::act(primitive::NO_OP)
                }
            }
        }
    }

    /// Nobody stands where an object or the marble started.
    fn room_clear(&self, env: &EnvState) -> bool {
        let occupied = [env.agent.pos, self.pose.pos];
        let objects_free = env.initial.objects().all(|(p, _)| !occupied.contains(&p));
        let marble_free = env.initial.marble().is_none_or(|m| !occupied.contains(&m.pos));
        objects_free && marble_free
    }

    fn pointing(&mut self, env: &EnvState) -> PeerAction {
        let Some(target) = env.layout.correct_instrument().map(|i| i.pos) else {
            return PeerAction::act(primitive::NO_OP);
        };
        let others: Vec<Position> = env.layout.instruments.iter().map(|i| i.pos).filter(|p| *p != target).collect();
        let agent = env.agent.pos;
        let spot_dir = |p: Position| pointing_dir(env, p, target, &others);
        let loose = |p: Position| {
            p != agent
                && !env.layout.reserved.contains(&p)
                && env.grid.is_walkable(p)
                && env.grid.get(p).is_none()
                && spot_dir(p).is_some()
        };
        let strict = |p: Position| loose(p) && tasks::is_parking(env, p, Some(agent));
        let passable = |p: Position| env.grid.is_walkable(p) && p != agent;
        let plan = match planner::walk_to(&env.grid, self.pose, strict, passable) {
            Plan::Unreachable => planner::walk_to(&env.grid, self.pose, loose, passable),
            plan => plan,
        };
        match plan {
            Plan::Arrived => {
                self.stuck = false;
                PeerAction { primitive: self.face_agent(env), point: spot_dir(self.pose.pos), ..PeerAction::default() }
            }
            Plan::Act(a) => {
                self.stuck = false;
                PeerAction::act(a)
            }
            Plan::Unreachable => {
                self.stuck = true;
                PeerAction::act(primitive::NO_OP)
            }
        }
    }
}

/// Direction in which the ray from `from` to the room edge contains
/// `target` and none of `others`.
pub fn pointing_dir(env: &EnvState, from: Position, target: Position, others: &[Position]) -> Option<Direction> {
    Direction::ALL.into_iter().find(|&d| {
        let mut p = from.step(d);
        let mut hit = false;
        while env.grid.in_bounds(p) {
            if others.contains(&p) {
                return false;
            }
            hit |= p == target;
            p = p.step(d);
        }
        hit
    })
}
