//! Environment construction and per-tick dynamics.

mod layout;
mod params;
pub mod tasks;

pub use layout::{generate, Instrument, Layout, COLLAB_ROOM, FENCE_X, ROOM};
pub use params::{CueType, EnvParams, EnvType, IntroSequence, Problem, Role, Version};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::grid::{
    self, field_of_view, in_view, line_of_sight, primitive, AgentPose, Color, Direction, Grid, MarbleEvent, ObjectKind,
    ObjectState, PeerAppearance, Position, SocialKind, ToggleEffect, View, WorldObject,
};
use crate::lang::{self, Dialogue, DialogueEntry, Speaker, Utterance};
use crate::peer::{Peer, PeerAction};
use crate::rng;

pub const DEFAULT_MAX_STEPS: u32 = 80;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Actor {
    Agent,
    Peer,
}

/// What happened during one tick, before reward assignment.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct TickReport {
    pub success: bool,
    /// The agent ate an apple while the adversarial peer was watching.
    pub caught: bool,
    pub done_action: bool,
    pub timeout: bool,
}

#[derive(Clone, Debug)]
pub struct EnvState {
    pub params: EnvParams,
    pub seed: u64,
    pub grid: Grid,
    pub layout: Layout,
    pub agent: AgentPose,
    pub peer: Option<Peer>,
    pub step: u32,
    pub max_steps: u32,
    pub blocked: bool,
    pub success: bool,
    pub caught: bool,
    pub done: bool,
    pub intro_done: bool,
    /// Dialogue as heard by the agent. Speech is audible anywhere in the room.
    pub dialogue: Dialogue,
    /// Everything the peer said, heard or not.
    pub peer_log: Vec<DialogueEntry>,
    /// Box color chosen in color-matching collaboration.
    pub selected: Option<Color>,
    /// Grid at reset, used by demonstrations to restore the room.
    pub initial: Grid,
}

impl EnvState {
    pub fn new(params: &EnvParams, seed: u64) -> Result<Self> {
        params.validate()?;
        let (grid, layout) = generate(params, &mut rng::stream(seed, rng::tag::LAYOUT))?;
        Ok(Self::from_parts(params, grid, layout, seed))
    }

    /// Assemble a state around a prepared grid and layout.
    pub fn from_parts(params: &EnvParams, grid: Grid, layout: Layout, seed: u64) -> Self {
        let peer = layout.peer_start.map(|pose| Peer::new(params, &layout, pose, rng::stream(seed, rng::tag::PEER)));
        let intro_done =
            !params.peer || params.intro == IntroSequence::No || params.env_type != EnvType::InformationSeeking;
        Self {
            params: params.clone(),
            seed,
            initial: grid.clone(),
            grid,
            agent: layout.agent_start,
            selected: layout.preselected,
            layout,
            peer,
            step: 0,
            max_steps: DEFAULT_MAX_STEPS,
            blocked: false,
            success: false,
            caught: false,
            done: false,
            intro_done,
            dialogue: Dialogue::default(),
            peer_log: Vec::new(),
        }
    }

    pub fn peer_pose(&self) -> Option<AgentPose> {
        self.peer.as_ref().map(|p| p.pose)
    }

    pub fn peer_appearance(&self) -> Option<PeerAppearance> {
        self.peer.as_ref().map(|p| PeerAppearance {
            pos: p.pose.pos,
            dir: p.pose.dir,
            color: p.color,
            social: p.social,
            point: p.point,
            last_action: p.last_action,
        })
    }

    pub fn view(&self) -> View {
        field_of_view(&self.grid, self.agent, self.peer_appearance().as_ref())
    }

    /// Both actors share a row or column, face each other and see each other.
    pub fn eye_contact(&self) -> bool {
        self.peer_pose().is_some_and(|p| eye_contact(&self.grid, self.agent, p))
    }

    pub fn peer_visible(&self) -> bool {
        self.peer_pose().is_some_and(|p| in_view(&self.grid, self.agent, p.pos))
    }

    /// The agent stands inside the peer's field of view with a clear line of sight.
    pub fn seen_by_peer(&self) -> bool {
        self.peer_pose().is_some_and(|p| in_view(&self.grid, p, self.agent.pos))
    }

    pub fn actor_pose(&self, actor: Actor) -> Option<AgentPose> {
        match actor {
            Actor::Agent => Some(self.agent),
            Actor::Peer => self.peer_pose(),
        }
    }

    fn other_pos(&self, actor: Actor) -> Option<Position> {
        match actor {
            Actor::Agent => self.peer_pose().map(|p| p.pos),
            Actor::Peer => Some(self.agent.pos),
        }
    }

    pub fn correct_color(&self) -> Option<Color> {
        self.layout.correct_instrument().map(|i| i.color)
    }

    /// Advance the world by one tick for the given agent action.
    pub fn tick(&mut self, primitive_action: u8, utterance: Option<Utterance>) -> Result<TickReport> {
        if self.done {
            return Err(Error::EpisodeFinished);
        }
        if primitive_action >= primitive::COUNT {
            return Err(Error::InvalidAction(format!("primitive {primitive_action} out of range")));
        }
        self.step += 1;
        let mut report = TickReport::default();

        let asked = utterance.map(|u| u.render());
        if let Some(text) = &asked {
            self.dialogue.push(Speaker::Agent, text.clone(), self.step);
        }

        match primitive_action {
            primitive::FORWARD => {
                let front = self.agent.front();
                if self.is_misuse(front, false) {
                    self.blocked = true;
                }
                let blockers: Vec<Position> = self.other_pos(Actor::Agent).into_iter().collect();
                self.agent = grid::step_move(&mut self.grid, self.agent, primitive_action, &blockers);
            }
            primitive::TOGGLE => {
                let front = self.agent.front();
                if self.is_misuse(front, true) {
                    self.blocked = true;
                }
                if let ToggleEffect::AppleEaten(_) = self.apply_toggle(front) {
                    if self.params.env_type == EnvType::AdversarialPeer && self.seen_by_peer() {
                        report.caught = true;
                    } else {
                        report.success = true;
                    }
                }
            }
            primitive::DONE => report.done_action = true,
            _ => {
                self.agent = grid::step_move(&mut self.grid, self.agent, primitive_action, &[]);
            }
        }

        self.advance_marble();

        if !self.intro_done {
            let said_help = asked.as_deref().is_some_and(lang::is_help_request);
            self.intro_done = match self.params.intro {
                IntroSequence::No => true,
                IntroSequence::EyeContact => self.eye_contact(),
                IntroSequence::Ask => said_help,
                IntroSequence::AskEyeContact => said_help && self.eye_contact(),
            };
        }

        if !(report.success || report.caught || report.done_action) {
            if let Some(mut peer) = self.peer.take() {
                let action = peer.decide(self);
                self.apply_peer_action(&mut peer, action);
                self.peer = Some(peer);
            }
        }

        report.timeout = self.step >= self.max_steps;
        self.success = report.success;
        self.caught = report.caught;
        self.done = report.success || report.caught || report.done_action || report.timeout;
        Ok(report)
    }

    fn advance_marble(&mut self) {
        let blockers: Vec<Position> = std::iter::once(self.agent.pos).chain(self.peer_pose().map(|p| p.pos)).collect();
        if let MarbleEvent::Contact(g) = grid::advance_marble(&mut self.grid, &blockers) {
            self.marble_contact(g);
        }
    }

    fn apply_peer_action(&mut self, peer: &mut Peer, action: PeerAction) {
        peer.last_action = action.primitive;
        peer.point = action.point;
        match action.primitive {
            primitive::TOGGLE => {
                let effect = self.apply_toggle(peer.pose.front());
                peer.observe_toggle(effect);
            }
            a @ (primitive::FORWARD | primitive::TURN_LEFT | primitive::TURN_RIGHT) => {
                peer.pose = grid::step_move(&mut self.grid, peer.pose, a, &[self.agent.pos]);
            }
            _ => {}
        }
        if action.reset {
            self.grid = self.initial.clone();
        }
        if let Some(text) = action.utterance {
            self.peer_log.push(DialogueEntry { speaker: Speaker::Peer, text: text.clone(), step: self.step });
            self.dialogue.push(Speaker::Peer, text, self.step);
        }
    }

    /// Using an object the wrong way in demonstration episodes.
    fn is_misuse(&self, front: Position, toggling: bool) -> bool {
        if self.params.env_type != EnvType::InformationSeeking
            || self.params.cue != CueType::Imitation
            || !self.params.peer
        {
            return false;
        }
        match self.layout.instrument_at(front) {
            Some((_, inst)) if self.grid.get(front).is_some_and(|o| o.kind == inst.kind) => {
                if toggling {
                    inst.kind == ObjectKind::MarbleGenerator
                } else {
                    inst.kind != ObjectKind::MarbleGenerator && !self.grid.is_walkable(front)
                }
            }
            _ => false,
        }
    }

    /// Toggle the object at `pos`, enforcing distractor and color rules.
    pub fn apply_toggle(&mut self, pos: Position) -> ToggleEffect {
        if self.blocked {
            return ToggleEffect::Nothing;
        }
        let Some(obj) = self.grid.get(pos) else {
            return ToggleEffect::Nothing;
        };
        let (kind, color) = (obj.kind, obj.color);
        match self.params.env_type {
            EnvType::InformationSeeking => {
                if let Some((i, inst)) = self.layout.instrument_at(pos) {
                    if i != self.layout.correct && kind == inst.kind && kind != ObjectKind::MarbleGenerator {
                        self.blocked = true;
                        return ToggleEffect::Nothing;
                    }
                }
            }
            EnvType::Collaboration if self.params.problem.is_color_matching() => {
                if kind == ObjectKind::LockableBox && self.layout.boxes.iter().any(|b| b.pos == pos) {
                    if self.selected.is_some() {
                        return ToggleEffect::Nothing;
                    }
                    self.selected = Some(color);
                } else if let Some((_, inst)) = self.layout.instrument_at(pos) {
                    if kind == inst.kind && kind != ObjectKind::MarbleGenerator {
                        match self.selected {
                            None => return ToggleEffect::Nothing,
                            Some(c) if c != color => {
                                self.blocked = true;
                                return ToggleEffect::Nothing;
                            }
                            Some(_) => {}
                        }
                    }
                }
            }
            _ => {}
        }
        let effect = grid::toggle_at(&mut self.grid, pos);
        if let ToggleEffect::GeneratorActivated(_) = effect {
            self.spawn_apples();
        }
        effect
    }

    fn marble_contact(&mut self, g: Position) {
        if self.blocked {
            return;
        }
        let Some(obj) = self.grid.get(g) else { return };
        if obj.kind != ObjectKind::MarbleGenerator || obj.state != ObjectState::Plain {
            return;
        }
        let color = obj.color;
        match self.params.env_type {
            EnvType::InformationSeeking => {
                if self.layout.instrument_at(g).is_some_and(|(i, _)| i != self.layout.correct) {
                    self.blocked = true;
                    return;
                }
            }
            EnvType::Collaboration if self.params.problem.is_color_matching() => match self.selected {
                None => return,
                Some(c) if c != color => {
                    self.blocked = true;
                    return;
                }
                Some(_) => {}
            },
            _ => {}
        }
        if let Some(o) = self.grid.get_mut(g) {
            o.state = ObjectState::Activated;
        }
        self.spawn_apples();
    }

    fn spawn_apples(&mut self) {
        for p in self.layout.platforms.clone() {
            if self.grid.get(p).is_some_and(|o| o.kind == ObjectKind::Platform) {
                self.grid.set(p, Some(WorldObject::apple()));
            }
        }
    }

    /// Character map of the room, one row per line.
    pub fn render_ascii(&self) -> String {
        let mut out = String::new();
        for y in 0..self.grid.height() as i32 {
            for x in 0..self.grid.width() as i32 {
                let p = Position::new(x, y);
                let arrow = |d: Direction| match d {
                    Direction::North => '^',
                    Direction::East => '>',
                    Direction::South => 'v',
                    Direction::West => '<',
                };
                let c = if self.agent.pos == p {
                    arrow(self.agent.dir)
                } else if let Some(peer) = self.peer_pose().filter(|q| q.pos == p) {
                    match peer.dir {
                        Direction::North => 'N',
                        Direction::East => 'E',
                        Direction::South => 'S',
                        Direction::West => 'W',
                    }
                } else if self.grid.marble_at(p) {
                    'o'
                } else {
                    self.grid.get(p).map_or('.', object_char)
                };
                out.push(c);
            }
            out.push('\n');
        }
        out
    }
}

fn object_char(o: &WorldObject) -> char {
    match (o.kind, o.state) {
        (ObjectKind::Wall, _) => '#',
        (ObjectKind::Apple, ObjectState::Eaten) => 'a',
        (ObjectKind::Apple, _) => 'A',
        (ObjectKind::LockableBox, ObjectState::Locked) => 'L',
        (ObjectKind::LockableBox, _) => 'B',
        (ObjectKind::Switch, _) => 's',
        (ObjectKind::Lever, _) => 'l',
        (ObjectKind::Door | ObjectKind::RemoteDoor, ObjectState::Open) => '_',
        (ObjectKind::Door | ObjectKind::RemoteDoor, _) => 'D',
        (ObjectKind::Marble, _) => 'o',
        (ObjectKind::AppleGenerator, _) => 'G',
        (ObjectKind::MarbleGenerator, _) => 'M',
        (ObjectKind::Fence, _) => '|',
        (ObjectKind::Occluder, _) => 'X',
        (ObjectKind::Platform, _) => 'P',
    }
}

pub fn eye_contact(grid: &Grid, a: AgentPose, b: AgentPose) -> bool {
    Direction::aligned(a.pos, b.pos) == Some(a.dir)
        && Direction::aligned(b.pos, a.pos) == Some(b.dir)
        && line_of_sight(grid, a.pos, b.pos)
}

/// Social kind shown for a peer of the given environment type.
pub fn social_kind(env_type: EnvType) -> SocialKind {
    if env_type == EnvType::AdversarialPeer {
        SocialKind::Competitive
    } else {
        SocialKind::Cooperative
    }
}
