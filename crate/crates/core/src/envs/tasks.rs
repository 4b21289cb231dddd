//! Task-level plans shared by the scripted peer and the oracle agent.

use super::{EnvState, Instrument, Problem, Role};
use crate::grid::{primitive, AgentPose, Color, Direction, ObjectKind, ObjectState, Position};
use crate::planner::{self, Plan};

/// Next move of a task plan.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Step {
    Act(u8),
    /// Nothing to do until the world changes.
    Wait,
    Finished,
    Stuck,
}

/// Pose of the acting character and the cell occupied by the other one.
#[derive(Clone, Copy, Debug)]
pub struct Actor {
    pub pose: AgentPose,
    pub other: Option<Position>,
}

impl Actor {
    pub fn passable<'a>(&self, env: &'a EnvState) -> impl Fn(Position) -> bool + 'a {
        let other = self.other;
        move |p| env.grid.is_walkable(p) && Some(p) != other
    }
}

fn nav(plan: Plan, on_arrival: u8) -> Step {
    match plan {
        Plan::Act(a) => Step::Act(a),
        Plan::Arrived => Step::Act(on_arrival),
        Plan::Unreachable => Step::Stuck,
    }
}

/// Walk up to `target` and toggle it.
pub fn toggle_target(env: &EnvState, actor: Actor, target: Position) -> Step {
    nav(planner::approach(&env.grid, actor.pose, target, actor.passable(env)), primitive::TOGGLE)
}

pub fn fresh_apples(env: &EnvState) -> Vec<Position> {
    env.grid.objects().filter(|(_, o)| o.is_fresh_apple()).map(|(p, _)| p).collect()
}

/// Next primitive towards eating the nearest reachable fresh apple.
pub fn eat(env: &EnvState, actor: Actor) -> Option<u8> {
    let apples = fresh_apples(env);
    let pose = actor.pose;
    if apples.contains(&pose.front()) {
        return Some(primitive::TOGGLE);
    }
    if let Some(d) = apples.iter().find_map(|a| Direction::between(pose.pos, *a)) {
        return planner::turn_towards(pose, d);
    }
    let path = planner::shortest_path(
        &env.grid,
        pose.pos,
        |p| apples.iter().any(|a| a.manhattan(p) == 1),
        actor.passable(env),
    )?;
    let d = Direction::between(pose.pos, *path.first()?)?;
    Some(planner::turn_towards(pose, d).unwrap_or(primitive::FORWARD))
}

/// A fresh apple can be reached from the actor's position.
pub fn apple_reachable(env: &EnvState, actor: Actor) -> bool {
    let apples = fresh_apples(env);
    let passable = |p: Position| env.grid.is_walkable(p);
    apples.iter().any(|a| a.manhattan(actor.pose.pos) == 1)
        || planner::shortest_path(&env.grid, actor.pose.pos, |p| apples.iter().any(|a| a.manhattan(p) == 1), passable)
            .is_some()
}

/// Push the marble one cell-run in `dir`.
pub fn push_marble(env: &EnvState, actor: Actor, dir: Direction) -> Step {
    let Some(m) = env.grid.marble() else { return Step::Stuck };
    if m.momentum.is_some() {
        return Step::Wait;
    }
    let from = m.pos.step(dir.opposite());
    nav(planner::reach_pose(&env.grid, actor.pose, from, dir, actor.passable(env)), primitive::FORWARD)
}

pub fn push_marble_to(env: &EnvState, actor: Actor, target: Position) -> Step {
    let Some(m) = env.grid.marble() else { return Step::Stuck };
    match Direction::aligned(m.pos, target) {
        Some(d) => push_marble(env, actor, d),
        None => Step::Stuck,
    }
}

/// Operate `inst` the way its kind is meant to be used.
pub fn use_instrument(env: &EnvState, actor: Actor, inst: &Instrument) -> Step {
    let Some(obj) = env.grid.get(inst.pos) else { return Step::Finished };
    if obj.kind != inst.kind {
        return Step::Finished;
    }
    match (inst.kind, obj.state) {
        (ObjectKind::LockableBox, ObjectState::Closed)
        | (ObjectKind::Lever, ObjectState::Plain)
        | (ObjectKind::Door, ObjectState::Closed)
        | (ObjectKind::AppleGenerator, ObjectState::Plain) => toggle_target(env, actor, inst.pos),
        (ObjectKind::Switch, state) => {
            let target = obj.link.or(env.layout.lock_box);
            let box_state = target.and_then(|b| env.grid.get(b)).filter(|o| o.kind == ObjectKind::LockableBox);
            match box_state.map(|o| o.state) {
                Some(ObjectState::Locked) if obj.link.is_some() || state == ObjectState::Plain => {
                    toggle_target(env, actor, inst.pos)
                }
                Some(ObjectState::Closed) if obj.link.is_some() => toggle_target(env, actor, target.unwrap()),
                _ => Step::Finished,
            }
        }
        (ObjectKind::MarbleGenerator, ObjectState::Plain) => push_marble_to(env, actor, inst.pos),
        _ => Step::Finished,
    }
}

/// Solve the instrumental problem through instrument `index`, optionally
/// eating the apple at the end.
pub fn solve(env: &EnvState, actor: Actor, index: usize, eat_apple: bool) -> Step {
    if eat_apple {
        if let Some(a) = eat(env, actor) {
            return Step::Act(a);
        }
    } else if apple_reachable(env, actor) {
        return Step::Finished;
    }
    let Some(inst) = env.layout.instruments.get(index) else { return Step::Stuck };
    use_instrument(env, actor, inst)
}

fn door_open(env: &EnvState) -> bool {
    env.layout.door.and_then(|d| env.grid.get(d)).is_some_and(|o| o.state == ObjectState::Open)
}

fn generator_idle(env: &EnvState) -> Option<Position> {
    env.layout.generator.filter(|g| env.grid.get(*g).is_some_and(|o| o.state == ObjectState::Plain))
}

/// Index of the box of the first role nearest to `pos`.
pub fn nearest_box(env: &EnvState, pos: Position) -> usize {
    (0..env.layout.boxes.len()).min_by_key(|&i| env.layout.boxes[i].pos.manhattan(pos)).unwrap_or(0)
}

/// One move of a collaboration role. `box_choice` selects the box opened
/// by role A in color-matching problems.
pub fn role_step(env: &EnvState, actor: Actor, role: Role, box_choice: Option<usize>) -> Step {
    if let Some(a) = eat(env, actor) {
        return Step::Act(a);
    }
    let layout = &env.layout;
    match (env.params.problem, role) {
        (Problem::LeverDoor, Role::A) => match layout.lever {
            Some(l) => use_lever(env, actor, l),
            None => Step::Stuck,
        },
        (Problem::LeverDoor, Role::B) => match generator_idle(env) {
            Some(g) if door_open(env) => toggle_target(env, actor, g),
            Some(_) => Step::Wait,
            None => Step::Finished,
        },
        (Problem::MarblePush, Role::A) => match generator_idle(env) {
            Some(g) if door_open(env) => push_marble_to(env, actor, g),
            Some(_) => Step::Wait,
            None => Step::Finished,
        },
        (Problem::MarblePush, Role::B) => match layout.lever {
            Some(l) => use_lever(env, actor, l),
            None => Step::Stuck,
        },
        (Problem::MarblePass, role) => {
            let (Some(g), Some(m), Some(fence)) = (generator_idle(env), env.grid.marble(), layout.fence_x) else {
                return Step::Finished;
            };
            let (mp, right_edge) = (m.pos, g.x);
            match role {
                Role::A if mp.x <= fence => push_marble(env, actor, Direction::East),
                Role::B if mp.x > fence && mp.x != right_edge => push_marble(env, actor, Direction::East),
                Role::B if mp.x == right_edge => push_marble_to(env, actor, g),
                _ => Step::Wait,
            }
        }
        (_, Role::A) => match env.selected {
            None => {
                let i = box_choice.unwrap_or_else(|| nearest_box(env, actor.pose.pos));
                match layout.boxes.get(i) {
                    Some(b) => toggle_target(env, actor, b.pos),
                    None => Step::Stuck,
                }
            }
            Some(_) => Step::Finished,
        },
        (_, Role::B) => match env.selected.and_then(|c| matching(env, c)) {
            Some(inst) => match use_instrument(env, actor, inst) {
                Step::Finished => Step::Wait,
                s => s,
            },
            None => Step::Wait,
        },
    }
}

fn use_lever(env: &EnvState, actor: Actor, lever: Position) -> Step {
    if env.grid.get(lever).is_some_and(|o| o.state == ObjectState::Plain) {
        toggle_target(env, actor, lever)
    } else {
        Step::Finished
    }
}

fn matching(env: &EnvState, color: Color) -> Option<&Instrument> {
    env.layout.instruments.iter().find(|i| i.color == color)
}

fn chebyshev(a: Position, b: Position) -> i32 {
    (a.x - b.x).abs().max((a.y - b.y).abs())
}

fn clear_of(grid: &crate::grid::Grid, p: Position) -> bool {
    grid.marble().is_none_or(|m| chebyshev(m.pos, p) >= 2)
        && grid.objects().all(|(q, o)| {
            matches!(o.kind, ObjectKind::Wall | ObjectKind::Fence | ObjectKind::Occluder) || chebyshev(q, p) >= 2
        })
}

/// A cell away from every interactive object, now and at reset, and off
/// all reserved cells.
pub fn is_parking(env: &EnvState, p: Position, other: Option<Position>) -> bool {
    env.grid.is_walkable(p)
        && Some(p) != other
        && !env.layout.reserved.contains(&p)
        && clear_of(&env.grid, p)
        && clear_of(&env.initial, p)
}

/// Move to the nearest parking cell, then stand still.
pub fn park(env: &EnvState, actor: Actor) -> u8 {
    match planner::walk_to(&env.grid, actor.pose, |p| is_parking(env, p, actor.other), actor.passable(env)) {
        Plan::Act(a) => a,
        _ => primitive::NO_OP,
    }
}

/// Direction that best points from `from` to `to`, preferring the dominant axis.
pub fn facing(from: Position, to: Position) -> Direction {
    let (dx, dy) = (to.x - from.x, to.y - from.y);
    if dx.abs() >= dy.abs() {
        if dx > 0 {
            Direction::East
        } else {
            Direction::West
        }
    } else if dy > 0 {
        Direction::South
    } else {
        Direction::North
    }
}
