//! Procedural layouts for every problem.

use rand::seq::SliceRandom;
use rand::Rng as _;
use serde::{Deserialize, Serialize};

use super::params::{EnvParams, EnvType, Problem, Role, Version};
use crate::error::{Error, Result};
use crate::grid::{AgentPose, Color, Direction, Grid, Marble, ObjectKind, ObjectState, Position, WorldObject};
use crate::planner;
use crate::rng::Rng;

pub const ROOM: (usize, usize) = (10, 10);
pub const COLLAB_ROOM: (usize, usize) = (14, 10);
pub const FENCE_X: i32 = 7;
const MAX_ATTEMPTS: usize = 1000;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Instrument {
    pub kind: ObjectKind,
    pub pos: Position,
    pub color: Color,
}

/// Problem geometry recorded alongside the grid.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Layout {
    /// Objects whose choice matters: the correct object and the distractor
    /// in information seeking, the color-matched objects of the second role
    /// in collaboration.
    pub instruments: Vec<Instrument>,
    pub correct: usize,
    /// Boxes of the first role in color-matching collaboration.
    pub boxes: Vec<Instrument>,
    /// Box unlocked by switches.
    pub lock_box: Option<Position>,
    /// Cells where apples appear when a generator fires.
    pub platforms: Vec<Position>,
    pub door: Option<Position>,
    pub lever: Option<Position>,
    /// Collaboration apple or marble generator.
    pub generator: Option<Position>,
    /// Cells kept free for marble paths and door approaches.
    pub reserved: Vec<Position>,
    pub fence_x: Option<i32>,
    pub agent_start: AgentPose,
    pub peer_start: Option<AgentPose>,
    pub peer_color: Color,
    /// Color chosen in advance when no peer opens a box.
    pub preselected: Option<Color>,
}

impl Layout {
    /// A layout with no machinery, for hand-built rooms.
    pub fn empty(agent_start: AgentPose) -> Self {
        empty_layout(agent_start)
    }

    pub fn correct_instrument(&self) -> Option<&Instrument> {
        self.instruments.get(self.correct)
    }

    pub fn instrument_at(&self, p: Position) -> Option<(usize, &Instrument)> {
        self.instruments.iter().enumerate().find(|(_, i)| i.pos == p)
    }

    /// Side of the fence a cell lies on (`Role::A` is the left half).
    pub fn side_of(&self, p: Position) -> Option<Role> {
        self.fence_x.map(|f| if p.x < f { Role::A } else { Role::B })
    }
}

#[derive(Clone, Copy, Debug)]
struct Rect {
    x0: i32,
    x1: i32,
    y0: i32,
    y1: i32,
}

impl Rect {
    const fn new(x0: i32, x1: i32, y0: i32, y1: i32) -> Self {
        Self { x0, x1, y0, y1 }
    }

    fn cells(self) -> impl Iterator<Item = Position> {
        (self.y0..=self.y1).flat_map(move |y| (self.x0..=self.x1).map(move |x| Position::new(x, y)))
    }

    fn contains(self, p: Position) -> bool {
        (self.x0..=self.x1).contains(&p.x) && (self.y0..=self.y1).contains(&p.y)
    }
}

const LEFT: Rect = Rect::new(1, FENCE_X - 1, 1, 8);
const RIGHT: Rect = Rect::new(FENCE_X + 1, 12, 1, 8);

fn chebyshev(a: Position, b: Position) -> i32 {
    (a.x - b.x).abs().max((a.y - b.y).abs())
}

struct Builder<'r> {
    grid: Grid,
    rng: &'r mut Rng,
    spaced: Vec<Position>,
    reserved: Vec<Position>,
}

impl<'r> Builder<'r> {
    fn new(size: (usize, usize), rng: &'r mut Rng) -> Self {
        Self { grid: Grid::new(size.0, size.1), rng, spaced: Vec::new(), reserved: Vec::new() }
    }

    fn free(&self, p: Position) -> bool {
        self.grid.get(p).is_none() && !self.grid.marble_at(p) && !self.reserved.contains(&p)
    }

    fn isolated(&self, p: Position) -> bool {
        self.free(p) && self.spaced.iter().all(|q| chebyshev(*q, p) >= 2)
    }

    fn pick(&mut self, rect: Rect, ok: impl Fn(&Self, Position) -> bool) -> Option<Position> {
        let cands: Vec<Position> = rect.cells().filter(|p| ok(self, *p)).collect();
        cands.choose(self.rng).copied()
    }

    fn pick_isolated(&mut self, rect: Rect) -> Option<Position> {
        self.pick(rect, |b, p| b.isolated(p))
    }

    fn put(&mut self, p: Position, obj: WorldObject) {
        self.grid.set(p, Some(obj));
        self.spaced.push(p);
    }

    fn wall(&mut self, p: Position) {
        self.grid.set(p, Some(WorldObject::wall()));
    }

    fn colors(&mut self, n: usize) -> Vec<Color> {
        Color::ALL.choose_multiple(self.rng, n).copied().collect()
    }

    fn pose(&mut self, rect: Rect, ok: impl Fn(&Self, Position) -> bool) -> Option<AgentPose> {
        let pos = self.pick(rect, ok)?;
        let dir = Direction::from_index(self.rng.gen_range(0..4));
        Some(AgentPose::new(pos, dir))
    }

    /// Marble at `m` with `n` generators in distinct directions, each with a
    /// clear rolling path and a free cell to push from.
    fn marble_lines(&mut self, rect: Rect, n: usize) -> Option<(Position, Vec<(Position, Vec<Position>)>)> {
        let m = self.pick_isolated(rect)?;
        let mut dirs = Direction::ALL.to_vec();
        dirs.shuffle(self.rng);
        let mut lines = Vec::new();
        for d in dirs {
            if lines.len() == n {
                break;
            }
            let push = m.step(d.opposite());
            if !rect.contains(push) || !self.free(push) {
                continue;
            }
            let dist = self.rng.gen_range(2..=4);
            let g = m.offset(d, dist);
            let path: Vec<Position> = (1..dist).map(|k| m.offset(d, k)).collect();
            if !rect.contains(g) || !self.isolated(g) || !path.iter().all(|p| self.free(*p)) {
                continue;
            }
            self.reserved.extend(path.iter().copied());
            self.reserved.push(push);
            self.reserved.push(g);
            lines.push((g, path));
        }
        (lines.len() == n).then_some((m, lines))
    }

    /// Everything in `targets` and a neighbour of everything in
    /// `adjacent_to` can be reached from `from` without crossing `avoid`.
    fn connected(
        &self,
        from: Position,
        avoid: Option<Position>,
        targets: &[Position],
        adjacent_to: &[Position],
    ) -> bool {
        let grid = &self.grid;
        let reach = planner::reachable(grid, from, |p| grid.is_walkable(p) && Some(p) != avoid);
        targets.iter().all(|t| reach.contains(t))
            && adjacent_to.iter().all(|t| t.neighbors().iter().any(|n| reach.contains(n)))
    }
}

fn empty_layout(agent_start: AgentPose) -> Layout {
    Layout {
        instruments: Vec::new(),
        correct: 0,
        boxes: Vec::new(),
        lock_box: None,
        platforms: Vec::new(),
        door: None,
        lever: None,
        generator: None,
        reserved: Vec::new(),
        fence_x: None,
        agent_start,
        peer_start: None,
        peer_color: Color::Purple,
        preselected: None,
    }
}

/// Build the grid and layout for `params`, retrying until all structural
/// checks pass.
pub fn generate(params: &EnvParams, rng: &mut Rng) -> Result<(Grid, Layout)> {
    for _ in 0..MAX_ATTEMPTS {
        let attempt = match params.env_type {
            EnvType::InformationSeeking => info_seeking(params, rng),
            EnvType::Collaboration => collaboration(params, rng),
            EnvType::AdversarialPeer => adversarial(params, rng),
        };
        if let Some(found) = attempt {
            return Ok(found);
        }
    }
    Err(Error::Layout(MAX_ATTEMPTS))
}

fn info_seeking(params: &EnvParams, rng: &mut Rng) -> Option<(Grid, Layout)> {
    let mut b = Builder::new(ROOM, rng);
    let n = params.n_objects as usize;
    let alcoves = matches!(params.problem, Problem::Doors | Problem::Levers);
    let area = if alcoves { Rect::new(1, 8, 3, 8) } else { Rect::new(1, 8, 1, 8) };
    let colors = b.colors(n + 2);
    let correct = b.rng.gen_range(0..n);
    let mut instruments = Vec::new();
    let mut platforms = Vec::new();
    let mut lock_box = None;
    let mut door = None;
    let mut needs_access = Vec::new();
    if alcoves {
        for x in 1..=8 {
            b.wall(Position::new(x, 1));
            b.wall(Position::new(x, 2));
        }
    }
    match params.problem {
        Problem::Boxes => {
            for (i, &c) in colors.iter().take(n).enumerate() {
                let p = b.pick_isolated(area)?;
                b.put(p, WorldObject::boxed(c, ObjectState::Closed, i == correct));
                instruments.push(Instrument { kind: ObjectKind::LockableBox, pos: p, color: c });
            }
        }
        Problem::Switches => {
            let bp = b.pick_isolated(area)?;
            b.put(bp, WorldObject::boxed(colors[correct], ObjectState::Locked, true));
            lock_box = Some(bp);
            needs_access.push(bp);
            for (i, &c) in colors.iter().take(n).enumerate() {
                let p = b.pick_isolated(area)?;
                let mut sw = WorldObject::new(ObjectKind::Switch, c, ObjectState::Plain);
                sw.link = (i == correct).then_some(bp);
                b.put(p, sw);
                instruments.push(Instrument { kind: ObjectKind::Switch, pos: p, color: c });
            }
        }
        Problem::Levers => {
            let xa = b.rng.gen_range(1..=8);
            let d = Position::new(xa, 2);
            b.grid.set(Position::new(xa, 1), Some(WorldObject::apple()));
            b.grid.set(d, Some(WorldObject::new(ObjectKind::RemoteDoor, colors[n], ObjectState::Closed)));
            b.reserved.push(Position::new(xa, 3));
            door = Some(d);
            needs_access.push(d);
            for (i, &c) in colors.iter().take(n).enumerate() {
                let p = b.pick_isolated(Rect::new(1, 8, 4, 8))?;
                let mut lever = WorldObject::new(ObjectKind::Lever, c, ObjectState::Plain);
                lever.link = (i == correct).then_some(d);
                b.put(p, lever);
                instruments.push(Instrument { kind: ObjectKind::Lever, pos: p, color: c });
            }
        }
        Problem::Doors => {
            let mut xs: Vec<i32> = Vec::new();
            while xs.len() < n {
                let x = b.rng.gen_range(1..=8);
                if xs.iter().all(|o| (o - x).abs() >= 2) {
                    xs.push(x);
                }
            }
            for (i, (&x, &c)) in xs.iter().zip(&colors).enumerate() {
                let p = Position::new(x, 2);
                b.grid.set(Position::new(x, 1), None);
                b.grid.set(p, Some(WorldObject::new(ObjectKind::Door, c, ObjectState::Closed)));
                if i == correct {
                    b.grid.set(Position::new(x, 1), Some(WorldObject::apple()));
                }
                b.reserved.push(Position::new(x, 3));
                instruments.push(Instrument { kind: ObjectKind::Door, pos: p, color: c });
            }
        }
        Problem::Generators => {
            for &c in colors.iter().take(n) {
                let p = b.pick_isolated(area)?;
                b.put(p, WorldObject::new(ObjectKind::AppleGenerator, c, ObjectState::Plain));
                instruments.push(Instrument { kind: ObjectKind::AppleGenerator, pos: p, color: c });
            }
            let pl = b.pick_isolated(area)?;
            b.put(pl, WorldObject::new(ObjectKind::Platform, colors[n], ObjectState::Plain));
            platforms.push(pl);
        }
        Problem::Marble => {
            let (m, lines) = b.marble_lines(area, n)?;
            b.grid.set_marble(Some(Marble { pos: m, color: colors[n], momentum: None }));
            b.spaced.push(m);
            for ((g, _), &c) in lines.iter().zip(&colors) {
                b.put(*g, WorldObject::new(ObjectKind::MarbleGenerator, c, ObjectState::Plain));
                instruments.push(Instrument { kind: ObjectKind::MarbleGenerator, pos: *g, color: c });
                needs_access.push(m.step(Direction::aligned(m, *g).unwrap().opposite()));
            }
            let pl = b.pick_isolated(area)?;
            b.put(pl, WorldObject::new(ObjectKind::Platform, colors[n + 1], ObjectState::Plain));
            platforms.push(pl);
        }
        _ => return None,
    }
    let agent = b.pose(area, |b, p| b.grid.get(p).is_none() && !b.grid.marble_at(p))?;
    let peer = if params.peer { Some(b.pose(area, |b, p| b.free(p) && p != agent.pos)?) } else { None };
    let mut adjacent: Vec<Position> = instruments.iter().map(|i| i.pos).collect();
    adjacent.extend(platforms.iter().copied());
    let access: Vec<Position> = needs_access.iter().copied().filter(|p| b.grid.is_walkable(*p)).collect();
    adjacent.extend(needs_access.iter().copied().filter(|p| !b.grid.is_walkable(*p)));
    let other = peer.map(|p| p.pos);
    if !b.connected(agent.pos, other, &access, &adjacent) {
        return None;
    }
    if let Some(p) = other {
        if !b.connected(p, Some(agent.pos), &access, &adjacent) || !b.connected(agent.pos, None, &[p], &[]) {
            return None;
        }
    }
    let peer_color = *Color::ALL.choose(b.rng).unwrap();
    let mut layout = empty_layout(agent);
    layout.instruments = instruments;
    layout.correct = correct;
    layout.lock_box = lock_box;
    layout.platforms = platforms;
    layout.door = door;
    layout.reserved = b.reserved;
    layout.peer_start = peer;
    layout.peer_color = peer_color;
    Some((b.grid, layout))
}

fn collaboration(params: &EnvParams, rng: &mut Rng) -> Option<(Grid, Layout)> {
    let mut b = Builder::new(COLLAB_ROOM, rng);
    for y in 1..=8 {
        b.grid.set(
            Position::new(FENCE_X, y),
            Some(WorldObject::new(ObjectKind::Fence, Color::Brown, ObjectState::Plain)),
        );
    }
    let social = params.version == Version::Social;
    let colors = b.colors(4);
    let mut layout = empty_layout(AgentPose::new(Position::new(1, 1), Direction::North));
    let mut access = Vec::new();
    let mut adjacent = Vec::new();
    // Side the agent plays on when alone.
    let mut solo_side = Role::B;
    let (left_area, right_area);
    match params.problem {
        Problem::LeverDoor => {
            for x in RIGHT.x0..=RIGHT.x1 {
                b.wall(Position::new(x, 1));
                b.wall(Position::new(x, 2));
            }
            let xd = b.rng.gen_range(RIGHT.x0..=RIGHT.x1);
            let d = Position::new(xd, 2);
            let g = Position::new(xd, 1);
            let state = if social { ObjectState::Closed } else { ObjectState::Open };
            b.grid.set(d, Some(WorldObject::new(ObjectKind::RemoteDoor, colors[0], state)));
            b.grid.set(g, Some(WorldObject::new(ObjectKind::AppleGenerator, colors[1], ObjectState::Plain)));
            b.reserved.push(Position::new(xd, 3));
            left_area = LEFT;
            right_area = Rect::new(RIGHT.x0, RIGHT.x1, 3, 8);
            let lever = b.pick_isolated(left_area)?;
            b.put(lever, WorldObject::linked(ObjectKind::Lever, colors[2], d));
            layout.door = Some(d);
            layout.lever = Some(lever);
            layout.generator = Some(g);
            adjacent.extend([lever, d]);
        }
        Problem::MarblePush => {
            for x in LEFT.x0..=LEFT.x1 {
                b.wall(Position::new(x, 1));
                b.wall(Position::new(x, 2));
            }
            let xd = b.rng.gen_range(LEFT.x0..=LEFT.x1);
            let ym = b.rng.gen_range(4..=7);
            let d = Position::new(xd, 2);
            let g = Position::new(xd, 1);
            let state = if social { ObjectState::Closed } else { ObjectState::Open };
            b.grid.set(d, Some(WorldObject::new(ObjectKind::RemoteDoor, colors[0], state)));
            b.grid.set(g, Some(WorldObject::new(ObjectKind::MarbleGenerator, colors[1], ObjectState::Plain)));
            let m = Position::new(xd, ym);
            b.grid.set_marble(Some(Marble { pos: m, color: colors[3], momentum: None }));
            b.reserved.extend((3..=ym + 1).map(|y| Position::new(xd, y)));
            left_area = Rect::new(LEFT.x0, LEFT.x1, 3, 8);
            right_area = RIGHT;
            let lever = b.pick_isolated(right_area)?;
            b.put(lever, WorldObject::linked(ObjectKind::Lever, colors[2], d));
            layout.door = Some(d);
            layout.lever = Some(lever);
            layout.generator = Some(g);
            access.push(Position::new(xd, ym + 1));
            adjacent.push(lever);
            solo_side = Role::A;
        }
        Problem::MarblePass => {
            let xm = b.rng.gen_range(2..=5);
            let ym = b.rng.gen_range(3..=6);
            let top = b.rng.gen_bool(0.5);
            let g = Position::new(RIGHT.x1, if top { 1 } else { 8 });
            let push = Position::new(RIGHT.x1, if top { ym + 1 } else { ym - 1 });
            b.grid.set(g, Some(WorldObject::new(ObjectKind::MarbleGenerator, colors[1], ObjectState::Plain)));
            b.spaced.push(g);
            let start = if social { Position::new(xm, ym) } else { Position::new(RIGHT.x1, ym) };
            b.grid.set_marble(Some(Marble { pos: start, color: colors[3], momentum: None }));
            b.reserved.push(Position::new(xm - 1, ym));
            b.reserved.extend((xm..=RIGHT.x1).map(|x| Position::new(x, ym)).filter(|p| p.x != FENCE_X));
            let (y0, y1) = if top { (2, ym + 1) } else { (ym - 1, 7) };
            b.reserved.extend((y0..=y1).map(|y| Position::new(RIGHT.x1, y)));
            left_area = LEFT;
            right_area = RIGHT;
            layout.generator = Some(g);
            access.push(push);
            if social {
                access.push(Position::new(xm - 1, ym));
            }
        }
        Problem::Boxes | Problem::Switches | Problem::Generators | Problem::Marble => {
            left_area = LEFT;
            right_area = RIGHT;
            let pair = [colors[0], colors[1]];
            for &c in &pair {
                let p = b.pick_isolated(left_area)?;
                b.put(p, WorldObject::boxed(c, ObjectState::Closed, true));
                layout.boxes.push(Instrument { kind: ObjectKind::LockableBox, pos: p, color: c });
            }
            match params.problem {
                Problem::Boxes => {
                    for &c in &pair {
                        let p = b.pick_isolated(right_area)?;
                        b.put(p, WorldObject::boxed(c, ObjectState::Closed, true));
                        layout.instruments.push(Instrument { kind: ObjectKind::LockableBox, pos: p, color: c });
                    }
                }
                Problem::Switches => {
                    let bp = b.pick_isolated(right_area)?;
                    b.put(bp, WorldObject::boxed(colors[2], ObjectState::Locked, true));
                    layout.lock_box = Some(bp);
                    adjacent.push(bp);
                    for &c in &pair {
                        let p = b.pick_isolated(right_area)?;
                        b.put(p, WorldObject::linked(ObjectKind::Switch, c, bp));
                        layout.instruments.push(Instrument { kind: ObjectKind::Switch, pos: p, color: c });
                    }
                }
                Problem::Generators => {
                    for &c in &pair {
                        let p = b.pick_isolated(right_area)?;
                        b.put(p, WorldObject::new(ObjectKind::AppleGenerator, c, ObjectState::Plain));
                        layout.instruments.push(Instrument { kind: ObjectKind::AppleGenerator, pos: p, color: c });
                    }
                }
                _ => {
                    let (m, lines) = b.marble_lines(right_area, 2)?;
                    b.grid.set_marble(Some(Marble { pos: m, color: colors[3], momentum: None }));
                    b.spaced.push(m);
                    for ((g, _), &c) in lines.iter().zip(&pair) {
                        b.put(*g, WorldObject::new(ObjectKind::MarbleGenerator, c, ObjectState::Plain));
                        layout.instruments.push(Instrument { kind: ObjectKind::MarbleGenerator, pos: *g, color: c });
                        access.push(m.step(Direction::aligned(m, *g).unwrap().opposite()));
                    }
                }
            }
            if !social {
                let opened = layout.boxes[b.rng.gen_range(0..2)];
                b.grid.set(opened.pos, Some(WorldObject::apple()));
                layout.preselected = Some(opened.color);
            }
            adjacent.extend(layout.instruments.iter().map(|i| i.pos));
            adjacent.extend(layout.boxes.iter().map(|i| i.pos));
        }
        _ => return None,
    }
    // One platform per side receives an apple when the shared generator fires.
    let platform_sides: &[Rect] = match params.problem {
        Problem::LeverDoor | Problem::MarblePush | Problem::MarblePass => &[left_area, right_area],
        Problem::Generators | Problem::Marble => &[right_area],
        _ => &[],
    };
    for (k, rect) in platform_sides.iter().enumerate() {
        let p = b.pick_isolated(*rect)?;
        b.put(p, WorldObject::new(ObjectKind::Platform, Color::ALL[(k + 5) % 7], ObjectState::Plain));
        layout.platforms.push(p);
        adjacent.push(p);
    }
    let agent_side = if social { params.role } else { solo_side };
    let rect_of = |r: Role| if r == Role::A { left_area } else { right_area };
    let agent = b.pose(rect_of(agent_side), |b, p| b.free(p))?;
    let peer = if social {
        let other = if agent_side == Role::A { Role::B } else { Role::A };
        Some(b.pose(rect_of(other), |b, p| b.free(p))?)
    } else {
        None
    };
    // Each side must reach its own machinery.
    let mut starts = vec![(agent.pos, peer.map(|p| p.pos))];
    starts.extend(peer.map(|p| (p.pos, Some(agent.pos))));
    for (s, avoid) in starts {
        let side = if s.x < FENCE_X { Role::A } else { Role::B };
        let mine = |p: &Position| (p.x < FENCE_X) == (side == Role::A);
        let acc: Vec<Position> = access.iter().copied().filter(mine).collect();
        let adj: Vec<Position> = adjacent.iter().copied().filter(mine).collect();
        if !b.connected(s, avoid, &acc, &adj) {
            return None;
        }
    }
    layout.reserved = b.reserved;
    layout.fence_x = Some(FENCE_X);
    layout.agent_start = agent;
    layout.peer_start = peer;
    layout.peer_color = *Color::ALL.choose(b.rng).unwrap();
    Some((b.grid, layout))
}

fn adversarial(params: &EnvParams, rng: &mut Rng) -> Option<(Grid, Layout)> {
    let mut b = Builder::new(ROOM, rng);
    let area = Rect::new(1, 8, 1, 8);
    let apple = b.pick_isolated(area)?;
    b.put(apple, WorldObject::apple());
    if params.obstacles {
        for _ in 0..4 {
            let p = b.pick_isolated(area)?;
            b.put(p, WorldObject::new(ObjectKind::Occluder, Color::Brown, ObjectState::Plain));
        }
    }
    let agent = b.pose(area, |b, p| b.free(p))?;
    let peer = b.pose(area, |b, p| b.free(p) && p != agent.pos)?;
    if !b.connected(agent.pos, Some(peer.pos), &[], &[apple]) {
        return None;
    }
    let mut layout = empty_layout(agent);
    layout.peer_start = Some(peer);
    layout.peer_color = *Color::ALL.choose(b.rng).unwrap();
    Some((b.grid, layout))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng;

    fn build(params: EnvParams, seed: u64) -> (Grid, Layout) {
        generate(&params, &mut rng::stream(seed, rng::tag::LAYOUT)).unwrap()
    }

    #[test]
    fn boxes_have_distinct_colors_and_one_apple() {
        for seed in 0..50 {
            let (g, l) = build(EnvParams::info_seeking(Problem::Boxes), seed);
            assert_eq!(l.instruments.len(), 2);
            assert_ne!(l.instruments[0].color, l.instruments[1].color);
            let apples = l.instruments.iter().filter(|i| g.get(i.pos).unwrap().holds_apple).count();
            assert_eq!(apples, 1);
            assert!(g.get(l.correct_instrument().unwrap().pos).unwrap().holds_apple);
        }
    }

    #[test]
    fn asocial_doors_have_one_door_and_apple_behind() {
        for seed in 0..50 {
            let (g, l) = build(EnvParams::asocial(Problem::Doors), seed);
            assert!(l.peer_start.is_none());
            let doors: Vec<_> = g.objects().filter(|(_, o)| o.kind == ObjectKind::Door).collect();
            assert_eq!(doors.len(), 1);
            let behind = doors[0].0.step(Direction::North);
            assert!(g.get(behind).unwrap().is_fresh_apple());
        }
    }

    #[test]
    fn marble_generators_are_aligned_with_clear_paths() {
        for seed in 0..50 {
            let (g, l) = build(EnvParams::info_seeking(Problem::Marble), seed);
            let m = g.marble().unwrap().pos;
            for inst in &l.instruments {
                let d = Direction::aligned(m, inst.pos).expect("aligned");
                let mut p = m.step(d);
                while p != inst.pos {
                    assert!(g.passability(p).marble, "seed {seed}");
                    p = p.step(d);
                }
                assert!(g.is_walkable(m.step(d.opposite())));
            }
        }
    }

    #[test]
    fn collaboration_sides() {
        for seed in 0..30 {
            let params = EnvParams {
                env_type: EnvType::Collaboration,
                problem: Problem::MarblePass,
                role: Role::B,
                ..EnvParams::default()
            };
            let (g, l) = build(params, seed);
            assert!(l.agent_start.pos.x > FENCE_X);
            assert!(l.peer_start.unwrap().pos.x < FENCE_X);
            assert!(g.marble().unwrap().pos.x < FENCE_X);
            for y in 1..=8 {
                assert_eq!(g.get(Position::new(FENCE_X, y)).unwrap().kind, ObjectKind::Fence);
            }
        }
    }
}
