//! Grid representation, object semantics and movement physics.
//!
//! The grid stores static objects per cell plus at most one rolling marble
//! as an overlay. Actors (agent and peer) are not stored in the grid; the
//! physics functions take their positions as blockers.

use serde::{Deserialize, Serialize};
use std::fmt;

/// Primitive action indices.
pub mod primitive {
    pub const NO_OP: u8 = 0;
    pub const TURN_LEFT: u8 = 1;
    pub const TURN_RIGHT: u8 = 2;
    pub const FORWARD: u8 = 3;
    pub const TOGGLE: u8 = 4;
    pub const DONE: u8 = 5;
    pub const COUNT: u8 = 6;
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Position {
    pub x: i32,
    pub y: i32,
}

impl Position {
    pub const fn new(x: i32, y: i32) -> Self {
        Self { x, y }
    }

    pub fn step(self, dir: Direction) -> Self {
        let (dx, dy) = dir.delta();
        Self::new(self.x + dx, self.y + dy)
    }

    pub fn offset(self, dir: Direction, n: i32) -> Self {
        let (dx, dy) = dir.delta();
        Self::new(self.x + dx * n, self.y + dy * n)
    }

    pub fn manhattan(self, other: Position) -> i32 {
        (self.x - other.x).abs() + (self.y - other.y).abs()
    }

    pub fn neighbors(self) -> [Position; 4] {
        Direction::ALL.map(|d| self.step(d))
    }
}

impl fmt::Display for Position {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.x, self.y)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Direction {
    North,
    East,
    South,
    West,
}

impl Direction {
    /// Clockwise order, also the tie-breaking order for path search.
    pub const ALL: [Direction; 4] = [Direction::North, Direction::East, Direction::South, Direction::West];

    pub fn index(self) -> u8 {
        self as u8
    }

    pub fn from_index(i: u8) -> Direction {
        Self::ALL[(i % 4) as usize]
    }

    pub fn delta(self) -> (i32, i32) {
        match self {
            Direction::North => (0, -1),
            Direction::East => (1, 0),
            Direction::South => (0, 1),
            Direction::West => (-1, 0),
        }
    }

    pub fn left(self) -> Direction {
        Self::from_index(self.index() + 3)
    }

    pub fn right(self) -> Direction {
        Self::from_index(self.index() + 1)
    }

    pub fn opposite(self) -> Direction {
        Self::from_index(self.index() + 2)
    }

    /// Direction of the unit step from `from` to an adjacent `to`.
    pub fn between(from: Position, to: Position) -> Option<Direction> {
        Self::ALL.into_iter().find(|d| from.step(*d) == to)
    }

    /// Axis-aligned direction from `from` towards `to` if they share a row or column.
    pub fn aligned(from: Position, to: Position) -> Option<Direction> {
        match (to.x - from.x, to.y - from.y) {
            (0, 0) => None,
            (0, dy) if dy < 0 => Some(Direction::North),
            (0, _) => Some(Direction::South),
            (dx, 0) if dx > 0 => Some(Direction::East),
            (_, 0) => Some(Direction::West),
            _ => None,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Color {
    Red,
    Green,
    Blue,
    Purple,
    Yellow,
    Grey,
    Brown,
}

impl Color {
    pub const ALL: [Color; 7] =
        [Color::Red, Color::Green, Color::Blue, Color::Purple, Color::Yellow, Color::Grey, Color::Brown];

    pub fn id(self) -> u8 {
        self as u8
    }

    pub fn from_id(id: u8) -> Option<Color> {
        Self::ALL.get(id as usize).copied()
    }

    pub fn name(self) -> &'static str {
        match self {
            Color::Red => "red",
            Color::Green => "green",
            Color::Blue => "blue",
            Color::Purple => "purple",
            Color::Yellow => "yellow",
            Color::Grey => "grey",
            Color::Brown => "brown",
        }
    }

    pub fn from_name(name: &str) -> Option<Color> {
        Self::ALL.into_iter().find(|c| c.name() == name)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum ObjectKind {
    Wall,
    Apple,
    LockableBox,
    Switch,
    Lever,
    Door,
    RemoteDoor,
    Marble,
    AppleGenerator,
    MarbleGenerator,
    Fence,
    Occluder,
    Platform,
}

impl ObjectKind {
    pub const ALL: [ObjectKind; 13] = [
        ObjectKind::Wall,
        ObjectKind::Apple,
        ObjectKind::LockableBox,
        ObjectKind::Switch,
        ObjectKind::Lever,
        ObjectKind::Door,
        ObjectKind::RemoteDoor,
        ObjectKind::Marble,
        ObjectKind::AppleGenerator,
        ObjectKind::MarbleGenerator,
        ObjectKind::Fence,
        ObjectKind::Occluder,
        ObjectKind::Platform,
    ];

    /// Type channel value; 0 is reserved for empty/hidden cells.
    pub fn type_id(self) -> u8 {
        self as u8 + 1
    }

    pub fn from_type_id(id: u8) -> Option<ObjectKind> {
        id.checked_sub(1).and_then(|i| Self::ALL.get(i as usize).copied())
    }

    /// Name used by the text renderer.
    pub fn name(self) -> &'static str {
        match self {
            ObjectKind::Wall => "wall",
            ObjectKind::Apple => "apple",
            ObjectKind::LockableBox => "lockablebox",
            ObjectKind::Switch => "switch",
            ObjectKind::Lever => "lever",
            ObjectKind::Door => "door",
            ObjectKind::RemoteDoor => "remotedoor",
            ObjectKind::Marble => "marble",
            ObjectKind::AppleGenerator => "applegenerator",
            ObjectKind::MarbleGenerator => "marblegenerator",
            ObjectKind::Fence => "fence",
            ObjectKind::Occluder => "occluder",
            ObjectKind::Platform => "platform",
        }
    }

    pub fn from_name(name: &str) -> Option<ObjectKind> {
        Self::ALL.into_iter().find(|k| k.name() == name)
    }
}

/// Kind-specific object state. Not every state is meaningful for every kind.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum ObjectState {
    /// Default state: fresh apple, unactivated lever/generator, switch off.
    Plain,
    Closed,
    Open,
    Locked,
    Activated,
    Eaten,
}

impl ObjectState {
    pub const ALL: [ObjectState; 6] = [
        ObjectState::Plain,
        ObjectState::Closed,
        ObjectState::Open,
        ObjectState::Locked,
        ObjectState::Activated,
        ObjectState::Eaten,
    ];

    pub fn id(self) -> u8 {
        self as u8
    }

    pub fn from_id(id: u8) -> Option<ObjectState> {
        Self::ALL.get(id as usize).copied()
    }
}

/// Movement and sight properties of a cell's content.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Passability {
    pub agent: bool,
    pub marble: bool,
    pub sight: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct WorldObject {
    pub kind: ObjectKind,
    pub color: Color,
    pub state: ObjectState,
    /// Lever → remote door, switch → box.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub link: Option<Position>,
    /// A box that reveals an apple when opened.
    #[serde(default)]
    pub holds_apple: bool,
}

impl WorldObject {
    pub fn new(kind: ObjectKind, color: Color, state: ObjectState) -> Self {
        Self { kind, color, state, link: None, holds_apple: false }
    }

    pub fn wall() -> Self {
        Self::new(ObjectKind::Wall, Color::Grey, ObjectState::Plain)
    }

    pub fn apple() -> Self {
        Self::new(ObjectKind::Apple, Color::Red, ObjectState::Plain)
    }

    pub fn boxed(color: Color, state: ObjectState, holds_apple: bool) -> Self {
        Self { holds_apple, ..Self::new(ObjectKind::LockableBox, color, state) }
    }

    pub fn linked(kind: ObjectKind, color: Color, target: Position) -> Self {
        Self { link: Some(target), ..Self::new(kind, color, ObjectState::Plain) }
    }

    pub fn passability(&self) -> Passability {
        use ObjectKind::*;
        let open = self.state == ObjectState::Open;
        match self.kind {
            Door | RemoteDoor => Passability { agent: open, marble: open, sight: open },
            Fence => Passability { agent: false, marble: true, sight: true },
            Wall | Occluder => Passability { agent: false, marble: false, sight: false },
            _ => Passability { agent: false, marble: false, sight: true },
        }
    }

    pub fn is_fresh_apple(&self) -> bool {
        self.kind == ObjectKind::Apple && self.state == ObjectState::Plain
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Marble {
    pub pos: Position,
    pub color: Color,
    pub momentum: Option<Direction>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct AgentPose {
    pub pos: Position,
    pub dir: Direction,
}

impl AgentPose {
    pub fn new(pos: Position, dir: Direction) -> Self {
        Self { pos, dir }
    }

    pub fn front(&self) -> Position {
        self.pos.step(self.dir)
    }

    /// World position of the cell `forward` steps ahead and `lateral` steps to the right.
    pub fn relative(&self, forward: i32, lateral: i32) -> Position {
        self.pos.offset(self.dir, forward).offset(self.dir.right(), lateral)
    }

    /// Inverse of [`AgentPose::relative`].
    pub fn to_relative(&self, p: Position) -> (i32, i32) {
        let (fx, fy) = self.dir.delta();
        let (rx, ry) = self.dir.right().delta();
        let (dx, dy) = (p.x - self.pos.x, p.y - self.pos.y);
        (dx * fx + dy * fy, dx * rx + dy * ry)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Grid {
    width: usize,
    height: usize,
    cells: Vec<Option<WorldObject>>,
    marble: Option<Marble>,
}

impl Grid {
    /// Empty room surrounded by walls.
    pub fn new(width: usize, height: usize) -> Self {
        assert!(width >= 3 && height >= 3, "grid must be at least 3x3");
        let mut grid = Self { width, height, cells: vec![None; width * height], marble: None };
        for x in 0..width as i32 {
            grid.set(Position::new(x, 0), Some(WorldObject::wall()));
            grid.set(Position::new(x, height as i32 - 1), Some(WorldObject::wall()));
        }
        for y in 0..height as i32 {
            grid.set(Position::new(0, y), Some(WorldObject::wall()));
            grid.set(Position::new(width as i32 - 1, y), Some(WorldObject::wall()));
        }
        grid
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn in_bounds(&self, p: Position) -> bool {
        p.x >= 0 && p.y >= 0 && (p.x as usize) < self.width && (p.y as usize) < self.height
    }

    fn index(&self, p: Position) -> Option<usize> {
        self.in_bounds(p).then(|| p.y as usize * self.width + p.x as usize)
    }

    pub fn get(&self, p: Position) -> Option<&WorldObject> {
        self.index(p).and_then(|i| self.cells[i].as_ref())
    }

    pub fn get_mut(&mut self, p: Position) -> Option<&mut WorldObject> {
        self.index(p).and_then(move |i| self.cells[i].as_mut())
    }

    pub fn set(&mut self, p: Position, obj: Option<WorldObject>) {
        let i = self.index(p).unwrap_or_else(|| panic!("position {p} out of bounds"));
        self.cells[i] = obj;
    }

    pub fn marble(&self) -> Option<&Marble> {
        self.marble.as_ref()
    }

    pub fn marble_mut(&mut self) -> Option<&mut Marble> {
        self.marble.as_mut()
    }

    pub fn set_marble(&mut self, marble: Option<Marble>) {
        self.marble = marble;
    }

    pub fn marble_at(&self, p: Position) -> bool {
        self.marble.as_ref().is_some_and(|m| m.pos == p)
    }

    /// Interior positions (excluding the outer border), row-major.
    pub fn interior(&self) -> impl Iterator<Item = Position> + '_ {
        (1..self.height as i32 - 1).flat_map(move |y| (1..self.width as i32 - 1).map(move |x| Position::new(x, y)))
    }

    /// All object positions, row-major.
    pub fn objects(&self) -> impl Iterator<Item = (Position, &WorldObject)> + '_ {
        self.cells.iter().enumerate().filter_map(move |(i, c)| {
            c.as_ref().map(|o| (Position::new((i % self.width) as i32, (i / self.width) as i32), o))
        })
    }

    pub fn passability(&self, p: Position) -> Passability {
        match self.get(p) {
            _ if !self.in_bounds(p) => Passability { agent: false, marble: false, sight: false },
            Some(obj) => obj.passability(),
            None => Passability { agent: true, marble: true, sight: true },
        }
    }

    /// Agent-passable and not holding the marble.
    pub fn is_walkable(&self, p: Position) -> bool {
        self.passability(p).agent && !self.marble_at(p)
    }

    pub fn is_transparent(&self, p: Position) -> bool {
        self.passability(p).sight
    }
}

/// Apply a movement primitive. Turning rotates, forward advances into a
/// walkable unblocked cell or pushes the marble; other actions leave the
/// pose unchanged.
pub fn step_move(grid: &mut Grid, pose: AgentPose, action: u8, blockers: &[Position]) -> AgentPose {
    match action {
        primitive::TURN_LEFT => AgentPose::new(pose.pos, pose.dir.left()),
        primitive::TURN_RIGHT => AgentPose::new(pose.pos, pose.dir.right()),
        primitive::FORWARD => {
            let target = pose.front();
            if grid.marble_at(target) {
                push_marble(grid, pose.dir);
                pose
            } else if grid.is_walkable(target) && !blockers.contains(&target) {
                AgentPose::new(target, pose.dir)
            } else {
                pose
            }
        }
        _ => pose,
    }
}

/// Give the marble momentum in `dir`. The marble moves on subsequent calls
/// to [`advance_marble`].
pub fn push_marble(grid: &mut Grid, dir: Direction) {
    if let Some(m) = grid.marble_mut() {
        m.momentum = Some(dir);
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum MarbleEvent {
    Idle,
    Moved(Position),
    Stopped(Position),
    /// The marble ran into the marble generator at this position and stopped.
    Contact(Position),
}

/// Advance a moving marble by one cell.
pub fn advance_marble(grid: &mut Grid, blockers: &[Position]) -> MarbleEvent {
    let Some(marble) = grid.marble() else {
        return MarbleEvent::Idle;
    };
    let Some(dir) = marble.momentum else {
        return MarbleEvent::Idle;
    };
    let next = marble.pos.step(dir);
    let contact = grid.get(next).is_some_and(|o| o.kind == ObjectKind::MarbleGenerator);
    let free = grid.passability(next).marble && !blockers.contains(&next);
    let m = grid.marble_mut().expect("marble present");
    if contact {
        m.momentum = None;
        MarbleEvent::Contact(next)
    } else if free {
        m.pos = next;
        MarbleEvent::Moved(next)
    } else {
        m.momentum = None;
        MarbleEvent::Stopped(m.pos)
    }
}

/// Outcome of toggling a cell.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ToggleEffect {
    Nothing,
    BoxOpened { pos: Position, revealed_apple: bool },
    SwitchFlipped { pos: Position, target: Option<Position> },
    LeverPulled { pos: Position, door: Option<Position> },
    DoorOpened(Position),
    AppleEaten(Position),
    GeneratorActivated(Position),
}

/// Toggle the object faced by `pose`.
pub fn toggle(grid: &mut Grid, pose: AgentPose) -> ToggleEffect {
    toggle_at(grid, pose.front())
}

pub fn toggle_at(grid: &mut Grid, pos: Position) -> ToggleEffect {
    let Some(obj) = grid.get_mut(pos) else {
        return ToggleEffect::Nothing;
    };
    match (obj.kind, obj.state) {
        (ObjectKind::LockableBox, ObjectState::Closed) => {
            let revealed = obj.holds_apple;
            if revealed {
                *obj = WorldObject::apple();
            } else {
                obj.state = ObjectState::Open;
            }
            ToggleEffect::BoxOpened { pos, revealed_apple: revealed }
        }
        (ObjectKind::Switch, state) => {
            obj.state = if state == ObjectState::Activated { ObjectState::Plain } else { ObjectState::Activated };
            let target = obj.link;
            if let Some(b) = target.and_then(|t| grid.get_mut(t)) {
                match b.state {
                    ObjectState::Locked => b.state = ObjectState::Closed,
                    ObjectState::Closed => b.state = ObjectState::Locked,
                    _ => {}
                }
            }
            ToggleEffect::SwitchFlipped { pos, target }
        }
        (ObjectKind::Lever, ObjectState::Plain) => {
            obj.state = ObjectState::Activated;
            let door = obj.link;
            if let Some(d) = door.and_then(|t| grid.get_mut(t)) {
                d.state = ObjectState::Open;
            }
            ToggleEffect::LeverPulled { pos, door }
        }
        (ObjectKind::Apple, ObjectState::Plain) => {
            obj.state = ObjectState::Eaten;
            obj.color = Color::Yellow;
            ToggleEffect::AppleEaten(pos)
        }
        (ObjectKind::Door, ObjectState::Closed) => {
            obj.state = ObjectState::Open;
            ToggleEffect::DoorOpened(pos)
        }
        (ObjectKind::AppleGenerator, ObjectState::Plain) => {
            obj.state = ObjectState::Activated;
            ToggleEffect::GeneratorActivated(pos)
        }
        _ => ToggleEffect::Nothing,
    }
}

/// Cells strictly between `a` and `b` on the discrete (Bresenham) ray.
pub fn ray_between(a: Position, b: Position) -> Vec<Position> {
    let (dx, dy) = ((b.x - a.x).abs(), -(b.y - a.y).abs());
    let (sx, sy) = ((b.x - a.x).signum(), (b.y - a.y).signum());
    let (mut x, mut y, mut err) = (a.x, a.y, dx + dy);
    let mut out = Vec::new();
    loop {
        let e2 = 2 * err;
        if e2 >= dy {
            err += dy;
            x += sx;
        }
        if e2 <= dx {
            err += dx;
            y += sy;
        }
        if (x, y) == (b.x, b.y) {
            return out;
        }
        out.push(Position::new(x, y));
    }
}

/// True iff no opaque cell lies strictly between `a` and `b`.
pub fn line_of_sight(grid: &Grid, a: Position, b: Position) -> bool {
    a == b || ray_between(a, b).into_iter().all(|p| grid.is_transparent(p))
}

pub const VIEW_SIZE: usize = 7;
pub const VIEW_HALF: i32 = 3;
pub const ENCODING_CHANNELS: usize = 8;

/// Whether the viewer at `pose` can see `target` (inside the 7×7 forward
/// rectangle with a clear ray).
pub fn in_view(grid: &Grid, pose: AgentPose, target: Position) -> bool {
    let (f, l) = pose.to_relative(target);
    (0..VIEW_SIZE as i32).contains(&f)
        && l.abs() <= VIEW_HALF
        && (f, l) != (0, 0)
        && line_of_sight(grid, pose.pos, target)
}

/// Peer appearance as needed to encode its cell.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct PeerAppearance {
    pub pos: Position,
    pub dir: Direction,
    pub color: Color,
    pub social: SocialKind,
    pub point: Option<Direction>,
    pub last_action: u8,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum SocialKind {
    Cooperative,
    Competitive,
}

impl SocialKind {
    pub fn id(self) -> u8 {
        self as u8
    }

    pub fn from_id(id: u8) -> Option<SocialKind> {
        match id {
            0 => Some(SocialKind::Cooperative),
            1 => Some(SocialKind::Competitive),
            _ => None,
        }
    }
}

/// A direction expressed relative to the observer's heading.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum RelDir {
    Left = 1,
    Right = 2,
    Toward = 3,
    Forward = 4,
}

impl RelDir {
    pub fn of(dir: Direction, observer: Direction) -> RelDir {
        match (dir.index() + 4 - observer.index()) % 4 {
            0 => RelDir::Forward,
            1 => RelDir::Right,
            2 => RelDir::Toward,
            _ => RelDir::Left,
        }
    }

    pub fn code(self) -> u8 {
        self as u8
    }

    pub fn from_code(code: u8) -> Option<RelDir> {
        match code {
            1 => Some(RelDir::Left),
            2 => Some(RelDir::Right),
            3 => Some(RelDir::Toward),
            4 => Some(RelDir::Forward),
            _ => None,
        }
    }
}

/// Peer type channel value.
pub const PEER_TYPE_ID: u8 = ObjectKind::ALL.len() as u8 + 1;

/// Fixed-width encoding of one observed cell.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct CellEncoding(pub [u8; ENCODING_CHANNELS]);

impl CellEncoding {
    pub const EMPTY: CellEncoding = CellEncoding([0; ENCODING_CHANNELS]);

    pub fn is_empty(&self) -> bool {
        *self == Self::EMPTY
    }
}

/// Decoded content of an observed cell.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum CellView {
    Empty,
    Object { kind: ObjectKind, color: Color, state: ObjectState },
    Peer { color: Color, social: SocialKind, gaze: RelDir, point: Option<RelDir>, last_action: u8 },
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum DecodeError {
    #[error("unknown type id {0}")]
    UnknownType(u8),
    #[error("invalid channel {channel} value {value}")]
    InvalidChannel { channel: usize, value: u8 },
}

impl CellView {
    pub fn of_object(obj: &WorldObject) -> Self {
        CellView::Object { kind: obj.kind, color: obj.color, state: obj.state }
    }

    pub fn of_peer(peer: &PeerAppearance, observer: Direction) -> Self {
        CellView::Peer {
            color: peer.color,
            social: peer.social,
            gaze: RelDir::of(peer.dir, observer),
            point: peer.point.map(|d| RelDir::of(d, observer)),
            last_action: peer.last_action,
        }
    }

    pub fn encode(&self) -> CellEncoding {
        match *self {
            CellView::Empty => CellEncoding::EMPTY,
            CellView::Object { kind, color, state } => {
                CellEncoding([kind.type_id(), color.id(), state.id(), 0, 0, 0, 0, 0])
            }
            CellView::Peer { color, social, gaze, point, last_action } => CellEncoding([
                PEER_TYPE_ID,
                color.id(),
                social.id(),
                gaze.code(),
                point.map_or(0, RelDir::code),
                last_action,
                0,
                0,
            ]),
        }
    }

    pub fn decode(enc: &CellEncoding) -> Result<Self, DecodeError> {
        let c = enc.0;
        let bad = |channel: usize| DecodeError::InvalidChannel { channel, value: c[channel] };
        match c[0] {
            0 if enc.is_empty() => Ok(CellView::Empty),
            0 => Err(bad(1)),
            PEER_TYPE_ID => Ok(CellView::Peer {
                color: Color::from_id(c[1]).ok_or_else(|| bad(1))?,
                social: SocialKind::from_id(c[2]).ok_or_else(|| bad(2))?,
                gaze: RelDir::from_code(c[3]).ok_or_else(|| bad(3))?,
                point: match c[4] {
                    0 => None,
                    v => Some(RelDir::from_code(v).ok_or_else(|| bad(4))?),
                },
                last_action: if c[5] < primitive::COUNT { c[5] } else { return Err(bad(5)) },
            }),
            t => {
                let kind = ObjectKind::from_type_id(t).ok_or(DecodeError::UnknownType(t))?;
                Ok(CellView::Object {
                    kind,
                    color: Color::from_id(c[1]).ok_or_else(|| bad(1))?,
                    state: ObjectState::from_id(c[2]).ok_or_else(|| bad(2))?,
                })
            }
        }
    }
}

/// The 7×7 egocentric view. Row 0 is the farthest row, column 0 the
/// leftmost; the observer sits at row 6, column 3.
pub type View = [[CellEncoding; VIEW_SIZE]; VIEW_SIZE];

/// Forward/lateral offset of a view cell.
pub fn view_offset(row: usize, col: usize) -> (i32, i32) {
    (VIEW_SIZE as i32 - 1 - row as i32, col as i32 - VIEW_HALF)
}

/// Encode the 7×7 rectangle in front of `pose`. Out-of-grid cells encode
/// as walls, cells with an opaque cell on the ray encode as zeros.
pub fn field_of_view(grid: &Grid, pose: AgentPose, peer: Option<&PeerAppearance>) -> View {
    let mut view = [[CellEncoding::EMPTY; VIEW_SIZE]; VIEW_SIZE];
    for (row, cells) in view.iter_mut().enumerate() {
        for (col, cell) in cells.iter_mut().enumerate() {
            let (f, l) = view_offset(row, col);
            if (f, l) == (0, 0) {
                continue;
            }
            let p = pose.relative(f, l);
            if !line_of_sight(grid, pose.pos, p) {
                continue;
            }
            *cell = if !grid.in_bounds(p) {
                CellView::of_object(&WorldObject::wall()).encode()
            } else if let Some(peer) = peer.filter(|pr| pr.pos == p) {
                CellView::of_peer(peer, pose.dir).encode()
            } else if let Some(m) = grid.marble().filter(|m| m.pos == p) {
                CellView::Object { kind: ObjectKind::Marble, color: m.color, state: ObjectState::Plain }.encode()
            } else if let Some(obj) = grid.get(p) {
                CellView::of_object(obj).encode()
            } else {
                CellEncoding::EMPTY
            };
        }
    }
    view
}

#[cfg(test)]
mod tests {
    use super::*;
    use primitive::*;

    fn pose(x: i32, y: i32, dir: Direction) -> AgentPose {
        AgentPose::new(Position::new(x, y), dir)
    }

    #[test]
    fn forward_into_empty_cell() {
        let mut g = Grid::new(6, 6);
        assert_eq!(step_move(&mut g, pose(2, 2, Direction::East), FORWARD, &[]), pose(3, 2, Direction::East));
    }

    #[test]
    fn no_op_keeps_pose() {
        let mut g = Grid::new(6, 6);
        let p = pose(2, 2, Direction::South);
        for a in [NO_OP, TOGGLE, DONE] {
            assert_eq!(step_move(&mut g, p, a, &[]), p);
        }
    }

    #[test]
    fn turn_left_from_east_faces_north() {
        let mut g = Grid::new(6, 6);
        assert_eq!(step_move(&mut g, pose(2, 2, Direction::East), TURN_LEFT, &[]), pose(2, 2, Direction::North));
        assert_eq!(step_move(&mut g, pose(2, 2, Direction::West), TURN_RIGHT, &[]), pose(2, 2, Direction::North));
    }

    #[test]
    fn forward_blocked_by_wall_and_actor() {
        let mut g = Grid::new(5, 5);
        let p = pose(1, 1, Direction::North);
        assert_eq!(step_move(&mut g, p, FORWARD, &[]), p);
        let p = pose(1, 1, Direction::East);
        assert_eq!(step_move(&mut g, p, FORWARD, &[Position::new(2, 1)]), p);
    }

    #[test]
    fn fence_blocks_agent_not_sight() {
        let mut g = Grid::new(7, 5);
        g.set(Position::new(3, 2), Some(WorldObject::new(ObjectKind::Fence, Color::Grey, ObjectState::Plain)));
        let p = pose(2, 2, Direction::East);
        assert_eq!(step_move(&mut g, p, FORWARD, &[]), p);
        assert!(line_of_sight(&g, Position::new(1, 2), Position::new(5, 2)));
    }

    #[test]
    fn occluder_blocks_sight() {
        let mut g = Grid::new(7, 5);
        g.set(Position::new(3, 2), Some(WorldObject::new(ObjectKind::Occluder, Color::Brown, ObjectState::Plain)));
        assert!(!line_of_sight(&g, Position::new(1, 2), Position::new(5, 2)));
        assert!(line_of_sight(&g, Position::new(1, 2), Position::new(2, 2)));
    }

    #[test]
    fn passability_partition() {
        for kind in ObjectKind::ALL {
            for state in ObjectState::ALL {
                let p = WorldObject::new(kind, Color::Red, state).passability();
                if kind == ObjectKind::Fence {
                    assert_eq!(p, Passability { agent: false, marble: true, sight: true });
                }
                // agent-passable cells are always marble-passable and transparent
                if p.agent {
                    assert!(p.marble && p.sight);
                }
            }
        }
    }

    #[test]
    fn toggle_box_reveals_apple_then_eat() {
        let mut g = Grid::new(6, 6);
        let b = Position::new(3, 2);
        g.set(b, Some(WorldObject::boxed(Color::Green, ObjectState::Closed, true)));
        let p = pose(2, 2, Direction::East);
        assert_eq!(toggle(&mut g, p), ToggleEffect::BoxOpened { pos: b, revealed_apple: true });
        assert!(g.get(b).unwrap().is_fresh_apple());
        assert_eq!(toggle(&mut g, p), ToggleEffect::AppleEaten(b));
        let apple = g.get(b).unwrap();
        assert_eq!((apple.color, apple.state), (Color::Yellow, ObjectState::Eaten));
        assert_eq!(toggle(&mut g, p), ToggleEffect::Nothing);
    }

    #[test]
    fn locked_box_ignores_toggle_until_switch() {
        let mut g = Grid::new(8, 6);
        let b = Position::new(3, 2);
        let s = Position::new(5, 2);
        g.set(b, Some(WorldObject::boxed(Color::Green, ObjectState::Locked, true)));
        g.set(s, Some(WorldObject::linked(ObjectKind::Switch, Color::Green, b)));
        assert_eq!(toggle_at(&mut g, b), ToggleEffect::Nothing);
        toggle_at(&mut g, s);
        assert_eq!(g.get(b).unwrap().state, ObjectState::Closed);
        toggle_at(&mut g, s);
        assert_eq!(g.get(b).unwrap().state, ObjectState::Locked);
    }

    #[test]
    fn lever_opens_remote_door() {
        let mut g = Grid::new(8, 6);
        let d = Position::new(3, 1);
        let l = Position::new(5, 3);
        g.set(d, Some(WorldObject::new(ObjectKind::RemoteDoor, Color::Blue, ObjectState::Closed)));
        g.set(l, Some(WorldObject::linked(ObjectKind::Lever, Color::Green, d)));
        assert!(!g.is_walkable(d));
        assert_eq!(toggle_at(&mut g, l), ToggleEffect::LeverPulled { pos: l, door: Some(d) });
        assert!(g.is_walkable(d));
        assert_eq!(toggle_at(&mut g, l), ToggleEffect::Nothing);
    }

    fn marble_grid(width: usize) -> Grid {
        let mut g = Grid::new(width, 5);
        g.set_marble(Some(Marble { pos: Position::new(2, 2), color: Color::Blue, momentum: None }));
        g
    }

    #[test]
    fn marble_rolls_until_wall() {
        // 3 empty cells east of the marble at x=2 (x=3,4,5), wall at x=6.
        let mut g = marble_grid(7);
        let agent = pose(1, 2, Direction::East);
        assert_eq!(step_move(&mut g, agent, FORWARD, &[]), agent);
        let mut trace = Vec::new();
        for _ in 0..5 {
            trace.push(advance_marble(&mut g, &[agent.pos]));
        }
        assert_eq!(
            trace,
            vec![
                MarbleEvent::Moved(Position::new(3, 2)),
                MarbleEvent::Moved(Position::new(4, 2)),
                MarbleEvent::Moved(Position::new(5, 2)),
                MarbleEvent::Stopped(Position::new(5, 2)),
                MarbleEvent::Idle,
            ]
        );
    }

    #[test]
    fn marble_against_wall_does_not_move() {
        let mut g = Grid::new(5, 5);
        g.set_marble(Some(Marble { pos: Position::new(3, 2), color: Color::Blue, momentum: None }));
        step_move(&mut g, pose(2, 2, Direction::East), FORWARD, &[]);
        assert_eq!(advance_marble(&mut g, &[]), MarbleEvent::Stopped(Position::new(3, 2)));
    }

    #[test]
    fn marble_contacts_adjacent_generator() {
        let mut g = marble_grid(7);
        g.set(
            Position::new(3, 2),
            Some(WorldObject::new(ObjectKind::MarbleGenerator, Color::Purple, ObjectState::Plain)),
        );
        step_move(&mut g, pose(1, 2, Direction::East), FORWARD, &[]);
        assert_eq!(advance_marble(&mut g, &[]), MarbleEvent::Contact(Position::new(3, 2)));
        assert_eq!(g.marble().unwrap().pos, Position::new(2, 2));
        assert_eq!(g.marble().unwrap().momentum, None);
    }

    #[test]
    fn marble_rolls_through_fence() {
        let mut g = marble_grid(7);
        g.set(Position::new(4, 2), Some(WorldObject::new(ObjectKind::Fence, Color::Grey, ObjectState::Plain)));
        push_marble(&mut g, Direction::East);
        let events: Vec<_> = (0..4).map(|_| advance_marble(&mut g, &[])).collect();
        assert_eq!(events[1], MarbleEvent::Moved(Position::new(4, 2)));
        assert_eq!(events[3], MarbleEvent::Stopped(Position::new(5, 2)));
    }

    #[test]
    fn empty_room_view_has_only_walls() {
        let g = Grid::new(10, 10);
        let view = field_of_view(&g, pose(4, 8, Direction::North), None);
        let wall = CellView::of_object(&WorldObject::wall()).encode();
        for (row, cells) in view.iter().enumerate() {
            for (col, enc) in cells.iter().enumerate() {
                let (f, l) = view_offset(row, col);
                let p = pose(4, 8, Direction::North).relative(f, l);
                let on_border = p.x == 0 || p.x == 9 || p.y == 0 || p.y == 9;
                assert!(enc.is_empty() || (*enc == wall && on_border), "row {row} col {col}");
            }
        }
    }

    #[test]
    fn facing_adjacent_wall_hides_beyond() {
        let g = Grid::new(10, 10);
        let view = field_of_view(&g, pose(4, 1, Direction::North), None);
        for row in 0..5 {
            assert!(view[row].iter().all(CellEncoding::is_empty), "row {row}");
        }
        assert!(!view[5][3].is_empty());
    }

    #[test]
    fn peer_encoding_relative_to_viewer() {
        let g = Grid::new(10, 10);
        let agent = pose(4, 7, Direction::North);
        // Peer 3 cells ahead, facing the agent, pointing to the agent's left.
        let peer = PeerAppearance {
            pos: Position::new(4, 4),
            dir: Direction::South,
            color: Color::Purple,
            social: SocialKind::Cooperative,
            point: Some(Direction::West),
            last_action: TURN_LEFT,
        };
        let view = field_of_view(&g, agent, Some(&peer));
        assert_eq!(view[3][3].0, [PEER_TYPE_ID, Color::Purple.id(), 0, 3, 1, TURN_LEFT, 0, 0]);
        let no_point = PeerAppearance { point: None, ..peer };
        assert_eq!(field_of_view(&g, agent, Some(&no_point))[3][3].0[4], 0);
    }

    #[test]
    fn relative_coordinates_roundtrip() {
        for dir in Direction::ALL {
            let p = pose(5, 5, dir);
            for f in -3..4 {
                for l in -3..4 {
                    assert_eq!(p.to_relative(p.relative(f, l)), (f, l));
                }
            }
        }
    }

    #[test]
    fn decode_rejects_unknown_type() {
        assert_eq!(CellView::decode(&CellEncoding([200, 0, 0, 0, 0, 0, 0, 0])), Err(DecodeError::UnknownType(200)));
    }
}
