//! Breadth-first navigation shared by the scripted peer and the oracle.

use std::collections::VecDeque;

use crate::grid::{primitive, AgentPose, Direction, Grid, Position};

/// One step of a navigation or interaction plan.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Plan {
    Act(u8),
    Arrived,
    Unreachable,
}

/// Shortest path from `start` to the first cell satisfying `goal`, moving
/// through cells accepted by `passable`. Neighbours are expanded in
/// N, E, S, W order so ties are broken deterministically. The returned
/// path excludes `start`.
pub fn shortest_path(
    grid: &Grid,
    start: Position,
    goal: impl Fn(Position) -> bool,
    passable: impl Fn(Position) -> bool,
) -> Option<Vec<Position>> {
    if goal(start) {
        return Some(Vec::new());
    }
    let w = grid.width();
    let idx = |p: Position| p.y as usize * w + p.x as usize;
    let mut prev: Vec<Option<Position>> = vec![None; w * grid.height()];
    let mut seen = vec![false; w * grid.height()];
    seen[idx(start)] = true;
    let mut queue = VecDeque::from([start]);
    while let Some(cur) = queue.pop_front() {
        for n in cur.neighbors() {
            if !grid.in_bounds(n) || seen[idx(n)] || !passable(n) {
                continue;
            }
            seen[idx(n)] = true;
            prev[idx(n)] = Some(cur);
            if goal(n) {
                let mut path = vec![n];
                let mut p = n;
                while let Some(q) = prev[idx(p)].filter(|q| *q != start) {
                    path.push(q);
                    p = q;
                }
                path.reverse();
                return Some(path);
            }
            queue.push_back(n);
        }
    }
    None
}

/// Cells reachable from `start` (inclusive).
pub fn reachable(grid: &Grid, start: Position, passable: impl Fn(Position) -> bool) -> Vec<Position> {
    let mut out = vec![start];
    let mut i = 0;
    while i < out.len() {
        let cur = out[i];
        for n in cur.neighbors() {
            if grid.in_bounds(n) && passable(n) && !out.contains(&n) {
                out.push(n);
            }
        }
        i += 1;
    }
    out
}

/// Turn needed to face `dir`, or `None` if already facing it.
pub fn turn_towards(pose: AgentPose, dir: Direction) -> Option<u8> {
    if pose.dir == dir {
        None
    } else if pose.dir.left() == dir {
        Some(primitive::TURN_LEFT)
    } else {
        Some(primitive::TURN_RIGHT)
    }
}

/// Next primitive to reach any cell satisfying `goal`.
pub fn walk_to(
    grid: &Grid,
    pose: AgentPose,
    goal: impl Fn(Position) -> bool,
    passable: impl Fn(Position) -> bool,
) -> Plan {
    match shortest_path(grid, pose.pos, goal, passable) {
        None => Plan::Unreachable,
        Some(path) if path.is_empty() => Plan::Arrived,
        Some(path) => {
            let dir = Direction::between(pose.pos, path[0]).expect("path steps are adjacent");
            Plan::Act(turn_towards(pose, dir).unwrap_or(primitive::FORWARD))
        }
    }
}

/// Next primitive to stand next to `target` and face it.
pub fn approach(grid: &Grid, pose: AgentPose, target: Position, passable: impl Fn(Position) -> bool) -> Plan {
    if pose.front() == target {
        return Plan::Arrived;
    }
    if let Some(dir) = Direction::between(pose.pos, target) {
        return Plan::Act(turn_towards(pose, dir).expect("not yet facing target"));
    }
    walk_to(grid, pose, |p| p.manhattan(target) == 1, passable)
}

/// Next primitive to stand on `cell` facing `dir`.
pub fn reach_pose(
    grid: &Grid,
    pose: AgentPose,
    cell: Position,
    dir: Direction,
    passable: impl Fn(Position) -> bool,
) -> Plan {
    if pose.pos == cell {
        return turn_towards(pose, dir).map_or(Plan::Arrived, Plan::Act);
    }
    walk_to(grid, pose, |p| p == cell, passable)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::{Color, ObjectKind, ObjectState, WorldObject};

    #[test]
    fn path_prefers_north_then_east() {
        let g = Grid::new(6, 6);
        let path = shortest_path(&g, Position::new(1, 3), |p| p == Position::new(2, 2), |p| g.is_walkable(p)).unwrap();
        assert_eq!(path, vec![Position::new(1, 2), Position::new(2, 2)]);
    }

    #[test]
    fn approach_turns_then_toggles() {
        let mut g = Grid::new(6, 6);
        let b = Position::new(3, 2);
        g.set(b, Some(WorldObject::boxed(Color::Red, ObjectState::Closed, true)));
        let pose = AgentPose::new(Position::new(2, 2), Direction::North);
        assert_eq!(approach(&g, pose, b, |p| g.is_walkable(p)), Plan::Act(primitive::TURN_RIGHT));
        let pose = AgentPose::new(Position::new(2, 2), Direction::East);
        assert_eq!(approach(&g, pose, b, |p| g.is_walkable(p)), Plan::Arrived);
    }

    #[test]
    fn walled_off_target_is_unreachable() {
        let mut g = Grid::new(6, 6);
        for y in 1..5 {
            g.set(Position::new(3, y), Some(WorldObject::new(ObjectKind::Wall, Color::Grey, ObjectState::Plain)));
        }
        let pose = AgentPose::new(Position::new(1, 1), Direction::East);
        assert_eq!(walk_to(&g, pose, |p| p == Position::new(4, 4), |p| g.is_walkable(p)), Plan::Unreachable);
    }
}
