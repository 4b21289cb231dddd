//! Line-oriented text rendering of observations and episodes.

use crate::episode::{Observation, Trajectory};
use crate::error::{Error, Result};
use crate::grid::{primitive, view_offset, CellEncoding, CellView, ObjectKind, ObjectState, VIEW_SIZE};
use crate::lang::{DialogueEntry, Speaker};

pub const NEW_EPISODE: &str = "New episode.";
pub const SUCCESS: &str = "Success!";
pub const ACT_PREFIX: &str = "Act : ";
pub const OBS_PREFIX: &str = "Obs : ";

/// Text form of a primitive, as used in transcripts and matched in LLM output.
pub fn action_name(p: u8) -> &'static str {
    match p {
        primitive::TURN_LEFT => "turn left",
        primitive::TURN_RIGHT => "turn right",
        primitive::FORWARD => "move forward",
        primitive::TOGGLE => "toggle",
        primitive::DONE => "done",
        _ => "no_op",
    }
}

/// Position phrase for a cell `forward` rows ahead and `lateral` columns to
/// the right (negative is left).
pub fn phrase_relpos(forward: i32, lateral: i32) -> Result<String> {
    let side = if lateral < 0 { "left" } else { "right" };
    let l = lateral.abs();
    Ok(match (forward, l) {
        (0, 0) => return Err(Error::Render("the observer's own cell has no phrase".into())),
        (f, _) if f < 0 => return Err(Error::Render(format!("cell behind the observer ({f}, {lateral})"))),
        (0, 1) => format!("Just to the {side} of you"),
        (0, l) => format!(" {l} steps to the {side}"),
        (1, 0) => "Right in front of you ".to_string(),
        (f, 0) => format!("{f} steps in front of you "),
        (f, l) => format!("{f} steps in front of you and {l} steps to the {side}"),
    })
}

fn state_word(kind: ObjectKind, state: ObjectState) -> Option<&'static str> {
    match kind {
        ObjectKind::LockableBox | ObjectKind::Door | ObjectKind::RemoteDoor => Some(match state {
            ObjectState::Locked => "locked",
            ObjectState::Open => "open",
            _ => "closed",
        }),
        ObjectKind::Lever => Some(if state == ObjectState::Activated { "activated" } else { "unactivated" }),
        ObjectKind::AppleGenerator => Some("round"),
        _ => None,
    }
}

/// Noun phrase for a non-empty cell, article included.
pub fn describe_cell(enc: &CellEncoding) -> Result<String> {
    match CellView::decode(enc).map_err(|e| Error::Render(e.to_string()))? {
        CellView::Empty => Err(Error::Render("empty cell".into())),
        CellView::Peer { .. } => Ok("a caretaker".to_string()),
        CellView::Object { kind, color, state } => Ok(match state_word(kind, state) {
            Some(w) => format!("a {w} {} {}", color.name(), kind.name()),
            None => format!("a {} {}", color.name(), kind.name()),
        }),
    }
}

/// Object lines of an observation, farthest row first, left to right.
/// Walls are not mentioned.
pub fn obs_lines(obs: &Observation) -> Result<Vec<String>> {
    let mut lines = Vec::new();
    for row in 0..VIEW_SIZE {
        for col in 0..VIEW_SIZE {
            let enc = &obs.view[row][col];
            if enc.is_empty() || enc.0[0] == ObjectKind::Wall.type_id() {
                continue;
            }
            let (f, l) = view_offset(row, col);
            let phrase = phrase_relpos(f, l)?;
            let desc = describe_cell(enc)?;
            let peer = matches!(CellView::decode(enc), Ok(CellView::Peer { .. }));
            lines.push(if peer { format!("{phrase} there is {desc}") } else { format!("{phrase} there is {desc} ") });
        }
    }
    Ok(lines)
}

pub fn says_line(text: &str) -> String {
    format!("Caretaker says:  {text} ")
}

pub fn agent_says_line(text: &str) -> String {
    format!("You say:  {text} ")
}

fn last_peer(dialogue: &[DialogueEntry]) -> Option<&DialogueEntry> {
    dialogue.iter().rev().find(|e| e.speaker == Speaker::Peer)
}

/// Full observation text: object lines, then the caretaker's latest
/// utterance if it has spoken. Lines are joined with `\n`, no trailing newline.
pub fn render_obs(obs: &Observation) -> Result<String> {
    let lines = obs_lines(obs)?;
    let mut out = format!("{OBS_PREFIX}{}", lines.join("\n"));
    if let Some(e) = last_peer(&obs.dialogue) {
        out.push('\n');
        out.push_str(&says_line(&e.text));
    }
    Ok(out)
}

pub fn act_line(p: u8) -> String {
    format!("{ACT_PREFIX}{}", action_name(p))
}

/// Transcript of a recorded episode, re-simulated to obtain observations.
pub fn render_transcript(traj: &Trajectory) -> Result<String> {
    let mut ep =
        crate::episode::Episode::with_max_steps(&traj.header.env_params, traj.header.seed, traj.header.max_steps)?;
    let mut out = vec![NEW_EPISODE.to_string(), render_obs(&ep.observation())?];
    let mut success = false;
    for a in traj.actions() {
        if let Some(u) = a.utterance {
            out.push(agent_says_line(&u.render()));
        }
        out.push(act_line(a.primitive));
        let r = ep.step(a)?;
        out.push(render_obs(&r.obs)?);
        success = r.info.success;
    }
    if success {
        out.push(SUCCESS.to_string());
    }
    let mut text = out.join("\n");
    text.push('\n');
    Ok(text)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn phrases() {
        assert_eq!(phrase_relpos(2, 3).unwrap(), "2 steps in front of you and 3 steps to the right");
        assert_eq!(phrase_relpos(0, -1).unwrap(), "Just to the left of you");
        assert_eq!(phrase_relpos(1, 0).unwrap(), "Right in front of you ");
        assert_eq!(phrase_relpos(0, 3).unwrap(), " 3 steps to the right");
        assert!(phrase_relpos(0, 0).is_err());
    }

    #[test]
    fn names() {
        let names: Vec<_> = (0..6).map(action_name).collect();
        assert_eq!(names, ["no_op", "turn left", "turn right", "move forward", "toggle", "done"]);
    }
}
