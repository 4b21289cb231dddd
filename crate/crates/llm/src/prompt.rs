use socialai_core::episode::AgentAction;
use socialai_core::grid::primitive;
use socialai_core::textworld::{act_line, NEW_EPISODE};

/// Actions recognised in generated text, in matching precedence.
pub const MATCHABLE: [(&str, u8); 4] = [
    ("turn left", primitive::TURN_LEFT),
    ("turn right", primitive::TURN_RIGHT),
    ("move forward", primitive::FORWARD),
    ("toggle", primitive::TOGGLE),
];

#[derive(Clone, Debug)]
pub struct PromptConfig {
    pub in_context: String,
    /// Steps of the current episode shown, the current observation included.
    pub history_steps: usize,
    pub query: String,
    /// Generation budget in words.
    pub budget: usize,
}

impl PromptConfig {
    pub fn new(in_context: impl Into<String>) -> Self {
        Self { in_context: in_context.into(), history_steps: 3, query: "Act :".into(), budget: 3 }
    }
}

/// One past step of the current episode: the observation text and the
/// primitive executed after it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PastStep {
    pub obs: String,
    pub action: u8,
}

fn assemble(in_context: &str, history: &[PastStep], current_obs: &str, query: &str) -> String {
    let mut s = String::with_capacity(in_context.len() + 256);
    s.push_str(in_context);
    s.push_str(NEW_EPISODE);
    s.push('\n');
    for h in history {
        s.push_str(&h.obs);
        s.push('\n');
        s.push_str(&act_line(h.action));
        s.push('\n');
    }
    s.push_str(current_obs);
    s.push('\n');
    s.push_str(query);
    s
}

/// Start offsets of the in-context episodes.
fn episode_starts(text: &str) -> Vec<usize> {
    let mut starts: Vec<usize> = text.match_indices(NEW_EPISODE).map(|(i, _)| i).collect();
    if starts.first() != Some(&0) {
        starts.insert(0, 0);
    }
    starts
}

/// Prompt for the next action. At most `history_steps - 1` past steps are
/// included. With a context `limit` (in bytes), the oldest history steps are
/// dropped first, then whole in-context episodes from the front, and as a
/// last resort the prompt is cut from the front.
pub fn build_prompt(cfg: &PromptConfig, history: &[PastStep], current_obs: &str, limit: Option<usize>) -> String {
    let keep = cfg.history_steps.max(1) - 1;
    let mut window = &history[history.len().saturating_sub(keep)..];
    let mut in_context = cfg.in_context.as_str();
    let mut prompt = assemble(in_context, window, current_obs, &cfg.query);
    let Some(limit) = limit else { return prompt };
    while prompt.len() > limit && !window.is_empty() {
        window = &window[1..];
        prompt = assemble(in_context, window, current_obs, &cfg.query);
    }
    let starts = episode_starts(in_context);
    let mut next = 1;
    while prompt.len() > limit && !in_context.is_empty() {
        let cut = starts.get(next).map_or(cfg.in_context.len(), |&i| i);
        in_context = &cfg.in_context[cut..];
        next += 1;
        prompt = assemble(in_context, window, current_obs, &cfg.query);
    }
    if prompt.len() > limit {
        let mut cut = prompt.len() - limit;
        while !prompt.is_char_boundary(cut) {
            cut += 1;
        }
        prompt.drain(..cut);
    }
    prompt
}

/// First `budget` whitespace-separated words, joined by single spaces.
pub fn truncate_words(text: &str, budget: usize) -> String {
    text.split_whitespace().take(budget).collect::<Vec<_>>().join(" ")
}

/// Case-insensitive substring match against the action names; the first
/// name in precedence order wins, anything else is a no-op.
pub fn match_action(generated: &str) -> AgentAction {
    let lower = generated.to_lowercase();
    let p = MATCHABLE.iter().find(|(name, _)| lower.contains(name)).map_or(primitive::NO_OP, |&(_, p)| p);
    AgentAction::new(p)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn past(i: usize) -> PastStep {
        PastStep { obs: format!("Obs : o{i}"), action: primitive::FORWARD }
    }

    #[test]
    fn first_step_prompt() {
        let cfg = PromptConfig::new("EXAMPLES\n");
        assert_eq!(build_prompt(&cfg, &[], "Obs : o0", None), "EXAMPLES\nNew episode.\nObs : o0\nAct :");
    }

    #[test]
    fn window_keeps_last_steps() {
        let cfg = PromptConfig::new("");
        let h: Vec<_> = (0..5).map(past).collect();
        let p = build_prompt(&cfg, &h, "Obs : o5", None);
        assert_eq!(p, "New episode.\nObs : o3\nAct : move forward\nObs : o4\nAct : move forward\nObs : o5\nAct :");
    }

    #[test]
    fn limit_drops_history_then_examples() {
        let cfg = PromptConfig::new("New episode.\nA\nNew episode.\nB\n");
        let h: Vec<_> = (0..2).map(past).collect();
        let full = build_prompt(&cfg, &h, "Obs : now", None);
        let p = build_prompt(&cfg, &h, "Obs : now", Some(full.len() - 1));
        assert!(!p.contains("o0") && p.contains("o1") && p.contains("A\n"));
        let p = build_prompt(&cfg, &[], "Obs : now", Some(40));
        assert!(p.len() <= 40 && !p.contains("A\n") && p.ends_with("Obs : now\nAct :"));
        let p = build_prompt(&cfg, &[], "Obs : now", Some(10));
        assert_eq!(p.len(), 10);
    }

    #[test]
    fn words() {
        assert_eq!(truncate_words("  move forward\nand then toggle", 3), "move forward and");
        assert_eq!(truncate_words("", 3), "");
    }
}
