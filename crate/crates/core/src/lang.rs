//! Templated agent language and dialogue history.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub const TEMPLATES: [&str; 4] = ["Where is <noun>", "Help <noun>", "Close <noun>", "How are <noun>"];

pub const NOUNS: [&str; 16] = [
    "please",
    "the exit",
    "the wall",
    "you",
    "the ceiling",
    "the window",
    "the entrance",
    "the closet",
    "the drawer",
    "the fridge",
    "the floor",
    "the lamp",
    "the trash can",
    "the chair",
    "the bed",
    "the sofa",
];

pub const HELP_TEMPLATE: u8 = 1;
pub const PLEASE_NOUN: u8 = 0;

/// Speech part of an agent action. `None` means the agent stays silent.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Utterance {
    pub template: u8,
    pub noun: u8,
}

impl Utterance {
    pub fn new(template: u8, noun: u8) -> Result<Self> {
        if (template as usize) < TEMPLATES.len() && (noun as usize) < NOUNS.len() {
            Ok(Self { template, noun })
        } else {
            Err(Error::InvalidAction(format!("utterance ({template}, {noun}) out of range")))
        }
    }

    pub fn help_please() -> Self {
        Self { template: HELP_TEMPLATE, noun: PLEASE_NOUN }
    }

    pub fn render(&self) -> String {
        render_utterance(self.template, self.noun).expect("validated on construction")
    }
}

pub fn render_utterance(template: u8, noun: u8) -> Result<String> {
    let t = TEMPLATES
        .get(template as usize)
        .ok_or_else(|| Error::InvalidAction(format!("template {template} out of range")))?;
    let n = NOUNS.get(noun as usize).ok_or_else(|| Error::InvalidAction(format!("noun {noun} out of range")))?;
    Ok(t.replace("<noun>", n))
}

pub fn is_help_request(text: &str) -> bool {
    text == render_utterance(HELP_TEMPLATE, PLEASE_NOUN).expect("constant indices")
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Speaker {
    Agent,
    Peer,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DialogueEntry {
    pub speaker: Speaker,
    pub text: String,
    pub step: u32,
}

/// Append-only, chronologically ordered dialogue.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Dialogue {
    entries: Vec<DialogueEntry>,
}

impl Dialogue {
    pub fn push(&mut self, speaker: Speaker, text: impl Into<String>, step: u32) {
        debug_assert!(self.entries.last().is_none_or(|e| e.step <= step));
        self.entries.push(DialogueEntry { speaker, text: text.into(), step });
    }

    pub fn entries(&self) -> &[DialogueEntry] {
        &self.entries
    }

    pub fn last_from(&self, speaker: Speaker) -> Option<&DialogueEntry> {
        self.entries.iter().rev().find(|e| e.speaker == speaker)
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }
}
