use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::param_tree::ParamSet;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum EnvType {
    InformationSeeking,
    Collaboration,
    AdversarialPeer,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Problem {
    Boxes,
    Switches,
    Marble,
    Generators,
    Doors,
    Levers,
    LeverDoor,
    MarblePush,
    MarblePass,
    /// Adversarial environments have no instrumental problem.
    Apple,
}

impl Problem {
    pub fn is_color_matching(self) -> bool {
        matches!(self, Problem::Boxes | Problem::Switches | Problem::Generators | Problem::Marble)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum IntroSequence {
    No,
    EyeContact,
    Ask,
    AskEyeContact,
}

impl IntroSequence {
    pub fn needs_eye_contact(self) -> bool {
        matches!(self, IntroSequence::EyeContact | IntroSequence::AskEyeContact)
    }

    pub fn needs_ask(self) -> bool {
        matches!(self, IntroSequence::Ask | IntroSequence::AskEyeContact)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum CueType {
    Pointing,
    LanguageColor,
    LanguageFeedback,
    Imitation,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Role {
    A,
    B,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Version {
    Social,
    Asocial,
}

/// Fully resolved environment parameters.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct EnvParams {
    pub env_type: EnvType,
    pub problem: Problem,
    pub n_objects: u8,
    pub peer: bool,
    pub intro: IntroSequence,
    pub cue: CueType,
    pub help: bool,
    pub role: Role,
    pub version: Version,
    pub obstacles: bool,
    pub misleading_cues: bool,
}

impl Default for EnvParams {
    fn default() -> Self {
        Self {
            env_type: EnvType::InformationSeeking,
            problem: Problem::Boxes,
            n_objects: 2,
            peer: true,
            intro: IntroSequence::No,
            cue: CueType::Pointing,
            help: false,
            role: Role::B,
            version: Version::Social,
            obstacles: false,
            misleading_cues: false,
        }
    }
}

fn bad(msg: impl Into<String>) -> Error {
    Error::InconsistentParams(msg.into())
}

fn yes_no(param: &str, v: &str) -> Result<bool> {
    match v {
        "Y" | "Yes" | "True" => Ok(true),
        "N" | "No" | "False" => Ok(false),
        _ => Err(bad(format!("{param}: expected Y or N, got {v}"))),
    }
}

impl EnvParams {
    /// Resolve a sampled parameter set. Parameters absent from the set take
    /// their defaults.
    pub fn from_param_set(set: &ParamSet) -> Result<Self> {
        let mut p = Self::default();
        for (name, value) in &set.0 {
            let v = value.as_str();
            match name.as_str() {
                "Env_type" => {
                    p.env_type = match v {
                        "InformationSeeking" => EnvType::InformationSeeking,
                        "Collaboration" => EnvType::Collaboration,
                        "AdversarialPeer" | "Adversarial" => EnvType::AdversarialPeer,
                        _ => return Err(bad(format!("unknown Env_type {v}"))),
                    }
                }
                "Problem" => {
                    p.problem = match v {
                        "Boxes" => Problem::Boxes,
                        "Switches" => Problem::Switches,
                        "Marble" => Problem::Marble,
                        "Generators" => Problem::Generators,
                        "Doors" => Problem::Doors,
                        "Levers" => Problem::Levers,
                        "LeverDoor" | "DoorLever" => Problem::LeverDoor,
                        "MarblePush" => Problem::MarblePush,
                        "MarblePass" => Problem::MarblePass,
                        _ => return Err(bad(format!("unknown Problem {v}"))),
                    }
                }
                "N" => p.n_objects = v.parse().map_err(|_| bad(format!("N: not a number: {v}")))?,
                "Peer" => p.peer = yes_no(name, v)?,
                "Introductory_sequence" => {
                    p.intro = match v {
                        "No" => IntroSequence::No,
                        "Eye_contact" => IntroSequence::EyeContact,
                        "Ask" => IntroSequence::Ask,
                        "Ask_Eye_contact" => IntroSequence::AskEyeContact,
                        _ => return Err(bad(format!("unknown Introductory_sequence {v}"))),
                    }
                }
                "Cue_type" => {
                    p.cue = match v {
                        "Pointing" => CueType::Pointing,
                        "Language_Color" => CueType::LanguageColor,
                        "Language_Feedback" => CueType::LanguageFeedback,
                        "Imitation" => CueType::Imitation,
                        _ => return Err(bad(format!("unknown Cue_type {v}"))),
                    }
                }
                "Help" => p.help = yes_no(name, v)?,
                "Role" => {
                    p.role = match v {
                        "A" => Role::A,
                        "B" => Role::B,
                        _ => return Err(bad(format!("unknown Role {v}"))),
                    }
                }
                "Version" => {
                    p.version = match v {
                        "Social" => Version::Social,
                        "Asocial" => Version::Asocial,
                        _ => return Err(bad(format!("unknown Version {v}"))),
                    }
                }
                "Obstacles" => {
                    p.obstacles = match v {
                        "No" | "None" => false,
                        "Some" => true,
                        _ => return Err(bad(format!("unknown Obstacles {v}"))),
                    }
                }
                "Misleading_cues" => p.misleading_cues = yes_no(name, v)?,
                _ => return Err(bad(format!("unknown parameter {name}"))),
            }
        }
        if p.env_type == EnvType::AdversarialPeer && set.get("Problem").is_none() {
            p.problem = Problem::Apple;
        }
        if p.env_type == EnvType::Collaboration && p.version == Version::Asocial {
            p.peer = false;
        }
        if p.env_type == EnvType::AdversarialPeer {
            p.peer = true;
            p.n_objects = 1;
        }
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        use Problem::*;
        match self.env_type {
            EnvType::InformationSeeking => {
                if !matches!(self.problem, Boxes | Switches | Marble | Generators | Doors | Levers) {
                    return Err(bad(format!("{:?} is not an information seeking problem", self.problem)));
                }
                if !(1..=2).contains(&self.n_objects) {
                    return Err(bad(format!("N must be 1 or 2, got {}", self.n_objects)));
                }
                if !self.peer && self.n_objects != 1 {
                    return Err(bad("without a peer only one object can be present"));
                }
                if self.version == Version::Asocial && (self.peer || self.n_objects != 1) {
                    return Err(bad("asocial version requires Peer=N and N=1"));
                }
            }
            EnvType::Collaboration => {
                if !matches!(self.problem, LeverDoor | MarblePush | MarblePass | Boxes | Switches | Generators | Marble)
                {
                    return Err(bad(format!("{:?} is not a collaboration problem", self.problem)));
                }
                if self.peer != (self.version == Version::Social) {
                    return Err(bad("collaboration has a peer iff the version is social"));
                }
            }
            EnvType::AdversarialPeer => {
                if self.problem != Apple {
                    return Err(bad("adversarial environments take no Problem"));
                }
            }
        }
        Ok(())
    }

    pub fn info_seeking(problem: Problem) -> Self {
        Self { problem, ..Self::default() }
    }

    pub fn asocial(problem: Problem) -> Self {
        Self { problem, n_objects: 1, peer: false, version: Version::Asocial, ..Self::default() }
    }
}
