use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("inconsistent parameters: {0}")]
    InconsistentParams(String),
    #[error("invalid tree at {path}: {msg}")]
    Tree { path: String, msg: String },
    #[error("episode already finished")]
    EpisodeFinished,
    #[error("invalid action: {0}")]
    InvalidAction(String),
    #[error("layout generation failed after {0} attempts")]
    Layout(usize),
    #[error("policy not applicable: {0}")]
    Policy(String),
    #[error("text rendering: {0}")]
    Render(String),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
