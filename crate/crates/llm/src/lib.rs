//! Language-model agent harness: prompt assembly, action matching,
//! completion providers and evaluation on fixed test sets.

pub mod eval;
pub mod prompt;
pub mod provider;
pub mod testset;

pub use eval::{default_config, run_eval, EpisodeRecord, EvalReport};
pub use prompt::{build_prompt, match_action, truncate_words, PastStep, PromptConfig};
pub use provider::{CompletionProvider, ProviderSpec};
pub use testset::TestSet;

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error(transparent)]
    Core(#[from] socialai_core::Error),
    #[error("provider: {0}")]
    Provider(String),
    #[error("config: {0}")]
    Config(String),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
