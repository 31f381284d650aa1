use thiserror::Error;

#[derive(Debug, Error)]
pub enum BenchError {
    #[error(transparent)]
    Core(#[from] qcsyn_core::Error),

    #[error(transparent)]
    Agent(#[from] qcsyn_agents::AgentError),

    #[error("unknown evaluation level {0:?}")]
    UnknownLevel(String),

    #[error("unknown named state {0:?}")]
    UnknownState(String),
}

pub type Result<T> = std::result::Result<T, BenchError>;
