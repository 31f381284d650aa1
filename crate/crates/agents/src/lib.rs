//! Agents for the synthesis environment: a uniform-random baseline and a
//! from-scratch PPO implementation (multi-discrete policy with two
//! categorical heads, clipped surrogate objective, generalized advantage
//! estimation, plain SGD) with hand-written reverse-mode gradients.

pub mod agent;
pub mod checkpoint;
pub mod error;
pub mod net;
pub mod ppo;

pub use agent::{run_episode, Agent, EpisodeRecord, PolicyAgent, RandomAgent};
pub use checkpoint::Checkpoint;
pub use error::{AgentError, Result};
pub use net::{policy_forward, ForwardCache, NetShape, PolicyGrad, PolicyParams};
pub use ppo::{
    compute_gae, normalize_advantages, ppo_update, random_policy, train, train_with_hook,
    EpisodeRow, LossStats, PPOConfig, RolloutBuffer, TrainOutput,
};
