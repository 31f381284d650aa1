//! Benchmark harness for synthesis agents: the three λ evaluation levels on
//! random targets, the nine-state well-known set with oracle-verified
//! minimal depths, most-probable-circuit extraction, and the two-reward
//! comparison protocol.
//!
//! Episodes are independent; with the `parallel` feature they run under
//! rayon. Every episode draws its randomness from a seed derived from the
//! master seed and the episode index, so parallel and serial runs produce
//! identical reports.

pub mod agents;
pub mod error;
pub mod eval;
pub mod levels;
pub mod report;
pub mod reward_compare;
pub mod states;

pub use agents::{OracleReplayAgent, ScriptedAgent};
pub use error::{BenchError, Result};
pub use eval::{eval_named_states, eval_random_targets, modal_circuit, EvalOptions};
pub use levels::Level;
pub use report::{BenchReport, EpisodeRowOut, GroupStats};
pub use reward_compare::{reward_comparison, RewardComparisonRow};
pub use states::{well_known_states, NamedState};
