//! Core toolkit for directed quantum circuit synthesis: dense state-vector
//! simulation over the Clifford+T gate set, the synthesis environment with
//! its observation/action encoding and reward functions, random target
//! generation, episode metrics, and a brute-force minimal-depth oracle.
//!
//! Everything here is deterministic given a seed; see [`rng`] for the exact
//! generator contract. With the `parallel` feature (on by default) the
//! oracle expands search frontiers with rayon; results are identical to the
//! sequential path.

pub mod env;
pub mod error;
pub mod gates;
pub mod metrics;
pub mod oracle;
pub mod rng;
pub mod state;
pub mod target;

pub use env::{
    encode_observation, reward_distance, reward_step_penalty, EnvConfig, Environment,
    EpisodeStatus, Observation, RewardKind, StepInfo, StepResult, TargetMode,
};
pub use error::{Error, Result};
pub use gates::{
    circuit_text, clifford_t, combination_count, decode_action, encode_action,
    enumerate_permutations, parse_circuit, sample_uniform_action, Action, GateSet,
};
pub use metrics::{gates_used, reconstructed_depth, trailing_mean, EpisodeOutcome};
pub use oracle::{
    canonical_key, min_depth_search, verify_circuit, CanonicalKey, SearchOptions, SearchOutcome,
    SearchResult,
};
pub use rng::{derive_seed, Rng};
pub use state::{apply_gate, fidelity_pure, ground_state, GateMatrix, QuantumState};
pub use target::{generate_target, generate_target_with, GenOptions, GenerationTrace};
