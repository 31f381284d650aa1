//! The episode-level agent interface and its two basic implementations.

use qcsyn_core::env::{Environment, EpisodeStatus, Observation};
use qcsyn_core::gates::Action;
use qcsyn_core::Rng;

use crate::error::Result;
use crate::net::{policy_forward, sample_categorical, softmax, PolicyParams};

/// Something that can drive episodes. `begin_episode` sees the reset
/// observation before the first `act` call.
pub trait Agent: Send {
    fn begin_episode(&mut self, _obs: &Observation) {}
    fn act(&mut self, obs: &Observation, rng: &mut Rng) -> Action;
}

/// Uniform-random baseline: both indices drawn independently per step.
#[derive(Clone, Debug)]
pub struct RandomAgent {
    gates: usize,
    combos: usize,
}

impl RandomAgent {
    pub fn new(gates: usize, combos: usize) -> Self {
        RandomAgent { gates, combos }
    }
}

impl Agent for RandomAgent {
    fn act(&mut self, _obs: &Observation, rng: &mut Rng) -> Action {
        Action::new(rng.index(self.gates), rng.index(self.combos))
    }
}

/// Stochastic policy agent: samples the gate head, then the permutation
/// head, one categorical draw each.
#[derive(Clone, Debug)]
pub struct PolicyAgent {
    pub params: PolicyParams,
}

impl PolicyAgent {
    pub fn new(params: PolicyParams) -> Self {
        PolicyAgent { params }
    }
}

impl Agent for PolicyAgent {
    fn act(&mut self, obs: &Observation, rng: &mut Rng) -> Action {
        let cache = policy_forward(&self.params, obs.values());
        let gate = sample_categorical(&softmax(&cache.gate_logits), rng);
        let perm = sample_categorical(&softmax(&cache.perm_logits), rng);
        Action::new(gate, perm)
    }
}

/// Everything a harness needs from one finished episode.
#[derive(Clone, Debug)]
pub struct EpisodeRecord {
    pub actions: Vec<Action>,
    pub steps: usize,
    pub success: bool,
    pub gates_used: usize,
    pub total_reward: f64,
    pub final_fidelity: f64,
}

/// Reset the environment and drive it with `agent` until termination.
pub fn run_episode(
    env: &mut Environment,
    agent: &mut dyn Agent,
    rng: &mut Rng,
) -> Result<EpisodeRecord> {
    let mut obs = env.reset()?;
    agent.begin_episode(&obs);
    let mut total_reward = 0.0;
    loop {
        let action = agent.act(&obs, rng);
        let result = env.step(action)?;
        total_reward += result.reward;
        if result.status.is_terminal() {
            return Ok(EpisodeRecord {
                actions: env.episode().actions.clone(),
                steps: result.info.l,
                success: result.status == EpisodeStatus::Success,
                gates_used: result
                    .info
                    .gates_used
                    .expect("terminal step has a gate count"),
                total_reward,
                final_fidelity: result.info.fidelity,
            });
        }
        obs = result.observation;
    }
}
