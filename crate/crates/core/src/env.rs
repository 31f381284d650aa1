//! The synthesis environment: episode lifecycle, observation encoding,
//! reward computation, and termination.
//!
//! An episode starts from the ground state and ends either when the current
//! state matches the target (`1 - F < SFE`) or when the step counter reaches
//! the maximal length `L` (`2λ` in random-target mode). Note there is no
//! success check at reset: even a target equal to the initial state requires
//! at least one gate.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gates::{circuit_text, decode_action, Action, GateSet};
use crate::rng::Rng;
use crate::state::{apply_gate, fidelity_pure, ground_state, QuantumState, PHYS_TOL};
use crate::target::{generate_target_with, GenOptions};

/// Which of the two reward functions an environment uses.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RewardKind {
    StepPenalty,
    Distance,
}

/// Either a fixed target with an explicit step budget, or a fresh random
/// target of depth λ per episode (budget `L = 2λ`).
#[derive(Clone, Debug)]
pub enum TargetMode {
    Fixed { target: QuantumState, max_len: usize },
    Random { lambda: usize },
}

/// Environment parameters. `sfe` is the success threshold on `1 - F`.
#[derive(Clone, Debug)]
pub struct EnvConfig {
    pub n: usize,
    pub gateset: GateSet,
    pub target_mode: TargetMode,
    pub sfe: f64,
    pub reward: RewardKind,
    /// Minimum state change accepted by the target generator.
    pub change_epsilon: f64,
}

impl EnvConfig {
    pub fn new(n: usize, gateset: GateSet, target_mode: TargetMode) -> Self {
        EnvConfig {
            n,
            gateset,
            target_mode,
            sfe: 0.001,
            reward: RewardKind::StepPenalty,
            change_epsilon: 0.001,
        }
    }

    fn validate(&self) -> Result<()> {
        if self.n == 0 {
            return Err(Error::InvalidConfig("qubit count must be positive".into()));
        }
        if !(self.sfe > 0.0 && self.sfe < 1.0) {
            return Err(Error::InvalidConfig(format!(
                "sfe must lie in (0, 1), got {}",
                self.sfe
            )));
        }
        match &self.target_mode {
            TargetMode::Fixed { target, max_len } => {
                if *max_len < 1 {
                    return Err(Error::InvalidConfig("max_len must be ≥ 1".into()));
                }
                if target.n() != self.n {
                    return Err(Error::DimensionMismatch(target.dim(), 1 << self.n));
                }
            }
            TargetMode::Random { lambda } => {
                if *lambda < 1 {
                    return Err(Error::InvalidConfig("lambda must be ≥ 1".into()));
                }
            }
        }
        Ok(())
    }
}

/// Flattened real view of (current, target): `[Re v | Im v | Re v̂ | Im v̂]`,
/// four blocks of 2^n values each.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Observation {
    values: Vec<f64>,
}

impl Observation {
    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// Recover the (current, target) pair. Fails if either block is not a
    /// normalized state vector.
    pub fn decode(&self) -> Result<(QuantumState, QuantumState)> {
        let dim = self.values.len() / 4;
        let block = |offset: usize| -> Result<QuantumState> {
            let amps = (0..dim)
                .map(|i| {
                    num_complex::Complex64::new(
                        self.values[offset + i],
                        self.values[offset + dim + i],
                    )
                })
                .collect();
            QuantumState::from_amplitudes(amps)
        };
        Ok((block(0)?, block(2 * dim)?))
    }
}

/// Encode (current, target) in the fixed block layout; length `2^(n+2)`.
pub fn encode_observation(current: &QuantumState, target: &QuantumState) -> Result<Observation> {
    if current.n() != target.n() {
        return Err(Error::DimensionMismatch(current.dim(), target.dim()));
    }
    let dim = current.dim();
    let mut values = Vec::with_capacity(4 * dim);
    for s in [current, target] {
        for a in s.amplitudes() {
            values.push(a.re);
        }
        for a in s.amplitudes() {
            values.push(a.im);
        }
    }
    Ok(Observation { values })
}

/// Step-penalty reward: `L - l - 1` on success, `-1` otherwise. `l` is the
/// circuit depth after the step.
pub fn reward_step_penalty(fidelity: f64, l: usize, max_len: usize, sfe: f64) -> f64 {
    if 1.0 - fidelity < sfe {
        max_len as f64 - l as f64 - 1.0
    } else {
        -1.0
    }
}

/// Distance reward: like the step penalty, but the terminal truncation step
/// (`l = L` without success) pays `-⌊L/2⌋·(1 - F)` instead of `-1`.
pub fn reward_distance(fidelity: f64, l: usize, max_len: usize, sfe: f64) -> f64 {
    if 1.0 - fidelity < sfe {
        max_len as f64 - l as f64 - 1.0
    } else if l == max_len {
        -((max_len / 2) as f64) * (1.0 - fidelity)
    } else {
        -1.0
    }
}

/// Why (or whether) an episode ended.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum EpisodeStatus {
    Running,
    Success,
    Truncated,
}

impl EpisodeStatus {
    pub fn is_terminal(self) -> bool {
        self != EpisodeStatus::Running
    }
}

/// Per-step diagnostics. `gates_used` is populated only on terminal steps.
#[derive(Clone, Copy, Debug)]
pub struct StepInfo {
    pub fidelity: f64,
    pub l: usize,
    pub gates_used: Option<usize>,
}

#[derive(Clone, Debug)]
pub struct StepResult {
    pub observation: Observation,
    pub reward: f64,
    pub status: EpisodeStatus,
    pub info: StepInfo,
}

/// Mutable per-episode state. `current` always equals the sequential
/// application of `actions` to the ground state.
#[derive(Clone, Debug)]
pub struct EpisodeState {
    pub current: QuantumState,
    pub target: QuantumState,
    pub actions: Vec<Action>,
    pub l: usize,
    pub status: EpisodeStatus,
}

/// The environment proper. One instance is single-threaded; instances are
/// independent and may be moved across threads.
#[derive(Clone, Debug)]
pub struct Environment {
    n: usize,
    gateset: GateSet,
    target_mode: TargetMode,
    sfe: f64,
    reward: RewardKind,
    change_epsilon: f64,
    max_len: usize,
    episode: EpisodeState,
    rng: Rng,
}

impl Environment {
    /// Validates the config and binds the RNG used for random-target resets.
    /// If the register is narrower than the widest gate, the effective gate
    /// set is the arity-restricted subset.
    pub fn new(config: EnvConfig, seed: u64) -> Result<Self> {
        config.validate()?;
        let gateset = config.gateset.effective_for(config.n)?;
        let max_len = match &config.target_mode {
            TargetMode::Fixed { max_len, .. } => *max_len,
            TargetMode::Random { lambda } => 2 * lambda,
        };
        let ground = ground_state(config.n)?;
        let placeholder = EpisodeState {
            current: ground.clone(),
            target: ground,
            actions: Vec::new(),
            l: 0,
            // Forces a reset before the first step.
            status: EpisodeStatus::Truncated,
        };
        Ok(Environment {
            n: config.n,
            gateset,
            target_mode: config.target_mode,
            sfe: config.sfe,
            reward: config.reward,
            change_epsilon: config.change_epsilon,
            max_len,
            episode: placeholder,
            rng: Rng::seed_from_u64(seed),
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Effective (possibly arity-restricted) gate set.
    pub fn gateset(&self) -> &GateSet {
        &self.gateset
    }

    /// Step budget `L`; `2λ` in random-target mode.
    pub fn max_len(&self) -> usize {
        self.max_len
    }

    pub fn sfe(&self) -> f64 {
        self.sfe
    }

    pub fn reward_kind(&self) -> RewardKind {
        self.reward
    }

    /// Target depth λ in random mode.
    pub fn lambda(&self) -> Option<usize> {
        match &self.target_mode {
            TargetMode::Random { lambda } => Some(*lambda),
            TargetMode::Fixed { .. } => None,
        }
    }

    pub fn episode(&self) -> &EpisodeState {
        &self.episode
    }

    /// Start a new episode: ground state, empty circuit, step counter 0. In
    /// random mode a fresh target is generated; a fixed target is reused.
    /// No success check happens here even if the target is the ground state.
    pub fn reset(&mut self) -> Result<Observation> {
        let target = match &self.target_mode {
            TargetMode::Fixed { target, .. } => target.clone(),
            TargetMode::Random { lambda } => {
                let opts = GenOptions {
                    change_epsilon: self.change_epsilon,
                    ..GenOptions::default()
                };
                generate_target_with(self.n, *lambda, &self.gateset, &opts, &mut self.rng)?
                    .target
            }
        };
        self.episode = EpisodeState {
            current: ground_state(self.n)?,
            target,
            actions: Vec::new(),
            l: 0,
            status: EpisodeStatus::Running,
        };
        encode_observation(&self.episode.current, &self.episode.target)
    }

    /// Apply one action. Errors if the episode already terminated.
    pub fn step(&mut self, action: Action) -> Result<StepResult> {
        if self.episode.status.is_terminal() {
            return Err(Error::EpisodeFinished);
        }
        let (gate, qubits) = decode_action(action, &self.gateset, self.n)?;
        let next = apply_gate(&self.episode.current, gate, &qubits)?;
        debug_assert!((next.norm_sqr() - 1.0).abs() < PHYS_TOL);
        self.episode.current = next;
        self.episode.actions.push(action);
        self.episode.l += 1;

        let fidelity = fidelity_pure(&self.episode.current, &self.episode.target)?;
        let l = self.episode.l;
        let success = 1.0 - fidelity < self.sfe;
        let status = if success {
            EpisodeStatus::Success
        } else if l == self.max_len {
            EpisodeStatus::Truncated
        } else {
            EpisodeStatus::Running
        };
        self.episode.status = status;

        let reward = match self.reward {
            RewardKind::StepPenalty => reward_step_penalty(fidelity, l, self.max_len, self.sfe),
            RewardKind::Distance => reward_distance(fidelity, l, self.max_len, self.sfe),
        };
        let gates_used = match status {
            EpisodeStatus::Success => Some(l),
            EpisodeStatus::Truncated => Some(self.max_len),
            EpisodeStatus::Running => None,
        };
        Ok(StepResult {
            observation: encode_observation(&self.episode.current, &self.episode.target)?,
            reward,
            status,
            info: StepInfo {
                fidelity,
                l,
                gates_used,
            },
        })
    }

    /// The circuit built so far, in text form.
    pub fn circuit_text(&self) -> Result<String> {
        circuit_text(&self.episode.actions, &self.gateset, self.n)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gates::{clifford_t, Action};
    use crate::state::QuantumState;
    use num_complex::Complex64;
    use std::f64::consts::FRAC_1_SQRT_2;

    fn bell_phi_plus() -> QuantumState {
        QuantumState::from_amplitudes(vec![
            Complex64::new(FRAC_1_SQRT_2, 0.0),
            Complex64::new(0.0, 0.0),
            Complex64::new(0.0, 0.0),
            Complex64::new(FRAC_1_SQRT_2, 0.0),
        ])
        .unwrap()
    }

    #[test]
    fn observation_layout_n1() {
        let zero = ground_state(1).unwrap();
        let one = QuantumState::basis(1, 1).unwrap();
        let obs = encode_observation(&zero, &one).unwrap();
        assert_eq!(obs.values(), &[1.0, 0.0, 0.0, 0.0, 0.0, 1.0, 0.0, 0.0]);

        let gs = clifford_t();
        let h = gs.matrix(1);
        let plus = apply_gate(&zero, h, &[0]).unwrap();
        let obs = encode_observation(&plus, &zero).unwrap();
        let v = obs.values();
        assert!((v[0] - FRAC_1_SQRT_2).abs() < PHYS_TOL);
        assert!((v[1] - FRAC_1_SQRT_2).abs() < PHYS_TOL);
        assert_eq!(&v[2..], &[0.0, 0.0, 1.0, 0.0, 0.0, 0.0]);
    }

    #[test]
    fn observation_length_is_two_to_n_plus_two() {
        for n in [1usize, 2, 3, 5, 10] {
            let s = ground_state(n).unwrap();
            let obs = encode_observation(&s, &s).unwrap();
            assert_eq!(obs.len(), 1 << (n + 2));
        }
    }

    #[test]
    fn observation_decode_round_trips() {
        let gs = clifford_t();
        let mut s = ground_state(2).unwrap();
        s = apply_gate(&s, gs.matrix(1), &[0]).unwrap();
        s = apply_gate(&s, gs.matrix(4), &[0]).unwrap();
        let t = bell_phi_plus();
        let obs = encode_observation(&s, &t).unwrap();
        let (current, target) = obs.decode().unwrap();
        assert_eq!(current, s);
        assert_eq!(target, t);
    }

    #[test]
    fn reward_tables() {
        // Success branch.
        assert_eq!(reward_step_penalty(1.0, 3, 10, 0.001), 6.0);
        assert_eq!(reward_distance(1.0, 3, 10, 0.001), 6.0);
        // Success on the last step still pays L - L - 1 = -1.
        assert_eq!(reward_step_penalty(1.0, 10, 10, 0.001), -1.0);
        // Mid-episode misses.
        assert_eq!(reward_step_penalty(0.4, 3, 10, 0.001), -1.0);
        assert_eq!(reward_distance(0.5, 4, 10, 0.001), -1.0);
        // Truncation step of the distance reward is proportional to 1 - F.
        assert_eq!(reward_distance(0.5, 10, 10, 0.001), -2.5);
    }

    fn fixed_env(target: QuantumState, max_len: usize) -> Environment {
        let config = EnvConfig::new(
            2,
            clifford_t(),
            TargetMode::Fixed {
                target,
                max_len,
            },
        );
        Environment::new(config, 0).unwrap()
    }

    #[test]
    fn bell_episode_succeeds_with_expected_reward() {
        let mut env = fixed_env(bell_phi_plus(), 4);
        env.reset().unwrap();
        let r1 = env.step(Action::new(1, 0)).unwrap(); // H q0
        assert_eq!(r1.status, EpisodeStatus::Running);
        assert_eq!(r1.reward, -1.0);
        assert!(r1.info.gates_used.is_none());

        let r2 = env.step(Action::new(3, 0)).unwrap(); // CNOT q0 q1
        assert_eq!(r2.status, EpisodeStatus::Success);
        assert!(r2.info.fidelity >= 0.999);
        assert_eq!(r2.reward, 1.0); // L - l - 1 = 4 - 2 - 1
        assert_eq!(r2.info.gates_used, Some(2));
    }

    #[test]
    fn truncation_after_max_len_steps() {
        let target = QuantumState::basis(2, 0b11).unwrap();
        let mut env = fixed_env(target, 10);
        env.reset().unwrap();
        for i in 0..10 {
            let r = env.step(Action::new(0, 0)).unwrap(); // I q0 forever
            if i < 9 {
                assert_eq!(r.status, EpisodeStatus::Running);
            } else {
                assert_eq!(r.status, EpisodeStatus::Truncated);
                assert_eq!(r.info.gates_used, Some(10));
            }
        }
        assert!(matches!(
            env.step(Action::new(0, 0)),
            Err(Error::EpisodeFinished)
        ));
    }

    #[test]
    fn reset_does_not_check_success() {
        // Target equals the initial state; the episode still runs.
        let mut env = fixed_env(ground_state(2).unwrap(), 4);
        env.reset().unwrap();
        assert_eq!(env.episode().status, EpisodeStatus::Running);
        // A state-preserving gate then succeeds on step one.
        let r = env.step(Action::new(0, 0)).unwrap();
        assert_eq!(r.status, EpisodeStatus::Success);
        assert_eq!(r.info.gates_used, Some(1));
    }

    #[test]
    fn random_mode_l_is_twice_lambda_and_resets_are_seeded() {
        let config = EnvConfig::new(2, clifford_t(), TargetMode::Random { lambda: 5 });
        let mut env = Environment::new(config.clone(), 9).unwrap();
        assert_eq!(env.max_len(), 10);

        let obs_a = env.reset().unwrap();
        let mut env2 = Environment::new(config, 9).unwrap();
        let obs_b = env2.reset().unwrap();
        assert_eq!(obs_a, obs_b);
    }

    #[test]
    fn replay_reproduces_current_state() {
        let config = EnvConfig::new(2, clifford_t(), TargetMode::Random { lambda: 3 });
        let mut env = Environment::new(config, 4).unwrap();
        env.reset().unwrap();
        let mut rng = Rng::seed_from_u64(11);
        loop {
            let action = crate::gates::sample_uniform_action(env.gateset(), 2, &mut rng).unwrap();
            let result = env.step(action).unwrap();

            let mut replay = ground_state(2).unwrap();
            for &a in &env.episode().actions {
                let (gate, qubits) = decode_action(a, env.gateset(), 2).unwrap();
                replay = apply_gate(&replay, gate, &qubits).unwrap();
            }
            let fid = fidelity_pure(&replay, &env.episode().current).unwrap();
            assert!((fid - 1.0).abs() < PHYS_TOL);

            if result.status.is_terminal() {
                break;
            }
        }
    }

    #[test]
    fn episode_reward_identities() {
        // Success with k gates totals L - 2k under the step penalty.
        let mut env = fixed_env(bell_phi_plus(), 8);
        env.reset().unwrap();
        let mut total = 0.0;
        total += env.step(Action::new(1, 0)).unwrap().reward;
        total += env.step(Action::new(3, 0)).unwrap().reward;
        assert_eq!(total, 8.0 - 2.0 * 2.0);

        // Truncation totals -L.
        let mut env = fixed_env(QuantumState::basis(2, 0b11).unwrap(), 6);
        env.reset().unwrap();
        let mut total = 0.0;
        for _ in 0..6 {
            total += env.step(Action::new(0, 0)).unwrap().reward;
        }
        assert_eq!(total, -6.0);
    }

    #[test]
    fn config_validation() {
        let mut config = EnvConfig::new(2, clifford_t(), TargetMode::Random { lambda: 0 });
        assert!(Environment::new(config.clone(), 0).is_err());
        config.target_mode = TargetMode::Random { lambda: 1 };
        config.sfe = 0.0;
        assert!(Environment::new(config.clone(), 0).is_err());
        config.sfe = 1.0;
        assert!(Environment::new(config.clone(), 0).is_err());
        config.sfe = 0.001;
        assert!(Environment::new(config, 0).is_ok());

        let wrong_target = EnvConfig::new(
            2,
            clifford_t(),
            TargetMode::Fixed {
                target: ground_state(1).unwrap(),
                max_len: 4,
            },
        );
        assert!(Environment::new(wrong_target, 0).is_err());
    }
}
