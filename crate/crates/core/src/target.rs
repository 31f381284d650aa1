//! Random target-state generation: apply λ effective gates starting from the
//! ground state, accepting a gate only if the new state differs from every
//! previously visited state by at least `change_epsilon` in fidelity error.
//! After `2·|G|` consecutive rejections the whole generation restarts.

use crate::error::{Error, Result};
use crate::gates::{decode_action, sample_uniform_action, Action, GateSet};
use crate::rng::Rng;
use crate::state::{apply_gate, fidelity_pure, ground_state, QuantumState};

/// Knobs for [`generate_target_with`]. The change condition threshold is
/// fixed to 0.001 by default; the sample budget guards against pathological
/// configurations where no gate can ever be accepted.
#[derive(Clone, Debug)]
pub struct GenOptions {
    pub change_epsilon: f64,
    /// Total samples allowed across restarts; `None` means `10·λ·2·|G|`.
    pub attempt_cap: Option<usize>,
}

impl Default for GenOptions {
    fn default() -> Self {
        GenOptions {
            change_epsilon: 0.001,
            attempt_cap: None,
        }
    }
}

/// Result of a generation run. `accepted_actions` replayed from the ground
/// state reproduce `target`; `visited_states` is the initial state plus one
/// state per accepted action.
#[derive(Clone, Debug)]
pub struct GenerationTrace {
    pub target: QuantumState,
    pub accepted_actions: Vec<Action>,
    pub visited_states: Vec<QuantumState>,
    pub restarts: usize,
}

/// Generate a depth-λ target with default options.
pub fn generate_target(
    n: usize,
    lambda: usize,
    gateset: &GateSet,
    rng: &mut Rng,
) -> Result<GenerationTrace> {
    generate_target_with(n, lambda, gateset, &GenOptions::default(), rng)
}

/// Generate a depth-λ target.
///
/// Rejected samples advance the RNG stream but leave no trace. The restart
/// path clears both lists and the failure counter. Errors with
/// [`Error::GenerationBudgetExhausted`] once `attempt_cap` samples are spent.
pub fn generate_target_with(
    n: usize,
    lambda: usize,
    gateset: &GateSet,
    opts: &GenOptions,
    rng: &mut Rng,
) -> Result<GenerationTrace> {
    if lambda < 1 {
        return Err(Error::InvalidConfig("lambda must be ≥ 1".into()));
    }
    if !(opts.change_epsilon > 0.0 && opts.change_epsilon < 1.0) {
        return Err(Error::InvalidConfig(format!(
            "change_epsilon must lie in (0, 1), got {}",
            opts.change_epsilon
        )));
    }
    let gateset = gateset.effective_for(n)?;
    let cap = opts
        .attempt_cap
        .unwrap_or(10 * lambda * 2 * gateset.len());
    let restart_after = 2 * gateset.len();

    let initial = ground_state(n)?;
    let mut visited = vec![initial.clone()];
    let mut accepted: Vec<Action> = Vec::with_capacity(lambda);
    let mut current = initial.clone();
    let mut consecutive_failures = 0usize;
    let mut restarts = 0usize;
    let mut samples = 0usize;

    while accepted.len() < lambda {
        if samples >= cap {
            return Err(Error::GenerationBudgetExhausted(cap));
        }
        let action = sample_uniform_action(&gateset, n, rng)?;
        samples += 1;
        let (gate, qubits) = decode_action(action, &gateset, n)?;
        let candidate = apply_gate(&current, gate, &qubits)?;

        let mut changed = true;
        for prior in &visited {
            if 1.0 - fidelity_pure(&candidate, prior)? < opts.change_epsilon {
                changed = false;
                break;
            }
        }

        if changed {
            accepted.push(action);
            visited.push(candidate.clone());
            current = candidate;
            consecutive_failures = 0;
        } else {
            consecutive_failures += 1;
            if consecutive_failures >= restart_after {
                accepted.clear();
                visited.clear();
                visited.push(initial.clone());
                current = initial.clone();
                consecutive_failures = 0;
                restarts += 1;
            }
        }
    }

    Ok(GenerationTrace {
        target: current,
        accepted_actions: accepted,
        visited_states: visited,
        restarts,
    })
}
