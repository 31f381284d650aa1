//! Benchmark-only agents: oracle replay (plays a minimal circuit for
//! whatever target the observation announces) and a fixed script.

use std::collections::HashMap;
use std::sync::{Arc, Mutex};

use qcsyn_agents::Agent;
use qcsyn_core::env::Observation;
use qcsyn_core::gates::{Action, GateSet};
use qcsyn_core::oracle::{canonical_key, min_depth_search, CanonicalKey, SearchOptions};
use qcsyn_core::Rng;

/// Replays the oracle's minimal circuit for the episode's target. Searches
/// once per distinct target (keyed by canonical state) and shares the plan
/// cache across clones, so parallel evaluation reuses results. Falls back to
/// the identity action when the plan runs out or no circuit was found.
#[derive(Clone)]
pub struct OracleReplayAgent {
    gateset: GateSet,
    options: SearchOptions,
    cache: Arc<Mutex<HashMap<CanonicalKey, Option<Vec<Action>>>>>,
    plan: Vec<Action>,
    cursor: usize,
}

impl OracleReplayAgent {
    pub fn new(gateset: GateSet) -> Self {
        OracleReplayAgent {
            gateset,
            options: SearchOptions::default(),
            cache: Arc::new(Mutex::new(HashMap::new())),
            plan: Vec::new(),
            cursor: 0,
        }
    }

    pub fn with_options(gateset: GateSet, options: SearchOptions) -> Self {
        OracleReplayAgent {
            options,
            ..OracleReplayAgent::new(gateset)
        }
    }
}

impl Agent for OracleReplayAgent {
    fn begin_episode(&mut self, obs: &Observation) {
        self.cursor = 0;
        self.plan = Vec::new();
        let Ok((_, target)) = obs.decode() else {
            return;
        };
        let key = canonical_key(&target);
        let cached = self.cache.lock().unwrap().get(&key).cloned();
        let plan = match cached {
            Some(plan) => plan,
            None => {
                let plan = min_depth_search(&target, &self.gateset, &self.options)
                    .ok()
                    .and_then(|outcome| outcome.found().map(|r| r.circuit.clone()));
                self.cache.lock().unwrap().insert(key, plan.clone());
                plan
            }
        };
        self.plan = plan.unwrap_or_default();
    }

    fn act(&mut self, _obs: &Observation, _rng: &mut Rng) -> Action {
        let action = self
            .plan
            .get(self.cursor)
            .copied()
            .unwrap_or_else(|| Action::new(0, 0));
        self.cursor += 1;
        action
    }
}

/// Emits a fixed action sequence, then idles on the identity.
#[derive(Clone, Debug)]
pub struct ScriptedAgent {
    script: Vec<Action>,
    cursor: usize,
}

impl ScriptedAgent {
    pub fn new(script: Vec<Action>) -> Self {
        ScriptedAgent { script, cursor: 0 }
    }
}

impl Agent for ScriptedAgent {
    fn begin_episode(&mut self, _obs: &Observation) {
        self.cursor = 0;
    }

    fn act(&mut self, _obs: &Observation, _rng: &mut Rng) -> Action {
        let action = self
            .script
            .get(self.cursor)
            .copied()
            .unwrap_or_else(|| Action::new(0, 0));
        self.cursor += 1;
        action
    }
}
