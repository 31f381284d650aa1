//! Brute-force breadth-first search for minimal-depth circuits preparing a
//! target state from the ground state.
//!
//! Fidelity ignores global phase, so plain amplitude hashing would treat
//! phase-equivalent states as distinct. States are deduplicated through a
//! [`CanonicalKey`]: rotate the first significant amplitude to the real
//! non-negative axis, then quantize every component to a fixed grid.
//!
//! With the `parallel` feature the frontier is expanded with rayon, one task
//! per node; candidate layers are merged back in enumeration order (parent
//! major, action minor), so the result — including the witness circuit — is
//! bit-identical to the sequential search.

use std::collections::HashSet;

#[cfg(feature = "parallel")]
use rayon::prelude::*;

use crate::error::Result;
use crate::gates::{action_table, Action, GateSet};
use crate::state::{apply_gate, fidelity_pure, ground_state, QuantumState};

/// Quantization grid and significance threshold for canonical keys. 1e-6 is
/// coarse enough to absorb float noise and fine enough to keep the π/4 phase
/// steps of the T gate apart.
pub const KEY_GRID: f64 = 1e-6;
pub const KEY_TOL: f64 = 1e-6;

/// Phase-normalized, quantized fingerprint of a state. Two states equal up
/// to global phase map to the same key.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CanonicalKey(Vec<(i64, i64)>);

/// Compute the canonical key of `state` with explicit tolerance and grid.
pub fn canonical_key_with(state: &QuantumState, tol: f64, grid: f64) -> CanonicalKey {
    let phase = state
        .amplitudes()
        .iter()
        .find(|a| a.norm() > tol)
        .map(|a| a / a.norm())
        .unwrap_or_else(|| num_complex::Complex64::new(1.0, 0.0));
    let rotation = phase.conj();
    CanonicalKey(
        state
            .amplitudes()
            .iter()
            .map(|a| {
                let r = a * rotation;
                ((r.re / grid).round() as i64, (r.im / grid).round() as i64)
            })
            .collect(),
    )
}

/// Canonical key at the default grid.
pub fn canonical_key(state: &QuantumState) -> CanonicalKey {
    canonical_key_with(state, KEY_TOL, KEY_GRID)
}

/// Search controls. `parallel` is honored only when the `parallel` feature
/// is compiled in; otherwise expansion is sequential.
#[derive(Clone, Debug)]
pub struct SearchOptions {
    pub max_depth: usize,
    pub sfe: f64,
    pub dedup: bool,
    pub parallel: bool,
}

impl Default for SearchOptions {
    fn default() -> Self {
        SearchOptions {
            max_depth: 8,
            sfe: 0.001,
            dedup: true,
            parallel: cfg!(feature = "parallel"),
        }
    }
}

/// A minimal circuit found by the search.
#[derive(Clone, Debug)]
pub struct SearchResult {
    pub min_depth: usize,
    pub circuit: Vec<Action>,
    pub states_explored: usize,
    pub frontier_sizes: Vec<usize>,
}

/// Search verdict: found at the minimal depth, or nothing within the budget.
#[derive(Clone, Debug)]
pub enum SearchOutcome {
    Found(SearchResult),
    Exhausted {
        states_explored: usize,
        frontier_sizes: Vec<usize>,
    },
}

impl SearchOutcome {
    pub fn found(&self) -> Option<&SearchResult> {
        match self {
            SearchOutcome::Found(r) => Some(r),
            SearchOutcome::Exhausted { .. } => None,
        }
    }
}

struct Node {
    state: QuantumState,
    circuit: Vec<Action>,
}

struct Candidate {
    action: Action,
    state: QuantumState,
    key: CanonicalKey,
}

fn expand_node(node: &Node, table: &[(usize, Vec<usize>)], gateset: &GateSet) -> Vec<Candidate> {
    let combos = table.len() / gateset.len();
    table
        .iter()
        .enumerate()
        .map(|(i, (gate_index, qubits))| {
            let action = Action::new(*gate_index, i % combos);
            let state = apply_gate(&node.state, gateset.matrix(*gate_index), qubits)
                .expect("table entries are valid applications");
            let key = canonical_key(&state);
            Candidate { action, state, key }
        })
        .collect()
}

fn expand_frontier(
    frontier: &[Node],
    table: &[(usize, Vec<usize>)],
    gateset: &GateSet,
    parallel: bool,
) -> Vec<Vec<Candidate>> {
    #[cfg(feature = "parallel")]
    if parallel && frontier.len() > 1 {
        return frontier
            .par_iter()
            .map(|node| expand_node(node, table, gateset))
            .collect();
    }
    let _ = parallel;
    frontier
        .iter()
        .map(|node| expand_node(node, table, gateset))
        .collect()
}

/// Layered BFS from the ground state over all decoded actions, returning the
/// first depth at which some state matches `target` under `1 - F < sfe`.
/// The witness is the first match in enumeration order (gate index major,
/// permutation index minor, within the oldest frontier node), which makes it
/// reproducible across runs and thread schedules. Depth 0 is handled: a
/// target equal to the ground state (up to phase) yields an empty circuit.
pub fn min_depth_search(
    target: &QuantumState,
    gateset: &GateSet,
    opts: &SearchOptions,
) -> Result<SearchOutcome> {
    let n = target.n();
    let gateset = gateset.effective_for(n)?;
    let table = action_table(&gateset, n)?;

    let root = ground_state(n)?;
    if 1.0 - fidelity_pure(&root, target)? < opts.sfe {
        return Ok(SearchOutcome::Found(SearchResult {
            min_depth: 0,
            circuit: Vec::new(),
            states_explored: 1,
            frontier_sizes: vec![1],
        }));
    }

    let mut seen = HashSet::new();
    if opts.dedup {
        seen.insert(canonical_key(&root));
    }
    let mut frontier = vec![Node {
        state: root,
        circuit: Vec::new(),
    }];
    let mut frontier_sizes = vec![1usize];
    let mut states_explored = 1usize;

    for depth in 1..=opts.max_depth {
        let expanded = expand_frontier(&frontier, &table, &gateset, opts.parallel);
        let mut next = Vec::new();
        for (node, candidates) in frontier.iter().zip(expanded) {
            for cand in candidates {
                if opts.dedup && !seen.insert(cand.key) {
                    continue;
                }
                let mut circuit = node.circuit.clone();
                circuit.push(cand.action);
                if 1.0 - fidelity_pure(&cand.state, target)? < opts.sfe {
                    frontier_sizes.push(next.len() + 1);
                    states_explored += next.len() + 1;
                    return Ok(SearchOutcome::Found(SearchResult {
                        min_depth: depth,
                        circuit,
                        states_explored,
                        frontier_sizes,
                    }));
                }
                next.push(Node {
                    state: cand.state,
                    circuit,
                });
            }
        }
        states_explored += next.len();
        frontier_sizes.push(next.len());
        if next.is_empty() {
            break;
        }
        frontier = next;
    }

    Ok(SearchOutcome::Exhausted {
        states_explored,
        frontier_sizes,
    })
}

/// Replay `circuit` from the ground state and report whether it reaches
/// `target` under `1 - F < sfe`, along with the final fidelity.
pub fn verify_circuit(
    circuit: &[Action],
    target: &QuantumState,
    gateset: &GateSet,
    sfe: f64,
) -> Result<(bool, f64)> {
    let n = target.n();
    let gateset = gateset.effective_for(n)?;
    let mut state = ground_state(n)?;
    for &action in circuit {
        let (gate, qubits) = crate::gates::decode_action(action, &gateset, n)?;
        state = apply_gate(&state, gate, &qubits)?;
    }
    let fidelity = fidelity_pure(&state, target)?;
    Ok((1.0 - fidelity < sfe, fidelity))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gates::{clifford_t, parse_circuit};
    use num_complex::Complex64;
    use std::f64::consts::FRAC_1_SQRT_2;

    fn state(amps: [(f64, f64); 4]) -> QuantumState {
        QuantumState::from_amplitudes(amps.iter().map(|&(re, im)| Complex64::new(re, im)).collect())
            .unwrap()
    }

    fn bell_phi_plus() -> QuantumState {
        state([(FRAC_1_SQRT_2, 0.0), (0.0, 0.0), (0.0, 0.0), (FRAC_1_SQRT_2, 0.0)])
    }

    #[test]
    fn ground_state_is_depth_zero() {
        let gs = clifford_t();
        let target = ground_state(2).unwrap();
        let outcome = min_depth_search(&target, &gs, &SearchOptions::default()).unwrap();
        let result = outcome.found().expect("found");
        assert_eq!(result.min_depth, 0);
        assert!(result.circuit.is_empty());
    }

    #[test]
    fn phi_plus_depth_two_with_canonical_witness() {
        let gs = clifford_t();
        let outcome = min_depth_search(&bell_phi_plus(), &gs, &SearchOptions::default()).unwrap();
        let result = outcome.found().expect("found");
        assert_eq!(result.min_depth, 2);
        let text = crate::gates::circuit_text(&result.circuit, &gs, 2).unwrap();
        assert_eq!(text, "H q0; CNOT q0 q1");
    }

    #[test]
    fn psi_minus_needs_depth_seven() {
        let gs = clifford_t();
        let target = state([(0.0, 0.0), (FRAC_1_SQRT_2, 0.0), (-FRAC_1_SQRT_2, 0.0), (0.0, 0.0)]);
        let outcome = min_depth_search(&target, &gs, &SearchOptions::default()).unwrap();
        let result = outcome.found().expect("found");
        assert_eq!(result.min_depth, 7);
        let (reached, fid) = verify_circuit(&result.circuit, &target, &gs, 0.001).unwrap();
        assert!(reached);
        assert!(fid >= 0.999);
    }

    #[test]
    fn not_found_within_budget_is_reported() {
        let gs = clifford_t();
        let target = state([(0.0, 0.0), (0.0, 0.0), (0.0, 0.0), (1.0, 0.0)]); // |11⟩, depth 5
        let opts = SearchOptions {
            max_depth: 3,
            ..SearchOptions::default()
        };
        let outcome = min_depth_search(&target, &gs, &opts).unwrap();
        assert!(outcome.found().is_none());
    }

    #[test]
    fn dedup_only_prunes_never_changes_depth() {
        let gs = clifford_t();
        let targets = [
            ground_state(2).unwrap(),
            state([(0.5, 0.0), (0.5, 0.0), (0.5, 0.0), (0.5, 0.0)]),
            bell_phi_plus(),
            QuantumState::basis(2, 0b01).unwrap(),
            QuantumState::basis(2, 0b10).unwrap(),
            state([(FRAC_1_SQRT_2, 0.0), (0.0, 0.0), (0.0, 0.0), (-FRAC_1_SQRT_2, 0.0)]),
        ];
        for target in &targets {
            let base = SearchOptions {
                max_depth: 4,
                ..SearchOptions::default()
            };
            let with_dedup = min_depth_search(target, &gs, &base).unwrap();
            let without = min_depth_search(
                target,
                &gs,
                &SearchOptions {
                    dedup: false,
                    ..base
                },
            )
            .unwrap();
            match (with_dedup.found(), without.found()) {
                (Some(a), Some(b)) => {
                    assert_eq!(a.min_depth, b.min_depth);
                    assert_eq!(a.circuit, b.circuit);
                }
                (None, None) => {}
                _ => panic!("dedup changed the outcome"),
            }
        }
    }

    #[cfg(feature = "parallel")]
    #[test]
    fn parallel_and_sequential_agree() {
        let gs = clifford_t();
        let target = state([(0.0, 0.0), (FRAC_1_SQRT_2, 0.0), (FRAC_1_SQRT_2, 0.0), (0.0, 0.0)]);
        let seq = min_depth_search(
            &target,
            &gs,
            &SearchOptions {
                parallel: false,
                ..SearchOptions::default()
            },
        )
        .unwrap();
        let par = min_depth_search(
            &target,
            &gs,
            &SearchOptions {
                parallel: true,
                ..SearchOptions::default()
            },
        )
        .unwrap();
        let (s, p) = (seq.found().unwrap(), par.found().unwrap());
        assert_eq!(s.min_depth, p.min_depth);
        assert_eq!(s.circuit, p.circuit);
        assert_eq!(s.states_explored, p.states_explored);
        assert_eq!(s.frontier_sizes, p.frontier_sizes);
    }

    #[test]
    fn canonical_key_identifies_phase_equivalent_states() {
        let a = bell_phi_plus();
        // Same state multiplied by e^{iπ/3}.
        let phase = Complex64::from_polar(1.0, std::f64::consts::FRAC_PI_3);
        let b = QuantumState::from_amplitudes(
            a.amplitudes().iter().map(|x| x * phase).collect(),
        )
        .unwrap();
        assert_eq!(canonical_key(&a), canonical_key(&b));

        let c = QuantumState::basis(2, 0b01).unwrap();
        assert_ne!(canonical_key(&a), canonical_key(&c));
    }

    #[test]
    fn verify_circuit_cases() {
        let gs = clifford_t();
        // Table-style circuit for (|00⟩ - |11⟩)/√2.
        let target = state([(FRAC_1_SQRT_2, 0.0), (0.0, 0.0), (0.0, 0.0), (-FRAC_1_SQRT_2, 0.0)]);
        let circuit = parse_circuit("H q0; S q0; CNOT q0 q1; S q1", &gs, 2).unwrap();
        let (reached, fid) = verify_circuit(&circuit, &target, &gs, 0.001).unwrap();
        assert!(reached);
        assert!(fid >= 0.999);

        let (reached, fid) = verify_circuit(&[], &ground_state(2).unwrap(), &gs, 0.001).unwrap();
        assert!(reached);
        assert!((fid - 1.0).abs() < 1e-12);

        let circuit = parse_circuit("H q0", &gs, 2).unwrap();
        let (reached, fid) =
            verify_circuit(&circuit, &QuantumState::basis(2, 0b11).unwrap(), &gs, 0.001).unwrap();
        assert!(!reached);
        assert!(fid < 0.001);
    }

    #[test]
    fn every_returned_circuit_verifies() {
        let gs = clifford_t();
        let mut rng = crate::rng::Rng::seed_from_u64(3);
        for _ in 0..10 {
            let trace = crate::target::generate_target(2, 3, &gs, &mut rng).unwrap();
            let outcome =
                min_depth_search(&trace.target, &gs, &SearchOptions::default()).unwrap();
            let result = outcome.found().expect("depth ≤ 3 targets are findable");
            assert!(result.min_depth <= 3);
            let (reached, _) = verify_circuit(&result.circuit, &trace.target, &gs, 0.001).unwrap();
            assert!(reached);
        }
    }
}
