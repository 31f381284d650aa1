//! The well-known 2-qubit benchmark set: the four basis states, the uniform
//! superposition, and the four Bell states, each with its minimal Clifford+T
//! preparation depth and, where one exists, a reference circuit.

use std::f64::consts::FRAC_1_SQRT_2;

use num_complex::Complex64;
use qcsyn_core::QuantumState;

use crate::error::{BenchError, Result};
use crate::levels::Level;

/// One benchmark target. `minimal_depth` is the exact minimal Clifford+T
/// gate count from the ground state; `reference_circuit` is a known minimal
/// preparation in circuit text form.
#[derive(Clone, Debug)]
pub struct NamedState {
    pub name: &'static str,
    pub state: QuantumState,
    pub level: Level,
    pub minimal_depth: usize,
    pub reference_circuit: Option<&'static str>,
}

fn two_qubit(amps: [(f64, f64); 4]) -> QuantumState {
    QuantumState::from_amplitudes(
        amps.iter()
            .map(|&(re, im)| Complex64::new(re, im))
            .collect(),
    )
    .expect("benchmark states are normalized")
}

/// The nine states, ordered by minimal depth: three per level.
pub fn well_known_states() -> Vec<NamedState> {
    let r = FRAC_1_SQRT_2;
    vec![
        NamedState {
            name: "basis-00",
            state: two_qubit([(1.0, 0.0), (0.0, 0.0), (0.0, 0.0), (0.0, 0.0)]),
            level: Level::Easy,
            minimal_depth: 0,
            reference_circuit: None,
        },
        NamedState {
            name: "plus-plus",
            state: two_qubit([(0.5, 0.0), (0.5, 0.0), (0.5, 0.0), (0.5, 0.0)]),
            level: Level::Easy,
            minimal_depth: 2,
            reference_circuit: Some("H q0; H q1"),
        },
        NamedState {
            name: "bell-phi-plus",
            state: two_qubit([(r, 0.0), (0.0, 0.0), (0.0, 0.0), (r, 0.0)]),
            level: Level::Easy,
            minimal_depth: 2,
            reference_circuit: Some("H q0; CNOT q0 q1"),
        },
        NamedState {
            name: "basis-01",
            state: two_qubit([(0.0, 0.0), (1.0, 0.0), (0.0, 0.0), (0.0, 0.0)]),
            level: Level::Medium,
            minimal_depth: 4,
            reference_circuit: Some("H q1; S q1; S q1; H q1"),
        },
        NamedState {
            name: "basis-10",
            state: two_qubit([(0.0, 0.0), (0.0, 0.0), (1.0, 0.0), (0.0, 0.0)]),
            level: Level::Medium,
            minimal_depth: 4,
            reference_circuit: Some("H q0; S q0; S q0; H q0"),
        },
        NamedState {
            name: "bell-phi-minus",
            state: two_qubit([(r, 0.0), (0.0, 0.0), (0.0, 0.0), (-r, 0.0)]),
            level: Level::Medium,
            minimal_depth: 4,
            reference_circuit: Some("H q0; S q0; CNOT q0 q1; S q1"),
        },
        NamedState {
            name: "basis-11",
            state: two_qubit([(0.0, 0.0), (0.0, 0.0), (0.0, 0.0), (1.0, 0.0)]),
            level: Level::Hard,
            minimal_depth: 5,
            reference_circuit: Some("H q0; S q0; S q0; H q0; CNOT q0 q1"),
        },
        NamedState {
            name: "bell-psi-plus",
            state: two_qubit([(0.0, 0.0), (r, 0.0), (r, 0.0), (0.0, 0.0)]),
            level: Level::Hard,
            minimal_depth: 5,
            reference_circuit: Some("H q0; CNOT q0 q1; H q1; CNOT q1 q0; H q1"),
        },
        NamedState {
            name: "bell-psi-minus",
            state: two_qubit([(0.0, 0.0), (r, 0.0), (-r, 0.0), (0.0, 0.0)]),
            level: Level::Hard,
            minimal_depth: 7,
            reference_circuit: None,
        },
    ]
}

/// Look up a benchmark state by name.
pub fn named_state(name: &str) -> Result<NamedState> {
    well_known_states()
        .into_iter()
        .find(|s| s.name == name)
        .ok_or_else(|| BenchError::UnknownState(name.to_string()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use qcsyn_core::gates::{clifford_t, parse_circuit};
    use qcsyn_core::oracle::{min_depth_search, verify_circuit, SearchOptions};

    #[test]
    fn levels_split_three_three_three() {
        let states = well_known_states();
        assert_eq!(states.len(), 9);
        for level in Level::ALL {
            assert_eq!(states.iter().filter(|s| s.level == level).count(), 3);
        }
    }

    #[test]
    fn phi_plus_amplitudes() {
        let phi = named_state("bell-phi-plus").unwrap();
        let amps = phi.state.amplitudes();
        assert!((amps[0].re - FRAC_1_SQRT_2).abs() < 1e-12);
        assert!((amps[3].re - FRAC_1_SQRT_2).abs() < 1e-12);
        assert!(amps[1].norm() < 1e-12);
        assert!(amps[2].norm() < 1e-12);
    }

    #[test]
    fn reference_circuits_prepare_their_states() {
        let gs = clifford_t();
        let expected_lengths = [2usize, 2, 4, 4, 4, 5, 5];
        let mut seen = 0;
        for state in well_known_states() {
            let Some(text) = state.reference_circuit else {
                continue;
            };
            let circuit = parse_circuit(text, &gs, 2).unwrap();
            assert_eq!(circuit.len(), expected_lengths[seen], "{}", state.name);
            assert_eq!(circuit.len(), state.minimal_depth, "{}", state.name);
            let (reached, fid) = verify_circuit(&circuit, &state.state, &gs, 0.001).unwrap();
            assert!(reached, "{} not reached, F = {fid}", state.name);
            assert!(fid >= 0.999);
            seen += 1;
        }
        assert_eq!(seen, 7);
    }

    #[test]
    fn minimal_depths_match_the_oracle() {
        let gs = clifford_t();
        for state in well_known_states() {
            let outcome = min_depth_search(&state.state, &gs, &SearchOptions::default()).unwrap();
            let result = outcome.found().unwrap_or_else(|| {
                panic!("{} not found within the default budget", state.name)
            });
            assert_eq!(
                result.min_depth, state.minimal_depth,
                "{} minimal depth mismatch",
                state.name
            );
        }
    }

    #[test]
    fn unknown_name_is_an_error() {
        assert!(named_state("bell-omega").is_err());
    }
}
