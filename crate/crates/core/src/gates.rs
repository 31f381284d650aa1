//! The Clifford+T gate vocabulary and the multi-discrete action encoding.
//!
//! An [`Action`] is a pair of indices: the first selects a gate from the
//! ordered set, the second selects one of the `C = n!/(n-n_max)!` ordered
//! qubit permutations. A gate of arity k acts on the first k entries of its
//! permutation.

use std::f64::consts::{FRAC_1_SQRT_2, FRAC_PI_4};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rng::Rng;
use crate::state::GateMatrix;

/// Ordered list of named gates. Action indices are positions in this list.
#[derive(Clone, Debug)]
pub struct GateSet {
    gates: Vec<(String, GateMatrix)>,
    n_max: usize,
}

impl GateSet {
    pub fn new(gates: Vec<(String, GateMatrix)>) -> Result<Self> {
        if gates.is_empty() {
            return Err(Error::InvalidConfig("gate set is empty".into()));
        }
        for (i, (name, _)) in gates.iter().enumerate() {
            if gates[..i].iter().any(|(other, _)| other == name) {
                return Err(Error::InvalidConfig(format!("duplicate gate name {name:?}")));
            }
        }
        let n_max = gates.iter().map(|(_, g)| g.arity()).max().unwrap();
        Ok(GateSet { gates, n_max })
    }

    pub fn len(&self) -> usize {
        self.gates.len()
    }

    pub fn is_empty(&self) -> bool {
        self.gates.is_empty()
    }

    /// Largest arity present in the set.
    pub fn n_max(&self) -> usize {
        self.n_max
    }

    pub fn name(&self, index: usize) -> &str {
        &self.gates[index].0
    }

    pub fn matrix(&self, index: usize) -> &GateMatrix {
        &self.gates[index].1
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.gates.iter().position(|(n, _)| n == name)
    }

    /// Subset of gates with arity ≤ `max_arity`, order preserved. Used when
    /// a register has fewer qubits than the widest gate needs.
    pub fn restricted_to_arity(&self, max_arity: usize) -> Result<GateSet> {
        let gates: Vec<_> = self
            .gates
            .iter()
            .filter(|(_, g)| g.arity() <= max_arity)
            .cloned()
            .collect();
        if gates.is_empty() {
            return Err(Error::TooFewQubits {
                required: self.gates.iter().map(|(_, g)| g.arity()).min().unwrap(),
                n: max_arity,
            });
        }
        GateSet::new(gates)
    }

    /// The set itself when it fits `n` qubits, otherwise the arity-restricted
    /// subset.
    pub fn effective_for(&self, n: usize) -> Result<GateSet> {
        if n >= self.n_max {
            Ok(self.clone())
        } else {
            self.restricted_to_arity(n)
        }
    }
}

/// The five-gate Clifford+T set in fixed order: I, H, S, CNOT, T.
pub fn clifford_t() -> GateSet {
    let c = Complex64::new;
    let zero = c(0.0, 0.0);
    let one = c(1.0, 0.0);
    let i = GateMatrix::new(1, vec![one, zero, zero, one]).expect("I unitary");
    let h = GateMatrix::new(
        1,
        vec![
            c(FRAC_1_SQRT_2, 0.0),
            c(FRAC_1_SQRT_2, 0.0),
            c(FRAC_1_SQRT_2, 0.0),
            c(-FRAC_1_SQRT_2, 0.0),
        ],
    )
    .expect("H unitary");
    let s = GateMatrix::new(1, vec![one, zero, zero, c(0.0, 1.0)]).expect("S unitary");
    #[rustfmt::skip]
    let cnot = GateMatrix::new(
        2,
        vec![
            one, zero, zero, zero,
            zero, one, zero, zero,
            zero, zero, zero, one,
            zero, zero, one, zero,
        ],
    )
    .expect("CNOT unitary");
    let t = GateMatrix::new(1, vec![one, zero, zero, Complex64::from_polar(1.0, FRAC_PI_4)])
        .expect("T unitary");
    GateSet::new(vec![
        ("I".into(), i),
        ("H".into(), h),
        ("S".into(), s),
        ("CNOT".into(), cnot),
        ("T".into(), t),
    ])
    .expect("clifford_t is a valid gate set")
}

/// One multi-discrete action: `(gate index, permutation index)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Action {
    pub gate: usize,
    pub perm: usize,
}

impl Action {
    pub fn new(gate: usize, perm: usize) -> Self {
        Action { gate, perm }
    }
}

/// Number of ordered qubit combinations `C = n!/(n-n_max)!`.
pub fn combination_count(gateset: &GateSet, n: usize) -> Result<usize> {
    if n < gateset.n_max() {
        return Err(Error::TooFewQubits {
            required: gateset.n_max(),
            n,
        });
    }
    Ok(falling_factorial(n, gateset.n_max()))
}

fn falling_factorial(n: usize, k: usize) -> usize {
    (0..k).fold(1usize, |acc, i| acc * (n - i))
}

/// All ordered k-permutations of `{0, …, n-1}` in lexicographic order.
pub fn enumerate_permutations(n: usize, k: usize) -> Result<Vec<Vec<usize>>> {
    if k == 0 || k > n {
        return Err(Error::TupleTooLong { k, n });
    }
    let mut result = Vec::with_capacity(falling_factorial(n, k));
    let mut prefix = Vec::with_capacity(k);
    fn extend(n: usize, k: usize, prefix: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if prefix.len() == k {
            out.push(prefix.clone());
            return;
        }
        for q in 0..n {
            if !prefix.contains(&q) {
                prefix.push(q);
                extend(n, k, prefix, out);
                prefix.pop();
            }
        }
    }
    extend(n, k, &mut prefix, &mut result);
    Ok(result)
}

/// Resolve an action to its gate matrix and target qubits: the gate's arity
/// worth of leading entries from permutation `action.perm`.
pub fn decode_action<'a>(
    action: Action,
    gateset: &'a GateSet,
    n: usize,
) -> Result<(&'a GateMatrix, Vec<usize>)> {
    let combos = combination_count(gateset, n)?;
    if action.gate >= gateset.len() || action.perm >= combos {
        return Err(Error::ActionOutOfBounds {
            gate: action.gate,
            perm: action.perm,
            gates: gateset.len(),
            combos,
        });
    }
    let perms = enumerate_permutations(n, gateset.n_max())?;
    let gate = gateset.matrix(action.gate);
    let qubits = perms[action.perm][..gate.arity()].to_vec();
    Ok((gate, qubits))
}

/// Precomputed decode table in action order (gate-major, permutation-minor):
/// entry `g * C + p` holds `(gate index, qubits)` for action `(g, p)`.
pub fn action_table(gateset: &GateSet, n: usize) -> Result<Vec<(usize, Vec<usize>)>> {
    let perms = enumerate_permutations(n, gateset.n_max())?;
    let mut table = Vec::with_capacity(gateset.len() * perms.len());
    for g in 0..gateset.len() {
        let arity = gateset.matrix(g).arity();
        for perm in &perms {
            table.push((g, perm[..arity].to_vec()));
        }
    }
    Ok(table)
}

/// Inverse of [`decode_action`]: the action whose permutation is the
/// lexicographically first one starting with `qubits`.
pub fn encode_action(gate_index: usize, qubits: &[usize], gateset: &GateSet, n: usize) -> Result<Action> {
    if gate_index >= gateset.len() {
        return Err(Error::ActionOutOfBounds {
            gate: gate_index,
            perm: 0,
            gates: gateset.len(),
            combos: combination_count(gateset, n)?,
        });
    }
    let arity = gateset.matrix(gate_index).arity();
    if arity != qubits.len() {
        return Err(Error::ArityMismatch {
            arity,
            given: qubits.len(),
        });
    }
    let perms = enumerate_permutations(n, gateset.n_max())?;
    let perm = perms
        .iter()
        .position(|p| p[..arity] == *qubits)
        .ok_or_else(|| {
            qubits
                .iter()
                .find(|&&q| q >= n)
                .map(|&q| Error::QubitIndexOutOfRange { index: q, n })
                .unwrap_or_else(|| Error::InvalidConfig(format!("invalid qubit tuple {qubits:?}")))
        })?;
    Ok(Action::new(gate_index, perm))
}

/// Sample a uniform action: gate index first, then permutation index, each
/// one [`Rng::index`] draw.
pub fn sample_uniform_action(gateset: &GateSet, n: usize, rng: &mut Rng) -> Result<Action> {
    let combos = combination_count(gateset, n)?;
    let gate = rng.index(gateset.len());
    let perm = rng.index(combos);
    Ok(Action::new(gate, perm))
}

/// One gate per line, `NAME q<i>[ q<j>]`.
pub fn format_gate_line(name: &str, qubits: &[usize]) -> String {
    let mut line = name.to_string();
    for q in qubits {
        line.push_str(&format!(" q{q}"));
    }
    line
}

/// Render actions as text lines in application order.
pub fn circuit_lines(actions: &[Action], gateset: &GateSet, n: usize) -> Result<Vec<String>> {
    actions
        .iter()
        .map(|&a| {
            let (_, qubits) = decode_action(a, gateset, n)?;
            Ok(format_gate_line(gateset.name(a.gate), &qubits))
        })
        .collect()
}

/// Semicolon-joined single-line form used in CSV logs.
pub fn circuit_text(actions: &[Action], gateset: &GateSet, n: usize) -> Result<String> {
    Ok(circuit_lines(actions, gateset, n)?.join("; "))
}

fn parse_gate_line(line: &str) -> Result<(String, Vec<usize>)> {
    let mut tokens = line.split_whitespace();
    let name = tokens
        .next()
        .ok_or_else(|| Error::CircuitParse {
            line: line.into(),
            reason: "empty line".into(),
        })?
        .to_string();
    let mut qubits = Vec::new();
    for tok in tokens {
        let digits = tok.strip_prefix('q').ok_or_else(|| Error::CircuitParse {
            line: line.into(),
            reason: format!("expected q<i>, got {tok:?}"),
        })?;
        let q: usize = digits.parse().map_err(|_| Error::CircuitParse {
            line: line.into(),
            reason: format!("bad qubit index {digits:?}"),
        })?;
        qubits.push(q);
    }
    if qubits.is_empty() {
        return Err(Error::CircuitParse {
            line: line.into(),
            reason: "no qubit operands".into(),
        });
    }
    Ok((name, qubits))
}

/// Parse circuit text (newline- or semicolon-separated gate lines) back into
/// actions. Round-trips the output of [`circuit_text`] and [`circuit_lines`].
pub fn parse_circuit(text: &str, gateset: &GateSet, n: usize) -> Result<Vec<Action>> {
    let mut actions = Vec::new();
    for raw in text.split(|c| c == '\n' || c == ';') {
        let line = raw.trim();
        if line.is_empty() {
            continue;
        }
        let (name, qubits) = parse_gate_line(line)?;
        let gate = gateset
            .index_of(&name)
            .ok_or(Error::UnknownGate(name))?;
        actions.push(encode_action(gate, &qubits, gateset, n)?);
    }
    Ok(actions)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::state::PHYS_TOL;

    #[test]
    fn clifford_t_matches_table() {
        let gs = clifford_t();
        assert_eq!(gs.len(), 5);
        assert_eq!(gs.n_max(), 2);
        let names: Vec<_> = (0..gs.len()).map(|i| gs.name(i)).collect();
        assert_eq!(names, ["I", "H", "S", "CNOT", "T"]);

        let t = gs.matrix(4);
        let expected = Complex64::from_polar(1.0, FRAC_PI_4);
        assert!((t.entry(1, 1) - expected).norm() < PHYS_TOL);

        let s = gs.matrix(2);
        assert!((s.entry(1, 1) - Complex64::new(0.0, 1.0)).norm() < PHYS_TOL);

        // CNOT is the only 4x4 entry.
        assert_eq!(gs.matrix(3).arity(), 2);
        for i in [0, 1, 2, 4] {
            assert_eq!(gs.matrix(i).arity(), 1);
        }
    }

    #[test]
    fn combination_counts() {
        let gs = clifford_t();
        assert_eq!(combination_count(&gs, 2).unwrap(), 2);
        assert_eq!(combination_count(&gs, 3).unwrap(), 6);
        assert!(combination_count(&gs, 1).is_err());

        let single = gs.restricted_to_arity(1).unwrap();
        assert_eq!(single.n_max(), 1);
        assert_eq!(combination_count(&single, 4).unwrap(), 4);
    }

    #[test]
    fn permutations_are_lexicographic() {
        assert_eq!(
            enumerate_permutations(2, 2).unwrap(),
            vec![vec![0, 1], vec![1, 0]]
        );
        assert_eq!(
            enumerate_permutations(3, 2).unwrap(),
            vec![
                vec![0, 1],
                vec![0, 2],
                vec![1, 0],
                vec![1, 2],
                vec![2, 0],
                vec![2, 1]
            ]
        );
        assert_eq!(enumerate_permutations(1, 1).unwrap(), vec![vec![0]]);
        assert!(enumerate_permutations(2, 3).is_err());
    }

    #[test]
    fn permutation_count_matches_combination_count() {
        let gs = clifford_t();
        for n in 2..=6 {
            let perms = enumerate_permutations(n, gs.n_max()).unwrap();
            assert_eq!(perms.len(), combination_count(&gs, n).unwrap());
        }
    }

    #[test]
    fn decode_examples() {
        let gs = clifford_t();
        let (gate, qubits) = decode_action(Action::new(1, 0), &gs, 2).unwrap();
        assert_eq!(gate.arity(), 1);
        assert_eq!(qubits, vec![0]); // H on first qubit of (0,1)

        let (gate, qubits) = decode_action(Action::new(3, 1), &gs, 2).unwrap();
        assert_eq!(gate.arity(), 2);
        assert_eq!(qubits, vec![1, 0]); // CNOT control q1, target q0

        let (_, qubits) = decode_action(Action::new(0, 1), &gs, 2).unwrap();
        assert_eq!(qubits, vec![1]); // I on first qubit of (1,0)

        assert!(decode_action(Action::new(5, 0), &gs, 2).is_err());
        assert!(decode_action(Action::new(0, 2), &gs, 2).is_err());
    }

    #[test]
    fn single_qubit_gates_alias_over_shared_prefixes() {
        let gs = clifford_t();
        // n=2: the two permutations start with different qubits, so arity-1
        // decodes differ.
        let (_, q0) = decode_action(Action::new(1, 0), &gs, 2).unwrap();
        let (_, q1) = decode_action(Action::new(1, 1), &gs, 2).unwrap();
        assert_ne!(q0, q1);

        // n=3: permutations (0,1) and (0,2) share the prefix 0, so arity-1
        // gates decode to the same application.
        let (_, a) = decode_action(Action::new(1, 0), &gs, 3).unwrap();
        let (_, b) = decode_action(Action::new(1, 1), &gs, 3).unwrap();
        assert_eq!(a, b);
        assert_eq!(a, vec![0]);
    }

    #[test]
    fn decoded_tuples_are_distinct_and_in_range() {
        let gs = clifford_t();
        for n in 2..=4 {
            let combos = combination_count(&gs, n).unwrap();
            for g in 0..gs.len() {
                for p in 0..combos {
                    let (gate, qubits) = decode_action(Action::new(g, p), &gs, n).unwrap();
                    assert_eq!(qubits.len(), gate.arity());
                    for (i, &q) in qubits.iter().enumerate() {
                        assert!(q < n);
                        assert!(!qubits[..i].contains(&q));
                    }
                }
            }
        }
    }

    #[test]
    fn uniform_sampling_frequencies() {
        let gs = clifford_t();
        let mut rng = Rng::seed_from_u64(1);
        let trials = 100_000;
        let mut gate_counts = [0usize; 5];
        let mut perm_counts = [0usize; 2];
        for _ in 0..trials {
            let a = sample_uniform_action(&gs, 2, &mut rng).unwrap();
            gate_counts[a.gate] += 1;
            perm_counts[a.perm] += 1;
        }
        for count in gate_counts {
            let freq = count as f64 / trials as f64;
            assert!((freq - 0.2).abs() < 0.01, "gate frequency {freq}");
        }
        for count in perm_counts {
            let freq = count as f64 / trials as f64;
            assert!((freq - 0.5).abs() < 0.01, "perm frequency {freq}");
        }
    }

    #[test]
    fn sampling_is_seed_deterministic() {
        let gs = clifford_t();
        let mut a = Rng::seed_from_u64(77);
        let mut b = Rng::seed_from_u64(77);
        for _ in 0..100 {
            assert_eq!(
                sample_uniform_action(&gs, 2, &mut a).unwrap(),
                sample_uniform_action(&gs, 2, &mut b).unwrap()
            );
        }
    }

    #[test]
    fn circuit_text_round_trips() {
        let gs = clifford_t();
        let actions = vec![Action::new(1, 0), Action::new(3, 0), Action::new(4, 1)];
        let text = circuit_text(&actions, &gs, 2).unwrap();
        assert_eq!(text, "H q0; CNOT q0 q1; T q1");
        assert_eq!(parse_circuit(&text, &gs, 2).unwrap(), actions);

        let lines = circuit_lines(&actions, &gs, 2).unwrap();
        assert_eq!(parse_circuit(&lines.join("\n"), &gs, 2).unwrap(), actions);
    }

    #[test]
    fn parse_rejects_garbage() {
        let gs = clifford_t();
        assert!(parse_circuit("X q0", &gs, 2).is_err());
        assert!(parse_circuit("H 0", &gs, 2).is_err());
        assert!(parse_circuit("H", &gs, 2).is_err());
        assert!(parse_circuit("H q9", &gs, 2).is_err());
    }

    #[test]
    fn encode_decode_consistency() {
        let gs = clifford_t();
        for n in 2..=3 {
            let combos = combination_count(&gs, n).unwrap();
            for g in 0..gs.len() {
                for p in 0..combos {
                    let action = Action::new(g, p);
                    let (_, qubits) = decode_action(action, &gs, n).unwrap();
                    let encoded = encode_action(g, &qubits, &gs, n).unwrap();
                    let (_, round) = decode_action(encoded, &gs, n).unwrap();
                    assert_eq!(round, qubits);
                }
            }
        }
    }
}
