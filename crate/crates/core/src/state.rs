//! Dense state vectors, gate matrices, and pure-state fidelity.
//!
//! Basis convention: index `i` reads as the binary expansion of the ket with
//! qubit 0 leftmost, i.e. qubit 0 is the most significant bit. `|10⟩` on two
//! qubits is basis index 2.

use num_complex::Complex64;
use serde::de::Deserializer;
use serde::ser::{SerializeSeq, Serializer};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Hard cap on register size; 2^20 amplitudes is 16 MiB of f64 pairs.
pub const MAX_QUBITS: usize = 20;

/// Tolerance for physical invariants (normalization, unitarity).
pub const PHYS_TOL: f64 = 1e-10;

/// Normalized pure state of `n` qubits: 2^n complex amplitudes.
///
/// States are immutable values; gate application returns a fresh state.
#[derive(Clone, Debug, PartialEq)]
pub struct QuantumState {
    n: usize,
    amps: Vec<Complex64>,
}

impl QuantumState {
    /// Build a state from raw amplitudes. The length must be a power of two
    /// in `2..=2^MAX_QUBITS` and the vector normalized within [`PHYS_TOL`].
    pub fn from_amplitudes(amps: Vec<Complex64>) -> Result<Self> {
        let len = amps.len();
        if len < 2 || !len.is_power_of_two() {
            return Err(Error::InvalidAmplitudes(format!(
                "length {len} is not a power of two ≥ 2"
            )));
        }
        let n = len.trailing_zeros() as usize;
        if n > MAX_QUBITS {
            return Err(Error::QubitCountOutOfRange(n, MAX_QUBITS));
        }
        let state = QuantumState { n, amps };
        let norm = state.norm_sqr();
        if (norm - 1.0).abs() > PHYS_TOL {
            return Err(Error::NotNormalized(norm.sqrt()));
        }
        Ok(state)
    }

    /// Computational basis state `|index⟩`.
    pub fn basis(n: usize, index: usize) -> Result<Self> {
        if n < 1 || n > MAX_QUBITS {
            return Err(Error::QubitCountOutOfRange(n, MAX_QUBITS));
        }
        let dim = 1usize << n;
        if index >= dim {
            return Err(Error::InvalidAmplitudes(format!(
                "basis index {index} out of range for {n} qubits"
            )));
        }
        let mut amps = vec![Complex64::new(0.0, 0.0); dim];
        amps[index] = Complex64::new(1.0, 0.0);
        Ok(QuantumState { n, amps })
    }

    pub(crate) fn from_amplitudes_unchecked(n: usize, amps: Vec<Complex64>) -> Self {
        debug_assert_eq!(amps.len(), 1 << n);
        QuantumState { n, amps }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn dim(&self) -> usize {
        self.amps.len()
    }

    pub fn amplitude(&self, index: usize) -> Complex64 {
        self.amps[index]
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amps
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amps.iter().map(|a| a.norm_sqr()).sum()
    }

    /// Amplitudes as `[re, im]` pairs in basis-index order (the log format).
    pub fn to_pairs(&self) -> Vec<[f64; 2]> {
        self.amps.iter().map(|a| [a.re, a.im]).collect()
    }

    pub fn from_pairs(pairs: &[[f64; 2]]) -> Result<Self> {
        Self::from_amplitudes(pairs.iter().map(|p| Complex64::new(p[0], p[1])).collect())
    }
}

impl Serialize for QuantumState {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let mut seq = serializer.serialize_seq(Some(self.amps.len()))?;
        for a in &self.amps {
            seq.serialize_element(&[a.re, a.im])?;
        }
        seq.end()
    }
}

impl<'de> Deserialize<'de> for QuantumState {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let pairs = Vec::<[f64; 2]>::deserialize(deserializer)?;
        QuantumState::from_pairs(&pairs).map_err(serde::de::Error::custom)
    }
}

/// `|0…0⟩` on `n` qubits.
pub fn ground_state(n: usize) -> Result<QuantumState> {
    QuantumState::basis(n, 0)
}

/// Unitary acting on `arity` qubits, stored row-major as a 2^k × 2^k matrix.
#[derive(Clone, Debug, PartialEq)]
pub struct GateMatrix {
    arity: usize,
    entries: Vec<Complex64>,
}

impl GateMatrix {
    /// Validates shape and unitarity (U†U = I within [`PHYS_TOL`]).
    pub fn new(arity: usize, entries: Vec<Complex64>) -> Result<Self> {
        let dim = 1usize
            .checked_shl(arity as u32)
            .filter(|_| arity >= 1 && arity <= MAX_QUBITS)
            .ok_or(Error::QubitCountOutOfRange(arity, MAX_QUBITS))?;
        if entries.len() != dim * dim {
            return Err(Error::DimensionMismatch(entries.len(), dim * dim));
        }
        let gate = GateMatrix { arity, entries };
        let dev = gate.unitarity_deviation();
        if dev > PHYS_TOL {
            return Err(Error::NotUnitary(dev));
        }
        Ok(gate)
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn dim(&self) -> usize {
        1 << self.arity
    }

    pub fn entry(&self, row: usize, col: usize) -> Complex64 {
        self.entries[row * self.dim() + col]
    }

    /// Max absolute deviation of U†U from the identity.
    pub fn unitarity_deviation(&self) -> f64 {
        let dim = self.dim();
        let mut worst = 0.0f64;
        for r in 0..dim {
            for c in 0..dim {
                let mut acc = Complex64::new(0.0, 0.0);
                for k in 0..dim {
                    acc += self.entry(k, r).conj() * self.entry(k, c);
                }
                let expected = if r == c { 1.0 } else { 0.0 };
                worst = worst.max((acc - expected).norm());
            }
        }
        worst
    }
}

/// Apply `gate` to the listed qubits of `state`, identity elsewhere.
///
/// `qubits` are distinct indices below `state.n()`; the first index is the
/// gate's first wire (for CNOT, the control). Returns the transformed state.
pub fn apply_gate(
    state: &QuantumState,
    gate: &GateMatrix,
    qubits: &[usize],
) -> Result<QuantumState> {
    let n = state.n();
    let k = gate.arity();
    if qubits.len() != k {
        return Err(Error::ArityMismatch {
            arity: k,
            given: qubits.len(),
        });
    }
    for (pos, &q) in qubits.iter().enumerate() {
        if q >= n {
            return Err(Error::QubitIndexOutOfRange { index: q, n });
        }
        if qubits[..pos].contains(&q) {
            return Err(Error::DuplicateQubit(q));
        }
    }

    // Qubit q lives at bit n-1-q. The gate's local index keeps the listed
    // order: the first listed qubit is the local most significant bit.
    let masks: Vec<usize> = qubits.iter().map(|&q| 1usize << (n - 1 - q)).collect();
    let gate_mask: usize = masks.iter().fold(0, |acc, m| acc | m);
    let gdim = gate.dim();

    let mut out = vec![Complex64::new(0.0, 0.0); state.dim()];
    let mut idx = vec![0usize; gdim];
    for base in 0..state.dim() {
        if base & gate_mask != 0 {
            continue;
        }
        for (local, slot) in idx.iter_mut().enumerate() {
            let mut i = base;
            for (pos, &mask) in masks.iter().enumerate() {
                if (local >> (k - 1 - pos)) & 1 == 1 {
                    i |= mask;
                }
            }
            *slot = i;
        }
        for row in 0..gdim {
            let mut acc = Complex64::new(0.0, 0.0);
            for col in 0..gdim {
                acc += gate.entry(row, col) * state.amps[idx[col]];
            }
            out[idx[row]] = acc;
        }
    }
    Ok(QuantumState::from_amplitudes_unchecked(n, out))
}

/// Pure-state fidelity |⟨a|b⟩|². Symmetric and global-phase invariant.
pub fn fidelity_pure(a: &QuantumState, b: &QuantumState) -> Result<f64> {
    if a.n() != b.n() {
        return Err(Error::DimensionMismatch(a.dim(), b.dim()));
    }
    let overlap: Complex64 = a
        .amps
        .iter()
        .zip(&b.amps)
        .map(|(x, y)| x.conj() * y)
        .sum();
    Ok(overlap.norm_sqr())
}
