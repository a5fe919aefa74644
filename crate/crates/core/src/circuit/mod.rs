// Copyright 2026 The diagsynth Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//    http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

//! Gate-level intermediate representation.
//!
//! Qubit 0 is the most significant bit of a basis index. Gates in a
//! [`Circuit`] are applied to states left to right, so the circuit unitary is
//! the matrix product of the gate list taken right to left.

mod sim;
mod text;

use std::collections::BTreeSet;
use std::fmt;

pub use sim::{
    apply_gate, compare_up_to_global_phase, dense_unitary, simulate_columns,
    simulate_sparse_columns, Matrix, SparseColumns, DEFAULT_DENSE_LIMIT, PRUNE_THRESHOLD,
};
pub use text::{parse_circuit, to_qasm};

use crate::error::{Error, Result};

/// A gate over Clifford+T, axial rotations, and classical multi-controlled NOTs.
#[derive(Debug, Clone, PartialEq)]
pub enum Gate {
    X(usize),
    H(usize),
    S(usize),
    Sdg(usize),
    T(usize),
    Tdg(usize),
    Z(usize),
    /// `diag(e^{-i theta/2}, e^{i theta/2})`.
    Rz { qubit: usize, theta: f64 },
    /// Multiplies the whole state by `e^{i theta}`.
    GlobalPhase(f64),
    Cnot { control: usize, target: usize },
    Toffoli { controls: [usize; 2], target: usize },
    /// Flips `target` when `controls[i] == pattern[i]` for every `i`.
    Mcx {
        controls: Vec<usize>,
        pattern: Vec<bool>,
        target: usize,
    },
}

impl Gate {
    pub fn cnot(control: usize, target: usize) -> Self {
        Gate::Cnot { control, target }
    }

    pub fn toffoli(a: usize, b: usize, target: usize) -> Self {
        Gate::Toffoli {
            controls: [a, b],
            target,
        }
    }

    pub fn rz(qubit: usize, theta: f64) -> Self {
        Gate::Rz { qubit, theta }
    }

    /// Qubits touched by the gate, controls first and target last.
    pub fn qubits(&self) -> Vec<usize> {
        match self {
            Gate::X(q) | Gate::H(q) | Gate::S(q) | Gate::Sdg(q) | Gate::T(q) | Gate::Tdg(q)
            | Gate::Z(q) => vec![*q],
            Gate::Rz { qubit, .. } => vec![*qubit],
            Gate::GlobalPhase(_) => vec![],
            Gate::Cnot { control, target } => vec![*control, *target],
            Gate::Toffoli { controls, target } => vec![controls[0], controls[1], *target],
            Gate::Mcx {
                controls, target, ..
            } => {
                let mut qs = controls.clone();
                qs.push(*target);
                qs
            }
        }
    }

    /// The qubit whose computational-basis value the gate can change, if any.
    pub fn target(&self) -> Option<usize> {
        match self {
            Gate::X(q) | Gate::H(q) => Some(*q),
            Gate::Cnot { target, .. } | Gate::Toffoli { target, .. } | Gate::Mcx { target, .. } => {
                Some(*target)
            }
            _ => None,
        }
    }

    /// True for X, CNOT, Toffoli and MCX.
    pub fn is_classical(&self) -> bool {
        matches!(
            self,
            Gate::X(_) | Gate::Cnot { .. } | Gate::Toffoli { .. } | Gate::Mcx { .. }
        )
    }

    pub fn is_t(&self) -> bool {
        matches!(self, Gate::T(_) | Gate::Tdg(_))
    }

    pub fn inverse(&self) -> Gate {
        match self {
            Gate::S(q) => Gate::Sdg(*q),
            Gate::Sdg(q) => Gate::S(*q),
            Gate::T(q) => Gate::Tdg(*q),
            Gate::Tdg(q) => Gate::T(*q),
            Gate::Rz { qubit, theta } => Gate::Rz {
                qubit: *qubit,
                theta: -theta,
            },
            Gate::GlobalPhase(theta) => Gate::GlobalPhase(-theta),
            g => g.clone(),
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            Gate::X(_) => "X",
            Gate::H(_) => "H",
            Gate::S(_) => "S",
            Gate::Sdg(_) => "SDG",
            Gate::T(_) => "T",
            Gate::Tdg(_) => "TDG",
            Gate::Z(_) => "Z",
            Gate::Rz { .. } => "RZ",
            Gate::GlobalPhase(_) => "GPHASE",
            Gate::Cnot { .. } => "CNOT",
            Gate::Toffoli { .. } => "TOFFOLI",
            Gate::Mcx { .. } => "MCX",
        }
    }

    /// Same gate with every qubit index passed through `f`.
    pub fn remap(&self, f: impl Fn(usize) -> usize) -> Gate {
        match self {
            Gate::X(q) => Gate::X(f(*q)),
            Gate::H(q) => Gate::H(f(*q)),
            Gate::S(q) => Gate::S(f(*q)),
            Gate::Sdg(q) => Gate::Sdg(f(*q)),
            Gate::T(q) => Gate::T(f(*q)),
            Gate::Tdg(q) => Gate::Tdg(f(*q)),
            Gate::Z(q) => Gate::Z(f(*q)),
            Gate::Rz { qubit, theta } => Gate::Rz {
                qubit: f(*qubit),
                theta: *theta,
            },
            Gate::GlobalPhase(t) => Gate::GlobalPhase(*t),
            Gate::Cnot { control, target } => Gate::Cnot {
                control: f(*control),
                target: f(*target),
            },
            Gate::Toffoli { controls, target } => Gate::Toffoli {
                controls: [f(controls[0]), f(controls[1])],
                target: f(*target),
            },
            Gate::Mcx {
                controls,
                pattern,
                target,
            } => Gate::Mcx {
                controls: controls.iter().map(|&q| f(q)).collect(),
                pattern: pattern.clone(),
                target: f(*target),
            },
        }
    }

    pub fn validate(&self, width: usize) -> Result<()> {
        let invalid = |reason: String| Error::InvalidGate {
            gate: self.to_string(),
            reason,
        };
        let qs = self.qubits();
        for (i, q) in qs.iter().enumerate() {
            if *q >= width {
                return Err(invalid(format!("qubit {q} outside width {width}")));
            }
            if qs[..i].contains(q) {
                return Err(invalid(format!("qubit {q} repeated")));
            }
        }
        match self {
            Gate::Mcx {
                controls, pattern, ..
            } if controls.len() != pattern.len() => Err(invalid(format!(
                "pattern length {} differs from {} controls",
                pattern.len(),
                controls.len()
            ))),
            Gate::Rz { theta, .. } | Gate::GlobalPhase(theta) if !theta.is_finite() => {
                Err(invalid("angle is not finite".into()))
            }
            _ => Ok(()),
        }
    }
}

impl fmt::Display for Gate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let list = |qs: &[usize]| {
            let inner: Vec<String> = qs.iter().map(|q| q.to_string()).collect();
            format!("[{}]", inner.join(","))
        };
        match self {
            Gate::X(q) | Gate::H(q) | Gate::S(q) | Gate::Sdg(q) | Gate::T(q) | Gate::Tdg(q)
            | Gate::Z(q) => write!(f, "{} q={q}", self.name()),
            Gate::Rz { qubit, theta } => write!(f, "RZ q={qubit} theta={}", fmt_angle(*theta)),
            Gate::GlobalPhase(theta) => write!(f, "GPHASE theta={}", fmt_angle(*theta)),
            Gate::Cnot { control, target } => write!(f, "CNOT ctrl={control} target={target}"),
            Gate::Toffoli { controls, target } => {
                write!(f, "TOFFOLI ctrls={} target={target}", list(controls))
            }
            Gate::Mcx {
                controls,
                pattern,
                target,
            } => {
                let bits: String = pattern.iter().map(|&b| if b { '1' } else { '0' }).collect();
                write!(
                    f,
                    "MCX ctrls={} pattern={bits} target={target}",
                    list(controls)
                )
            }
        }
    }
}

/// Angles are written with 12 significant digits.
pub(crate) fn fmt_angle(theta: f64) -> String {
    format!("{theta:.11e}")
}

/// An ordered gate list over a fixed number of qubits.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct Circuit {
    width: usize,
    gates: Vec<Gate>,
    ancillas: BTreeSet<usize>,
}

impl Circuit {
    pub fn new(width: usize) -> Self {
        Circuit {
            width,
            gates: Vec::new(),
            ancillas: BTreeSet::new(),
        }
    }

    pub fn from_gates(width: usize, gates: impl IntoIterator<Item = Gate>) -> Result<Self> {
        let mut c = Circuit::new(width);
        for g in gates {
            c.push(g)?;
        }
        Ok(c)
    }

    /// Declares `q` as an ancilla that must start and end in `|0>`.
    pub fn add_ancilla(&mut self, q: usize) -> Result<()> {
        if q >= self.width {
            return Err(Error::InvalidArgument(format!(
                "ancilla {q} outside width {}",
                self.width
            )));
        }
        self.ancillas.insert(q);
        Ok(())
    }

    pub fn push(&mut self, gate: Gate) -> Result<()> {
        gate.validate(self.width)?;
        self.gates.push(gate);
        Ok(())
    }

    pub(crate) fn push_unchecked(&mut self, gate: Gate) {
        debug_assert!(gate.validate(self.width).is_ok(), "{gate}");
        self.gates.push(gate);
    }

    /// Appends every gate of `other`; the width grows if `other` is wider.
    pub fn append(&mut self, other: &Circuit) {
        self.width = self.width.max(other.width);
        self.gates.extend(other.gates.iter().cloned());
        self.ancillas.extend(other.ancillas.iter().copied());
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn gates(&self) -> &[Gate] {
        &self.gates
    }

    pub fn ancillas(&self) -> &BTreeSet<usize> {
        &self.ancillas
    }

    pub fn len(&self) -> usize {
        self.gates.len()
    }

    pub fn is_empty(&self) -> bool {
        self.gates.is_empty()
    }

    /// Number of T and T-dagger gates. Toffoli, MCX and Rz contribute nothing.
    pub fn t_count(&self) -> usize {
        self.gates.iter().filter(|g| g.is_t()).count()
    }

    pub fn toffoli_count(&self) -> usize {
        self.count(|g| matches!(g, Gate::Toffoli { .. }))
    }

    pub fn rz_count(&self) -> usize {
        self.count(|g| matches!(g, Gate::Rz { .. }))
    }

    pub fn count(&self, pred: impl Fn(&Gate) -> bool) -> usize {
        self.gates.iter().filter(|g| pred(g)).count()
    }

    /// Sum of all global phase gates.
    pub fn global_phase(&self) -> f64 {
        self.gates
            .iter()
            .map(|g| match g {
                Gate::GlobalPhase(t) => *t,
                _ => 0.0,
            })
            .sum()
    }

    pub fn is_classical(&self) -> bool {
        self.gates.iter().all(Gate::is_classical)
    }

    /// Inverse circuit: reversed order, each gate inverted.
    pub fn inverse(&self) -> Circuit {
        Circuit {
            width: self.width,
            gates: self.gates.iter().rev().map(Gate::inverse).collect(),
            ancillas: self.ancillas.clone(),
        }
    }

    /// Image of basis index `index` under a classical reversible circuit.
    pub fn apply_to_basis_index(&self, index: usize) -> Result<usize> {
        let mut s = index;
        for g in &self.gates {
            s = sim::permute_index(g, s, self.width)?;
        }
        Ok(s)
    }

    /// Image of a basis state given as one bit per qubit, qubit 0 first.
    pub fn apply_to_basis_state(&self, bits: &[bool]) -> Result<Vec<bool>> {
        if bits.len() != self.width {
            return Err(Error::StateLengthMismatch {
                got: bits.len(),
                width: self.width,
            });
        }
        let index = bits.iter().fold(0usize, |acc, &b| (acc << 1) | b as usize);
        let out = self.apply_to_basis_index(index)?;
        Ok((0..self.width)
            .map(|q| (out >> (self.width - 1 - q)) & 1 == 1)
            .collect())
    }

    /// Plain-text serialization, one gate per line after a header.
    pub fn to_text(&self) -> String {
        text::write_circuit(self)
    }
}
