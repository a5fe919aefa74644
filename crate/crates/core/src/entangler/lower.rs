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

//! Lowering of pattern-controlled NOTs to Toffoli networks and of Toffolis
//! to Clifford+T.

use super::McxSpec;
use crate::circuit::{Circuit, Gate};
use crate::error::{Error, Result};

/// Lowers one `Lambda^{n[b]}(X)` to `{X, CNOT, Toffoli}` on `width` qubits.
///
/// Up to two controls map to X, CNOT or one Toffoli. Beyond that, when
/// `m - 2` other qubits can be borrowed in any state, the staircase network
/// uses `4(m - 2)` Toffolis. Otherwise the clean `scratch` qubit splits the
/// gate into two halves, `8(m - 3)` Toffolis for `m >= 5`.
pub fn lower_mcx(spec: &McxSpec, width: usize, scratch: Option<usize>) -> Result<Circuit> {
    let gate = spec.to_gate();
    gate.validate(width)?;
    if let Some(s) = scratch {
        if s >= width || spec.controls.contains(&s) || spec.target == s {
            return Err(Error::InvalidArgument(format!(
                "scratch qubit {s} must be a distinct qubit below width {width}"
            )));
        }
    }
    let mut gates = Vec::new();
    let flips: Vec<Gate> = spec
        .controls
        .iter()
        .zip(&spec.pattern)
        .filter(|(_, &bit)| !bit)
        .map(|(&q, _)| Gate::X(q))
        .collect();
    gates.extend(flips.iter().cloned());
    positive_mcx(&spec.controls, spec.target, width, scratch, &mut gates)?;
    gates.extend(flips);
    Ok(Circuit::from_gates(width, gates).expect("lowered gates fit the width"))
}

fn positive_mcx(
    controls: &[usize],
    target: usize,
    width: usize,
    scratch: Option<usize>,
    out: &mut Vec<Gate>,
) -> Result<()> {
    let m = controls.len();
    match m {
        0 => out.push(Gate::X(target)),
        1 => out.push(Gate::cnot(controls[0], target)),
        2 => out.push(Gate::toffoli(controls[0], controls[1], target)),
        _ => {
            let free: Vec<usize> = (0..width)
                .filter(|q| *q != target && !controls.contains(q))
                .collect();
            if m - 2 <= free.len() {
                staircase(controls, &free[..m - 2], target, out);
            } else if let Some(s) = scratch {
                split(controls, s, target, width, out)?;
            } else {
                return Err(Error::InsufficientFreeQubits {
                    controls: m,
                    needed: m - 2,
                    available: free.len(),
                });
            }
        }
    }
    Ok(())
}

/// Borrowed-ancilla network: correct for every state of `anc`, which is left
/// unchanged.
fn staircase(c: &[usize], anc: &[usize], target: usize, out: &mut Vec<Gate>) {
    let m = c.len();
    let mut down = vec![Gate::toffoli(c[m - 1], anc[m - 3], target)];
    for i in (3..m).rev() {
        down.push(Gate::toffoli(c[i - 1], anc[i - 3], anc[i - 2]));
    }
    let middle = Gate::toffoli(c[0], c[1], anc[0]);
    for part in [&down[..], &down[1..]] {
        out.extend(part.iter().cloned());
        out.push(middle.clone());
        out.extend(part.iter().rev().cloned());
    }
}

fn split(c: &[usize], s: usize, target: usize, width: usize, out: &mut Vec<Gate>) -> Result<()> {
    let m = c.len();
    let m1 = if m == 4 { 2 } else { (m + 1).div_ceil(2) };
    let mut b_controls = c[m1..].to_vec();
    b_controls.push(s);
    let mut a = Vec::new();
    positive_mcx(&c[..m1], s, width, None, &mut a)?;
    let mut b = Vec::new();
    positive_mcx(&b_controls, target, width, None, &mut b)?;
    let rounds = if m == 4 { 1 } else { 2 };
    for _ in 0..rounds {
        out.extend(a.iter().cloned());
        out.extend(b.iter().cloned());
    }
    if m == 4 {
        out.extend(a);
    }
    Ok(())
}

/// Toffoli count of [`lower_mcx`] for `m` controls without building gates.
pub(crate) fn toffoli_count(m: usize, width: usize, scratch: bool) -> usize {
    match m {
        0 | 1 => 0,
        2 => 1,
        _ if m - 2 < width - m => 4 * (m - 2),
        4 => 2 + toffoli_count(3, width, false),
        _ => {
            let m1 = (m + 1).div_ceil(2);
            debug_assert!(scratch);
            2 * toffoli_count(m1, width, false) + 2 * toffoli_count(m - m1 + 1, width, false)
        }
    }
}

/// Exact Clifford+T expansion of a Toffoli with 7 T gates.
pub fn toffoli_to_clifford_t(a: usize, b: usize, t: usize, width: usize) -> Circuit {
    let mut c = Circuit::new(width);
    for g in [
        Gate::H(t),
        Gate::T(a),
        Gate::T(b),
        Gate::T(t),
        Gate::cnot(b, t),
        Gate::Tdg(t),
        Gate::cnot(a, t),
        Gate::T(t),
        Gate::cnot(b, t),
        Gate::Tdg(t),
        Gate::cnot(a, t),
        Gate::cnot(a, b),
        Gate::Tdg(b),
        Gate::cnot(a, b),
        Gate::H(t),
    ] {
        c.push(g).expect("toffoli qubits fit the width");
    }
    c
}
