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

//! Entangler selection and the paired form
//! `X^n(l) (I (x) P) X^n(l)` with its peepholes.
//!
//! In the paired form the second entangler mirrors the first, so any diagonal
//! error `D` in `C' = C D` cancels: `C' P C'^dag = C P C^dag`. Each Toffoli is
//! therefore emitted as the 4-T relative-phase gate `H_t D_t H_t` with
//! `D_t = T(t) T^dag(a+t) T^dag(b+t) T(a+b+t)` (parities, `+` is xor). Two
//! further rewrites apply:
//!
//! * trailing gates that never touch the ancilla commute with `P` and cancel
//!   against their mirror images;
//! * two Toffolis on the same target `t` sharing a control `x`, with nothing
//!   between them touching `t` or flipping `x`, lose the inner `H_t H_t` and
//!   merge `T(t) T^dag(x+t)` twice into the Clifford `S(t) S^dag(x+t)`,
//!   costing 4 T for the pair.

use super::{factor_xn, EntanglerPlan, PlanMode};
use crate::circuit::{Circuit, Gate};
use crate::error::Result;

/// Picks the binary or bsb plan with fewer Toffolis; ties go to bsb.
pub fn ced_plan(n: usize, ell: u64) -> Result<EntanglerPlan> {
    let binary = factor_xn(n, ell, PlanMode::Binary)?;
    let signed = factor_xn(n, ell, PlanMode::Bsb)?;
    Ok(if binary.toffoli_count() < signed.toffoli_count() {
        binary
    } else {
        signed
    })
}

/// The lowered `{X, CNOT, Toffoli}` circuit of [`ced_plan`].
pub fn ced(n: usize, ell: u64) -> Result<Circuit> {
    Ok(ced_plan(n, ell)?.lower())
}

/// Picks the binary or bsb plan whose paired form has the smaller T-count,
/// breaking ties by Toffoli count and then towards bsb.
pub fn min_paired_plan(n: usize, ell: u64) -> Result<EntanglerPlan> {
    let binary = factor_xn(n, ell, PlanMode::Binary)?;
    let signed = factor_xn(n, ell, PlanMode::Bsb)?;
    let key = |p: &EntanglerPlan| (paired_t_count(&p.lower(), p.ancilla()), p.toffoli_count());
    Ok(if key(&binary) < key(&signed) {
        binary
    } else {
        signed
    })
}

/// Length of the prefix of `c` ending at the last gate that touches `target`.
fn core_len(c: &Circuit, target: usize) -> usize {
    c.gates()
        .iter()
        .rposition(|g| g.qubits().contains(&target))
        .map_or(0, |i| i + 1)
}

#[derive(Debug, Clone, Copy, PartialEq)]
enum Role {
    Plain,
    /// First of a merged pair; `x` is the shared control.
    Opens { x: usize },
    Closes { x: usize },
}

fn toffoli_parts(g: &Gate) -> Option<([usize; 2], usize)> {
    match g {
        Gate::Toffoli { controls, target } => Some((*controls, *target)),
        _ => None,
    }
}

fn pairing(gates: &[Gate]) -> Vec<Role> {
    let mut roles = vec![Role::Plain; gates.len()];
    for i in 0..gates.len() {
        if roles[i] != Role::Plain {
            continue;
        }
        let Some((ci, t)) = toffoli_parts(&gates[i]) else {
            continue;
        };
        let Some(j) = (i + 1..gates.len()).find(|&j| gates[j].qubits().contains(&t)) else {
            continue;
        };
        let Some((cj, tj)) = toffoli_parts(&gates[j]) else {
            continue;
        };
        if tj != t {
            continue;
        }
        let shared = ci.iter().copied().find(|x| {
            cj.contains(x) && gates[i + 1..j].iter().all(|g| g.target() != Some(*x))
        });
        if let Some(x) = shared {
            roles[i] = Role::Opens { x };
            roles[j] = Role::Closes { x };
        }
    }
    roles
}

fn other(controls: [usize; 2], x: usize) -> usize {
    if controls[0] == x {
        controls[1]
    } else {
        controls[0]
    }
}

/// `T^dag(y+t) T(x+y+t)` as a phase network on `t`.
fn residual(x: usize, y: usize, t: usize, out: &mut Vec<Gate>) {
    out.extend([
        Gate::cnot(y, t),
        Gate::Tdg(t),
        Gate::cnot(x, t),
        Gate::T(t),
        Gate::cnot(x, t),
        Gate::cnot(y, t),
    ]);
}

/// Relative-phase Clifford+T form of the part of `c` that must be mirrored
/// around a slot on `target`. Returns the half circuit and the number of
/// merged Toffoli pairs.
pub fn paired_network(c: &Circuit, target: usize) -> (Circuit, usize) {
    let core = &c.gates()[..core_len(c, target)];
    let roles = pairing(core);
    let mut gates = Vec::new();
    let mut pairs = 0;
    for (g, role) in core.iter().zip(&roles) {
        let Some((ctrl, t)) = toffoli_parts(g) else {
            gates.push(g.clone());
            continue;
        };
        match *role {
            Role::Plain => {
                let [a, b] = ctrl;
                gates.extend([
                    Gate::H(t),
                    Gate::T(t),
                    Gate::cnot(a, t),
                    Gate::Tdg(t),
                    Gate::cnot(b, t),
                    Gate::T(t),
                    Gate::cnot(a, t),
                    Gate::Tdg(t),
                    Gate::cnot(b, t),
                    Gate::H(t),
                ]);
            }
            Role::Opens { x } => {
                pairs += 1;
                gates.extend([
                    Gate::H(t),
                    Gate::S(t),
                    Gate::cnot(x, t),
                    Gate::Sdg(t),
                    Gate::cnot(x, t),
                ]);
                residual(x, other(ctrl, x), t, &mut gates);
            }
            Role::Closes { x } => {
                residual(x, other(ctrl, x), t, &mut gates);
                gates.push(Gate::H(t));
            }
        }
    }
    let mut half = Circuit::new(c.width());
    for g in gates {
        half.push_unchecked(g);
    }
    for &a in c.ancillas() {
        half.add_ancilla(a).unwrap();
    }
    (half, pairs)
}

/// T-count of `half + slot + half^dag` for a Toffoli-level circuit, without
/// emitting gates.
pub fn paired_t_count(c: &Circuit, target: usize) -> usize {
    let core = &c.gates()[..core_len(c, target)];
    let toffolis = core.iter().filter(|g| toffoli_parts(g).is_some()).count();
    let pairs = pairing(core)
        .iter()
        .filter(|r| matches!(r, Role::Opens { .. }))
        .count();
    2 * (4 * toffolis - 4 * pairs)
}

/// T-count bookkeeping of a paired entangler.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct Ced2Ledger {
    /// T gates in both entangler halves (`E`).
    pub entanglement_t: usize,
    /// T gates inside the rotation slot.
    pub rotation_t: usize,
    pub rotation_slots: usize,
    /// Toffolis in the lowered entangler before any rewriting.
    pub toffolis: usize,
    /// Toffolis dropped because they commute with the slot.
    pub cancelled_toffolis: usize,
    pub merged_pairs: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Ced2Output {
    pub circuit: Circuit,
    pub ledger: Ced2Ledger,
}

/// `X^n(l) (I (x) P(theta)) X^n(l)` over Clifford+T plus one Rz slot.
pub fn ced2(plan: &EntanglerPlan, theta: f64) -> Ced2Output {
    let anc = plan.ancilla();
    paired_with_slot(plan, &[Gate::GlobalPhase(theta / 2.0), Gate::rz(anc, theta)])
}

/// Paired entangler around arbitrary slot gates acting on the ancilla.
pub fn paired_with_slot(plan: &EntanglerPlan, slot: &[Gate]) -> Ced2Output {
    let lowered = plan.lower();
    let anc = plan.ancilla();
    let (half, merged_pairs) = paired_network(&lowered, anc);
    let mut circuit = half.clone();
    for g in slot {
        debug_assert!(g.qubits().iter().all(|&q| q == anc), "slot must act on the ancilla");
        circuit.push_unchecked(g.clone());
    }
    circuit.append(&half.inverse());
    let core = core_len(&lowered, anc);
    let ledger = Ced2Ledger {
        entanglement_t: 2 * half.t_count(),
        rotation_t: slot.iter().filter(|g| g.is_t()).count(),
        rotation_slots: 1,
        toffolis: lowered.toffoli_count(),
        cancelled_toffolis: lowered.gates()[core..]
            .iter()
            .filter(|g| toffoli_parts(g).is_some())
            .count(),
        merged_pairs,
    };
    Ced2Output { circuit, ledger }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circuit::{compare_up_to_global_phase, dense_unitary, Matrix};
    use crate::entangler::lower::toffoli_to_clifford_t;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn sandwich(c: &Circuit, slot: &[Gate]) -> Circuit {
        let mut s = c.clone();
        for g in slot {
            s.push(g.clone()).unwrap();
        }
        s.append(&c.inverse());
        s
    }

    fn phase(q: usize, theta: f64) -> [Gate; 2] {
        [Gate::GlobalPhase(theta / 2.0), Gate::rz(q, theta)]
    }

    fn dense(c: &Circuit) -> Matrix {
        dense_unitary(c, 12).unwrap()
    }

    #[test]
    fn single_toffoli_pair_costs_eight() {
        let plan = factor_xn(2, 1, PlanMode::Bsb).unwrap();
        assert_eq!(plan.lower().gates(), &[Gate::toffoli(0, 1, 2)]);
        let out = ced2(&plan, 0.37);
        assert_eq!(out.ledger.entanglement_t, 8);
        let exact = toffoli_to_clifford_t(0, 1, 2, 3);
        assert_eq!(sandwich(&exact, &phase(2, 0.37)).t_count(), 14);
        let want = sandwich(&plan.lower(), &phase(2, 0.37));
        assert!(compare_up_to_global_phase(&dense(&out.circuit), &dense(&want)).unwrap() < 1e-10);
    }

    #[test]
    fn mirrored_pair_around_middle_toffoli() {
        let c = Circuit::from_gates(
            5,
            [Gate::toffoli(0, 3, 4), Gate::toffoli(1, 2, 3), Gate::toffoli(0, 3, 4)],
        )
        .unwrap();
        let (half, pairs) = paired_network(&c, 4);
        assert_eq!(pairs, 1);
        let outer_t = half.t_count() - 4;
        assert_eq!(outer_t, 4);
        assert_eq!(half.t_count(), paired_t_count(&c, 4) / 2);
        for theta in [0.0, 0.8, -2.3] {
            let got = sandwich(&half, &phase(4, theta));
            let want = sandwich(&c, &phase(4, theta));
            assert!(compare_up_to_global_phase(&dense(&got), &dense(&want)).unwrap() < 1e-10);
        }
    }

    #[test]
    fn zero_angle_is_identity() {
        for (n, ell) in [(3, 5), (4, 11), (5, 15)] {
            let plan = min_paired_plan(n, ell).unwrap();
            let out = ced2(&plan, 0.0);
            let id = Matrix::eye(1 << out.circuit.width());
            assert!(compare_up_to_global_phase(&dense(&out.circuit), &id).unwrap() < 1e-10);
        }
    }

    #[test]
    fn peephole_soundness_random() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..30 {
            let n = rng.gen_range(2..=6usize);
            let ell = rng.gen_range(0..=1u64 << n);
            let mode = if rng.gen_bool(0.5) { PlanMode::Binary } else { PlanMode::Bsb };
            let plan = factor_xn(n, ell, mode).unwrap();
            let theta = rng.gen_range(-3.0..3.0);
            let out = ced2(&plan, theta);
            assert_eq!(out.ledger.entanglement_t, paired_t_count(&plan.lower(), n));
            assert_eq!(out.circuit.t_count(), out.ledger.entanglement_t);
            let want = sandwich(&plan.lower(), &phase(n, theta));
            let dev = compare_up_to_global_phase(&dense(&out.circuit), &dense(&want)).unwrap();
            assert!(dev < 1e-10, "n={n} ell={ell} {mode:?}: {dev}");
        }
    }

    #[test]
    fn interval_plans_pair_soundly() {
        let plan = crate::entangler::intervals_plan(4, &[(1, 3), (6, 13)]).unwrap();
        let out = ced2(&plan, 1.1);
        let want = sandwich(&plan.lower(), &phase(4, 1.1));
        assert!(compare_up_to_global_phase(&dense(&out.circuit), &dense(&want)).unwrap() < 1e-10);
    }

    #[test]
    fn selection() {
        let p = ced_plan(5, 15).unwrap();
        assert_eq!(p.mode, PlanMode::Bsb);
        assert_eq!(p.factors.len(), 2);
        assert!(ced(4, 0).unwrap().is_empty());
        let all = ced(4, 16).unwrap();
        assert_eq!(all.gates(), &[Gate::X(4)]);
        for n in 1..=8usize {
            for ell in 0..1u64 << n {
                let chosen = ced_plan(n, ell).unwrap().toffoli_count();
                let binary = factor_xn(n, ell, PlanMode::Binary).unwrap().toffoli_count();
                assert!(chosen <= binary);
                let paired = min_paired_plan(n, ell).unwrap();
                let bin_plan = factor_xn(n, ell, PlanMode::Binary).unwrap();
                assert!(paired_t_count(&paired.lower(), n) <= paired_t_count(&bin_plan.lower(), n));
            }
        }
    }
}
