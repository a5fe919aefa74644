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

//! Simulation oracles: basis-state permutation and dense state vectors.

use ndarray::Array2;
use num_complex::Complex64;

use super::{Circuit, Gate};
use crate::error::{Error, Result};

pub type Matrix = Array2<Complex64>;

/// Default maximum width for dense simulation.
pub const DEFAULT_DENSE_LIMIT: usize = 12;

#[inline]
fn bit(index: usize, q: usize, width: usize) -> usize {
    (index >> (width - 1 - q)) & 1
}

#[inline]
fn mask(q: usize, width: usize) -> usize {
    1 << (width - 1 - q)
}

pub(super) fn permute_index(g: &Gate, s: usize, width: usize) -> Result<usize> {
    Ok(match g {
        Gate::X(q) => s ^ mask(*q, width),
        Gate::Cnot { control, target } => {
            if bit(s, *control, width) == 1 {
                s ^ mask(*target, width)
            } else {
                s
            }
        }
        Gate::Toffoli { controls, target } => {
            if bit(s, controls[0], width) & bit(s, controls[1], width) == 1 {
                s ^ mask(*target, width)
            } else {
                s
            }
        }
        Gate::Mcx {
            controls,
            pattern,
            target,
        } => {
            let fire = controls
                .iter()
                .zip(pattern)
                .all(|(&c, &p)| (bit(s, c, width) == 1) == p);
            if fire {
                s ^ mask(*target, width)
            } else {
                s
            }
        }
        other => return Err(Error::NonPermutationGate(other.to_string())),
    })
}

fn diag_phase(state: &mut [Complex64], q: usize, width: usize, one: Complex64) {
    let m = mask(q, width);
    for (i, amp) in state.iter_mut().enumerate() {
        if i & m != 0 {
            *amp *= one;
        }
    }
}

/// Applies one gate in place to a state vector of length `2^width`.
pub fn apply_gate(state: &mut [Complex64], width: usize, gate: &Gate) {
    use std::f64::consts::{FRAC_1_SQRT_2, FRAC_PI_4};
    match gate {
        Gate::GlobalPhase(theta) => {
            let p = Complex64::from_polar(1.0, *theta);
            state.iter_mut().for_each(|a| *a *= p);
        }
        Gate::S(q) => diag_phase(state, *q, width, Complex64::i()),
        Gate::Sdg(q) => diag_phase(state, *q, width, -Complex64::i()),
        Gate::Z(q) => diag_phase(state, *q, width, Complex64::new(-1.0, 0.0)),
        Gate::T(q) => diag_phase(state, *q, width, Complex64::from_polar(1.0, FRAC_PI_4)),
        Gate::Tdg(q) => diag_phase(state, *q, width, Complex64::from_polar(1.0, -FRAC_PI_4)),
        Gate::Rz { qubit, theta } => {
            let m = mask(*qubit, width);
            let zero = Complex64::from_polar(1.0, -theta / 2.0);
            let one = Complex64::from_polar(1.0, theta / 2.0);
            for (i, amp) in state.iter_mut().enumerate() {
                *amp *= if i & m != 0 { one } else { zero };
            }
        }
        Gate::H(q) => {
            let m = mask(*q, width);
            for i in 0..state.len() {
                if i & m == 0 {
                    let (a, b) = (state[i], state[i | m]);
                    state[i] = (a + b) * FRAC_1_SQRT_2;
                    state[i | m] = (a - b) * FRAC_1_SQRT_2;
                }
            }
        }
        classical => {
            let m = mask(classical.target().expect("classical gate has a target"), width);
            for i in 0..state.len() {
                if i & m == 0 {
                    let j = permute_index(classical, i, width).expect("classical gate");
                    if j != i {
                        state.swap(i, j);
                    }
                }
            }
        }
    }
}

fn check_width(c: &Circuit, limit: usize) -> Result<()> {
    if c.width() > limit {
        return Err(Error::WidthLimitExceeded {
            width: c.width(),
            limit,
        });
    }
    Ok(())
}

/// Columns of the circuit unitary for the given input basis indices.
pub fn simulate_columns(c: &Circuit, columns: &[usize], limit: usize) -> Result<Vec<Vec<Complex64>>> {
    check_width(c, limit)?;
    let dim = 1usize << c.width();
    Ok(columns
        .iter()
        .map(|&col| {
            let mut state = vec![Complex64::new(0.0, 0.0); dim];
            state[col] = Complex64::new(1.0, 0.0);
            for g in c.gates() {
                apply_gate(&mut state, c.width(), g);
            }
            state
        })
        .collect())
}

/// Full `2^width x 2^width` unitary of the circuit.
pub fn dense_unitary(c: &Circuit, limit: usize) -> Result<Matrix> {
    let dim = 1usize << c.width();
    let cols: Vec<usize> = (0..dim).collect();
    let columns = simulate_columns(c, &cols, limit)?;
    Ok(Array2::from_shape_fn((dim, dim), |(r, col)| columns[col][r]))
}

/// Amplitudes below this magnitude are dropped after a Hadamard.
pub const PRUNE_THRESHOLD: f64 = 1e-14;

/// Columns as sparse `(row, amplitude)` lists sorted by row.
#[derive(Debug, Clone, PartialEq)]
pub struct SparseColumns {
    pub columns: Vec<Vec<(usize, Complex64)>>,
    /// Largest sum, over the Hadamards of one column, of the 2-norm of the
    /// amplitudes pruned there; bounds the per-entry error of pruning.
    pub pruned: f64,
}

struct ActiveState {
    amp: Vec<Complex64>,
    live: Vec<bool>,
    active: Vec<usize>,
}

impl ActiveState {
    fn apply(&mut self, g: &Gate, width: usize) -> f64 {
        let phase_on = |q: usize, z0: Complex64, z1: Complex64, st: &mut Self| {
            let m = mask(q, width);
            for &i in &st.active {
                st.amp[i] *= if i & m != 0 { z1 } else { z0 };
            }
        };
        let one = Complex64::new(1.0, 0.0);
        use std::f64::consts::{FRAC_1_SQRT_2, FRAC_PI_4};
        match g {
            Gate::GlobalPhase(theta) => {
                let p = Complex64::from_polar(1.0, *theta);
                for &i in &self.active {
                    self.amp[i] *= p;
                }
            }
            Gate::S(q) => phase_on(*q, one, Complex64::i(), self),
            Gate::Sdg(q) => phase_on(*q, one, -Complex64::i(), self),
            Gate::Z(q) => phase_on(*q, one, -one, self),
            Gate::T(q) => phase_on(*q, one, Complex64::from_polar(1.0, FRAC_PI_4), self),
            Gate::Tdg(q) => phase_on(*q, one, Complex64::from_polar(1.0, -FRAC_PI_4), self),
            Gate::Rz { qubit, theta } => phase_on(
                *qubit,
                Complex64::from_polar(1.0, -theta / 2.0),
                Complex64::from_polar(1.0, theta / 2.0),
                self,
            ),
            Gate::H(q) => {
                let m = mask(*q, width);
                let n = self.active.len();
                for k in 0..n {
                    let j = self.active[k] ^ m;
                    if !self.live[j] {
                        self.live[j] = true;
                        self.active.push(j);
                    }
                }
                for k in 0..self.active.len() {
                    let i = self.active[k];
                    if i & m == 0 {
                        let (a, b) = (self.amp[i], self.amp[i | m]);
                        self.amp[i] = (a + b) * FRAC_1_SQRT_2;
                        self.amp[i | m] = (a - b) * FRAC_1_SQRT_2;
                    }
                }
                let mut pruned = 0.0;
                let (amp, live) = (&mut self.amp, &mut self.live);
                self.active.retain(|&i| {
                    let norm = amp[i].norm();
                    if norm < PRUNE_THRESHOLD {
                        pruned += norm * norm;
                        amp[i] = Complex64::new(0.0, 0.0);
                        live[i] = false;
                        false
                    } else {
                        true
                    }
                });
                return pruned.sqrt();
            }
            classical => {
                let moved: Vec<(usize, Complex64)> = self
                    .active
                    .iter()
                    .map(|&i| (permute_index(classical, i, width).expect("classical gate"), self.amp[i]))
                    .collect();
                for &i in &self.active {
                    self.amp[i] = Complex64::new(0.0, 0.0);
                    self.live[i] = false;
                }
                self.active.clear();
                for (j, a) in moved {
                    self.amp[j] = a;
                    self.live[j] = true;
                    self.active.push(j);
                }
            }
        }
        0.0
    }
}

/// Column simulation that only touches nonzero amplitudes. Circuits whose
/// Hadamards recombine keep every column nearly a basis state, which makes
/// this far cheaper than [`simulate_columns`] on wide circuits.
pub fn simulate_sparse_columns(c: &Circuit, columns: &[usize], limit: usize) -> Result<SparseColumns> {
    check_width(c, limit)?;
    let width = c.width();
    let dim = 1usize << width;
    let mut st = ActiveState {
        amp: vec![Complex64::new(0.0, 0.0); dim],
        live: vec![false; dim],
        active: Vec::new(),
    };
    let mut worst: f64 = 0.0;
    let mut out = Vec::with_capacity(columns.len());
    for &col in columns {
        if col >= dim {
            return Err(Error::StateLengthMismatch { got: col, width });
        }
        st.amp[col] = Complex64::new(1.0, 0.0);
        st.live[col] = true;
        st.active.push(col);
        let mut pruned = 0.0;
        for g in c.gates() {
            pruned += st.apply(g, width);
        }
        worst = worst.max(pruned);
        let mut entries: Vec<(usize, Complex64)> = st.active.iter().map(|&i| (i, st.amp[i])).collect();
        entries.sort_by_key(|e| e.0);
        for &i in &st.active {
            st.amp[i] = Complex64::new(0.0, 0.0);
            st.live[i] = false;
        }
        st.active.clear();
        out.push(entries);
    }
    Ok(SparseColumns {
        columns: out,
        pruned: worst,
    })
}

/// Max-entry distance between `a` and `b` after aligning the global phase on the
/// largest-magnitude entry of `b`.
pub fn compare_up_to_global_phase(a: &Matrix, b: &Matrix) -> Result<f64> {
    if a.dim() != b.dim() {
        return Err(Error::DimensionMismatch(a.dim(), b.dim()));
    }
    let mut best = (0usize, 0usize);
    let mut best_norm = -1.0;
    for ((r, c), z) in b.indexed_iter() {
        if z.norm() > best_norm + 1e-15 {
            best_norm = z.norm();
            best = (r, c);
        }
    }
    let ratio = if best_norm > 0.0 { a[best] / b[best] } else { Complex64::new(1.0, 0.0) };
    let lambda = if ratio.norm() > 0.0 {
        ratio / ratio.norm()
    } else {
        Complex64::new(1.0, 0.0)
    };
    Ok(a.iter()
        .zip(b.iter())
        .map(|(x, y)| (x - lambda * y).norm())
        .fold(0.0, f64::max))
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn identity(dim: usize) -> Matrix {
        Array2::from_shape_fn((dim, dim), |(r, c)| {
            if r == c {
                Complex64::new(1.0, 0.0)
            } else {
                Complex64::new(0.0, 0.0)
            }
        })
    }

    #[test]
    fn empty_circuit_is_identity() {
        let u = dense_unitary(&Circuit::new(1), DEFAULT_DENSE_LIMIT).unwrap();
        assert!(compare_up_to_global_phase(&u, &identity(2)).unwrap() < 1e-15);
    }

    #[test]
    fn rz_convention() {
        let theta = 0.7;
        let c = Circuit::from_gates(1, [Gate::rz(0, theta)]).unwrap();
        let u = dense_unitary(&c, DEFAULT_DENSE_LIMIT).unwrap();
        assert!((u[(0, 0)] - Complex64::from_polar(1.0, -theta / 2.0)).norm() < 1e-15);
        assert!((u[(1, 1)] - Complex64::from_polar(1.0, theta / 2.0)).norm() < 1e-15);
        assert_eq!(u[(0, 1)], Complex64::new(0.0, 0.0));
    }

    #[test]
    fn global_phase_is_invisible_to_comparison() {
        let b = identity(4).mapv(|z| z * Complex64::from_polar(1.0, PI / 7.0));
        assert!(compare_up_to_global_phase(&identity(4), &b).unwrap() < 1e-14);
    }

    #[test]
    fn z_against_identity_is_two() {
        let z = Array2::from_shape_vec(
            (2, 2),
            vec![
                Complex64::new(1.0, 0.0),
                Complex64::new(0.0, 0.0),
                Complex64::new(0.0, 0.0),
                Complex64::new(-1.0, 0.0),
            ],
        )
        .unwrap();
        assert!((compare_up_to_global_phase(&z, &identity(2)).unwrap() - 2.0).abs() < 1e-15);
    }

    #[test]
    fn mismatched_dimensions() {
        assert!(matches!(
            compare_up_to_global_phase(&identity(2), &identity(4)),
            Err(Error::DimensionMismatch(..))
        ));
    }

    #[test]
    fn gate_order_is_left_to_right() {
        // H then T is T*H as a matrix.
        let c = Circuit::from_gates(1, [Gate::H(0), Gate::T(0)]).unwrap();
        let u = dense_unitary(&c, DEFAULT_DENSE_LIMIT).unwrap();
        let s = std::f64::consts::FRAC_1_SQRT_2;
        let t = Complex64::from_polar(1.0, PI / 4.0);
        assert!((u[(1, 0)] - t * s).norm() < 1e-15);
        assert!((u[(0, 1)] - Complex64::new(s, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn sparse_matches_dense() {
        let c = Circuit::from_gates(
            3,
            [
                Gate::H(0),
                Gate::T(0),
                Gate::toffoli(0, 1, 2),
                Gate::H(2),
                Gate::rz(1, 0.3),
                Gate::cnot(2, 1),
                Gate::H(2),
                Gate::Sdg(2),
                Gate::H(0),
                Gate::GlobalPhase(0.2),
            ],
        )
        .unwrap();
        let u = dense_unitary(&c, 3).unwrap();
        let cols: Vec<usize> = (0..8).collect();
        let sp = simulate_sparse_columns(&c, &cols, 3).unwrap();
        assert!(sp.pruned < 1e-13);
        for (k, col) in sp.columns.iter().enumerate() {
            let mut dense = [Complex64::new(0.0, 0.0); 8];
            for &(r, a) in col {
                dense[r] = a;
            }
            for r in 0..8 {
                assert!((dense[r] - u[(r, k)]).norm() < 1e-13);
            }
        }
    }

    #[test]
    fn width_limit() {
        let c = Circuit::new(5);
        assert!(matches!(
            dense_unitary(&c, 4),
            Err(Error::WidthLimitExceeded { width: 5, limit: 4 })
        ));
    }
}
