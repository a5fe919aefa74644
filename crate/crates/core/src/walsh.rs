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

//! Walsh-series decomposition of diagonal operators into Rz + CNOT circuits.
//!
//! The kernel is `(-1)^{popcount(j & k)}`. Bit `b` of an index (LSB = 0)
//! lives on qubit `n - 1 - b`.

use crate::circuit::{Circuit, Gate};
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
pub struct WalshCoefficients {
    pub n: usize,
    pub a: Vec<f64>,
}

/// A truncated coefficient set together with the sum of the dropped magnitudes.
#[derive(Debug, Clone, PartialEq)]
pub struct SparseWalsh {
    pub n: usize,
    /// `(j, a_j)` sorted by `j`.
    pub kept: Vec<(usize, f64)>,
    pub bound: f64,
}

impl SparseWalsh {
    /// Number of Rz gates the circuit will carry.
    pub fn rotation_count(&self) -> usize {
        self.kept.iter().filter(|(j, _)| *j != 0).count()
    }

    /// Phase function reconstructed from the kept coefficients.
    pub fn reconstruct(&self) -> Vec<f64> {
        let mut dense = vec![0.0; 1 << self.n];
        for &(j, a) in &self.kept {
            dense[j] = a;
        }
        inverse_transform(&WalshCoefficients { n: self.n, a: dense })
    }
}

fn log2_exact(len: usize) -> Result<usize> {
    if len == 0 || !len.is_power_of_two() {
        return Err(Error::LengthNotPowerOfTwo(len));
    }
    Ok(len.trailing_zeros() as usize)
}

/// In-place unnormalized fast Walsh-Hadamard transform.
fn fwht(v: &mut [f64]) {
    let mut h = 1;
    while h < v.len() {
        for block in v.chunks_mut(2 * h) {
            let (lo, hi) = block.split_at_mut(h);
            for (x, y) in lo.iter_mut().zip(hi.iter_mut()) {
                let (a, b) = (*x, *y);
                *x = a + b;
                *y = a - b;
            }
        }
        h *= 2;
    }
}

/// `a_j = 2^{-n} sum_k f_k (-1)^{popcount(j & k)}`.
pub fn walsh_transform(f: &[f64]) -> Result<WalshCoefficients> {
    let n = log2_exact(f.len())?;
    let mut a = f.to_vec();
    fwht(&mut a);
    let scale = 1.0 / f.len() as f64;
    a.iter_mut().for_each(|x| *x *= scale);
    Ok(WalshCoefficients { n, a })
}

pub fn inverse_transform(w: &WalshCoefficients) -> Vec<f64> {
    let mut f = w.a.clone();
    fwht(&mut f);
    f
}

/// Drops the smallest coefficients while their magnitudes sum to at most
/// `epsilon`. Ties go to the lower index. `a_0` costs no rotation and is never
/// dropped; exact zeros are always dropped.
pub fn truncate(w: &WalshCoefficients, epsilon: f64) -> SparseWalsh {
    let mut order: Vec<usize> = (1..w.a.len()).filter(|&j| w.a[j] != 0.0).collect();
    order.sort_by(|&x, &y| w.a[x].abs().total_cmp(&w.a[y].abs()).then(x.cmp(&y)));
    let mut bound = 0.0;
    let mut dropped = 0;
    for &j in &order {
        let next = bound + w.a[j].abs();
        if next > epsilon {
            break;
        }
        bound = next;
        dropped += 1;
    }
    let mut kept: Vec<(usize, f64)> = order[dropped..].iter().map(|&j| (j, w.a[j])).collect();
    if w.a[0] != 0.0 || kept.is_empty() {
        kept.push((0, w.a[0]));
    }
    kept.sort_by_key(|&(j, _)| j);
    SparseWalsh { n: w.n, kept, bound }
}

/// Rz + CNOT circuit realizing `diag(e^{i f_k})` for the kept coefficients.
pub fn walsh_circuit(sparse: &SparseWalsh) -> Circuit {
    let n = sparse.n;
    let mut c = Circuit::new(n.max(1));
    for &(j, a) in &sparse.kept {
        if j == 0 {
            c.push_unchecked(Gate::GlobalPhase(a));
            continue;
        }
        let qubit_of = |b: u32| n - 1 - b as usize;
        let low = j.trailing_zeros();
        let target = qubit_of(low);
        let sources: Vec<usize> = (low + 1..usize::BITS)
            .filter(|&b| (j >> b) & 1 == 1)
            .map(qubit_of)
            .collect();
        for &s in &sources {
            c.push_unchecked(Gate::cnot(s, target));
        }
        c.push_unchecked(Gate::rz(target, -2.0 * a));
        for &s in sources.iter().rev() {
            c.push_unchecked(Gate::cnot(s, target));
        }
    }
    c
}
