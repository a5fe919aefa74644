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

//! Cascaded entanglers `X^n(l)` and interval entanglers `X^n(p, q)`.
//!
//! `X^n(l)` acts on an `n`-qubit register plus one ancilla (qubit `n`) as
//! `|k>|b> -> |k>|b xor [k >= 2^n - l]>`. Both are factored into
//! pattern-controlled NOTs over the leading register qubits, then lowered to
//! Toffoli networks and finally to Clifford+T.

mod lower;
mod paired;

pub use lower::{lower_mcx, toffoli_to_clifford_t};
pub use paired::{
    ced, ced2, ced_plan, min_paired_plan, paired_network, paired_t_count, paired_with_slot,
    Ced2Ledger, Ced2Output,
};

use crate::circuit::{Circuit, Gate};
use crate::error::{Error, Result};

/// Largest register for which entanglers are built.
pub const MAX_ENTANGLER_QUBITS: usize = 62;

/// `sum sign * 2^power` over terms with strictly increasing powers.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct SignedBitExpansion {
    terms: Vec<(i8, u32)>,
}

impl SignedBitExpansion {
    pub fn terms(&self) -> &[(i8, u32)] {
        &self.terms
    }

    pub fn value(&self) -> i128 {
        self.terms
            .iter()
            .map(|&(s, k)| s as i128 * (1i128 << k))
            .sum()
    }

    /// Number of nonzero digits.
    pub fn weight(&self) -> usize {
        self.terms.len()
    }
}

/// Plain binary digits of `ell` as a signed expansion with all signs `+1`.
pub fn binary_expansion(ell: u64) -> SignedBitExpansion {
    SignedBitExpansion {
        terms: (0..64).filter(|k| ell >> k & 1 == 1).map(|k| (1, k)).collect(),
    }
}

/// Balanced signed-bit expansion.
///
/// With `m = floor(log2 l)`, takes `+2^m` when `l < (4/3) 2^m` and recurses on
/// `l - 2^m`, otherwise takes `+2^(m+1)` and recurses on the negated
/// remainder `2^(m+1) - l`.
pub fn bsb(ell: u64) -> SignedBitExpansion {
    let mut terms = Vec::new();
    let mut rest = ell as u128;
    let mut sign: i8 = 1;
    while rest > 0 {
        let m = 127 - rest.leading_zeros();
        let pow = 1u128 << m;
        if 3 * rest < 4 * pow {
            terms.push((sign, m));
            rest -= pow;
        } else {
            terms.push((sign, m + 1));
            rest = 2 * pow - rest;
            sign = -sign;
        }
    }
    terms.reverse();
    SignedBitExpansion { terms }
}

/// `Lambda^{n[b]}(X)`: flips `target` when the control qubits read `pattern`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct McxSpec {
    pub n: usize,
    pub controls: Vec<usize>,
    pub pattern: Vec<bool>,
    pub target: usize,
}

impl McxSpec {
    pub fn new(n: usize, controls: Vec<usize>, pattern: Vec<bool>, target: usize) -> Result<Self> {
        let spec = McxSpec {
            n,
            controls,
            pattern,
            target,
        };
        spec.to_gate().validate(usize::MAX)?;
        if spec.controls.len() > n {
            return Err(Error::InvalidArgument(format!(
                "{} controls exceed register size {n}",
                spec.controls.len()
            )));
        }
        Ok(spec)
    }

    /// Controls on the first `n - k` qubits matching the top bits of `j`.
    fn leading(n: usize, k: u32, j: u64, target: usize) -> Self {
        let m = n - k as usize;
        McxSpec {
            n,
            controls: (0..m).collect(),
            pattern: (0..m).map(|i| j >> (m - 1 - i) & 1 == 1).collect(),
            target,
        }
    }

    pub fn m(&self) -> usize {
        self.controls.len()
    }

    pub fn to_gate(&self) -> Gate {
        Gate::Mcx {
            controls: self.controls.clone(),
            pattern: self.pattern.clone(),
            target: self.target,
        }
    }

    pub fn pattern_string(&self) -> String {
        self.pattern.iter().map(|&b| if b { '1' } else { '0' }).collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum PlanMode {
    Binary,
    Bsb,
    Interval,
}

/// An entangler as a product of commuting pattern-controlled NOTs, all
/// targeting the ancilla at qubit `n`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EntanglerPlan {
    pub n: usize,
    pub factors: Vec<McxSpec>,
    pub total_control_levels: usize,
    pub mode: PlanMode,
}

impl EntanglerPlan {
    fn from_factors(n: usize, factors: Vec<McxSpec>, mode: PlanMode) -> Self {
        let total_control_levels = factors.iter().map(McxSpec::m).sum();
        EntanglerPlan {
            n,
            factors,
            total_control_levels,
            mode,
        }
    }

    pub fn ancilla(&self) -> usize {
        self.n
    }

    /// Whether some factor needs the clean scratch qubit at `n + 1`.
    pub fn needs_scratch(&self) -> bool {
        self.factors
            .iter()
            .any(|f| f.m() >= 3 && f.m() - 2 > self.n - f.m())
    }

    pub fn width(&self) -> usize {
        self.n + 1 + self.needs_scratch() as usize
    }

    pub fn scratch(&self) -> Option<usize> {
        self.needs_scratch().then_some(self.n + 1)
    }

    /// Unlowered circuit of MCX gates.
    pub fn to_mcx_circuit(&self) -> Circuit {
        let mut c = Circuit::new(self.width());
        for f in &self.factors {
            c.push_unchecked(f.to_gate());
        }
        mark_ancillas(&mut c, self);
        c
    }

    /// Circuit over `{X, CNOT, Toffoli}`.
    pub fn lower(&self) -> Circuit {
        let width = self.width();
        let mut c = Circuit::new(width);
        for f in &self.factors {
            let part = lower_mcx(f, width, self.scratch())
                .expect("plan width always provides the needed free qubits");
            c.append(&part);
        }
        mark_ancillas(&mut c, self);
        c
    }

    pub fn toffoli_count(&self) -> usize {
        self.factors
            .iter()
            .map(|f| lower::toffoli_count(f.m(), self.width(), self.needs_scratch()))
            .sum()
    }

    /// Concatenation of two plans over the same register.
    pub fn then(mut self, other: EntanglerPlan) -> EntanglerPlan {
        assert_eq!(self.n, other.n);
        self.total_control_levels += other.total_control_levels;
        self.factors.extend(other.factors);
        if self.mode != other.mode {
            self.mode = PlanMode::Interval;
        }
        self
    }
}

fn mark_ancillas(c: &mut Circuit, plan: &EntanglerPlan) {
    c.add_ancilla(plan.ancilla()).unwrap();
    if let Some(s) = plan.scratch() {
        c.add_ancilla(s).unwrap();
    }
}

fn check_n(n: usize) -> Result<()> {
    if n == 0 || n > MAX_ENTANGLER_QUBITS {
        return Err(Error::InvalidArgument(format!(
            "register size {n} outside [1, {MAX_ENTANGLER_QUBITS}]"
        )));
    }
    Ok(())
}

/// Factors `X^n(l)` along the binary or balanced signed-bit digits of `l`.
///
/// Each nonzero digit `l_r 2^{k_r}` becomes one NOT controlled by the first
/// `n - k_r` qubits. It fires on the dyadic block between the thresholds
/// `p_r = 2^n - sum_{s >= r} l_s 2^{k_s}` and `p_{r+1}`, whose index is the
/// lower endpoint divided by `2^{k_r}`.
pub fn factor_xn(n: usize, ell: u64, mode: PlanMode) -> Result<EntanglerPlan> {
    check_n(n)?;
    let dim = 1u64 << n;
    if ell > dim {
        return Err(Error::EllOutOfRange { n, ell });
    }
    let expansion = match mode {
        PlanMode::Binary => binary_expansion(ell),
        PlanMode::Bsb => bsb(ell),
        PlanMode::Interval => {
            return Err(Error::InvalidArgument(
                "factor_xn takes binary or bsb mode".into(),
            ))
        }
    };
    let mut factors = Vec::with_capacity(expansion.weight());
    let mut upper = dim as i128;
    for &(sign, k) in expansion.terms().iter().rev() {
        let lower = upper - sign as i128 * (1i128 << k);
        let j = (lower.min(upper) >> k) as u64;
        factors.push(McxSpec::leading(n, k, j, n));
        upper = lower;
    }
    debug_assert_eq!(upper, (dim - ell) as i128);
    Ok(EntanglerPlan::from_factors(n, factors, mode))
}

/// Covers `[p, q)` greedily by maximal aligned dyadic blocks.
pub fn interval_entangler(n: usize, p: u64, q: u64) -> Result<EntanglerPlan> {
    check_n(n)?;
    if p > q || q > 1u64 << n {
        return Err(Error::IntervalOutOfRange { n, p, q });
    }
    let mut factors = Vec::new();
    let mut pos = p;
    while pos < q {
        let mut k = if pos == 0 { n as u32 } else { pos.trailing_zeros().min(n as u32) };
        while pos + (1u64 << k) > q {
            k -= 1;
        }
        factors.push(McxSpec::leading(n, k, pos >> k, n));
        pos += 1u64 << k;
    }
    Ok(EntanglerPlan::from_factors(n, factors, PlanMode::Interval))
}

/// Union of disjoint intervals as one plan.
pub fn intervals_plan(n: usize, intervals: &[(u64, u64)]) -> Result<EntanglerPlan> {
    let mut plan = EntanglerPlan::from_factors(n, Vec::new(), PlanMode::Interval);
    for &(p, q) in intervals {
        plan = plan.then(interval_entangler(n, p, q)?);
    }
    Ok(plan)
}
