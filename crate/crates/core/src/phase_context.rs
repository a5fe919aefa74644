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

//! Phase contexts and the phase-context decomposition (PCD).
//!
//! A diagonal whose distinct phases `theta_1..theta_k` occupy consecutive
//! blocks factors as `e^{i theta_1}` times `k - 1` tail rotations
//! `V(e^{i(theta_{m+1} - theta_m)}, 2^n - L_m)`.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Default tolerance for treating two phases as equal, in radians.
pub const DEFAULT_PHASE_TOL: f64 = 1e-12;

/// Maps an angle into `(-pi, pi]`.
pub fn wrap_angle(theta: f64) -> f64 {
    let mut t = theta.rem_euclid(2.0 * PI);
    if t > PI {
        t -= 2.0 * PI;
    }
    t
}

fn same_phase(a: f64, b: f64, tol: f64) -> bool {
    wrap_angle(a - b).abs() <= tol
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Block {
    pub theta: f64,
    pub len: u64,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Entries {
    Full(Vec<f64>),
    Blocks(Vec<Block>),
}

/// A target diagonal operator `diag(e^{i f_0}, ..., e^{i f_{2^n - 1}})`.
#[derive(Debug, Clone, PartialEq)]
pub struct DiagonalSpec {
    n: usize,
    entries: Entries,
}

/// Wire form of [`DiagonalSpec`].
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawSpec {
    n: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    blocks: Option<Vec<Block>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    diagonal_thetas: Option<Vec<f64>>,
}

/// Largest register handled anywhere in the toolkit.
pub const MAX_QUBITS: usize = 30;

impl DiagonalSpec {
    pub fn from_phases(thetas: Vec<f64>) -> Result<Self> {
        let len = thetas.len();
        if len == 0 || !len.is_power_of_two() {
            return Err(Error::LengthNotPowerOfTwo(len));
        }
        let spec = DiagonalSpec {
            n: len.trailing_zeros() as usize,
            entries: Entries::Full(thetas),
        };
        spec.validate()?;
        Ok(spec)
    }

    pub fn from_blocks(n: usize, blocks: Vec<Block>) -> Result<Self> {
        let spec = DiagonalSpec {
            n,
            entries: Entries::Blocks(blocks),
        };
        spec.validate()?;
        Ok(spec)
    }

    fn validate(&self) -> Result<()> {
        if self.n == 0 || self.n > MAX_QUBITS {
            return Err(Error::MalformedSpec(format!(
                "n = {} must lie in [1, {MAX_QUBITS}]",
                self.n
            )));
        }
        let dim = 1u64 << self.n;
        match &self.entries {
            Entries::Full(f) => {
                if f.len() as u64 != dim {
                    return Err(Error::MalformedSpec(format!(
                        "{} phases given for n = {}",
                        f.len(),
                        self.n
                    )));
                }
                if f.iter().any(|t| !t.is_finite()) {
                    return Err(Error::MalformedSpec("non-finite phase".into()));
                }
            }
            Entries::Blocks(bs) => {
                if bs.iter().any(|b| b.len == 0) {
                    return Err(Error::MalformedSpec("block of length zero".into()));
                }
                if bs.iter().any(|b| !b.theta.is_finite()) {
                    return Err(Error::MalformedSpec("non-finite phase".into()));
                }
                let total: u64 = bs.iter().map(|b| b.len).sum();
                if total != dim {
                    return Err(Error::MalformedSpec(format!(
                        "block lengths sum to {total}, expected 2^{} = {dim}",
                        self.n
                    )));
                }
            }
        }
        Ok(())
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let raw: RawSpec =
            serde_json::from_str(text).map_err(|e| Error::MalformedSpec(e.to_string()))?;
        match (raw.blocks, raw.diagonal_thetas) {
            (Some(blocks), None) => DiagonalSpec::from_blocks(raw.n, blocks),
            (None, Some(thetas)) => {
                let spec = DiagonalSpec::from_phases(thetas)
                    .map_err(|e| Error::MalformedSpec(e.to_string()))?;
                if spec.n != raw.n {
                    return Err(Error::MalformedSpec(format!(
                        "{} phases do not match n = {}",
                        1u64 << spec.n,
                        raw.n
                    )));
                }
                Ok(spec)
            }
            _ => Err(Error::MalformedSpec(
                "exactly one of \"blocks\" or \"diagonal_thetas\" is required".into(),
            )),
        }
    }

    pub fn to_json(&self) -> String {
        let raw = match &self.entries {
            Entries::Full(f) => RawSpec {
                n: self.n,
                blocks: None,
                diagonal_thetas: Some(f.clone()),
            },
            Entries::Blocks(b) => RawSpec {
                n: self.n,
                blocks: Some(b.clone()),
                diagonal_thetas: None,
            },
        };
        serde_json::to_string(&raw).expect("spec serializes")
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn dim(&self) -> u64 {
        1u64 << self.n
    }

    pub fn entries(&self) -> &Entries {
        &self.entries
    }

    /// The full phase vector `f`.
    pub fn phases(&self) -> Vec<f64> {
        match &self.entries {
            Entries::Full(f) => f.clone(),
            Entries::Blocks(bs) => bs
                .iter()
                .flat_map(|b| std::iter::repeat_n(b.theta, b.len as usize))
                .collect(),
        }
    }

    fn runs(&self) -> Vec<Block> {
        match &self.entries {
            Entries::Blocks(bs) => bs.clone(),
            Entries::Full(f) => f.iter().map(|&theta| Block { theta, len: 1 }).collect(),
        }
    }
}

/// Distinct phases in diagonal order with their run lengths.
#[derive(Debug, Clone, PartialEq)]
pub struct PhaseContext {
    pub n: usize,
    pub phases: Vec<f64>,
    pub lengths: Vec<u64>,
    /// `cumulative[m] = lengths[0] + ... + lengths[m]`.
    pub cumulative: Vec<u64>,
}

impl PhaseContext {
    pub fn k(&self) -> usize {
        self.phases.len()
    }

    pub fn to_spec(&self) -> DiagonalSpec {
        let blocks = self
            .phases
            .iter()
            .zip(&self.lengths)
            .map(|(&theta, &len)| Block { theta, len })
            .collect();
        DiagonalSpec::from_blocks(self.n, blocks).expect("context covers 2^n")
    }
}

/// Run-length encodes the diagonal, merging neighbours within `tol` (mod 2 pi).
pub fn extract_context(d: &DiagonalSpec, tol: f64) -> PhaseContext {
    let mut phases: Vec<f64> = Vec::new();
    let mut lengths: Vec<u64> = Vec::new();
    for run in d.runs() {
        match phases.last() {
            Some(&last) if same_phase(last, run.theta, tol) => {
                *lengths.last_mut().unwrap() += run.len;
            }
            _ => {
                phases.push(run.theta);
                lengths.push(run.len);
            }
        }
    }
    let cumulative = lengths
        .iter()
        .scan(0u64, |acc, &l| {
            *acc += l;
            Some(*acc)
        })
        .collect();
    PhaseContext {
        n: d.n,
        phases,
        lengths,
        cumulative,
    }
}

/// `V(e^{i phase}, ell)`: rotates the last `ell` diagonal entries.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PcdFactor {
    pub phase: f64,
    pub ell: u64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Pcd {
    pub n: usize,
    pub global_phase: f64,
    pub factors: Vec<PcdFactor>,
}

impl Pcd {
    /// Phase of every diagonal entry implied by the factorization.
    pub fn reconstruct(&self) -> Vec<f64> {
        let dim = 1u64 << self.n;
        (0..dim)
            .map(|j| {
                self.global_phase
                    + self
                        .factors
                        .iter()
                        .filter(|f| j >= dim - f.ell)
                        .map(|f| f.phase)
                        .sum::<f64>()
            })
            .collect()
    }
}

/// Telescoping factorization of a block-structured context.
pub fn pcd_factorize(ctx: &PhaseContext) -> Pcd {
    let dim = 1u64 << ctx.n;
    let factors = ctx
        .phases
        .windows(2)
        .zip(&ctx.cumulative)
        .map(|(pair, &l)| PcdFactor {
            phase: wrap_angle(pair[1] - pair[0]),
            ell: dim - l,
        })
        .collect();
    Pcd {
        n: ctx.n,
        global_phase: ctx.phases[0],
        factors,
    }
}

/// One factor of a general decomposition: rotate by `phase` on the union of
/// half-open `intervals`.
#[derive(Debug, Clone, PartialEq)]
pub struct ActivationFactor {
    pub phase: f64,
    pub intervals: Vec<(u64, u64)>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ActivationDecomposition {
    pub n: usize,
    pub global_phase: f64,
    pub factors: Vec<ActivationFactor>,
}

impl ActivationDecomposition {
    pub fn reconstruct(&self) -> Vec<f64> {
        let dim = 1u64 << self.n;
        (0..dim)
            .map(|j| {
                self.global_phase
                    + self
                        .factors
                        .iter()
                        .filter(|f| f.intervals.iter().any(|&(p, q)| p <= j && j < q))
                        .map(|f| f.phase)
                        .sum::<f64>()
            })
            .collect()
    }
}

/// Decomposition for diagonals whose equal phases need not be contiguous.
///
/// Distinct phases are ranked by first occurrence. Factor `m` carries the
/// ratio between ranks `m` and `m - 1` and activates on every entry of rank at
/// least `m`, so each entry accumulates exactly its own phase.
pub fn general_activation_sets(d: &DiagonalSpec, tol: f64) -> ActivationDecomposition {
    let mut distinct: Vec<f64> = Vec::new();
    let mut ranks: Vec<(u64, usize)> = Vec::new();
    let mut start = 0u64;
    for run in d.runs() {
        let rank = match distinct.iter().position(|&p| same_phase(p, run.theta, tol)) {
            Some(r) => r,
            None => {
                distinct.push(run.theta);
                distinct.len() - 1
            }
        };
        match ranks.last_mut() {
            Some((len, r)) if *r == rank => *len += run.len,
            _ => ranks.push((run.len, rank)),
        }
        start += run.len;
    }
    debug_assert_eq!(start, d.dim());

    let factors = (1..distinct.len())
        .map(|m| {
            let mut intervals: Vec<(u64, u64)> = Vec::new();
            let mut pos = 0u64;
            for &(len, rank) in &ranks {
                if rank >= m {
                    match intervals.last_mut() {
                        Some((_, q)) if *q == pos => *q += len,
                        _ => intervals.push((pos, pos + len)),
                    }
                }
                pos += len;
            }
            ActivationFactor {
                phase: wrap_angle(distinct[m] - distinct[m - 1]),
                intervals,
            }
        })
        .collect();
    ActivationDecomposition {
        n: d.n,
        global_phase: distinct[0],
        factors,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn assert_phases_match(got: &[f64], want: &[f64]) {
        assert_eq!(got.len(), want.len());
        for (g, w) in got.iter().zip(want) {
            assert!(wrap_angle(g - w).abs() < 1e-12, "{g} vs {w}");
        }
    }

    #[test]
    fn constant_diagonal() {
        let d = DiagonalSpec::from_phases(vec![0.4; 16]).unwrap();
        let ctx = extract_context(&d, DEFAULT_PHASE_TOL);
        assert_eq!(ctx.k(), 1);
        assert_eq!(ctx.lengths, vec![16]);
        let pcd = pcd_factorize(&ctx);
        assert_eq!(pcd.global_phase, 0.4);
        assert!(pcd.factors.is_empty());
    }

    #[test]
    fn single_marked_entry() {
        let mut f = vec![0.0; 32];
        f[31] = 1.1;
        let ctx = extract_context(&DiagonalSpec::from_phases(f).unwrap(), DEFAULT_PHASE_TOL);
        assert_eq!(ctx.k(), 2);
        assert_eq!(ctx.lengths, vec![31, 1]);
        let pcd = pcd_factorize(&ctx);
        assert_eq!(pcd.global_phase, 0.0);
        assert_eq!(pcd.factors, vec![PcdFactor { phase: 1.1, ell: 1 }]);
    }

    #[test]
    fn three_blocks() {
        let (t, p) = (0.7, -1.3);
        let f = vec![0.0, 0.0, t, t, t, t, p, p];
        let ctx = extract_context(&DiagonalSpec::from_phases(f.clone()).unwrap(), DEFAULT_PHASE_TOL);
        assert_eq!(ctx.lengths, vec![2, 4, 2]);
        assert_eq!(ctx.cumulative, vec![2, 6, 8]);
        let pcd = pcd_factorize(&ctx);
        assert_eq!(pcd.factors.len(), 2);
        assert_eq!(pcd.factors[0], PcdFactor { phase: t, ell: 6 });
        assert_eq!(pcd.factors[1].ell, 2);
        assert!((pcd.factors[1].phase - (p - t)).abs() < 1e-15);
        assert_phases_match(&pcd.reconstruct(), &f);
    }

    #[test]
    fn merging_respects_tolerance_mod_two_pi() {
        let f = vec![PI - 1e-14, -PI + 1e-14, 0.5, 0.5 + 1e-3];
        let ctx = extract_context(&DiagonalSpec::from_phases(f).unwrap(), DEFAULT_PHASE_TOL);
        assert_eq!(ctx.lengths, vec![2, 1, 1]);
        let coarse = extract_context(
            &DiagonalSpec::from_phases(vec![0.5, 0.5 + 1e-3, 0.0, 0.0]).unwrap(),
            1e-2,
        );
        assert_eq!(coarse.lengths, vec![2, 2]);
    }

    #[test]
    fn interleaved_two_qubit() {
        let t = 0.9;
        let d = DiagonalSpec::from_phases(vec![0.0, t, 0.0, t]).unwrap();
        let g = general_activation_sets(&d, DEFAULT_PHASE_TOL);
        assert_eq!(g.factors.len(), 1);
        assert_eq!(g.factors[0].intervals, vec![(1, 2), (3, 4)]);
        assert_phases_match(&g.reconstruct(), &d.phases());
    }

    #[test]
    fn scattered_three_qubit() {
        let t = -2.1;
        let d = DiagonalSpec::from_phases(vec![0.0, t, t, 0.0, 0.0, 0.0, t, 0.0]).unwrap();
        let g = general_activation_sets(&d, DEFAULT_PHASE_TOL);
        assert_eq!(g.factors.len(), 1);
        assert_eq!(g.factors[0].intervals, vec![(1, 3), (6, 7)]);
        assert_phases_match(&g.reconstruct(), &d.phases());
    }

    #[test]
    fn general_sets_agree_with_pcd_on_blocks() {
        let d = DiagonalSpec::from_blocks(
            3,
            vec![
                Block { theta: 0.1, len: 3 },
                Block { theta: 0.2, len: 1 },
                Block { theta: -0.4, len: 4 },
            ],
        )
        .unwrap();
        let pcd = pcd_factorize(&extract_context(&d, DEFAULT_PHASE_TOL));
        let g = general_activation_sets(&d, DEFAULT_PHASE_TOL);
        assert_eq!(g.global_phase, pcd.global_phase);
        for (gf, pf) in g.factors.iter().zip(&pcd.factors) {
            assert_eq!(gf.intervals, vec![(8 - pf.ell, 8)]);
            assert_eq!(gf.phase, pf.phase);
        }
    }

    #[test]
    fn json_schemas() {
        let d = DiagonalSpec::from_json(r#"{"n": 2, "blocks": [{"theta": 0.5, "len": 3}, {"theta": 1.0, "len": 1}]}"#)
            .unwrap();
        assert_eq!(d.phases(), vec![0.5, 0.5, 0.5, 1.0]);
        let d2 = DiagonalSpec::from_json(r#"{"n": 1, "diagonal_thetas": [0.0, 0.25]}"#).unwrap();
        assert_eq!(d2.phases(), vec![0.0, 0.25]);
        assert_eq!(DiagonalSpec::from_json(&d.to_json()).unwrap(), d);

        for bad in [
            r#"{"n": 2, "blocks": [{"theta": 0.5, "len": 3}]}"#,
            r#"{"n": 2, "diagonal_thetas": [0.0, 0.25]}"#,
            r#"{"n": 1}"#,
            r#"{"n": 1, "blocks": [{"theta": 0.5, "len": 0}, {"theta": 0.5, "len": 2}]}"#,
            r#"{"n": 1, "diagonal_thetas": [0.0, 1.0], "blocks": []}"#,
            r#"not json"#,
        ] {
            assert!(matches!(DiagonalSpec::from_json(bad), Err(Error::MalformedSpec(_))), "{bad}");
        }
    }
}
