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

//! Single-qubit phase-gate synthesis behind a pluggable contract.
//!
//! The brute-force mode enumerates Matsumoto-Amano normal forms
//! `(T | e) (HT | SHT)* C` by increasing T-count, with `C` one of the 24
//! single-qubit Cliffords, so every Clifford+T operator appears exactly once
//! up to global phase.

use std::f64::consts::FRAC_1_SQRT_2;
use std::sync::OnceLock;

use num_complex::Complex64;

use crate::circuit::{Circuit, Gate};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum RotationMode {
    ExactRz,
    BruteForce,
    CostOnly,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SynthesizerConfig {
    pub mode: RotationMode,
    pub c0: f64,
    pub max_t: usize,
}

impl Default for SynthesizerConfig {
    fn default() -> Self {
        SynthesizerConfig {
            mode: RotationMode::ExactRz,
            c0: 1.15,
            max_t: 30,
        }
    }
}

impl SynthesizerConfig {
    pub fn with_mode(mode: RotationMode) -> Self {
        SynthesizerConfig {
            mode,
            ..Default::default()
        }
    }
}

/// Words with more than this many normal forms at one T-count are not
/// enumerated.
pub const MAX_LEVEL_WORDS: u64 = 1 << 28;

#[derive(Debug, Clone, PartialEq)]
pub struct RotationResult {
    /// Single-qubit circuit for `P(theta)`; `None` in cost-only mode.
    pub circuit: Option<Circuit>,
    pub error: f64,
    /// Actual T-count, or the model estimate in cost-only mode.
    pub t_count: f64,
}

/// Approximates `P(theta) = diag(1, e^{i theta})` to within `eps`.
pub fn synthesize_rotation(theta: f64, eps: f64, cfg: &SynthesizerConfig) -> Result<RotationResult> {
    if cfg.mode != RotationMode::ExactRz && (eps.is_nan() || eps <= 0.0) {
        return Err(Error::NonpositiveEpsilon(eps));
    }
    match cfg.mode {
        RotationMode::ExactRz => Ok(RotationResult {
            circuit: Some(exact_phase(theta)),
            error: 0.0,
            t_count: 0.0,
        }),
        RotationMode::CostOnly => Ok(RotationResult {
            circuit: None,
            error: 0.0,
            t_count: cost_estimate(eps, cfg.c0),
        }),
        RotationMode::BruteForce => brute_force(theta, eps, cfg.max_t),
    }
}

/// `C0 log2(1/eps)`, the model T-count of one rotation.
pub fn cost_estimate(eps: f64, c0: f64) -> f64 {
    c0 * (1.0 / eps).log2()
}

/// Per-factor precision `eps / (k - 1)` for a `k`-phase diagonal.
pub fn budget_split(eps: f64, k: usize) -> Result<f64> {
    if k < 2 {
        return Err(Error::KTooSmall(k));
    }
    if eps.is_nan() || eps <= 0.0 {
        return Err(Error::NonpositiveEpsilon(eps));
    }
    Ok(eps / (k - 1) as f64)
}

fn exact_phase(theta: f64) -> Circuit {
    Circuit::from_gates(1, [Gate::GlobalPhase(theta / 2.0), Gate::rz(0, theta)]).unwrap()
}

type M2 = [[Complex64; 2]; 2];

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn mul(a: &M2, b: &M2) -> M2 {
    [
        [
            a[0][0] * b[0][0] + a[0][1] * b[1][0],
            a[0][0] * b[0][1] + a[0][1] * b[1][1],
        ],
        [
            a[1][0] * b[0][0] + a[1][1] * b[1][0],
            a[1][0] * b[0][1] + a[1][1] * b[1][1],
        ],
    ]
}

fn gate_matrix(g: &Gate) -> M2 {
    let z = c(0.0, 0.0);
    let one = c(1.0, 0.0);
    match g {
        Gate::H(_) => {
            let h = c(FRAC_1_SQRT_2, 0.0);
            [[h, h], [h, -h]]
        }
        Gate::S(_) => [[one, z], [z, c(0.0, 1.0)]],
        Gate::T(_) => [[one, z], [z, Complex64::from_polar(1.0, std::f64::consts::FRAC_PI_4)]],
        _ => unreachable!("normal forms use H, S and T only"),
    }
}

/// Operator-order word and its matrix.
#[derive(Clone)]
struct Word {
    gates: Vec<Gate>,
    m: M2,
}

impl Word {
    fn identity() -> Self {
        let one = c(1.0, 0.0);
        let z = c(0.0, 0.0);
        Word {
            gates: Vec::new(),
            m: [[one, z], [z, one]],
        }
    }

    fn then(&self, g: Gate) -> Word {
        let mut gates = self.gates.clone();
        gates.push(g.clone());
        Word {
            m: mul(&self.m, &gate_matrix(&g)),
            gates,
        }
    }
}

fn same_up_to_phase(a: &M2, b: &M2) -> bool {
    let (i, j) = if a[0][0].norm() > 0.5 { (0, 0) } else { (0, 1) };
    if b[i][j].norm() < 1e-9 {
        return false;
    }
    let ph = a[i][j] / b[i][j];
    (0..2).all(|r| (0..2).all(|s| (a[r][s] - ph * b[r][s]).norm() < 1e-9))
}

/// The 24 single-qubit Cliffords modulo phase as shortest {H, S} words,
/// in breadth-first order.
fn cliffords() -> &'static [Word] {
    static CLIFFORDS: OnceLock<Vec<Word>> = OnceLock::new();
    CLIFFORDS.get_or_init(|| {
        let mut found = vec![Word::identity()];
        let mut frontier = 0;
        while frontier < found.len() {
            let base = found[frontier].clone();
            for g in [Gate::H(0), Gate::S(0)] {
                let next = base.then(g);
                if !found.iter().any(|w| same_up_to_phase(&w.m, &next.m)) {
                    found.push(next);
                }
            }
            frontier += 1;
        }
        debug_assert_eq!(found.len(), 24);
        found
    })
}

/// Max-entry distance to `P(theta)` after aligning the `(0, 0)` entries.
fn distance(u: &M2, target: &M2) -> (f64, f64) {
    let phase = if u[0][0].norm() > 1e-12 { u[0][0].arg() } else { 0.0 };
    let rot = Complex64::from_polar(1.0, -phase);
    let mut d: f64 = 0.0;
    for r in 0..2 {
        for s in 0..2 {
            d = d.max((u[r][s] * rot - target[r][s]).norm());
        }
    }
    (d, phase)
}

struct Best {
    error: f64,
    phase: f64,
    /// Syllable choices, most recent in the lowest bit; a set bit is SHT.
    path: u64,
    clifford: usize,
}

struct Level<'a> {
    syllables: usize,
    target: &'a M2,
    eps: f64,
    ht: M2,
    sht: M2,
    best: Option<Best>,
}

impl Level<'_> {
    fn search(&mut self, m: &M2, depth: usize, path: u64) {
        if depth == self.syllables {
            for (i, cl) in cliffords().iter().enumerate() {
                let off = m[0][0] * cl.m[0][1] + m[0][1] * cl.m[1][1];
                if off.norm_sqr() > self.eps * self.eps {
                    continue;
                }
                let (d, phase) = distance(&mul(m, &cl.m), self.target);
                if d <= self.eps && self.best.as_ref().is_none_or(|b| d < b.error) {
                    self.best = Some(Best {
                        error: d,
                        phase,
                        path,
                        clifford: i,
                    });
                }
            }
            return;
        }
        let ht = mul(m, &self.ht);
        self.search(&ht, depth + 1, path << 1);
        let sht = mul(m, &self.sht);
        self.search(&sht, depth + 1, path << 1 | 1);
    }
}

fn brute_force(theta: f64, eps: f64, max_t: usize) -> Result<RotationResult> {
    let z = c(0.0, 0.0);
    let target: M2 = [[c(1.0, 0.0), z], [z, Complex64::from_polar(1.0, theta)]];
    let (h, s, t) = (gate_matrix(&Gate::H(0)), gate_matrix(&Gate::S(0)), gate_matrix(&Gate::T(0)));
    let ht = mul(&h, &t);
    let sht = mul(&s, &ht);
    for tc in 0..=max_t {
        let words = if tc == 0 { 24 } else { 3 * 24 * (1u64 << (tc - 1)) };
        if words > MAX_LEVEL_WORDS {
            break;
        }
        let mut found: Option<(bool, usize, Best)> = None;
        for lead_t in [false, true] {
            if lead_t && tc == 0 {
                continue;
            }
            let syllables = tc - lead_t as usize;
            let mut level = Level {
                syllables,
                target: &target,
                eps,
                ht,
                sht,
                best: None,
            };
            let start = if lead_t { t } else { Word::identity().m };
            level.search(&start, 0, 0);
            if let Some(b) = level.best {
                if found.as_ref().is_none_or(|f| b.error < f.2.error) {
                    found = Some((lead_t, syllables, b));
                }
            }
        }
        if let Some((lead_t, syllables, b)) = found {
            let mut word = Vec::new();
            if lead_t {
                word.push(Gate::T(0));
            }
            for i in (0..syllables).rev() {
                if b.path >> i & 1 == 1 {
                    word.push(Gate::S(0));
                }
                word.extend([Gate::H(0), Gate::T(0)]);
            }
            word.extend(cliffords()[b.clifford].gates.iter().cloned());
            let mut circuit = Circuit::new(1);
            for g in word.iter().rev() {
                circuit.push_unchecked(g.clone());
            }
            if b.phase != 0.0 {
                circuit.push_unchecked(Gate::GlobalPhase(-b.phase));
            }
            return Ok(RotationResult {
                circuit: Some(circuit),
                error: b.error,
                t_count: tc as f64,
            });
        }
    }
    Err(Error::PrecisionUnreachable { max_t, epsilon: eps })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circuit::dense_unitary;
    use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, PI};

    fn brute() -> SynthesizerConfig {
        SynthesizerConfig::with_mode(RotationMode::BruteForce)
    }

    /// Max-entry distance including global phase.
    fn phase_error(c: &Circuit, theta: f64) -> f64 {
        let u = dense_unitary(c, 1).unwrap();
        let want = [c64(1.0), Complex64::from_polar(1.0, theta)];
        let mut d: f64 = 0.0;
        for r in 0..2 {
            for s in 0..2 {
                let w = if r == s { want[r] } else { c64(0.0) };
                d = d.max((u[[r, s]] - w).norm());
            }
        }
        d
    }

    fn c64(x: f64) -> Complex64 {
        Complex64::new(x, 0.0)
    }

    #[test]
    fn clifford_group_has_24() {
        assert_eq!(cliffords().len(), 24);
    }

    #[test]
    fn exact_t_and_s() {
        let r = synthesize_rotation(FRAC_PI_4, 1e-6, &brute()).unwrap();
        assert_eq!(r.t_count, 1.0);
        assert!(r.error < 1e-12);
        assert_eq!(r.circuit.as_ref().unwrap().t_count(), 1);
        let r = synthesize_rotation(FRAC_PI_2, 1e-6, &brute()).unwrap();
        assert_eq!(r.t_count, 0.0);
        assert!(phase_error(r.circuit.as_ref().unwrap(), FRAC_PI_2) < 1e-12);
    }

    #[test]
    fn cost_only_and_exact() {
        let cfg = SynthesizerConfig::with_mode(RotationMode::CostOnly);
        let r = synthesize_rotation(PI / 7.0, 2f64.powi(-20), &cfg).unwrap();
        assert!((r.t_count - 23.0).abs() < 1e-12);
        assert!(r.circuit.is_none());
        for theta in [0.0, 0.3, -2.9, 5.5] {
            let r = synthesize_rotation(theta, 0.0, &SynthesizerConfig::default()).unwrap();
            assert!(phase_error(r.circuit.as_ref().unwrap(), theta) < 1e-14);
        }
    }

    #[test]
    fn epsilon_and_budget_errors() {
        assert_eq!(synthesize_rotation(0.1, 0.0, &brute()).unwrap_err(), Error::NonpositiveEpsilon(0.0));
        assert_eq!(budget_split(0.1, 2).unwrap(), 0.1);
        assert!((budget_split(0.1, 11).unwrap() - 0.01).abs() < 1e-18);
        assert!((budget_split(1e-10, 5).unwrap() - 2.5e-11).abs() < 1e-24);
        assert_eq!(budget_split(0.1, 1).unwrap_err(), Error::KTooSmall(1));
    }

    #[test]
    fn unreachable_precision() {
        let cfg = SynthesizerConfig {
            max_t: 3,
            ..brute()
        };
        assert!(matches!(
            synthesize_rotation(0.123, 1e-3, &cfg),
            Err(Error::PrecisionUnreachable { max_t: 3, .. })
        ));
    }

    #[test]
    fn soundness_and_monotonicity() {
        for i in 0..12 {
            let theta = -PI + 0.537 * i as f64;
            let mut last_t = 0.0;
            for eps in [0.3, 0.1, 0.05, 0.02] {
                let r = synthesize_rotation(theta, eps, &brute()).unwrap();
                let c = r.circuit.as_ref().unwrap();
                assert_eq!(c.t_count() as f64, r.t_count);
                let measured = phase_error(c, theta);
                assert!(measured <= eps + 1e-12, "theta={theta} eps={eps}: {measured}");
                assert!((measured - r.error).abs() < 1e-9);
                assert!(r.t_count >= last_t);
                last_t = r.t_count;
            }
        }
    }
}
