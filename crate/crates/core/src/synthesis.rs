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

//! End-to-end synthesis of diagonal unitaries and dense verification.
//!
//! The PCD path emits `GlobalPhase(theta_1)` followed by one paired entangler
//! per factor, each sandwiching a phase rotation on the shared ancilla at
//! qubit `n`. The Walsh path emits CNOT ladders around `Rz` rotations on the
//! register alone.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::Serialize;

use crate::circuit::{simulate_sparse_columns, Circuit, Gate};
use crate::costmodel::{self, CostReport, Method};
use crate::entangler::{intervals_plan, min_paired_plan, paired_t_count, paired_with_slot, EntanglerPlan};
use crate::error::{Error, Result};
use crate::phase_context::{general_activation_sets, DiagonalSpec, DEFAULT_PHASE_TOL};
use crate::rotsynth::{budget_split, cost_estimate, synthesize_rotation, RotationMode, SynthesizerConfig};
use crate::walsh::{truncate, walsh_circuit, walsh_transform};

/// Deviation allowed for circuits with exact rotations.
pub const EXACT_TOLERANCE: f64 = 1e-10;
/// Off-block amplitude above which the ancillas count as disturbed.
pub const LEAKAGE_TOLERANCE: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum MethodRequest {
    Auto,
    Walsh,
    Pcd,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SynthesisOptions {
    pub eps: f64,
    pub method: MethodRequest,
    pub rot: SynthesizerConfig,
    /// Widest circuit that is verified by simulation.
    pub dense_limit: usize,
    pub verify: bool,
    pub phase_tol: f64,
}

impl Default for SynthesisOptions {
    fn default() -> Self {
        SynthesisOptions {
            eps: 1e-10,
            method: MethodRequest::Auto,
            rot: SynthesizerConfig::default(),
            dense_limit: crate::circuit::DEFAULT_DENSE_LIMIT,
            verify: true,
            phase_tol: DEFAULT_PHASE_TOL,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum VerificationMethod {
    Dense,
    Skipped,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Verification {
    /// Max-entry distance of the ancilla-`|0>` block from the target, up to
    /// global phase.
    pub deviation: f64,
    /// Largest simulated amplitude leaving the ancilla-`|0>` block.
    pub leakage: f64,
    /// Bound on the amplitude dropped by sparse simulation, already included
    /// in `deviation`.
    pub pruned: f64,
    pub method: VerificationMethod,
}

impl Verification {
    fn skipped() -> Self {
        Verification {
            deviation: f64::NAN,
            leakage: f64::NAN,
            pruned: f64::NAN,
            method: VerificationMethod::Skipped,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SynthesisResult {
    pub circuit: Circuit,
    pub cost: CostReport,
    pub verification: Verification,
    /// Precision granted to each rotation.
    pub budget: f64,
}

fn exact_rotations(cfg: &SynthesizerConfig) -> bool {
    cfg.mode != RotationMode::BruteForce
}

fn check_eps(opts: &SynthesisOptions) -> Result<()> {
    if opts.rot.mode == RotationMode::ExactRz {
        if opts.eps.is_nan() || opts.eps < 0.0 {
            return Err(Error::NonpositiveEpsilon(opts.eps));
        }
    } else if opts.eps.is_nan() || opts.eps <= 0.0 {
        return Err(Error::NonpositiveEpsilon(opts.eps));
    }
    Ok(())
}

/// Entangler plan for one activation set: the cheaper cascaded plan for a
/// tail, otherwise the dyadic cover of each interval.
fn factor_plan(n: usize, intervals: &[(u64, u64)]) -> Result<EntanglerPlan> {
    let dim = 1u64 << n;
    match intervals {
        [(p, q)] if *q == dim => min_paired_plan(n, dim - p),
        _ => intervals_plan(n, intervals),
    }
}

struct PcdPlan {
    global_phase: f64,
    factors: Vec<(f64, EntanglerPlan)>,
}

fn pcd_plan(d: &DiagonalSpec, tol: f64) -> Result<PcdPlan> {
    let dec = general_activation_sets(d, tol);
    let factors = dec
        .factors
        .iter()
        .map(|f| Ok((f.phase, factor_plan(d.n(), &f.intervals)?)))
        .collect::<Result<_>>()?;
    Ok(PcdPlan {
        global_phase: dec.global_phase,
        factors,
    })
}

fn rotation_estimate(count: usize, budget: f64, c0: f64) -> f64 {
    if count == 0 || budget.is_nan() || budget <= 0.0 {
        0.0
    } else {
        count as f64 * cost_estimate(budget, c0)
    }
}

/// PCD cost with cost-only rotations at `eps / (k - 1)`; also returns `k`.
pub fn pcd_cost(d: &DiagonalSpec, eps: f64, c0: f64, tol: f64) -> Result<(CostReport, usize)> {
    let plan = pcd_plan(d, tol)?;
    let k = plan.factors.len() + 1;
    let budget = if k >= 2 { budget_split(eps, k)? } else { eps };
    let mut e = 0;
    let mut width = d.n();
    for (_, p) in &plan.factors {
        e += paired_t_count(&p.lower(), p.ancilla());
        width = width.max(p.width());
    }
    let report = CostReport::new(Method::Pcd, k - 1, rotation_estimate(k - 1, budget, c0), e, width);
    Ok((report, k))
}

/// Walsh cost with cost-only rotations. With `truncate_spectrum`, half of
/// `eps` is spent dropping small coefficients.
pub fn walsh_cost(d: &DiagonalSpec, eps: f64, c0: f64, truncate_spectrum: bool) -> Result<CostReport> {
    let w = walsh_transform(&d.phases())?;
    let sparse = truncate(&w, if truncate_spectrum { eps / 2.0 } else { 0.0 });
    let count = sparse.rotation_count();
    let budget = if count > 0 { (eps - sparse.bound) / count as f64 } else { eps };
    Ok(CostReport::new(Method::Walsh, count, rotation_estimate(count, budget, c0), 0, d.n()))
}

/// Circuit for `P(theta)` on `qubit`, and its T-count or estimate.
fn phase_rotation(theta: f64, budget: f64, cfg: &SynthesizerConfig, qubit: usize) -> Result<(Vec<Gate>, f64)> {
    let r = synthesize_rotation(theta, budget, cfg)?;
    let t = match cfg.mode {
        RotationMode::ExactRz => rotation_estimate(1, budget, cfg.c0),
        _ => r.t_count,
    };
    let gates = match r.circuit {
        Some(c) => c.gates().iter().map(|g| g.remap(|_| qubit)).collect(),
        None => vec![Gate::GlobalPhase(theta / 2.0), Gate::rz(qubit, theta)],
    };
    Ok((gates, t))
}

fn synthesize_pcd(d: &DiagonalSpec, opts: &SynthesisOptions) -> Result<(Circuit, CostReport, f64)> {
    let n = d.n();
    let plan = pcd_plan(d, opts.phase_tol)?;
    let k = plan.factors.len() + 1;
    let budget = if k < 2 {
        opts.eps
    } else if opts.eps > 0.0 {
        budget_split(opts.eps, k)?
    } else {
        0.0
    };
    let width = plan
        .factors
        .iter()
        .map(|(_, p)| p.width())
        .max()
        .unwrap_or(n);
    let mut circuit = Circuit::new(width);
    for q in n..width {
        circuit.add_ancilla(q)?;
    }
    circuit.push(Gate::GlobalPhase(plan.global_phase))?;
    let mut rotation_t = 0.0;
    let mut e = 0;
    for (phase, p) in &plan.factors {
        let (slot, t) = phase_rotation(*phase, budget, &opts.rot, n)?;
        rotation_t += t;
        let out = paired_with_slot(p, &slot);
        e += out.ledger.entanglement_t;
        circuit.append(&out.circuit);
    }
    let report = CostReport::new(Method::Pcd, k - 1, rotation_t, e, width);
    Ok((circuit, report, budget))
}

fn synthesize_walsh(d: &DiagonalSpec, opts: &SynthesisOptions) -> Result<(Circuit, CostReport, f64)> {
    let w = walsh_transform(&d.phases())?;
    let approximate = opts.rot.mode != RotationMode::ExactRz;
    let sparse = truncate(&w, if approximate { opts.eps / 2.0 } else { 0.0 });
    let count = sparse.rotation_count();
    let budget = if count > 0 && opts.eps > 0.0 {
        (opts.eps - sparse.bound) / count as f64
    } else {
        0.0
    };
    let base = walsh_circuit(&sparse);
    let mut rotation_t = 0.0;
    let circuit = if opts.rot.mode == RotationMode::BruteForce {
        let mut c = Circuit::new(base.width());
        for g in base.gates() {
            match g {
                Gate::Rz { qubit, theta } => {
                    let (gates, t) = phase_rotation(*theta, budget, &opts.rot, *qubit)?;
                    rotation_t += t;
                    for h in gates {
                        c.push(h)?;
                    }
                    c.push(Gate::GlobalPhase(-theta / 2.0))?;
                }
                other => c.push(other.clone())?,
            }
        }
        c
    } else {
        rotation_t = rotation_estimate(count, budget, opts.rot.c0);
        base
    };
    let report = CostReport::new(Method::Walsh, count, rotation_t, 0, d.n());
    Ok((circuit, report, budget))
}

/// Synthesizes `diag(e^{i f_k})` by the requested method. `Auto` compares
/// both pipelines' costs with cost-only rotation estimates and builds the
/// cheaper one.
pub fn synthesize(d: &DiagonalSpec, opts: &SynthesisOptions) -> Result<SynthesisResult> {
    check_eps(opts)?;
    let method = match opts.method {
        MethodRequest::Walsh => Method::Walsh,
        MethodRequest::Pcd => Method::Pcd,
        MethodRequest::Auto => {
            let eps = if opts.eps > 0.0 { opts.eps.min(0.5) } else { 1e-10 };
            costmodel::choose_method(d, eps, &opts.rot, costmodel::DEFAULT_KAPPA)?.chosen
        }
    };
    let (circuit, cost, budget) = match method {
        Method::Walsh => synthesize_walsh(d, opts)?,
        Method::Pcd => synthesize_pcd(d, opts)?,
    };
    let verification = if opts.verify && circuit.width() <= opts.dense_limit {
        let v = measure(&circuit, d, opts.dense_limit)?;
        check(&v, opts)?;
        v
    } else {
        Verification::skipped()
    };
    Ok(SynthesisResult {
        circuit,
        cost,
        verification,
        budget,
    })
}

fn check(v: &Verification, opts: &SynthesisOptions) -> Result<()> {
    if exact_rotations(&opts.rot) {
        if v.leakage > LEAKAGE_TOLERANCE {
            return Err(Error::AncillaNotRestored(v.leakage));
        }
        if v.deviation > EXACT_TOLERANCE {
            return Err(Error::VerificationFailed {
                deviation: v.deviation,
                tolerance: EXACT_TOLERANCE,
            });
        }
    } else {
        let worst = v.deviation.max(v.leakage + v.pruned);
        if worst > opts.eps {
            return Err(Error::VerificationFailed {
                deviation: worst,
                tolerance: opts.eps,
            });
        }
    }
    Ok(())
}

/// Fully controlled `Rz(theta)` on `n + 1` qubits: the last two diagonal
/// entries are `e^{-i theta/2}` and `e^{i theta/2}`, all others 1.
pub fn mcrz_spec(n: usize, theta: f64) -> Result<DiagonalSpec> {
    let dim = 1u64 << (n + 1);
    DiagonalSpec::from_phases(
        (0..dim)
            .map(|k| match dim - k {
                2 => -theta / 2.0,
                1 => theta / 2.0,
                _ => 0.0,
            })
            .collect(),
    )
}

/// Fully controlled phase gate on `n + 1` qubits: only the last entry moves.
pub fn mcphase_spec(n: usize, theta: f64) -> Result<DiagonalSpec> {
    let dim = 1u64 << (n + 1);
    DiagonalSpec::from_phases((0..dim).map(|k| if k == dim - 1 { theta } else { 0.0 }).collect())
}

/// Synthesizes a fully controlled `Rz(theta)` with `n` controls via PCD.
pub fn synth_mcrz(n: usize, theta: f64, opts: &SynthesisOptions) -> Result<SynthesisResult> {
    let opts = SynthesisOptions {
        method: MethodRequest::Pcd,
        ..opts.clone()
    };
    synthesize(&mcrz_spec(n, theta)?, &opts)
}

/// Synthesizes a fully controlled phase gate with `n` controls via PCD.
pub fn synth_mcphase(n: usize, theta: f64, opts: &SynthesisOptions) -> Result<SynthesisResult> {
    let opts = SynthesisOptions {
        method: MethodRequest::Pcd,
        ..opts.clone()
    };
    synthesize(&mcphase_spec(n, theta)?, &opts)
}

/// Compares the ancilla-`|0>` block of `c` with the target diagonal.
///
/// Qubits `0..n` are the register; every higher qubit is treated as an
/// ancilla starting in `|0>`. The deviation is the max-entry distance after
/// the better of two global-phase alignments, plus the pruning bound.
pub fn measure(c: &Circuit, d: &DiagonalSpec, dense_limit: usize) -> Result<Verification> {
    let n = d.n();
    let w = c.width();
    if w < n {
        let dim = 1usize << n;
        return Err(Error::DimensionMismatch((1 << w, 1 << w), (dim, dim)));
    }
    let shift = w - n;
    let cols: Vec<usize> = (0..1usize << n).map(|k| k << shift).collect();
    let sim = simulate_sparse_columns(c, &cols, dense_limit)?;
    let target: Vec<Complex64> = d.phases().iter().map(|&f| Complex64::from_polar(1.0, f)).collect();
    let low = (1usize << shift) - 1;

    let mut diag = vec![Complex64::new(0.0, 0.0); cols.len()];
    let mut off_block: f64 = 0.0;
    let mut off_diag: f64 = 0.0;
    for (k, col) in sim.columns.iter().enumerate() {
        for &(row, amp) in col {
            if row & low != 0 {
                off_block = off_block.max(amp.norm());
            } else if row >> shift == k {
                diag[k] = amp;
            } else {
                off_diag = off_diag.max(amp.norm());
            }
        }
    }
    let deviation_at = |phi: f64| {
        let rot = Complex64::from_polar(1.0, phi);
        diag.iter()
            .zip(&target)
            .map(|(b, t)| (b * rot - t).norm())
            .fold(off_diag, f64::max)
    };
    let first = if diag[0].norm() > 0.0 { target[0].arg() - diag[0].arg() } else { 0.0 };
    let mut best = deviation_at(first);
    if let Some(center) = arc_center(&diag, &target) {
        best = best.min(deviation_at(center));
    }
    Ok(Verification {
        deviation: best + sim.pruned,
        leakage: off_block,
        pruned: sim.pruned,
        method: VerificationMethod::Dense,
    })
}

/// Center of the shortest arc holding every phase offset `arg(t) - arg(b)`.
fn arc_center(diag: &[Complex64], target: &[Complex64]) -> Option<f64> {
    let mut offsets: Vec<f64> = diag
        .iter()
        .zip(target)
        .filter(|(b, _)| b.norm() > 1e-3)
        .map(|(b, t)| (t.arg() - b.arg()).rem_euclid(2.0 * PI))
        .collect();
    if offsets.is_empty() {
        return None;
    }
    offsets.sort_by(f64::total_cmp);
    let m = offsets.len();
    let (mut gap, mut after) = (offsets[0] + 2.0 * PI - offsets[m - 1], 0);
    for i in 1..m {
        let g = offsets[i] - offsets[i - 1];
        if g > gap {
            gap = g;
            after = i;
        }
    }
    let start = offsets[after];
    let span = 2.0 * PI - gap;
    Some(start + span / 2.0)
}

/// Deviation of an exact circuit from its target; errors when the ancillas
/// are disturbed.
pub fn verify(c: &Circuit, d: &DiagonalSpec, dense_limit: usize) -> Result<f64> {
    let v = measure(c, d, dense_limit)?;
    if v.leakage > LEAKAGE_TOLERANCE {
        return Err(Error::AncillaNotRestored(v.leakage));
    }
    Ok(v.deviation)
}
