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

//! T-count accounting, the Walsh-versus-PCD decision boundaries, and the
//! entangler sweeps with their fits.
//!
//! With `L = log2(1/eps)`, a Walsh circuit costs about `2^n C0 L` T gates and
//! a `k`-phase PCD circuit `(k - 1)(C0 L + e(n))`, where `e(n)` is the
//! per-factor entanglement cost: `kappa n^2` in the worst case and
//! `72 (n - 3)` in the best case. The boundary `k*` solves the equality.

use rayon::prelude::*;
use serde::Serialize;

use crate::entangler::{ced_plan, min_paired_plan, paired_t_count, MAX_ENTANGLER_QUBITS};
use crate::error::{Error, Result};
use crate::phase_context::DiagonalSpec;
use crate::rotsynth::SynthesizerConfig;
use crate::synthesis;

pub const DEFAULT_C0: f64 = 1.15;
pub const DEFAULT_KAPPA: f64 = 10.0;
pub const REFERENCE_BETA: f64 = 1.13;
/// Slope of the best-case entanglement fit `m(n) ~ 72 (n - 3)`.
pub const REFERENCE_M_SLOPE: f64 = 72.0;
pub const DEFAULT_SWEEP_LIMIT: usize = 16;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Method {
    Walsh,
    Pcd,
}

impl Method {
    pub fn as_str(self) -> &'static str {
        match self {
            Method::Walsh => "walsh",
            Method::Pcd => "pcd",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CostReport {
    pub method: Method,
    pub rotation_count: usize,
    pub rotation_t_estimate: f64,
    /// `E`: T gates outside the rotations, independent of `eps`.
    pub entanglement_t: usize,
    pub total_t: f64,
    pub width: usize,
}

impl CostReport {
    pub fn new(
        method: Method,
        rotation_count: usize,
        rotation_t_estimate: f64,
        entanglement_t: usize,
        width: usize,
    ) -> Self {
        CostReport {
            method,
            rotation_count,
            rotation_t_estimate,
            entanglement_t,
            total_t: rotation_t_estimate + entanglement_t as f64,
            width,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Choice {
    Walsh,
    Pcd,
    Tie,
}

impl Choice {
    pub fn as_str(self) -> &'static str {
        match self {
            Choice::Walsh => "walsh",
            Choice::Pcd => "pcd",
            Choice::Tie => "tie",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DecisionPoint {
    pub n: usize,
    pub k: usize,
    pub eps: f64,
    /// Worst-case `k*`.
    pub boundary_k: f64,
    pub choice: Choice,
}

fn log_inv(eps: f64) -> Result<f64> {
    if !(eps > 0.0 && eps < 1.0) {
        return Err(Error::EpsilonOutOfRange(eps));
    }
    Ok((1.0 / eps).log2())
}

/// `k* = 1 + 2^n C0 L / (C0 L + e)` for a per-factor entanglement cost `e`.
pub fn boundary(n: usize, eps: f64, c0: f64, entanglement: f64) -> Result<f64> {
    let l = log_inv(eps)?;
    Ok(1.0 + 2f64.powi(n as i32) * c0 * l / (c0 * l + entanglement))
}

pub fn worst_case_boundary(n: usize, eps: f64, c0: f64, kappa: f64) -> Result<f64> {
    boundary(n, eps, c0, kappa * (n * n) as f64)
}

pub fn best_case_boundary(n: usize, eps: f64, c0: f64) -> Result<f64> {
    boundary(n, eps, c0, best_case_entanglement(n))
}

pub fn best_case_entanglement(n: usize) -> f64 {
    REFERENCE_M_SLOPE * n.saturating_sub(3) as f64
}

/// Root of `2^n C0 L - (k - 1)(C0 L + e)` by bisection, independent of the
/// closed form.
pub fn bisect_boundary(n: usize, eps: f64, c0: f64, entanglement: f64) -> Result<f64> {
    let l = log_inv(eps)?;
    let walsh = 2f64.powi(n as i32) * c0 * l;
    let gap = |k: f64| walsh - (k - 1.0) * (c0 * l + entanglement);
    let (mut lo, mut hi) = (1.0, 2f64.powi(n as i32) + 2.0);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if gap(mid) > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

fn classify(k: usize, k_star: f64) -> Choice {
    let k = k as f64;
    if (k - k_star).abs() <= 1e-12 * k_star {
        Choice::Tie
    } else if k < k_star {
        Choice::Pcd
    } else {
        Choice::Walsh
    }
}

/// Worst-case model decision for a `k`-phase diagonal.
pub fn decide(n: usize, k: usize, eps: f64, c0: f64, kappa: f64) -> Result<DecisionPoint> {
    let boundary_k = worst_case_boundary(n, eps, c0, kappa)?;
    Ok(DecisionPoint {
        n,
        k,
        eps,
        boundary_k,
        choice: classify(k, boundary_k),
    })
}

/// Measured T-count `E[n, l]` of the cheapest paired entangler pair.
pub fn entanglement_cost(n: usize, ell: u64) -> Result<usize> {
    let plan = min_paired_plan(n, ell)?;
    Ok(paired_t_count(&plan.lower(), plan.ancilla()))
}

/// Both pipelines' measured costs with cost-only rotation estimates, the
/// cheaper method, and the model's decision for comparison.
#[derive(Debug, Clone, PartialEq)]
pub struct MethodChoice {
    pub decision: DecisionPoint,
    pub walsh: CostReport,
    pub pcd: CostReport,
    pub chosen: Method,
}

pub fn choose_method(d: &DiagonalSpec, eps: f64, cfg: &SynthesizerConfig, kappa: f64) -> Result<MethodChoice> {
    let walsh = synthesis::walsh_cost(d, eps, cfg.c0, true)?;
    let (pcd, k) = synthesis::pcd_cost(d, eps, cfg.c0, crate::phase_context::DEFAULT_PHASE_TOL)?;
    let decision = decide(d.n(), k, eps, cfg.c0, kappa)?;
    let chosen = if pcd.total_t < walsh.total_t {
        Method::Pcd
    } else {
        Method::Walsh
    };
    Ok(MethodChoice {
        decision,
        walsh,
        pcd,
        chosen,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct SweepRow {
    pub ell: u64,
    pub toffoli_count: usize,
    /// Seven T gates per Toffoli.
    pub t_count: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Sweep {
    pub n: usize,
    pub rows: Vec<SweepRow>,
    pub max_toffoli: usize,
    /// `m(n)`: the smallest T-count over odd `l`.
    pub min_odd_t: Option<usize>,
}

/// Toffoli and T counts of `ced(n, l)` for every `l` in `[0, 2^n)`.
pub fn sweep_toffoli_counts(n: usize, limit: usize) -> Result<Sweep> {
    if n > limit || n > MAX_ENTANGLER_QUBITS {
        return Err(Error::SweepLimitExceeded { n, limit });
    }
    if n == 0 {
        return Err(Error::InvalidArgument("sweep needs n >= 1".into()));
    }
    let rows: Vec<SweepRow> = (0..1u64 << n)
        .into_par_iter()
        .map(|ell| {
            let toffoli_count = ced_plan(n, ell).expect("ell below 2^n").toffoli_count();
            SweepRow {
                ell,
                toffoli_count,
                t_count: 7 * toffoli_count,
            }
        })
        .collect();
    let max_toffoli = rows.iter().map(|r| r.toffoli_count).max().unwrap_or(0);
    let min_odd_t = rows.iter().filter(|r| r.ell % 2 == 1).map(|r| r.t_count).min();
    Ok(Sweep {
        n,
        rows,
        max_toffoli,
        min_odd_t,
    })
}

/// Least-squares `beta` in `max ~ beta n^2`.
pub fn fit_beta(points: &[(usize, usize)]) -> f64 {
    let num: f64 = points.iter().map(|&(n, m)| m as f64 * (n * n) as f64).sum();
    let den: f64 = points.iter().map(|&(n, _)| ((n * n) as f64).powi(2)).sum();
    num / den
}

/// Least-squares `a` in `m(n) ~ a (n - 3)`.
pub fn fit_m_slope(points: &[(usize, usize)]) -> f64 {
    let x = |n: usize| n as f64 - 3.0;
    let num: f64 = points.iter().map(|&(n, m)| m as f64 * x(n)).sum();
    let den: f64 = points.iter().map(|&(n, _)| x(n) * x(n)).sum();
    num / den
}

pub fn pearson(x: &[f64], y: &[f64]) -> f64 {
    let n = x.len() as f64;
    let mx = x.iter().sum::<f64>() / n;
    let my = y.iter().sum::<f64>() / n;
    let cov: f64 = x.iter().zip(y).map(|(a, b)| (a - mx) * (b - my)).sum();
    let vx: f64 = x.iter().map(|a| (a - mx).powi(2)).sum();
    let vy: f64 = y.iter().map(|b| (b - my).powi(2)).sum();
    cov / (vx * vy).sqrt()
}

/// Correlation between the counts at `l` and at `2^n - l` over `0 < l < 2^n`.
pub fn self_similarity(sweep: &Sweep) -> f64 {
    let dim = sweep.rows.len();
    let x: Vec<f64> = (1..dim).map(|l| sweep.rows[l].toffoli_count as f64).collect();
    let y: Vec<f64> = (1..dim).map(|l| sweep.rows[dim - l].toffoli_count as f64).collect();
    pearson(&x, &y)
}

pub fn sweep_csv(sweep: &Sweep) -> String {
    let mut out = String::from("ell,toffoli_count,t_count\n");
    for r in &sweep.rows {
        out.push_str(&format!("{},{},{}\n", r.ell, r.toffoli_count, r.t_count));
    }
    out
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DecisionRow {
    pub n: usize,
    pub k: usize,
    pub log10_inv_eps: f64,
    pub choice: Choice,
    pub k_star_worst: f64,
    pub k_star_best: f64,
}

/// Model decisions over a grid of `(n, k, log10(1/eps))`.
pub fn decision_grid(
    ns: &[usize],
    ks: &[usize],
    log10_inv_eps: &[f64],
    c0: f64,
    kappa: f64,
) -> Result<Vec<DecisionRow>> {
    let mut rows = Vec::new();
    for &n in ns {
        for &e in log10_inv_eps {
            let eps = 10f64.powf(-e);
            let k_star_worst = worst_case_boundary(n, eps, c0, kappa)?;
            let k_star_best = best_case_boundary(n, eps, c0)?;
            for &k in ks {
                rows.push(DecisionRow {
                    n,
                    k,
                    log10_inv_eps: e,
                    choice: classify(k, k_star_worst),
                    k_star_worst,
                    k_star_best,
                });
            }
        }
    }
    Ok(rows)
}

pub fn decision_csv(rows: &[DecisionRow]) -> String {
    let mut out = String::from("n,k,log10_inv_eps,choice,k_star_worst,k_star_best\n");
    for r in rows {
        out.push_str(&format!(
            "{},{},{:.11e},{},{:.11e},{:.11e}\n",
            r.n,
            r.k,
            r.log10_inv_eps,
            r.choice.as_str(),
            r.k_star_worst,
            r.k_star_best
        ));
    }
    out
}
