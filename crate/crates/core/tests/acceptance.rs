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

//! Acceptance run: one PASS/FAIL line per criterion, each with a diagnostic
//! and its wall-clock budget. Exits non-zero if any criterion fails.

use std::f64::consts::PI;
use std::process::ExitCode;
use std::time::{Duration, Instant};

use diagsynth::circuit::{compare_up_to_global_phase, dense_unitary, Circuit, Gate, Matrix};
use diagsynth::costmodel::{
    best_case_boundary, best_case_entanglement, bisect_boundary, fit_beta, fit_m_slope, pearson, self_similarity,
    sweep_toffoli_counts, worst_case_boundary, REFERENCE_BETA, DEFAULT_C0, DEFAULT_KAPPA, REFERENCE_M_SLOPE,
};
use diagsynth::entangler::{
    bsb, ced, ced2, factor_xn, lower_mcx, paired_network, paired_t_count, toffoli_to_clifford_t, McxSpec, PlanMode,
};
use diagsynth::phase_context::{Block, DiagonalSpec};
use diagsynth::rotsynth::{cost_estimate, RotationMode, SynthesizerConfig};
use diagsynth::synthesis::{synthesize, MethodRequest, SynthesisOptions};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome, u64);

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn dense(c: &Circuit) -> Matrix {
    dense_unitary(c, 12).expect("within dense limit")
}

fn sandwich(c: &Circuit, slot: &[Gate]) -> Circuit {
    let mut s = c.clone();
    for g in slot {
        s.push(g.clone()).unwrap();
    }
    s.append(&c.inverse());
    s
}

fn phase_slot(q: usize, theta: f64) -> [Gate; 2] {
    [Gate::GlobalPhase(theta / 2.0), Gate::rz(q, theta)]
}

fn c1_bsb() -> Outcome {
    let terms = |l| bsb(l).terms().to_vec();
    ensure(terms(23) == [(-1, 0), (-1, 3), (1, 5)], || format!("bsb(23) = {:?}", terms(23)))?;
    ensure(terms(15) == [(-1, 0), (1, 4)], || format!("bsb(15) = {:?}", terms(15)))?;
    for ell in 0..1u64 << 16 {
        let e = bsb(ell);
        ensure(e.value() == ell as i128, || format!("bsb({ell}) sums to {}", e.value()))?;
    }
    Ok("23 = 32-8-1, 15 = 16-1, sums exact for all l < 2^16".into())
}

fn c2_levels() -> Outcome {
    let b = factor_xn(5, 15, PlanMode::Binary).map_err(|e| e.to_string())?;
    let s = factor_xn(5, 15, PlanMode::Bsb).map_err(|e| e.to_string())?;
    let e = factor_xn(6, 23, PlanMode::Bsb).map_err(|e| e.to_string())?;
    let ms: Vec<usize> = e.factors.iter().map(McxSpec::m).collect();
    ensure(b.total_control_levels == 14, || format!("binary n=5 l=15: {}", b.total_control_levels))?;
    ensure(s.total_control_levels == 6, || format!("bsb n=5 l=15: {}", s.total_control_levels))?;
    ensure(ms == [1, 3, 6], || format!("n=6 l=23 factor sizes {ms:?}"))?;
    Ok(format!(
        "binary 14, bsb 6, n=6 l=23: CNOT + {} levels",
        ms[1] + ms[2]
    ))
}

fn truth_table(spec: &McxSpec, c: &Circuit) -> Result<(), String> {
    let w = c.width();
    let bit = |s: usize, q: usize| (s >> (w - 1 - q)) & 1 == 1;
    for s in 0..1usize << w {
        let fire = spec.controls.iter().zip(&spec.pattern).all(|(&q, &p)| bit(s, q) == p);
        let want = if fire { s ^ (1 << (w - 1 - spec.target)) } else { s };
        let got = c.apply_to_basis_index(s).map_err(|e| e.to_string())?;
        ensure(got == want, || format!("input {s:b}: got {got:b}, want {want:b}"))?;
    }
    Ok(())
}

fn c3_toffoli_counts() -> Outcome {
    let stair = McxSpec::new(6, vec![0, 1, 2], vec![true, false, false], 6).map_err(|e| e.to_string())?;
    let c = lower_mcx(&stair, 7, None).map_err(|e| e.to_string())?;
    ensure(c.toffoli_count() == 4, || format!("m=3: {} Toffolis", c.toffoli_count()))?;
    truth_table(&stair, &c)?;
    let split = McxSpec::new(6, (0..6).collect(), vec![true, false, true, false, false, false], 6)
        .map_err(|e| e.to_string())?;
    let c6 = lower_mcx(&split, 8, Some(7)).map_err(|e| e.to_string())?;
    ensure(c6.toffoli_count() == 24, || format!("m=6: {} Toffolis", c6.toffoli_count()))?;
    ensure(7 * c6.toffoli_count() == 168, || "T bound".into())?;
    truth_table(&split, &c6)?;
    Ok("m=3: 4 Toffolis, m=6: 24 Toffolis (168 T), truth tables exhaustive".into())
}

fn c4_seven_t() -> Outcome {
    let c = toffoli_to_clifford_t(0, 1, 2, 3);
    ensure(c.t_count() == 7, || format!("t_count {}", c.t_count()))?;
    let want = Circuit::from_gates(3, [Gate::toffoli(0, 1, 2)]).unwrap();
    let dev = compare_up_to_global_phase(&dense(&c), &dense(&want)).unwrap();
    ensure(dev < 1e-12, || format!("deviation {dev:e}"))?;
    Ok(format!("7 T, deviation {dev:.1e}"))
}

fn c5_peepholes() -> Outcome {
    let plan = factor_xn(2, 1, PlanMode::Bsb).map_err(|e| e.to_string())?;
    let theta = 0.37;
    let out = ced2(&plan, theta);
    let exact = toffoli_to_clifford_t(0, 1, 2, 3);
    let unpaired = sandwich(&exact, &phase_slot(2, theta)).t_count();
    ensure(out.ledger.entanglement_t == 8, || format!("paired pair costs {}", out.ledger.entanglement_t))?;
    ensure(unpaired == 14, || format!("unpaired pair costs {unpaired}"))?;
    let want = sandwich(&plan.lower(), &phase_slot(2, theta));
    let dev = compare_up_to_global_phase(&dense(&out.circuit), &dense(&want)).unwrap();
    ensure(dev < 1e-10, || format!("pair deviation {dev:e}"))?;

    let c = Circuit::from_gates(5, [Gate::toffoli(0, 3, 4), Gate::toffoli(1, 2, 3), Gate::toffoli(0, 3, 4)]).unwrap();
    let (half, pairs) = paired_network(&c, 4);
    let outer = half.t_count() - 4;
    ensure(pairs == 1 && outer == 4, || format!("mirrored pair: {pairs} pairs, outer {outer} T"))?;
    ensure(2 * half.t_count() == paired_t_count(&c, 4), || "paired count mismatch".into())?;
    let mut worst: f64 = dev;
    for theta in [0.0, 0.8, -2.3] {
        let got = sandwich(&half, &phase_slot(4, theta));
        let want = sandwich(&c, &phase_slot(4, theta));
        worst = worst.max(compare_up_to_global_phase(&dense(&got), &dense(&want)).unwrap());
    }
    ensure(worst < 1e-10, || format!("mirrored deviation {worst:e}"))?;
    Ok(format!("14 -> 8 T, mirrored outer pair 4 T, deviation {worst:.1e}"))
}

fn c6_semantics() -> Outcome {
    let mut circuits = 0;
    for n in 1..=10usize {
        let dim = 1u64 << n;
        for ell in 0..=dim {
            let c = ced(n, ell).map_err(|e| e.to_string())?;
            let w = c.width();
            let shift = w - n;
            let anc = 1usize << (w - 1 - n);
            // Any scratch qubit below the ancilla starts clean.
            for s in (0..1usize << (n + 1)).map(|s| s << (w - n - 1)) {
                let k = (s >> shift) as u64;
                let want = if k >= dim - ell { s ^ anc } else { s };
                let got = c.apply_to_basis_index(s).map_err(|e| e.to_string())?;
                ensure(got == want, || format!("n={n} l={ell} input {s}: got {got}, want {want}"))?;
                let back = c.apply_to_basis_index(got).map_err(|e| e.to_string())?;
                ensure(back == s, || format!("n={n} l={ell} not involutive at {s}"))?;
            }
            circuits += 1;
        }
    }
    Ok(format!("{circuits} circuits, every register and ancilla state, involutive"))
}

fn random_blocks(rng: &mut ChaCha8Rng, n: usize, k: usize) -> DiagonalSpec {
    let dim = 1u64 << n;
    let mut cuts: Vec<u64> = Vec::new();
    while cuts.len() < k - 1 {
        let c = rng.gen_range(1..dim);
        if !cuts.contains(&c) {
            cuts.push(c);
        }
    }
    cuts.sort_unstable();
    cuts.push(dim);
    let mut blocks = Vec::new();
    let mut start = 0;
    for c in cuts {
        blocks.push(Block {
            theta: rng.gen_range(-PI..PI),
            len: c - start,
        });
        start = c;
    }
    DiagonalSpec::from_blocks(n, blocks).unwrap()
}

fn log_uniform_k(rng: &mut ChaCha8Rng, n: usize) -> usize {
    let max = (1usize << n) as f64;
    let k = rng.gen_range(0.0..=max.ln()).exp().round() as usize;
    k.clamp(1, 1 << n)
}

fn c7_exactness() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let mut worst: f64 = 0.0;
    for i in 0..200 {
        let n = rng.gen_range(2..=8usize);
        let k = log_uniform_k(&mut rng, n);
        let d = random_blocks(&mut rng, n, k);
        for method in [MethodRequest::Pcd, MethodRequest::Walsh] {
            let opts = SynthesisOptions {
                method,
                ..Default::default()
            };
            let r = synthesize(&d, &opts).map_err(|e| format!("target {i} (n={n}, k={k}) {method:?}: {e}"))?;
            let dev = r.verification.deviation;
            ensure(dev < 1e-10, || format!("target {i} {method:?}: {dev:e}"))?;
            if method == MethodRequest::Pcd {
                ensure(r.cost.rotation_count == k - 1, || {
                    format!("target {i}: {} rotations for k={k}", r.cost.rotation_count)
                })?;
            }
            worst = worst.max(dev);
        }
    }
    Ok(format!("200 targets x 2 methods, worst deviation {worst:.1e}"))
}

fn c8_eps_honesty() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(99);
    let mut worst_ratio: f64 = 0.0;
    let mut runs = 0;
    for eps in [0.3, 0.1, 0.05] {
        for _ in 0..12 {
            let n = rng.gen_range(2..=5usize);
            let k = rng.gen_range(1..=5usize.min(1 << n));
            let d = random_blocks(&mut rng, n, k);
            let opts = SynthesisOptions {
                eps,
                method: MethodRequest::Pcd,
                rot: SynthesizerConfig::with_mode(RotationMode::BruteForce),
                ..Default::default()
            };
            let r = synthesize(&d, &opts).map_err(|e| format!("eps={eps} n={n} k={k}: {e}"))?;
            let v = r.verification;
            let dev = v.deviation.max(v.leakage + v.pruned);
            ensure(dev <= eps, || format!("eps={eps} n={n} k={k}: deviation {dev:e}"))?;
            worst_ratio = worst_ratio.max(dev / eps);
            runs += 1;
        }
    }
    Ok(format!("{runs} targets, worst deviation/eps {worst_ratio:.3}"))
}

fn c9_boundary() -> Outcome {
    let mut worst: f64 = 0.0;
    for n in 3..=12usize {
        for _k in (1..=10).map(|i| i * (1 << n) / 10) {
            for e in 1..=10 {
                let eps = 10f64.powi(-e);
                let closed = worst_case_boundary(n, eps, DEFAULT_C0, DEFAULT_KAPPA).unwrap();
                let solved = bisect_boundary(n, eps, DEFAULT_C0, DEFAULT_KAPPA * (n * n) as f64).unwrap();
                worst = worst.max((closed - solved).abs() / closed);
                let closed = best_case_boundary(n, eps, DEFAULT_C0).unwrap();
                let solved = bisect_boundary(n, eps, DEFAULT_C0, best_case_entanglement(n)).unwrap();
                worst = worst.max((closed - solved).abs() / closed);
            }
        }
    }
    ensure(worst <= 1e-9, || format!("relative error {worst:e}"))?;
    let section: Vec<f64> = (1..=15)
        .map(|e| worst_case_boundary(10, 10f64.powi(-e), DEFAULT_C0, DEFAULT_KAPPA).unwrap())
        .collect();
    ensure(section.windows(2).all(|w| w[1] > w[0]), || format!("n=10 section not monotone: {section:?}"))?;
    Ok(format!(
        "max relative error {worst:.1e}; n=10 k* rises {:.1} -> {:.1}",
        section[0],
        section[14]
    ))
}

fn c10_sweeps() -> Outcome {
    let mut maxes = Vec::new();
    let mut mins = Vec::new();
    let mut r10 = f64::NAN;
    let mut halves = f64::NAN;
    for n in 6..=14usize {
        let s = sweep_toffoli_counts(n, 16).map_err(|e| e.to_string())?;
        maxes.push((n, s.max_toffoli));
        mins.push((n, s.min_odd_t.unwrap()));
        if n == 10 {
            r10 = self_similarity(&s);
            let half = s.rows.len() / 2;
            let count = |r: &[diagsynth::costmodel::SweepRow]| r.iter().map(|r| r.toffoli_count as f64).collect::<Vec<_>>();
            halves = pearson(&count(&s.rows[1..half]), &count(&s.rows[half + 1..]));
        }
    }
    let beta = fit_beta(&maxes);
    let a = fit_m_slope(&mins);
    let diag = format!(
        "beta {beta:.3} (vs {REFERENCE_BETA}, {:+.0}%), a {a:.1} (vs {REFERENCE_M_SLOPE}, {:+.0}%), n=10 r(l, 2^n-l) {r10:.3}, r(l, l+2^(n-1)) {halves:.3}",
        100.0 * (beta / REFERENCE_BETA - 1.0),
        100.0 * (a / REFERENCE_M_SLOPE - 1.0)
    );
    ensure((beta / REFERENCE_BETA - 1.0).abs() <= 0.4, || format!("beta outside 40%: {diag}"))?;
    ensure((a / REFERENCE_M_SLOPE - 1.0).abs() <= 0.4, || format!("a outside 40%: {diag}"))?;
    ensure(r10 >= 0.5, || format!("no self-similarity: {diag}"))?;
    Ok(diag)
}

fn pcd_total(n: usize, ell: u64, eps: f64) -> f64 {
    let dim = 1u64 << n;
    let d = DiagonalSpec::from_blocks(
        n,
        vec![Block { theta: 0.0, len: dim - ell }, Block { theta: 0.7, len: ell }],
    )
    .unwrap();
    let opts = SynthesisOptions {
        eps,
        method: MethodRequest::Pcd,
        rot: SynthesizerConfig::with_mode(RotationMode::CostOnly),
        verify: false,
        ..Default::default()
    };
    synthesize(&d, &opts).unwrap().cost.total_t
}

fn c11_phase_sparse() -> Outcome {
    let eps = 1e-10;
    let mut lines = Vec::new();
    let mut failed = Vec::new();
    for n in 4..=10usize {
        let walsh = (1u64 << n) as f64 * cost_estimate(eps, DEFAULT_C0);
        let pcd = pcd_total(n, 1, eps);
        let ratio = walsh / pcd;
        let need = (1u64 << (n - 2)) as f64;
        lines.push(format!("n={n}: {ratio:.1}/{need}"));
        if ratio < need {
            failed.push(n);
        }
    }
    let n = 10;
    let dim = 1u64 << n;
    let walsh = dim as f64 * cost_estimate(eps, DEFAULT_C0);
    let passing = (1..dim)
        .filter(|&ell| walsh / pcd_total(n, ell, eps) >= (dim / 4) as f64)
        .count();
    let diag = format!(
        "single marked entry, ratio/required: {}; n=10 all tails: {passing}/{} meet the bar",
        lines.join(", "),
        dim - 1
    );
    ensure(failed.is_empty(), || format!("{diag}; short at n = {failed:?}"))?;
    Ok(diag)
}

fn main() -> ExitCode {
    let criteria: [Criterion; 11] = [
        ("bsb correctness", c1_bsb, 1),
        ("control-level counts", c2_levels, 1),
        ("Toffoli/T formulas", c3_toffoli_counts, 10),
        ("7-T Toffoli", c4_seven_t, 1),
        ("paired-entangler peepholes", c5_peepholes, 5),
        ("entangler semantics", c6_semantics, 300),
        ("end-to-end exactness", c7_exactness, 300),
        ("eps honesty", c8_eps_honesty, 300),
        ("decision boundary", c9_boundary, 10),
        ("sweep fits and self-similarity", c10_sweeps, 600),
        ("phase-sparse advantage", c11_phase_sparse, 60),
    ];
    let mut failures = 0;
    for (i, (name, f, budget)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = f();
        let took = start.elapsed();
        let over = took > Duration::from_secs(*budget);
        let (verdict, diag) = match (&outcome, over) {
            (Ok(d), false) => ("PASS", d.clone()),
            (Ok(d), true) => ("FAIL", format!("{d}; over the {budget} s budget")),
            (Err(d), _) => ("FAIL", d.clone()),
        };
        if verdict == "FAIL" {
            failures += 1;
        }
        println!("criterion {:2} {verdict} {name} [{:.2} s]: {diag}", i + 1, took.as_secs_f64());
    }
    println!("{} of 11 criteria passed", 11 - failures);
    if failures == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
