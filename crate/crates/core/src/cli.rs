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

//! Command-line front end: `synth`, `sweep`, `decide` and `verify`.
//!
//! Exit codes: 0 success, 2 bad input, 3 synthesis failure or limit
//! exceeded, 4 verification failure.

use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::circuit::{parse_circuit, to_qasm, Circuit};
use crate::costmodel::{self, decision_csv, decision_grid, sweep_csv, sweep_toffoli_counts};
use crate::error::Error;
use crate::phase_context::DiagonalSpec;
use crate::rotsynth::{RotationMode, SynthesizerConfig};
use crate::synthesis::{measure, synthesize, MethodRequest, SynthesisOptions, SynthesisResult};

pub const EXIT_OK: i32 = 0;
pub const EXIT_INPUT: i32 = 2;
pub const EXIT_SYNTHESIS: i32 = 3;
pub const EXIT_VERIFY: i32 = 4;

/// Tolerance of `verify` when rotations are exact.
pub const EXACT_VERIFY_TOLERANCE: f64 = 1e-8;

#[derive(Debug, Parser)]
#[command(name = "diagsynth", version, about = "Clifford+T synthesis of diagonal unitaries")]
pub struct Cli {
    #[command(flatten)]
    pub shared: Shared,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Args)]
pub struct Shared {
    /// Target precision.
    #[arg(long, global = true, default_value_t = 1e-10)]
    pub eps: f64,
    #[arg(long, global = true, value_enum, default_value_t = MethodArg::Auto)]
    pub method: MethodArg,
    #[arg(long, global = true, value_enum, default_value_t = RotArg::Exact)]
    pub rot: RotArg,
    /// Rotation cost constant in `C0 log2(1/eps)`.
    #[arg(long, global = true, default_value_t = costmodel::DEFAULT_C0)]
    pub c0: f64,
    /// Worst-case entanglement constant in `kappa n^2`.
    #[arg(long, global = true, default_value_t = costmodel::DEFAULT_KAPPA)]
    pub kappa: f64,
    /// Widest circuit that is simulated.
    #[arg(long, global = true, default_value_t = crate::circuit::DEFAULT_DENSE_LIMIT)]
    pub dense_limit: usize,
    /// Output file; standard output when absent.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum MethodArg {
    Auto,
    Walsh,
    Pcd,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum RotArg {
    Exact,
    Brute,
    Cost,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Emit {
    Text,
    Qasm,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Synthesize a circuit from a JSON diagonal specification.
    Synth {
        spec: PathBuf,
        /// Cost report destination; standard error when absent.
        #[arg(long)]
        report: Option<PathBuf>,
        #[arg(long, value_enum, default_value_t = Emit::Text)]
        emit: Emit,
        /// Simulate the circuit against the target.
        #[arg(long)]
        verify: bool,
    },
    /// Toffoli and T counts of every cascaded entangler on `n` qubits, as CSV.
    Sweep {
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = costmodel::DEFAULT_SWEEP_LIMIT)]
        limit: usize,
    },
    /// Decision-boundary grid as CSV. Ranges are `lo:hi` or `lo:hi:step`.
    Decide {
        #[arg(long)]
        n: String,
        /// Range of `log10(1/eps)`.
        #[arg(long)]
        eps_range: String,
        #[arg(long)]
        k_range: String,
    },
    /// Check a circuit file against a JSON diagonal specification.
    Verify { circuit: PathBuf, spec: PathBuf },
}

/// Failure carrying its exit code.
#[derive(Debug)]
pub struct Failure {
    pub code: i32,
    pub message: String,
}

impl Failure {
    fn input(message: impl Into<String>) -> Self {
        Failure {
            code: EXIT_INPUT,
            message: message.into(),
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::MalformedSpec(_)
            | Error::Parse { .. }
            | Error::LengthNotPowerOfTwo(_)
            | Error::DimensionMismatch(..)
            | Error::NonpositiveEpsilon(_)
            | Error::EpsilonOutOfRange(_)
            | Error::InvalidArgument(_) => EXIT_INPUT,
            Error::VerificationFailed { .. } | Error::AncillaNotRestored(_) => EXIT_VERIFY,
            _ => EXIT_SYNTHESIS,
        };
        Failure {
            code,
            message: e.to_string(),
        }
    }
}

type CliResult<T> = std::result::Result<T, Failure>;

/// Parses `args` and runs the command. Returns the process exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_INPUT } else { EXIT_OK };
            let _ = e.print();
            return code;
        }
    };
    match execute(&cli) {
        Ok(()) => EXIT_OK,
        Err(f) => {
            eprintln!("error: {}", f.message);
            f.code
        }
    }
}

pub fn execute(cli: &Cli) -> CliResult<()> {
    validate_shared(&cli.shared)?;
    match &cli.command {
        Command::Synth {
            spec,
            report,
            emit,
            verify,
        } => cmd_synth(&cli.shared, spec, report.as_deref(), *emit, *verify),
        Command::Sweep { n, limit } => cmd_sweep(&cli.shared, *n, *limit),
        Command::Decide {
            n,
            eps_range,
            k_range,
        } => cmd_decide(&cli.shared, n, eps_range, k_range),
        Command::Verify { circuit, spec } => cmd_verify(&cli.shared, circuit, spec),
    }
}

fn validate_shared(s: &Shared) -> CliResult<()> {
    if !(s.eps >= 0.0 && s.eps < 1.0) {
        return Err(Failure::input(format!("--eps must lie in [0, 1), got {}", s.eps)));
    }
    if s.rot != RotArg::Exact && s.eps == 0.0 {
        return Err(Failure::input("--eps must be positive for approximate rotations"));
    }
    if !(s.c0 > 0.0 && s.c0.is_finite()) {
        return Err(Failure::input(format!("--c0 must be positive, got {}", s.c0)));
    }
    if !(s.kappa >= 0.0 && s.kappa.is_finite()) {
        return Err(Failure::input(format!("--kappa must be nonnegative, got {}", s.kappa)));
    }
    Ok(())
}

fn rotation_config(s: &Shared) -> SynthesizerConfig {
    let mode = match s.rot {
        RotArg::Exact => RotationMode::ExactRz,
        RotArg::Brute => RotationMode::BruteForce,
        RotArg::Cost => RotationMode::CostOnly,
    };
    SynthesizerConfig {
        c0: s.c0,
        ..SynthesizerConfig::with_mode(mode)
    }
}

fn read(path: &Path) -> CliResult<String> {
    fs::read_to_string(path).map_err(|e| Failure::input(format!("{}: {e}", path.display())))
}

fn read_spec(path: &Path) -> CliResult<DiagonalSpec> {
    Ok(DiagonalSpec::from_json(&read(path)?)?)
}

fn write_to(path: Option<&Path>, text: &str, fallback_stdout: bool) -> CliResult<()> {
    match path {
        Some(p) => fs::write(p, text)
            .map_err(|e| Failure::input(format!("{}: {e}", p.display()))),
        None if fallback_stdout => {
            std::io::stdout()
                .write_all(text.as_bytes())
                .map_err(|e| Failure::input(e.to_string()))
        }
        None => {
            eprint!("{text}");
            Ok(())
        }
    }
}

fn fmt_float(x: f64) -> String {
    if x.is_finite() {
        format!("{x:.11e}")
    } else {
        "null".into()
    }
}

/// JSON cost report with fixed float formatting.
pub fn report_json(r: &SynthesisResult) -> String {
    format!(
        "{{\"method\":\"{}\",\"rotations\":{},\"entanglement_t\":{},\"total_t\":{},\"width\":{},\"deviation\":{}}}\n",
        r.cost.method.as_str(),
        r.cost.rotation_count,
        r.cost.entanglement_t,
        fmt_float(r.cost.total_t),
        r.cost.width,
        fmt_float(r.verification.deviation),
    )
}

fn cmd_synth(s: &Shared, spec: &Path, report: Option<&Path>, emit: Emit, verify: bool) -> CliResult<()> {
    let d = read_spec(spec)?;
    let opts = SynthesisOptions {
        eps: s.eps,
        method: match s.method {
            MethodArg::Auto => MethodRequest::Auto,
            MethodArg::Walsh => MethodRequest::Walsh,
            MethodArg::Pcd => MethodRequest::Pcd,
        },
        rot: rotation_config(s),
        dense_limit: s.dense_limit,
        verify: verify && s.rot != RotArg::Cost,
        ..Default::default()
    };
    let result = synthesize(&d, &opts)?;
    let body = match emit {
        Emit::Text => result.circuit.to_text(),
        Emit::Qasm => to_qasm(&result.circuit)?,
    };
    write_to(s.out.as_deref(), &body, true)?;
    write_to(report, &report_json(&result), false)
}

fn cmd_sweep(s: &Shared, n: usize, limit: usize) -> CliResult<()> {
    let sweep = sweep_toffoli_counts(n, limit)?;
    write_to(s.out.as_deref(), &sweep_csv(&sweep), true)?;
    let min_odd = sweep
        .min_odd_t
        .map_or_else(|| "none".to_string(), |m| m.to_string());
    let beta = sweep.max_toffoli as f64 / (n * n) as f64;
    eprintln!(
        "n={n} max_toffoli={} min_odd_t={min_odd} beta={beta:.11e}",
        sweep.max_toffoli
    );
    Ok(())
}

/// Parses `lo:hi` or `lo:hi:step` into an inclusive list.
pub fn parse_range(text: &str) -> CliResult<Vec<f64>> {
    let bad = || Failure::input(format!("invalid range {text:?}"));
    let parts: Vec<f64> = text
        .split(':')
        .map(|p| p.trim().parse::<f64>().map_err(|_| bad()))
        .collect::<CliResult<_>>()?;
    let (lo, hi, step) = match parts[..] {
        [v] => (v, v, 1.0),
        [lo, hi] => (lo, hi, 1.0),
        [lo, hi, step] => (lo, hi, step),
        _ => return Err(bad()),
    };
    if !(lo.is_finite() && hi.is_finite() && step > 0.0 && lo <= hi) {
        return Err(bad());
    }
    let count = ((hi - lo) / step + 1e-9).floor() as usize + 1;
    if count > 1_000_000 {
        return Err(bad());
    }
    Ok((0..count).map(|i| lo + i as f64 * step).collect())
}

fn integer_range(text: &str, min: usize) -> CliResult<Vec<usize>> {
    parse_range(text)?
        .into_iter()
        .map(|v| {
            if v.fract() == 0.0 && v >= min as f64 {
                Ok(v as usize)
            } else {
                Err(Failure::input(format!("range {text:?} needs integers >= {min}")))
            }
        })
        .collect()
}

fn cmd_decide(s: &Shared, n: &str, eps_range: &str, k_range: &str) -> CliResult<()> {
    let ns = integer_range(n, 1)?;
    if ns.iter().any(|&n| n > 62) {
        return Err(Failure::input("--n must be at most 62"));
    }
    let ks = integer_range(k_range, 1)?;
    let es = parse_range(eps_range)?;
    if es.iter().any(|&e| e <= 0.0) {
        return Err(Failure::input("--eps-range holds log10(1/eps) and must be positive"));
    }
    let rows = decision_grid(&ns, &ks, &es, s.c0, s.kappa)?;
    write_to(s.out.as_deref(), &decision_csv(&rows), true)
}

fn cmd_verify(s: &Shared, circuit: &Path, spec: &Path) -> CliResult<()> {
    let c: Circuit = parse_circuit(&read(circuit)?)?;
    let d = read_spec(spec)?;
    if c.width() != d.n() + c.ancillas().len() {
        return Err(Failure::input(format!(
            "circuit has {} qubits with {} ancillas, spec needs {} register qubits",
            c.width(),
            c.ancillas().len(),
            d.n()
        )));
    }
    let tolerance = if s.rot == RotArg::Exact {
        EXACT_VERIFY_TOLERANCE
    } else {
        s.eps
    };
    let v = measure(&c, &d, s.dense_limit)?;
    let worst = v.deviation.max(v.leakage + v.pruned);
    let verdict = if worst <= tolerance { "PASS" } else { "FAIL" };
    let line = format!(
        "deviation={} leakage={} tolerance={} {verdict}\n",
        fmt_float(v.deviation),
        fmt_float(v.leakage),
        fmt_float(tolerance)
    );
    write_to(s.out.as_deref(), &line, true)?;
    if verdict == "PASS" {
        Ok(())
    } else {
        Err(Failure {
            code: EXIT_VERIFY,
            message: format!("deviation {worst:e} exceeds {tolerance:e}"),
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ranges() {
        assert_eq!(parse_range("1:3").unwrap(), [1.0, 2.0, 3.0]);
        assert_eq!(parse_range("2:3:0.5").unwrap(), [2.0, 2.5, 3.0]);
        assert_eq!(parse_range("7").unwrap(), [7.0]);
        for bad in ["3:1", "a:b", "1:2:0", "1:2:3:4", ""] {
            assert!(parse_range(bad).is_err(), "{bad}");
        }
        assert!(integer_range("1.5:3", 1).is_err());
        assert!(integer_range("0:3", 1).is_err());
    }

    #[test]
    fn exit_codes_by_error() {
        assert_eq!(Failure::from(Error::MalformedSpec("x".into())).code, EXIT_INPUT);
        assert_eq!(Failure::from(Error::AncillaNotRestored(1.0)).code, EXIT_VERIFY);
        assert_eq!(Failure::from(Error::SweepLimitExceeded { n: 20, limit: 16 }).code, EXIT_SYNTHESIS);
    }

    #[test]
    fn bad_flags_are_input_errors() {
        assert_eq!(run(["diagsynth", "--eps", "2", "sweep", "--n", "3"]), EXIT_INPUT);
        assert_eq!(run(["diagsynth", "synth"]), EXIT_INPUT);
        assert_eq!(run(["diagsynth", "sweep", "--n", "20"]), EXIT_SYNTHESIS);
    }
}
