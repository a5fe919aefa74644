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

//! Python bindings for the diagsynth core crate.

use pyo3::exceptions::{PyRuntimeError, PyValueError};
use pyo3::prelude::*;

use ::diagsynth as core;
use core::costmodel;
use core::entangler::{self, PlanMode};
use core::phase_context::DiagonalSpec;
use core::rotsynth::{RotationMode, SynthesizerConfig};
use core::synthesis::{self, MethodRequest, SynthesisOptions};
use core::Error;

fn to_py(e: Error) -> PyErr {
    match e {
        Error::MalformedSpec(_)
        | Error::Parse { .. }
        | Error::LengthNotPowerOfTwo(_)
        | Error::DimensionMismatch(..)
        | Error::NonpositiveEpsilon(_)
        | Error::EpsilonOutOfRange(_)
        | Error::EllOutOfRange { .. }
        | Error::IntervalOutOfRange { .. }
        | Error::InvalidArgument(_) => PyValueError::new_err(e.to_string()),
        _ => PyRuntimeError::new_err(e.to_string()),
    }
}

#[pyclass(name = "Circuit", frozen, skip_from_py_object)]
#[derive(Clone)]
struct PyCircuit(core::circuit::Circuit);

#[pymethods]
impl PyCircuit {
    #[staticmethod]
    fn parse(text: &str) -> PyResult<Self> {
        core::circuit::parse_circuit(text).map(PyCircuit).map_err(to_py)
    }

    #[getter]
    fn width(&self) -> usize {
        self.0.width()
    }

    #[getter]
    fn ancillas(&self) -> Vec<usize> {
        self.0.ancillas().iter().copied().collect()
    }

    fn __len__(&self) -> usize {
        self.0.len()
    }

    fn t_count(&self) -> usize {
        self.0.t_count()
    }

    fn rz_count(&self) -> usize {
        self.0.rz_count()
    }

    fn to_text(&self) -> String {
        self.0.to_text()
    }

    fn to_qasm(&self) -> PyResult<String> {
        core::circuit::to_qasm(&self.0).map_err(to_py)
    }

    fn __repr__(&self) -> String {
        format!("Circuit(width={}, gates={}, t_count={})", self.0.width(), self.0.len(), self.0.t_count())
    }
}

#[pyclass(name = "DiagonalSpec", frozen, skip_from_py_object)]
#[derive(Clone)]
struct PyDiagonalSpec(DiagonalSpec);

#[pymethods]
impl PyDiagonalSpec {
    #[staticmethod]
    fn from_json(text: &str) -> PyResult<Self> {
        DiagonalSpec::from_json(text).map(PyDiagonalSpec).map_err(to_py)
    }

    #[staticmethod]
    fn from_phases(phases: Vec<f64>) -> PyResult<Self> {
        DiagonalSpec::from_phases(phases).map(PyDiagonalSpec).map_err(to_py)
    }

    #[getter]
    fn n(&self) -> usize {
        self.0.n()
    }

    fn phases(&self) -> Vec<f64> {
        self.0.phases()
    }

    fn to_json(&self) -> String {
        self.0.to_json()
    }
}

#[pyclass(name = "SynthesisResult", frozen, get_all)]
struct PySynthesisResult {
    circuit: PyCircuit,
    method: String,
    rotations: usize,
    rotation_t: f64,
    entanglement_t: usize,
    total_t: f64,
    width: usize,
    deviation: Option<f64>,
}

#[pymethods]
impl PySynthesisResult {
    fn __repr__(&self) -> String {
        format!(
            "SynthesisResult(method={:?}, rotations={}, entanglement_t={}, total_t={:.3})",
            self.method, self.rotations, self.entanglement_t, self.total_t
        )
    }
}

fn parse_method(s: &str) -> PyResult<MethodRequest> {
    match s {
        "auto" => Ok(MethodRequest::Auto),
        "walsh" => Ok(MethodRequest::Walsh),
        "pcd" => Ok(MethodRequest::Pcd),
        _ => Err(PyValueError::new_err(format!("unknown method {s:?}"))),
    }
}

fn parse_rot(s: &str) -> PyResult<RotationMode> {
    match s {
        "exact" => Ok(RotationMode::ExactRz),
        "brute" => Ok(RotationMode::BruteForce),
        "cost" => Ok(RotationMode::CostOnly),
        _ => Err(PyValueError::new_err(format!("unknown rotation mode {s:?}"))),
    }
}

/// Synthesizes `diag(exp(i f_k))` into a Clifford+T circuit.
#[pyfunction]
#[pyo3(signature = (spec, eps=1e-10, method="auto", rot="exact", c0=costmodel::DEFAULT_C0, verify=true))]
fn synthesize(
    py: Python<'_>,
    spec: &PyDiagonalSpec,
    eps: f64,
    method: &str,
    rot: &str,
    c0: f64,
    verify: bool,
) -> PyResult<PySynthesisResult> {
    let opts = SynthesisOptions {
        eps,
        method: parse_method(method)?,
        rot: SynthesizerConfig {
            c0,
            ..SynthesizerConfig::with_mode(parse_rot(rot)?)
        },
        verify,
        ..Default::default()
    };
    let d = spec.0.clone();
    let r = py.detach(|| synthesis::synthesize(&d, &opts)).map_err(to_py)?;
    let deviation = r.verification.deviation;
    Ok(PySynthesisResult {
        method: r.cost.method.as_str().to_string(),
        rotations: r.cost.rotation_count,
        rotation_t: r.cost.rotation_t_estimate,
        entanglement_t: r.cost.entanglement_t,
        total_t: r.cost.total_t,
        width: r.cost.width,
        deviation: deviation.is_finite().then_some(deviation),
        circuit: PyCircuit(r.circuit),
    })
}

/// Max-entry deviation of `circuit` from `spec` on the ancilla-|0> block.
#[pyfunction]
#[pyo3(signature = (circuit, spec, dense_limit=core::circuit::DEFAULT_DENSE_LIMIT))]
fn verify(circuit: &PyCircuit, spec: &PyDiagonalSpec, dense_limit: usize) -> PyResult<f64> {
    synthesis::verify(&circuit.0, &spec.0, dense_limit).map_err(to_py)
}

/// Signed-bit expansion of `ell` as `(sign, power)` pairs, lowest power first.
#[pyfunction]
fn bsb(ell: u64) -> Vec<(i8, u32)> {
    entangler::bsb(ell).terms().to_vec()
}

/// Control patterns of the factors of `X^n(ell)`, highest power first.
#[pyfunction]
#[pyo3(signature = (n, ell, mode="bsb"))]
fn factor_xn(n: usize, ell: u64, mode: &str) -> PyResult<Vec<String>> {
    let mode = match mode {
        "bsb" => PlanMode::Bsb,
        "binary" => PlanMode::Binary,
        _ => return Err(PyValueError::new_err(format!("unknown mode {mode:?}"))),
    };
    let plan = entangler::factor_xn(n, ell, mode).map_err(to_py)?;
    Ok(plan.factors.iter().map(|f| f.pattern_string()).collect())
}

/// Lowered `{X, CNOT, Toffoli}` circuit of the cheaper cascaded entangler.
#[pyfunction]
fn ced(n: usize, ell: u64) -> PyResult<PyCircuit> {
    entangler::ced(n, ell).map(PyCircuit).map_err(to_py)
}

#[pyfunction]
fn walsh_transform(phases: Vec<f64>) -> PyResult<Vec<f64>> {
    core::walsh::walsh_transform(&phases).map(|w| w.a).map_err(to_py)
}

/// T-count of the cheapest paired entangler for a tail of length `ell`.
#[pyfunction]
fn entanglement_cost(n: usize, ell: u64) -> PyResult<usize> {
    costmodel::entanglement_cost(n, ell).map_err(to_py)
}

#[pyfunction]
#[pyo3(signature = (n, eps, c0=costmodel::DEFAULT_C0, kappa=costmodel::DEFAULT_KAPPA))]
fn worst_case_boundary(n: usize, eps: f64, c0: f64, kappa: f64) -> PyResult<f64> {
    costmodel::worst_case_boundary(n, eps, c0, kappa).map_err(to_py)
}

#[pyfunction]
#[pyo3(signature = (n, eps, c0=costmodel::DEFAULT_C0))]
fn best_case_boundary(n: usize, eps: f64, c0: f64) -> PyResult<f64> {
    costmodel::best_case_boundary(n, eps, c0).map_err(to_py)
}

/// `(ell, toffoli_count, t_count)` rows for every `ell < 2^n`.
#[pyfunction]
fn sweep(py: Python<'_>, n: usize) -> PyResult<Vec<(u64, usize, usize)>> {
    let s = py
        .detach(|| costmodel::sweep_toffoli_counts(n, costmodel::DEFAULT_SWEEP_LIMIT))
        .map_err(to_py)?;
    Ok(s.rows.iter().map(|r| (r.ell, r.toffoli_count, r.t_count)).collect())
}

#[pymodule]
fn diagsynth(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyCircuit>()?;
    m.add_class::<PyDiagonalSpec>()?;
    m.add_class::<PySynthesisResult>()?;
    m.add_function(wrap_pyfunction!(synthesize, m)?)?;
    m.add_function(wrap_pyfunction!(verify, m)?)?;
    m.add_function(wrap_pyfunction!(bsb, m)?)?;
    m.add_function(wrap_pyfunction!(factor_xn, m)?)?;
    m.add_function(wrap_pyfunction!(ced, m)?)?;
    m.add_function(wrap_pyfunction!(walsh_transform, m)?)?;
    m.add_function(wrap_pyfunction!(entanglement_cost, m)?)?;
    m.add_function(wrap_pyfunction!(worst_case_boundary, m)?)?;
    m.add_function(wrap_pyfunction!(best_case_boundary, m)?)?;
    m.add_function(wrap_pyfunction!(sweep, m)?)?;
    Ok(())
}
