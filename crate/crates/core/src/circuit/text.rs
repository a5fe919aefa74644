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

//! Line-oriented text format and an OpenQASM 2.0 export.
//!
//! ```text
//! QUBITS 8
//! ANCILLAS [6,7]
//! GPHASE theta=1.96349540849e-1
//! MCX ctrls=[0,1,2] pattern=101 target=6
//! RZ q=6 theta=3.92699081699e-1
//! T q=3
//! ```

use std::fmt::Write;

use super::{fmt_angle, Circuit, Gate};
use crate::error::{Error, Result};

pub(super) fn write_circuit(c: &Circuit) -> String {
    let mut out = String::new();
    writeln!(out, "QUBITS {}", c.width()).unwrap();
    if !c.ancillas().is_empty() {
        let list: Vec<String> = c.ancillas().iter().map(|q| q.to_string()).collect();
        writeln!(out, "ANCILLAS [{}]", list.join(",")).unwrap();
    }
    for g in c.gates() {
        writeln!(out, "{g}").unwrap();
    }
    out
}

fn parse_list(s: &str) -> Option<Vec<usize>> {
    let inner = s.strip_prefix('[')?.strip_suffix(']')?;
    if inner.trim().is_empty() {
        return Some(Vec::new());
    }
    inner.split(',').map(|t| t.trim().parse().ok()).collect()
}

/// Parses the text produced by [`Circuit::to_text`]. Blank lines and lines
/// starting with `#` are ignored.
pub fn parse_circuit(text: &str) -> Result<Circuit> {
    let mut circuit: Option<Circuit> = None;
    for (i, raw) in text.lines().enumerate() {
        let line_no = i + 1;
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let err = |message: String| Error::Parse {
            line: line_no,
            message,
        };
        let head = line.split_whitespace().next().unwrap();

        if head == "QUBITS" {
            let width = line
                .split_whitespace()
                .nth(1)
                .and_then(|w| w.parse().ok())
                .ok_or_else(|| err("QUBITS needs a width".into()))?;
            circuit = Some(Circuit::new(width));
            continue;
        }
        let c = circuit
            .as_mut()
            .ok_or_else(|| err("QUBITS header must come first".into()))?;
        if head == "ANCILLAS" {
            let list = line
                .split_whitespace()
                .nth(1)
                .and_then(parse_list)
                .ok_or_else(|| err("ANCILLAS needs a list".into()))?;
            for q in list {
                c.add_ancilla(q).map_err(|e| err(e.to_string()))?;
            }
            continue;
        }
        let parts = line.split_whitespace().skip(1);
        let fields: Vec<(&str, &str)> = parts
            .map(|p| p.split_once('=').ok_or_else(|| err(format!("expected key=value, got {p:?}"))))
            .collect::<Result<_>>()?;
        let field = |key: &str| {
            fields
                .iter()
                .find(|(k, _)| *k == key)
                .map(|(_, v)| *v)
                .ok_or_else(|| err(format!("{head} is missing {key}=")))
        };
        let qubit = |key: &str| -> Result<usize> {
            field(key)?
                .parse()
                .map_err(|_| err(format!("bad qubit index for {key}")))
        };
        let angle = || -> Result<f64> {
            field("theta")?
                .parse()
                .map_err(|_| err("bad angle".to_string()))
        };

        let gate = match head {
            "X" => Gate::X(qubit("q")?),
            "H" => Gate::H(qubit("q")?),
            "S" => Gate::S(qubit("q")?),
            "SDG" => Gate::Sdg(qubit("q")?),
            "T" => Gate::T(qubit("q")?),
            "TDG" => Gate::Tdg(qubit("q")?),
            "Z" => Gate::Z(qubit("q")?),
            "RZ" => Gate::rz(qubit("q")?, angle()?),
            "GPHASE" => Gate::GlobalPhase(angle()?),
            "CNOT" => Gate::cnot(qubit("ctrl")?, qubit("target")?),
            "TOFFOLI" => {
                let ctrls = parse_list(field("ctrls")?)
                    .filter(|v| v.len() == 2)
                    .ok_or_else(|| err("TOFFOLI needs two controls".into()))?;
                Gate::toffoli(ctrls[0], ctrls[1], qubit("target")?)
            }
            "MCX" => {
                let controls =
                    parse_list(field("ctrls")?).ok_or_else(|| err("bad control list".into()))?;
                let pattern = field("pattern")?
                    .chars()
                    .map(|ch| match ch {
                        '0' => Ok(false),
                        '1' => Ok(true),
                        _ => Err(err(format!("bad pattern bit {ch:?}"))),
                    })
                    .collect::<Result<Vec<bool>>>()?;
                Gate::Mcx {
                    controls,
                    pattern,
                    target: qubit("target")?,
                }
            }
            other => return Err(err(format!("unknown gate {other}"))),
        };
        c.push(gate).map_err(|e| err(e.to_string()))?;
    }
    circuit.ok_or(Error::Parse {
        line: 0,
        message: "empty circuit text".into(),
    })
}

/// OpenQASM 2.0 rendering. MCX gates must be lowered beforehand; global
/// phases become comments.
pub fn to_qasm(c: &Circuit) -> Result<String> {
    let mut out = String::from("OPENQASM 2.0;\ninclude \"qelib1.inc\";\n");
    writeln!(out, "qreg q[{}];", c.width()).unwrap();
    for g in c.gates() {
        let line = match g {
            Gate::X(q) => format!("x q[{q}];"),
            Gate::H(q) => format!("h q[{q}];"),
            Gate::S(q) => format!("s q[{q}];"),
            Gate::Sdg(q) => format!("sdg q[{q}];"),
            Gate::T(q) => format!("t q[{q}];"),
            Gate::Tdg(q) => format!("tdg q[{q}];"),
            Gate::Z(q) => format!("z q[{q}];"),
            Gate::Rz { qubit, theta } => format!("rz({}) q[{qubit}];", fmt_angle(*theta)),
            Gate::GlobalPhase(theta) => format!("// gphase {}", fmt_angle(*theta)),
            Gate::Cnot { control, target } => format!("cx q[{control}],q[{target}];"),
            Gate::Toffoli { controls, target } => {
                format!("ccx q[{}],q[{}],q[{target}];", controls[0], controls[1])
            }
            Gate::Mcx { .. } => {
                return Err(Error::InvalidArgument(
                    "lower MCX gates before QASM export".into(),
                ))
            }
        };
        out.push_str(&line);
        out.push('\n');
    }
    Ok(out)
}
