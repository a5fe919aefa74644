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

use thiserror::Error;

/// Every failure mode of the toolkit.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("gate {gate} is invalid: {reason}")]
    InvalidGate { gate: String, reason: String },
    #[error("gate {0} is not a classical reversible gate")]
    NonPermutationGate(String),
    #[error("circuit width {width} exceeds the dense simulation limit {limit}")]
    WidthLimitExceeded { width: usize, limit: usize },
    #[error("dimension mismatch: {0:?} vs {1:?}")]
    DimensionMismatch((usize, usize), (usize, usize)),
    #[error("basis state has {got} bits, circuit width is {width}")]
    StateLengthMismatch { got: usize, width: usize },
    #[error("vector length {0} is not a power of two")]
    LengthNotPowerOfTwo(usize),
    #[error("diagonal specification is malformed: {0}")]
    MalformedSpec(String),
    #[error("ell = {ell} is outside [0, 2^{n}]")]
    EllOutOfRange { n: usize, ell: u64 },
    #[error("interval [{p}, {q}) is not inside [0, 2^{n}]")]
    IntervalOutOfRange { n: usize, p: u64, q: u64 },
    #[error("{needed} free qubits are needed to lower a {controls}-control gate, {available} available")]
    InsufficientFreeQubits {
        controls: usize,
        needed: usize,
        available: usize,
    },
    #[error("no word with at most {max_t} T gates approximates the rotation to {epsilon}")]
    PrecisionUnreachable { max_t: usize, epsilon: f64 },
    #[error("precision must be positive, got {0}")]
    NonpositiveEpsilon(f64),
    #[error("precision must lie in (0, 1), got {0}")]
    EpsilonOutOfRange(f64),
    #[error("budget split needs at least two phases, got k = {0}")]
    KTooSmall(usize),
    #[error("sweep over n = {n} exceeds the limit {limit}")]
    SweepLimitExceeded { n: usize, limit: usize },
    #[error("ancilla subspace not restored: off-block amplitude {0:e}")]
    AncillaNotRestored(f64),
    #[error("verification failed: deviation {deviation:e} exceeds tolerance {tolerance:e}")]
    VerificationFailed { deviation: f64, tolerance: f64 },
    #[error("parse error on line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("{0}")]
    InvalidArgument(String),
}

pub type Result<T> = std::result::Result<T, Error>;
