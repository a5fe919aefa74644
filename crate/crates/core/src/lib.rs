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

//! Clifford+T synthesis of diagonal unitaries.

pub mod circuit;
pub mod cli;
pub mod costmodel;
pub mod entangler;
pub mod error;
pub mod phase_context;
pub mod rotsynth;
pub mod synthesis;
pub mod walsh;

pub use error::{Error, Result};
