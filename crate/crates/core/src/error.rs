// Copyright 2026 The movest Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

use thiserror::Error;

/// Errors produced by the toolkit.
#[derive(Error, Debug, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("invalid score vector: {0}")]
    InvalidScoreVector(String),
    #[error("dimension mismatch: expected {expected}, got {actual}")]
    Dimension { expected: usize, actual: usize },
    #[error("invalid input: {0}")]
    Input(String),
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    /// The brute-force search would exceed its configured number of
    /// winner evaluations. Distinct from running out of change budget.
    #[error("work limit of {limit} evaluations exceeded (level {level} needs {needed})")]
    WorkLimit { limit: u64, level: u32, needed: u64 },
    #[error("not applicable: {0}")]
    NotApplicable(String),
}

impl Error {
    pub(crate) fn input(msg: impl Into<String>) -> Self {
        Error::Input(msg.into())
    }

    pub(crate) fn parse(line: usize, msg: impl Into<String>) -> Self {
        Error::Parse {
            line,
            message: msg.into(),
        }
    }

    /// True for errors caused by exhausting a computational resource rather
    /// than by bad input.
    pub fn is_resource(&self) -> bool {
        matches!(self, Error::WorkLimit { .. })
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
