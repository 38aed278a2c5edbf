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

//! Margin-of-victory computation and sampling-based estimation for
//! single-winner voting rules.

pub mod error;
pub mod estimators;
pub mod experiment;
pub mod generation;
pub mod io;
pub mod oracle;
pub mod profile;
pub mod rational;
pub mod rules;

pub use error::{Error, Result};
pub use profile::{ApprovalBallot, ApprovalProfile, Ballot, Candidate, Profile, RankedProfile, Ranking};
pub use rational::Rational;
pub use rules::{winner_set, Outcome, Rule, RuleKind, RuleSpec, ScoreVector};
