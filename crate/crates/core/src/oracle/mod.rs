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

//! Ground truth for the margin of victory: exhaustive search, closed forms,
//! structural quantities and sandwich bounds.

mod bounds;
mod brute;
mod certify;
mod ilp;
mod structure;

pub use bounds::{
    closed_form_mov, mov_approval_closed_form, mov_bounds, mov_kapproval_closed_form, BoundSource, MovBounds,
};
pub use brute::{apply_replacements, mov_brute_force, BruteForceOptions, ExactMovResult, MovStatus, Replacement};
pub use certify::{certify_mov, Certificate};
pub use ilp::{mov_ilp, IlpOptions};
pub(crate) use structure::bucklin_delta_with;
pub use structure::{
    bucklin_delta, copeland_gamma, copeland_gap_in, relative_margin, relative_margin_in, shifted_copeland_score,
    CopelandGap,
};
