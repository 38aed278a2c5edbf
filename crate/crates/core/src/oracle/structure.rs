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

//! Polynomial-time structural quantities: the Bucklin gap `Δ` and the
//! Copeland relative margins `RM(x, y)` and `Γ`.

use crate::error::{Error, Result};
use crate::profile::{Candidate, RankedProfile};
use crate::rational::{int, Rational};
use crate::rules::{copeland_scores, pairwise_matrix, ranked_winner_set, top_two, Margins, Rule};

/// `Δ = min (n_ℓ(w) − n_ℓ(x) + 1)` over levels `ℓ < m` where the canonical
/// Bucklin winner `w` holds a strict majority and `x ≠ w` does not.
/// `None` stands for an empty feasible set (`Δ = +∞`).
pub fn bucklin_delta(profile: &RankedProfile) -> Option<u64> {
    let outcome = ranked_winner_set(profile, &Rule::Bucklin).expect("Bucklin accepts any ranked profile");
    let top = crate::rules::top_k_counts(profile);
    let n = profile.n();
    bucklin_delta_with(profile.m(), outcome.winners[0], |level, x| top.get(level, x), n)
}

pub(crate) fn bucklin_delta_with(
    m: usize,
    winner: Candidate,
    count: impl Fn(usize, Candidate) -> u64,
    n: u64,
) -> Option<u64> {
    let mut best: Option<u64> = None;
    for level in 1..m {
        let lead = count(level, winner);
        if 2 * lead <= n {
            continue;
        }
        for x in (0..m).filter(|&x| x != winner) {
            let other = count(level, x);
            if 2 * other <= n {
                let gap = lead - other + 1;
                best = Some(best.map_or(gap, |b| b.min(gap)));
            }
        }
    }
    best
}

/// `s′_t(z) = |{y ≠ z : D(y,z) < 2t}| + α·|{y ≠ z : D(y,z) = 2t}|`.
pub fn shifted_copeland_score(margins: &Margins, z: Candidate, t: i64, alpha: &Rational) -> Rational {
    let bar = int(2 * t);
    let mut below = 0i64;
    let mut at = 0i64;
    for y in (0..margins.m()).filter(|&y| y != z) {
        let d = margins.get(y, z);
        if *d < bar {
            below += 1;
        } else if *d == bar {
            at += 1;
        }
    }
    int(below) + alpha * int(at)
}

/// Least integer `t` with `s′_{−t}(x) ≤ s′_t(y)`.
///
/// The left side is non-increasing in `t` and the right side
/// non-decreasing, so the predicate is monotone and binary search over
/// `[−⌈n/2⌉−1, ⌈n/2⌉+1]` finds it. Margins must satisfy `|D| ≤ n`.
pub fn relative_margin_in(margins: &Margins, n: u64, x: Candidate, y: Candidate, alpha: &Rational) -> Result<i64> {
    if x == y {
        return Err(Error::input("relative margin needs two distinct candidates"));
    }
    let holds = |t: i64| shifted_copeland_score(margins, x, -t, alpha) <= shifted_copeland_score(margins, y, t, alpha);
    let reach = n.div_ceil(2) as i64 + 1;
    let (mut lo, mut hi) = (-reach, reach);
    debug_assert!(holds(hi));
    if holds(lo) {
        return Ok(lo);
    }
    // invariant: !holds(lo) && holds(hi)
    while hi - lo > 1 {
        let mid = lo + (hi - lo) / 2;
        if holds(mid) {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Ok(hi)
}

pub fn relative_margin(profile: &RankedProfile, x: Candidate, y: Candidate, alpha: &Rational) -> Result<i64> {
    let m = profile.m();
    if x >= m || y >= m {
        return Err(Error::input("candidate out of range"));
    }
    relative_margin_in(&pairwise_matrix(profile).to_margins(), profile.n(), x, y, alpha)
}

/// Copeland winner `w` (lowest index on ties), the opponent `z` minimizing
/// `RM(w, ·)`, and `Γ = max(0, RM(w, z))`.
///
/// `RM(w, x) ≤ 0` exactly when `x` ties `w` on Copeland score, so `Γ = 0`
/// if and only if the winner set is not a singleton.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CopelandGap {
    pub winner: Candidate,
    pub closest: Candidate,
    pub gamma: u64,
}

pub fn copeland_gap_in(margins: &Margins, n: u64, alpha: &Rational) -> Result<CopelandGap> {
    let m = margins.m();
    if m < 2 {
        return Err(Error::input("Γ needs at least two candidates"));
    }
    let (winner, _) = top_two(&copeland_scores(margins, alpha));
    let mut best: Option<(i64, Candidate)> = None;
    for x in (0..m).filter(|&x| x != winner) {
        let rm = relative_margin_in(margins, n, winner, x, alpha)?;
        if best.is_none_or(|(b, _)| rm < b) {
            best = Some((rm, x));
        }
    }
    let (rm, closest) = best.expect("m ≥ 2");
    Ok(CopelandGap {
        winner,
        closest,
        gamma: rm.max(0) as u64,
    })
}

pub fn copeland_gamma(profile: &RankedProfile, alpha: &Rational) -> Result<u64> {
    Rule::Copeland(alpha.clone()).validate(profile.m())?;
    copeland_gap_in(&pairwise_matrix(profile).to_margins(), profile.n(), alpha).map(|g| g.gamma)
}
