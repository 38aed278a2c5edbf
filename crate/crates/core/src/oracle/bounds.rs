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

//! Sandwich bounds on the margin of victory that hold at any scale.
//!
//! With a unique winner `w` and runner-up `z` (gap `g = s(w) − s(z)`):
//!
//! | rule        | lower                  | upper                      |
//! |-------------|------------------------|----------------------------|
//! | scoring     | `g / (2α₁)`            | `g / α₁ + 1`               |
//! | k-approval  | `g / 2`                | `g / 2 + 1` (exclusive)    |
//! | approval    | `g / 2`                | `g / 2 + 1` (exclusive)    |
//! | Bucklin     | majority-flip count    | `Δ`                        |
//! | maximin     | `g / 4`                | `g / 2`                    |
//! | Copeland^α  | `Γ`                    | `2(⌈log₂ m⌉ + 1)·Γ`        |
//!
//! Scoring vectors are normalized first. The Bucklin lower bound counts the
//! votes needed for some `x` to reach a strict majority at a level `L`
//! while `w` loses its majority at `L − 1`; a created tie already changes
//! the winner set, so `Δ / 2` is not a valid lower bound in general.
//!
//! When the winner set is already tied, a single change that lowers (or
//! raises) the canonical winner alone suffices for every rule except
//! Bucklin and Copeland, whose tied upper bounds come from `Δ` and from the
//! pairwise margin between the first two co-winners respectively.

use crate::error::{Error, Result};
use crate::oracle::structure::{bucklin_delta_with, copeland_gap_in};
use crate::profile::{ApprovalProfile, Candidate, Profile, RankedProfile};
use crate::rational::{ceil_log2, ceil_u64, floor_u64, int, ratio, Rational};
use crate::rules::{
    approval_scores, pairwise_matrix, positional_scores, ranked_winner_set, top_k_counts, top_two, winner_set, Rule,
    TopCounts,
};
use num_traits::{One, Signed};
use std::fmt;

/// Which argument produced a [`MovBounds`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BoundSource {
    ScoringGap,
    KApprovalGap,
    ApprovalGap,
    BucklinDelta,
    MaximinGap,
    CopelandRelativeMargin,
    TiedWinners,
}

impl fmt::Display for BoundSource {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            BoundSource::ScoringGap => "scoring score-gap lemma",
            BoundSource::KApprovalGap => "k-approval favorable-vote lemma",
            BoundSource::ApprovalGap => "approval favorable-ballot lemma",
            BoundSource::BucklinDelta => "Bucklin majority-gap lemma",
            BoundSource::MaximinGap => "maximin score-gap lemma",
            BoundSource::CopelandRelativeMargin => "Copeland relative-margin lemma",
            BoundSource::TiedWinners => "tied winner set",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MovBounds {
    pub lower: Rational,
    /// `None` means unbounded (the `Δ = +∞` case).
    pub upper: Option<Rational>,
    /// The upper end is excluded from the interval.
    pub upper_open: bool,
    pub source: BoundSource,
}

impl MovBounds {
    fn closed(lower: Rational, upper: Rational, source: BoundSource) -> Self {
        MovBounds {
            lower,
            upper: Some(upper),
            upper_open: false,
            source,
        }
    }

    fn tied(upper: Option<Rational>) -> Self {
        MovBounds {
            lower: Rational::one(),
            upper,
            upper_open: false,
            source: BoundSource::TiedWinners,
        }
    }

    /// Integer interval implied by the bounds, using `MoV ≥ 1`.
    pub fn integer_range(&self) -> (u64, Option<u64>) {
        let lower = ceil_u64(&self.lower).max(1);
        let upper = self.upper.as_ref().map(|u| {
            if self.upper_open && u.is_integer() {
                floor_u64(u).saturating_sub(1)
            } else {
                floor_u64(u)
            }
        });
        (lower, upper)
    }

    pub fn contains(&self, mov: u64) -> bool {
        let value = int(mov as i64);
        if value < self.lower {
            return false;
        }
        match &self.upper {
            None => true,
            Some(u) if self.upper_open => value < *u,
            Some(u) => value <= *u,
        }
    }
}

/// Margin of victory under k-approval when the winner is unique:
/// `⌈g/2⌉`, the only integer in `[g/2, g/2 + 1)`.
pub fn mov_kapproval_closed_form(profile: &RankedProfile, k: usize) -> Result<u64> {
    let rule = Rule::KApproval(k);
    rule.validate(profile.m())?;
    let top = top_k_counts(profile);
    let scores: Vec<u64> = (0..profile.m()).map(|x| top.get(k, x)).collect();
    closed_form_from_scores(&scores)
}

/// Margin of victory under approval voting when the winner is unique.
pub fn mov_approval_closed_form(profile: &ApprovalProfile) -> Result<u64> {
    closed_form_from_scores(&approval_scores(profile))
}

/// Dispatches to the k-approval or approval closed form.
pub fn closed_form_mov(profile: &Profile, rule: &Rule) -> Result<u64> {
    match (profile, rule) {
        (Profile::Ranked(p), Rule::KApproval(k)) => mov_kapproval_closed_form(p, *k),
        (Profile::Approval(p), Rule::Approval) => mov_approval_closed_form(p),
        _ => Err(Error::NotApplicable(format!(
            "no closed form for rule {rule} on this profile"
        ))),
    }
}

fn closed_form_from_scores(scores: &[u64]) -> Result<u64> {
    if scores.len() < 2 {
        return Err(Error::input("margin of victory needs at least two candidates"));
    }
    let (w, z) = top_two(scores);
    let gap = scores[w] - scores[z.expect("two candidates")];
    if gap == 0 {
        return Err(Error::NotApplicable(
            "winner is tied; use the brute-force oracle".into(),
        ));
    }
    Ok(gap.div_ceil(2))
}

/// Least number of changes for some `x ≠ w` to reach a Bucklin level no
/// worse than `w`'s, assuming `w` is the unique winner.
pub(crate) fn bucklin_majority_flip_bound(
    m: usize,
    winner: Candidate,
    count: impl Fn(usize, Candidate) -> u64,
    n: u64,
) -> u64 {
    let half = n / 2;
    let mut best = u64::MAX;
    for x in (0..m).filter(|&x| x != winner) {
        for level in 1..=m {
            let raise = (half + 1).saturating_sub(count(level, x));
            let drop = if level >= 2 {
                count(level - 1, winner).saturating_sub(half)
            } else {
                0
            };
            best = best.min(raise.max(drop));
        }
    }
    best.max(1)
}

fn bucklin_bounds(profile: &RankedProfile) -> MovBounds {
    let outcome = ranked_winner_set(profile, &Rule::Bucklin).expect("Bucklin accepts any ranked profile");
    let top: TopCounts = top_k_counts(profile);
    let n = profile.n();
    let m = profile.m();
    let w = outcome.winners[0];
    let count = |level: usize, x: Candidate| top.get(level, x);
    let delta = bucklin_delta_with(m, w, count, n).map(|d| int(d as i64));
    if outcome.winners.len() > 1 {
        return MovBounds::tied(delta);
    }
    let lower = bucklin_majority_flip_bound(m, w, count, n);
    MovBounds {
        lower: int(lower as i64),
        upper: delta,
        upper_open: false,
        source: BoundSource::BucklinDelta,
    }
}

fn gap_of(scores: &[Rational]) -> Rational {
    let (w, z) = top_two(scores);
    &scores[w] - &scores[z.expect("two candidates")]
}

/// Lower and upper bounds on the margin of victory of `profile` under `rule`.
pub fn mov_bounds(profile: &Profile, rule: &Rule) -> Result<MovBounds> {
    let outcome = winner_set(profile, rule)?;
    if profile.m() < 2 {
        return Err(Error::input("margin of victory needs at least two candidates"));
    }
    let tied = outcome.winners.len() > 1;
    let bounds = match (profile, rule) {
        (Profile::Ranked(p), Rule::Scoring(alpha)) => {
            if tied {
                MovBounds::tied(Some(Rational::one()))
            } else {
                let alpha = alpha.normalized();
                let gap = gap_of(&positional_scores(p, &alpha)?);
                let top = alpha.top().clone();
                MovBounds::closed(&gap / (int(2) * &top), &gap / &top + int(1), BoundSource::ScoringGap)
            }
        }
        (Profile::Ranked(_), Rule::KApproval(_)) | (Profile::Approval(_), Rule::Approval) => {
            if tied {
                MovBounds::tied(Some(Rational::one()))
            } else {
                let half_gap = gap_of(&outcome.scores) * ratio(1, 2);
                MovBounds {
                    upper: Some(&half_gap + int(1)),
                    lower: half_gap,
                    upper_open: true,
                    source: if rule.is_approval() {
                        BoundSource::ApprovalGap
                    } else {
                        BoundSource::KApprovalGap
                    },
                }
            }
        }
        (Profile::Ranked(p), Rule::Bucklin) => bucklin_bounds(p),
        (Profile::Ranked(_), Rule::Maximin) => {
            if tied {
                MovBounds::tied(Some(Rational::one()))
            } else {
                let gap = gap_of(&outcome.scores);
                MovBounds::closed(&gap * ratio(1, 4), &gap * ratio(1, 2), BoundSource::MaximinGap)
            }
        }
        (Profile::Ranked(p), Rule::Copeland(alpha)) => {
            let d = pairwise_matrix(p);
            if tied {
                let (w, z) = (outcome.winners[0], outcome.winners[1]);
                MovBounds::tied(Some(int(d.get(w, z).abs() / 2 + 1)))
            } else {
                let gamma = copeland_gap_in(&d.to_margins(), p.n(), alpha)?.gamma;
                let factor = 2 * (ceil_log2(p.m()) as i64 + 1);
                MovBounds::closed(
                    int(gamma as i64),
                    int(factor * gamma as i64),
                    BoundSource::CopelandRelativeMargin,
                )
            }
        }
        _ => unreachable!("winner_set rejects mismatched profile kinds"),
    };
    debug_assert!(bounds.upper.as_ref().is_none_or(|u| bounds.lower <= *u));
    debug_assert!(!bounds.lower.is_negative());
    Ok(bounds)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::profile::{ApprovalBallot, Ranking};
    use crate::rules::ScoreVector;

    fn ranked(m: usize, votes: &[(&[usize], u64)]) -> RankedProfile {
        RankedProfile::new(
            m,
            None,
            votes
                .iter()
                .map(|(o, c)| (Ranking::new(o.to_vec()).unwrap(), *c))
                .collect(),
        )
        .unwrap()
    }

    #[test]
    fn kapproval_closed_form_examples() {
        assert_eq!(
            mov_kapproval_closed_form(&ranked(2, &[(&[0, 1], 3), (&[1, 0], 1)]), 1).unwrap(),
            1
        );
        assert_eq!(mov_kapproval_closed_form(&ranked(2, &[(&[0, 1], 4)]), 1).unwrap(), 2);
        // g = 1
        assert_eq!(
            mov_kapproval_closed_form(&ranked(2, &[(&[0, 1], 2), (&[1, 0], 1)]), 1).unwrap(),
            1
        );
        assert!(matches!(
            mov_kapproval_closed_form(&ranked(2, &[(&[0, 1], 1), (&[1, 0], 1)]), 1),
            Err(Error::NotApplicable(_))
        ));
        assert!(mov_kapproval_closed_form(&ranked(2, &[(&[0, 1], 1)]), 2).is_err());
    }

    #[test]
    fn approval_closed_form() {
        let b = |s: &[usize]| ApprovalBallot::new(2, s.iter().copied()).unwrap();
        let p = ApprovalProfile::new(2, None, vec![(b(&[0]), 3), (b(&[1]), 1)]).unwrap();
        assert_eq!(mov_approval_closed_form(&p).unwrap(), 1);
    }

    #[test]
    fn maximin_bounds_example() {
        let p: Profile = ranked(3, &[(&[0, 1, 2], 3), (&[1, 2, 0], 2)]).into();
        let b = mov_bounds(&p, &Rule::Maximin).unwrap();
        assert_eq!((b.lower.clone(), b.upper.clone()), (ratio(1, 2), Some(int(1))));
        assert_eq!(b.integer_range(), (1, Some(1)));
    }

    #[test]
    fn bucklin_bounds_example() {
        let p: Profile = ranked(3, &[(&[0, 1, 2], 1), (&[0, 2, 1], 1), (&[1, 0, 2], 1)]).into();
        let b = mov_bounds(&p, &Rule::Bucklin).unwrap();
        assert_eq!(b.upper, Some(int(2)));
        assert!(b.contains(1));
        assert_eq!(b.integer_range(), (1, Some(2)));
    }

    #[test]
    fn bucklin_created_tie_undercuts_half_delta() {
        // w≻x≻y ×3, y≻w≻x ×3: w alone reaches a majority at level 2 and
        // Δ = 4, yet moving one y≻w≻x to y≻x≻w lifts x to a level-2 majority.
        let p: Profile = ranked(3, &[(&[0, 1, 2], 3), (&[2, 0, 1], 3)]).into();
        let b = mov_bounds(&p, &Rule::Bucklin).unwrap();
        assert_eq!(b.upper, Some(int(4)));
        assert_eq!(b.integer_range().0, 1);
    }

    #[test]
    fn copeland_bounds_example() {
        let p: Profile = ranked(3, &[(&[0, 1, 2], 2), (&[1, 2, 0], 1)]).into();
        let b = mov_bounds(&p, &Rule::Copeland(ratio(1, 2))).unwrap();
        assert_eq!((b.lower, b.upper), (int(1), Some(int(6))));
    }

    #[test]
    fn scoring_bounds_use_normalized_vector() {
        let p: Profile = ranked(3, &[(&[0, 1, 2], 3), (&[1, 0, 2], 1)]).into();
        let raw = Rule::Scoring(ScoreVector::from_integers(&[7, 4, 1]).unwrap());
        let norm = Rule::Scoring(ScoreVector::borda(3).unwrap());
        assert_eq!(mov_bounds(&p, &raw).unwrap(), mov_bounds(&p, &norm).unwrap());
        // Borda scores 7 and 5: g = 2, α₁ = 2.
        let b = mov_bounds(&p, &norm).unwrap();
        assert_eq!((b.lower, b.upper), (ratio(1, 2), Some(int(2))));
    }

    #[test]
    fn open_upper_end_is_excluded() {
        let p: Profile = ranked(2, &[(&[0, 1], 3), (&[1, 0], 1)]).into();
        let b = mov_bounds(&p, &Rule::KApproval(1)).unwrap();
        assert!(b.contains(1));
        assert!(!b.contains(2));
        assert_eq!(b.integer_range(), (1, Some(1)));
    }

    #[test]
    fn bucklin_infinite_delta_propagates() {
        let p: Profile = ranked(2, &[(&[0, 1], 1), (&[1, 0], 1)]).into();
        let b = mov_bounds(&p, &Rule::Bucklin).unwrap();
        assert_eq!(b.upper, None);
        assert_eq!(b.source, BoundSource::TiedWinners);
    }
}
