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

//! Exact margins of victory for elections too large for exhaustive search.
//!
//! A certificate pairs the sound lower bound from [`mov_bounds`] with a
//! concrete modification found by greedy descent: at each step, try every
//! single-vote replacement; stop as soon as one changes the winner set,
//! otherwise apply the one that lowers the lower bound the most. The
//! modification is an upper bound, so when both ends meet the margin is
//! known exactly.

use crate::error::Result;
use crate::oracle::bounds::mov_bounds;
use crate::oracle::brute::{build_witness, Replacement};
use crate::profile::{Ballot, Profile};
use crate::rational::Rational;
use crate::rules::{winner_set, Rule};
use std::collections::HashMap;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Certificate {
    pub lower: u64,
    /// Size of the modification found, if the search succeeded in time.
    pub upper: Option<u64>,
    /// The modification realizing `upper`, relative to the original profile.
    pub witness: Vec<Replacement>,
}

impl Certificate {
    pub fn exact(&self) -> Option<u64> {
        (self.upper == Some(self.lower)).then_some(self.lower)
    }
}

pub fn certify_mov(profile: &Profile, rule: &Rule, max_steps: u64) -> Result<Certificate> {
    let original = winner_set(profile, rule)?.winners;
    let lower = mov_bounds(profile, rule)?.integer_range().0;
    let universe = profile.ballot_universe();
    let index: HashMap<&Ballot, usize> = universe.iter().enumerate().map(|(i, b)| (b, i)).collect();
    let mut base = vec![0u64; universe.len()];
    for (ballot, count) in profile.entries() {
        base[index[&ballot]] += count;
    }

    let mut counts = base.clone();
    let build = |counts: &[u64]| profile.with_entries(universe.iter().cloned().zip(counts.iter().copied()));

    for _ in 0..max_steps {
        let mut best: Option<(Rational, usize, usize)> = None;
        let present: Vec<usize> = (0..universe.len()).filter(|&i| counts[i] > 0).collect();
        for from in present {
            for to in (0..universe.len()).filter(|&j| j != from) {
                counts[from] -= 1;
                counts[to] += 1;
                let modified = build(&counts)?;
                let changed = winner_set(&modified, rule)?.winners != original;
                let potential = if changed {
                    None
                } else {
                    Some(mov_bounds(&modified, rule)?.lower)
                };
                counts[from] += 1;
                counts[to] -= 1;
                match potential {
                    None => {
                        counts[from] -= 1;
                        counts[to] += 1;
                        return Ok(finish(profile, &universe, &base, &counts, lower));
                    }
                    Some(p) => {
                        if best.as_ref().is_none_or(|(b, _, _)| p < *b) {
                            best = Some((p, from, to));
                        }
                    }
                }
            }
        }
        let Some((_, from, to)) = best else { break };
        counts[from] -= 1;
        counts[to] += 1;
    }
    Ok(Certificate {
        lower,
        upper: None,
        witness: Vec::new(),
    })
}

fn finish(profile: &Profile, universe: &[Ballot], base: &[u64], counts: &[u64], lower: u64) -> Certificate {
    let mut removed = Vec::new();
    let mut added = Vec::new();
    for i in 0..universe.len() {
        for _ in counts[i]..base[i] {
            removed.push(i);
        }
        for _ in base[i]..counts[i] {
            added.push(i);
        }
    }
    let witness = build_witness(profile, universe, &removed, &added);
    Certificate {
        lower,
        upper: Some(witness.len() as u64),
        witness,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracle::brute::apply_replacements;
    use crate::profile::{RankedProfile, Ranking};
    use crate::rational::ratio;

    fn ranked(m: usize, votes: &[(&[usize], u64)]) -> Profile {
        RankedProfile::new(
            m,
            None,
            votes
                .iter()
                .map(|(o, c)| (Ranking::new(o.to_vec()).unwrap(), *c))
                .collect(),
        )
        .unwrap()
        .into()
    }

    #[test]
    fn unanimous_maximin_is_half_n() {
        let p = ranked(3, &[(&[0, 1, 2], 40)]);
        let cert = certify_mov(&p, &Rule::Maximin, 100).unwrap();
        assert_eq!(cert.exact(), Some(20));
        let after = apply_replacements(&p, &cert.witness).unwrap();
        assert_ne!(
            winner_set(&after, &Rule::Maximin).unwrap().winners,
            winner_set(&p, &Rule::Maximin).unwrap().winners
        );
    }

    #[test]
    fn scaled_copeland_example() {
        // 2×(a≻b≻c) + 1×(b≻c≻a) scaled by 10: D(a,b) = 10, so 5 flips tie a and b.
        let p = ranked(3, &[(&[0, 1, 2], 20), (&[1, 2, 0], 10)]);
        let cert = certify_mov(&p, &Rule::Copeland(ratio(1, 2)), 100).unwrap();
        assert_eq!(cert.exact(), Some(5));
    }

    #[test]
    fn exhausted_search_reports_no_upper() {
        let p = ranked(2, &[(&[0, 1], 10)]);
        let cert = certify_mov(&p, &Rule::KApproval(1), 1).unwrap();
        assert_eq!(cert.upper, None);
        assert_eq!(cert.exact(), None);
    }
}
