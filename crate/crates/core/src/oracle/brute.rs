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

//! Exhaustive margin-of-victory search for small elections.
//!
//! Iterative deepening over the number of changed votes `t`. At level `t`
//! every sub-multiset of `t` cast ballots is paired with every multiset of
//! `t` replacement ballots drawn from the full ballot universe (`m!`
//! rankings or `2^m` approval sets). The first level at which some pair
//! changes the winner set is the margin of victory, and the pair found
//! first in lexicographic order is reported as the witness.

use crate::error::{Error, Result};
use crate::profile::{Ballot, Profile};
use crate::rules::{winner_set, Rule};
use rayon::prelude::*;
use std::collections::HashMap;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BruteForceOptions {
    /// Largest number of changed votes to try.
    pub budget: u32,
    /// Maximum number of winner evaluations across all levels.
    pub work_limit: u64,
}

impl Default for BruteForceOptions {
    fn default() -> Self {
        BruteForceOptions {
            budget: 8,
            work_limit: 50_000_000,
        }
    }
}

/// One changed vote: the profile entry a ballot is taken from and what it
/// becomes.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Replacement {
    /// Index into the profile's stored `(ballot, multiplicity)` entries.
    pub vote: usize,
    pub ballot: Ballot,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum MovStatus {
    Exact(u64),
    ExceedsBudget(u32),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExactMovResult {
    pub status: MovStatus,
    /// Empty unless the status is `Exact`.
    pub witness: Vec<Replacement>,
}

impl ExactMovResult {
    pub fn value(&self) -> Option<u64> {
        match self.status {
            MovStatus::Exact(v) => Some(v),
            MovStatus::ExceedsBudget(_) => None,
        }
    }
}

/// Replays `changes` on `profile`. Each replacement removes one copy of the
/// referenced entry's ballot and adds the new ballot.
pub fn apply_replacements(profile: &Profile, changes: &[Replacement]) -> Result<Profile> {
    let mut entries = profile.entries();
    for change in changes {
        let entry = entries
            .get_mut(change.vote)
            .ok_or_else(|| Error::input(format!("no vote entry {}", change.vote)))?;
        if entry.1 == 0 {
            return Err(Error::input(format!(
                "vote entry {} changed more often than it occurs",
                change.vote
            )));
        }
        entry.1 -= 1;
        entries.push((change.ballot.clone(), 1));
    }
    Ok(profile.with_entries(entries)?.canonical())
}

pub fn mov_brute_force(profile: &Profile, rule: &Rule, options: &BruteForceOptions) -> Result<ExactMovResult> {
    if options.budget == 0 {
        return Err(Error::input("budget must be at least 1"));
    }
    let original = winner_set(profile, rule)?.winners;
    let universe = profile.ballot_universe();
    let index: HashMap<&Ballot, usize> = universe.iter().enumerate().map(|(i, b)| (b, i)).collect();
    let mut base = vec![0u64; universe.len()];
    for (ballot, count) in profile.entries() {
        base[index[&ballot]] += count;
    }

    let changes_winners = |removed: &[usize], added: &[usize]| -> Result<bool> {
        let mut counts = base.clone();
        for &r in removed {
            counts[r] -= 1;
        }
        for &a in added {
            counts[a] += 1;
        }
        let modified = profile.with_entries(universe.iter().cloned().zip(counts))?;
        Ok(winner_set(&modified, rule)?.winners != original)
    };

    let mut work = 0u64;
    for level in 1..=options.budget {
        let removals = bounded_multisets(&base, level as usize);
        if removals.is_empty() {
            break;
        }
        let additions = bounded_multisets(&vec![u64::MAX; universe.len()], level as usize);
        let needed = (removals.len() as u64).saturating_mul(additions.len() as u64);
        work = work.saturating_add(needed);
        if work > options.work_limit {
            return Err(Error::WorkLimit {
                limit: options.work_limit,
                level,
                needed,
            });
        }
        let found = removals
            .par_iter()
            .map(|removed| -> Result<Option<(Vec<usize>, Vec<usize>)>> {
                for added in &additions {
                    if shares_element(removed, added) {
                        continue;
                    }
                    if changes_winners(removed, added)? {
                        return Ok(Some((removed.clone(), added.clone())));
                    }
                }
                Ok(None)
            })
            .find_map_first(|r| match r {
                Ok(None) => None,
                other => Some(other),
            });
        if let Some(hit) = found {
            let (removed, added) = hit?.expect("only hits are kept");
            let witness = build_witness(profile, &universe, &removed, &added);
            return Ok(ExactMovResult {
                status: MovStatus::Exact(level as u64),
                witness,
            });
        }
    }
    Ok(ExactMovResult {
        status: MovStatus::ExceedsBudget(options.budget),
        witness: Vec::new(),
    })
}

/// Maps universe-level removals back onto profile entries, in order.
pub(crate) fn build_witness(
    profile: &Profile,
    universe: &[Ballot],
    removed: &[usize],
    added: &[usize],
) -> Vec<Replacement> {
    let mut remaining: Vec<(Ballot, u64)> = profile.entries();
    removed
        .iter()
        .zip(added)
        .map(|(&r, &a)| {
            let vote = remaining
                .iter()
                .position(|(b, c)| *c > 0 && *b == universe[r])
                .expect("removed ballot is present in the profile");
            remaining[vote].1 -= 1;
            Replacement {
                vote,
                ballot: universe[a].clone(),
            }
        })
        .collect()
}

/// All non-decreasing index sequences of length `size` using index `i` at
/// most `caps[i]` times, in lexicographic order.
fn bounded_multisets(caps: &[u64], size: usize) -> Vec<Vec<usize>> {
    fn rec(caps: &[u64], size: usize, start: usize, current: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if current.len() == size {
            out.push(current.clone());
            return;
        }
        for i in start..caps.len() {
            let used = current.iter().rev().take_while(|&&c| c == i).count() as u64;
            if used >= caps[i] {
                continue;
            }
            current.push(i);
            rec(caps, size, i, current, out);
            current.pop();
        }
    }
    let mut out = Vec::new();
    rec(caps, size, 0, &mut Vec::with_capacity(size), &mut out);
    out
}

fn shares_element(a: &[usize], b: &[usize]) -> bool {
    let (mut i, mut j) = (0, 0);
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            std::cmp::Ordering::Less => i += 1,
            std::cmp::Ordering::Greater => j += 1,
            std::cmp::Ordering::Equal => return true,
        }
    }
    false
}
