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

//! Ballots and election profiles.
//!
//! Profiles store distinct ballots together with a positive multiplicity, so
//! a million-voter election over four candidates needs at most 24 entries.
//! Candidates are 0-based indices; labels are only used for display.

use crate::error::{Error, Result};
use std::collections::BTreeMap;
use std::fmt;

pub type Candidate = usize;

/// A complete strict order over `0..m`, most preferred first.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Ranking(Vec<Candidate>);

impl Ranking {
    pub fn new(order: Vec<Candidate>) -> Result<Self> {
        let m = order.len();
        let mut seen = vec![false; m];
        for &c in &order {
            if c >= m {
                return Err(Error::input(format!("candidate {c} out of range for {m} candidates")));
            }
            if std::mem::replace(&mut seen[c], true) {
                return Err(Error::input(format!("candidate {c} ranked twice")));
            }
        }
        Ok(Ranking(order))
    }

    pub fn identity(m: usize) -> Self {
        Ranking((0..m).collect())
    }

    pub fn order(&self) -> &[Candidate] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// `positions()[c]` is the 0-based rank of candidate `c`.
    pub fn positions(&self) -> Vec<usize> {
        let mut pos = vec![0; self.0.len()];
        for (i, &c) in self.0.iter().enumerate() {
            pos[c] = i;
        }
        pos
    }

    pub fn top(&self) -> Candidate {
        self.0[0]
    }

    /// All `m!` rankings in lexicographic order.
    pub fn all(m: usize) -> Vec<Ranking> {
        let mut out = Vec::new();
        let mut current: Vec<Candidate> = (0..m).collect();
        loop {
            out.push(Ranking(current.clone()));
            // next permutation
            let Some(i) = (1..m).rev().find(|&i| current[i - 1] < current[i]) else {
                break;
            };
            let j = (i..m).rev().find(|&j| current[j] > current[i - 1]).unwrap();
            current.swap(i - 1, j);
            current[i..].reverse();
        }
        out
    }

    fn relabeled(&self, perm: &[Candidate]) -> Ranking {
        Ranking(self.0.iter().map(|&c| perm[c]).collect())
    }
}

/// The set of candidates approved by one voter. Empty and full sets are valid.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ApprovalBallot(Vec<Candidate>);

impl ApprovalBallot {
    pub fn new(m: usize, approved: impl IntoIterator<Item = Candidate>) -> Result<Self> {
        let mut set: Vec<Candidate> = approved.into_iter().collect();
        set.sort_unstable();
        let before = set.len();
        set.dedup();
        if set.len() != before {
            return Err(Error::input("candidate approved twice"));
        }
        if let Some(&c) = set.iter().find(|&&c| c >= m) {
            return Err(Error::input(format!("candidate {c} out of range for {m} candidates")));
        }
        Ok(ApprovalBallot(set))
    }

    pub fn approved(&self) -> &[Candidate] {
        &self.0
    }

    pub fn contains(&self, c: Candidate) -> bool {
        self.0.binary_search(&c).is_ok()
    }

    /// All `2^m` approval sets, ordered by their bitmask.
    pub fn all(m: usize) -> Vec<ApprovalBallot> {
        (0u64..(1u64 << m))
            .map(|mask| ApprovalBallot((0..m).filter(|&c| mask >> c & 1 == 1).collect()))
            .collect()
    }

    fn relabeled(&self, perm: &[Candidate]) -> ApprovalBallot {
        let mut set: Vec<Candidate> = self.0.iter().map(|&c| perm[c]).collect();
        set.sort_unstable();
        ApprovalBallot(set)
    }
}

/// Either kind of ballot, used where code is generic over profile kinds.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Ballot {
    Ranked(Ranking),
    Approval(ApprovalBallot),
}

impl Ballot {
    /// Renders the ballot in election-file syntax using `label`.
    pub fn render(&self, label: impl Fn(Candidate) -> String) -> String {
        match self {
            Ballot::Ranked(r) => r.order().iter().map(|&c| label(c)).collect::<Vec<_>>().join(">"),
            Ballot::Approval(a) => format!(
                "{{{}}}",
                a.approved().iter().map(|&c| label(c)).collect::<Vec<_>>().join(",")
            ),
        }
    }
}

/// Label used for candidate `c` when a profile carries no names.
pub fn default_label(m: usize, c: Candidate) -> String {
    if m <= 26 {
        char::from(b'a' + c as u8).to_string()
    } else {
        c.to_string()
    }
}

fn check_common(m: usize, names: &Option<Vec<String>>, total: u64, entries: usize) -> Result<()> {
    if m == 0 {
        return Err(Error::input("at least one candidate is required"));
    }
    if let Some(names) = names {
        if names.len() != m {
            return Err(Error::Dimension {
                expected: m,
                actual: names.len(),
            });
        }
    }
    if entries == 0 || total == 0 {
        return Err(Error::input("profile has no votes"));
    }
    Ok(())
}

/// A multiset of complete rankings.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RankedProfile {
    m: usize,
    names: Option<Vec<String>>,
    votes: Vec<(Ranking, u64)>,
}

impl RankedProfile {
    pub fn new(m: usize, names: Option<Vec<String>>, votes: Vec<(Ranking, u64)>) -> Result<Self> {
        for (r, count) in &votes {
            if r.len() != m {
                return Err(Error::Dimension {
                    expected: m,
                    actual: r.len(),
                });
            }
            if *count == 0 {
                return Err(Error::input("multiplicities must be positive"));
            }
        }
        let total = votes.iter().map(|(_, c)| *c).sum();
        check_common(m, &names, total, votes.len())?;
        Ok(RankedProfile { m, names, votes })
    }

    /// Builds a profile from raw candidate orders, one vote each.
    pub fn from_orders(m: usize, orders: &[&[Candidate]]) -> Result<Self> {
        let votes = orders
            .iter()
            .map(|o| Ok((Ranking::new(o.to_vec())?, 1)))
            .collect::<Result<Vec<_>>>()?;
        Self::new(m, None, votes)
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn n(&self) -> u64 {
        self.votes.iter().map(|(_, c)| c).sum()
    }

    pub fn names(&self) -> Option<&[String]> {
        self.names.as_deref()
    }

    pub fn votes(&self) -> &[(Ranking, u64)] {
        &self.votes
    }

    pub fn label(&self, c: Candidate) -> String {
        label_of(self.m, &self.names, c)
    }

    /// Same multiset with identical ballots merged and sorted.
    pub fn canonical(&self) -> RankedProfile {
        RankedProfile {
            m: self.m,
            names: self.names.clone(),
            votes: merge(self.votes.iter().cloned()),
        }
    }

    /// Every ballot repeated `factor` times.
    pub fn scaled(&self, factor: u64) -> RankedProfile {
        assert!(factor > 0, "scale factor must be positive");
        RankedProfile {
            m: self.m,
            names: self.names.clone(),
            votes: self.votes.iter().map(|(r, c)| (r.clone(), c * factor)).collect(),
        }
    }

    /// Renames candidate `c` to `perm[c]` in every ballot.
    pub fn relabeled(&self, perm: &[Candidate]) -> Result<RankedProfile> {
        check_perm(self.m, perm)?;
        Ok(RankedProfile {
            m: self.m,
            names: self.names.as_ref().map(|names| permute_names(names, perm)),
            votes: self.votes.iter().map(|(r, c)| (r.relabeled(perm), *c)).collect(),
        })
    }
}

/// A multiset of approval ballots.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ApprovalProfile {
    m: usize,
    names: Option<Vec<String>>,
    votes: Vec<(ApprovalBallot, u64)>,
}

impl ApprovalProfile {
    pub fn new(m: usize, names: Option<Vec<String>>, votes: Vec<(ApprovalBallot, u64)>) -> Result<Self> {
        for (b, count) in &votes {
            if let Some(&c) = b.approved().iter().find(|&&c| c >= m) {
                return Err(Error::input(format!("candidate {c} out of range for {m} candidates")));
            }
            if *count == 0 {
                return Err(Error::input("multiplicities must be positive"));
            }
        }
        let total = votes.iter().map(|(_, c)| *c).sum();
        check_common(m, &names, total, votes.len())?;
        Ok(ApprovalProfile { m, names, votes })
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn n(&self) -> u64 {
        self.votes.iter().map(|(_, c)| c).sum()
    }

    pub fn names(&self) -> Option<&[String]> {
        self.names.as_deref()
    }

    pub fn votes(&self) -> &[(ApprovalBallot, u64)] {
        &self.votes
    }

    pub fn label(&self, c: Candidate) -> String {
        label_of(self.m, &self.names, c)
    }

    pub fn canonical(&self) -> ApprovalProfile {
        ApprovalProfile {
            m: self.m,
            names: self.names.clone(),
            votes: merge(self.votes.iter().cloned()),
        }
    }

    pub fn relabeled(&self, perm: &[Candidate]) -> Result<ApprovalProfile> {
        check_perm(self.m, perm)?;
        Ok(ApprovalProfile {
            m: self.m,
            names: self.names.as_ref().map(|names| permute_names(names, perm)),
            votes: self.votes.iter().map(|(b, c)| (b.relabeled(perm), *c)).collect(),
        })
    }
}

/// An election input of either kind.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Profile {
    Ranked(RankedProfile),
    Approval(ApprovalProfile),
}

impl Profile {
    pub fn m(&self) -> usize {
        match self {
            Profile::Ranked(p) => p.m(),
            Profile::Approval(p) => p.m(),
        }
    }

    pub fn n(&self) -> u64 {
        match self {
            Profile::Ranked(p) => p.n(),
            Profile::Approval(p) => p.n(),
        }
    }

    pub fn names(&self) -> Option<&[String]> {
        match self {
            Profile::Ranked(p) => p.names(),
            Profile::Approval(p) => p.names(),
        }
    }

    pub fn label(&self, c: Candidate) -> String {
        match self {
            Profile::Ranked(p) => p.label(c),
            Profile::Approval(p) => p.label(c),
        }
    }

    pub fn is_approval(&self) -> bool {
        matches!(self, Profile::Approval(_))
    }

    /// Distinct-entry view: `(ballot, multiplicity)` in storage order.
    pub fn entries(&self) -> Vec<(Ballot, u64)> {
        match self {
            Profile::Ranked(p) => p.votes().iter().map(|(r, c)| (Ballot::Ranked(r.clone()), *c)).collect(),
            Profile::Approval(p) => p
                .votes()
                .iter()
                .map(|(b, c)| (Ballot::Approval(b.clone()), *c))
                .collect(),
        }
    }

    /// Rebuilds a profile of the same kind and labels from `(ballot, count)`
    /// pairs. Zero counts are dropped.
    pub fn with_entries(&self, entries: impl IntoIterator<Item = (Ballot, u64)>) -> Result<Profile> {
        let names = self.names().map(|n| n.to_vec());
        let m = self.m();
        match self {
            Profile::Ranked(_) => {
                let votes = entries
                    .into_iter()
                    .filter(|(_, c)| *c > 0)
                    .map(|(b, c)| match b {
                        Ballot::Ranked(r) => Ok((r, c)),
                        Ballot::Approval(_) => Err(Error::input("approval ballot in ranked profile")),
                    })
                    .collect::<Result<Vec<_>>>()?;
                Ok(Profile::Ranked(RankedProfile::new(m, names, votes)?))
            }
            Profile::Approval(_) => {
                let votes = entries
                    .into_iter()
                    .filter(|(_, c)| *c > 0)
                    .map(|(b, c)| match b {
                        Ballot::Approval(a) => Ok((a, c)),
                        Ballot::Ranked(_) => Err(Error::input("ranked ballot in approval profile")),
                    })
                    .collect::<Result<Vec<_>>>()?;
                Ok(Profile::Approval(ApprovalProfile::new(m, names, votes)?))
            }
        }
    }

    pub fn canonical(&self) -> Profile {
        match self {
            Profile::Ranked(p) => Profile::Ranked(p.canonical()),
            Profile::Approval(p) => Profile::Approval(p.canonical()),
        }
    }

    /// Every possible ballot for this profile's kind and candidate count.
    pub fn ballot_universe(&self) -> Vec<Ballot> {
        match self {
            Profile::Ranked(p) => Ranking::all(p.m()).into_iter().map(Ballot::Ranked).collect(),
            Profile::Approval(p) => ApprovalBallot::all(p.m()).into_iter().map(Ballot::Approval).collect(),
        }
    }
}

impl From<RankedProfile> for Profile {
    fn from(p: RankedProfile) -> Self {
        Profile::Ranked(p)
    }
}

impl From<ApprovalProfile> for Profile {
    fn from(p: ApprovalProfile) -> Self {
        Profile::Approval(p)
    }
}

impl fmt::Display for Profile {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, (ballot, count)) in self.entries().iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{count}×{}", ballot.render(|c| self.label(c)))?;
        }
        Ok(())
    }
}

fn label_of(m: usize, names: &Option<Vec<String>>, c: Candidate) -> String {
    match names {
        Some(names) => names[c].clone(),
        None => default_label(m, c),
    }
}

fn merge<B: Ord>(votes: impl Iterator<Item = (B, u64)>) -> Vec<(B, u64)> {
    let mut merged: BTreeMap<B, u64> = BTreeMap::new();
    for (b, c) in votes {
        *merged.entry(b).or_default() += c;
    }
    merged.into_iter().collect()
}

fn check_perm(m: usize, perm: &[Candidate]) -> Result<()> {
    if perm.len() != m {
        return Err(Error::Dimension {
            expected: m,
            actual: perm.len(),
        });
    }
    Ranking::new(perm.to_vec()).map(|_| ())
}

fn permute_names(names: &[String], perm: &[Candidate]) -> Vec<String> {
    let mut out = names.to_vec();
    for (c, name) in names.iter().enumerate() {
        out[perm[c]] = name.clone();
    }
    out
}
