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

//! Voting rules, tallies and winner determination.
//!
//! All scores are exact. Wherever a single "best" candidate is needed the
//! lowest index wins ties, so every result is deterministic.

use crate::error::{Error, Result};
use crate::profile::{ApprovalProfile, Candidate, Profile, RankedProfile};
use crate::rational::{format_exact, int, is_unit_interval, parse_rational, Rational};
use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use std::fmt;
use std::str::FromStr;

/// A positional score vector `α_1 ≥ … ≥ α_m` with `α_1 > α_m`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ScoreVector {
    alphas: Vec<Rational>,
}

impl ScoreVector {
    pub fn new(alphas: Vec<Rational>) -> Result<Self> {
        if alphas.len() < 2 {
            return Err(Error::InvalidScoreVector("need at least two positions".into()));
        }
        if alphas.windows(2).any(|w| w[0] < w[1]) {
            return Err(Error::InvalidScoreVector("entries must be non-increasing".into()));
        }
        if alphas[0] == alphas[alphas.len() - 1] {
            return Err(Error::InvalidScoreVector("vector is constant".into()));
        }
        Ok(ScoreVector { alphas })
    }

    pub fn from_integers(values: &[i64]) -> Result<Self> {
        Self::new(values.iter().map(|&v| int(v)).collect())
    }

    /// `k` ones followed by zeros.
    pub fn k_approval(m: usize, k: usize) -> Result<Self> {
        if k == 0 || k >= m {
            return Err(Error::input(format!(
                "k must lie in [1, {}], got {k}",
                m.saturating_sub(1)
            )));
        }
        Self::new((0..m).map(|i| int((i < k) as i64)).collect())
    }

    pub fn borda(m: usize) -> Result<Self> {
        Self::new((0..m).rev().map(|i| int(i as i64)).collect())
    }

    pub fn alphas(&self) -> &[Rational] {
        &self.alphas
    }

    pub fn len(&self) -> usize {
        self.alphas.len()
    }

    pub fn is_empty(&self) -> bool {
        self.alphas.is_empty()
    }

    pub fn top(&self) -> &Rational {
        &self.alphas[0]
    }

    /// `α_m = 0` and the last positive entry equals 1.
    pub fn is_normalized(&self) -> bool {
        let last = &self.alphas[self.alphas.len() - 1];
        if !last.is_zero() {
            return false;
        }
        self.alphas
            .iter()
            .rev()
            .find(|a| a.is_positive())
            .is_some_and(|a| a.is_one())
    }

    /// The affinely equivalent normalized vector.
    pub fn normalized(&self) -> ScoreVector {
        let last = self.alphas[self.alphas.len() - 1].clone();
        let shifted: Vec<Rational> = self.alphas.iter().map(|a| a - &last).collect();
        let lambda = shifted
            .iter()
            .rev()
            .find(|a| a.is_positive())
            .cloned()
            .expect("non-constant vector has a positive entry after shifting");
        ScoreVector {
            alphas: shifted.into_iter().map(|a| a / &lambda).collect(),
        }
    }
}

/// Validates `raw` and returns its normalized form.
pub fn normalize_score_vector(raw: &[Rational]) -> Result<ScoreVector> {
    ScoreVector::new(raw.to_vec()).map(|v| v.normalized())
}

/// Antisymmetric matrix of pairwise margins `D(x,y) = N(x≻y) − N(y≻x)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PairwiseMatrix {
    m: usize,
    d: Vec<i64>,
}

impl PairwiseMatrix {
    pub fn m(&self) -> usize {
        self.m
    }

    pub fn get(&self, x: Candidate, y: Candidate) -> i64 {
        self.d[x * self.m + y]
    }

    pub fn to_margins(&self) -> Margins {
        Margins {
            m: self.m,
            values: self.d.iter().map(|&v| int(v)).collect(),
        }
    }
}

/// Rational-valued pairwise margins, used both for exact tallies and for
/// sampled estimates.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Margins {
    m: usize,
    values: Vec<Rational>,
}

impl Margins {
    pub fn from_fn(m: usize, f: impl Fn(Candidate, Candidate) -> Rational) -> Self {
        let mut values = Vec::with_capacity(m * m);
        for x in 0..m {
            for y in 0..m {
                values.push(f(x, y));
            }
        }
        Margins { m, values }
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn get(&self, x: Candidate, y: Candidate) -> &Rational {
        &self.values[x * self.m + y]
    }
}

/// A voting rule together with its parameters.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Rule {
    Scoring(ScoreVector),
    KApproval(usize),
    Approval,
    Bucklin,
    Maximin,
    /// Copeland^α with α in `[0, 1]`.
    Copeland(Rational),
}

/// Rule family without parameters.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum RuleKind {
    Scoring,
    KApproval,
    Approval,
    Bucklin,
    Maximin,
    Copeland,
}

impl Rule {
    pub fn kind(&self) -> RuleKind {
        match self {
            Rule::Scoring(_) => RuleKind::Scoring,
            Rule::KApproval(_) => RuleKind::KApproval,
            Rule::Approval => RuleKind::Approval,
            Rule::Bucklin => RuleKind::Bucklin,
            Rule::Maximin => RuleKind::Maximin,
            Rule::Copeland(_) => RuleKind::Copeland,
        }
    }

    /// Checks the rule's parameters against a candidate count.
    pub fn validate(&self, m: usize) -> Result<()> {
        match self {
            Rule::Scoring(alpha) if alpha.len() != m => Err(Error::Dimension {
                expected: m,
                actual: alpha.len(),
            }),
            Rule::KApproval(k) if *k == 0 || *k >= m => Err(Error::input(format!(
                "k-approval needs 1 ≤ k ≤ m−1 = {}, got k = {k}",
                m.saturating_sub(1)
            ))),
            Rule::Copeland(alpha) if !is_unit_interval(alpha) => Err(Error::input("Copeland α must lie in [0, 1]")),
            _ => Ok(()),
        }
    }

    pub fn is_approval(&self) -> bool {
        matches!(self, Rule::Approval)
    }
}

impl fmt::Display for Rule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Rule::Scoring(alpha) => {
                let parts: Vec<String> = alpha.alphas().iter().map(format_exact).collect();
                write!(f, "scoring:{}", parts.join(","))
            }
            Rule::KApproval(k) => write!(f, "kapproval:{k}"),
            Rule::Approval => write!(f, "approval"),
            Rule::Bucklin => write!(f, "bucklin"),
            Rule::Maximin => write!(f, "maximin"),
            Rule::Copeland(alpha) => write!(f, "copeland:{}", format_exact(alpha)),
        }
    }
}

impl fmt::Display for RuleKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let name = match self {
            RuleKind::Scoring => "scoring",
            RuleKind::KApproval => "kapproval",
            RuleKind::Approval => "approval",
            RuleKind::Bucklin => "bucklin",
            RuleKind::Maximin => "maximin",
            RuleKind::Copeland => "copeland",
        };
        f.write_str(name)
    }
}

impl FromStr for RuleKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "scoring" | "borda" => Ok(RuleKind::Scoring),
            "kapproval" | "k-approval" | "plurality" => Ok(RuleKind::KApproval),
            "approval" => Ok(RuleKind::Approval),
            "bucklin" => Ok(RuleKind::Bucklin),
            "maximin" => Ok(RuleKind::Maximin),
            "copeland" => Ok(RuleKind::Copeland),
            other => Err(Error::input(format!("unknown rule {other:?}"))),
        }
    }
}

/// A rule as written on the command line, before the candidate count is
/// known. `plurality` and `borda` only become score vectors once `m` is.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum RuleSpec {
    Plurality,
    Borda,
    KApproval(usize),
    Scoring(Vec<Rational>),
    Approval,
    Bucklin,
    Maximin,
    Copeland(Rational),
}

impl RuleSpec {
    pub fn resolve(&self, m: usize) -> Result<Rule> {
        let rule = match self {
            RuleSpec::Plurality => Rule::KApproval(1),
            RuleSpec::Borda => Rule::Scoring(ScoreVector::borda(m)?),
            RuleSpec::KApproval(k) => Rule::KApproval(*k),
            RuleSpec::Scoring(raw) => Rule::Scoring(ScoreVector::new(raw.clone())?),
            RuleSpec::Approval => Rule::Approval,
            RuleSpec::Bucklin => Rule::Bucklin,
            RuleSpec::Maximin => Rule::Maximin,
            RuleSpec::Copeland(alpha) => Rule::Copeland(alpha.clone()),
        };
        rule.validate(m)?;
        Ok(rule)
    }
}

impl FromStr for RuleSpec {
    type Err = Error;

    /// `plurality`, `borda`, `kapproval:K`, `scoring:a,b,...`, `approval`,
    /// `bucklin`, `maximin`, `copeland[:ALPHA]` (α defaults to 1/2).
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let (name, arg) = match s.split_once(':') {
            Some((name, arg)) => (name, Some(arg)),
            None => (s, None),
        };
        let need = |what: &str| Error::input(format!("rule {name:?} needs {what}"));
        let spec = match (name.to_ascii_lowercase().as_str(), arg) {
            ("plurality", None) => RuleSpec::Plurality,
            ("borda", None) => RuleSpec::Borda,
            ("kapproval" | "k-approval", Some(k)) => {
                RuleSpec::KApproval(k.trim().parse().map_err(|_| Error::input(format!("bad k {k:?}")))?)
            }
            ("kapproval" | "k-approval", None) => return Err(need("a k parameter")),
            ("scoring", Some(list)) => {
                RuleSpec::Scoring(list.split(',').map(parse_rational).collect::<Result<Vec<_>>>()?)
            }
            ("scoring", None) => return Err(need("a score vector")),
            ("approval", None) => RuleSpec::Approval,
            ("bucklin", None) => RuleSpec::Bucklin,
            ("maximin", None) => RuleSpec::Maximin,
            ("copeland", None) => RuleSpec::Copeland(Rational::new(1.into(), 2.into())),
            ("copeland", Some(alpha)) => RuleSpec::Copeland(parse_rational(alpha)?),
            _ => return Err(Error::input(format!("unknown rule {s:?}"))),
        };
        Ok(spec)
    }
}

/// `counts[x][i]`: how many votes place `x` at 0-based position `i`.
pub fn position_counts(profile: &RankedProfile) -> Vec<Vec<u64>> {
    let m = profile.m();
    let mut counts = vec![vec![0u64; m]; m];
    for (ranking, mult) in profile.votes() {
        for (i, &c) in ranking.order().iter().enumerate() {
            counts[c][i] += mult;
        }
    }
    counts
}

/// Total positional score of every candidate under `alpha`.
pub fn positional_scores(profile: &RankedProfile, alpha: &ScoreVector) -> Result<Vec<Rational>> {
    if alpha.len() != profile.m() {
        return Err(Error::Dimension {
            expected: profile.m(),
            actual: alpha.len(),
        });
    }
    Ok(position_counts(profile)
        .iter()
        .map(|row| {
            row.iter()
                .zip(alpha.alphas())
                .filter(|(&c, _)| c > 0)
                .map(|(&c, a)| a * Rational::from_integer(BigInt::from(c)))
                .sum()
        })
        .collect())
}

/// Number of ballots approving each candidate.
pub fn approval_scores(profile: &ApprovalProfile) -> Vec<u64> {
    let mut scores = vec![0u64; profile.m()];
    for (ballot, mult) in profile.votes() {
        for &c in ballot.approved() {
            scores[c] += mult;
        }
    }
    scores
}

/// `n_ℓ(x)`: number of votes ranking `x` within the top `ℓ` positions.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TopCounts {
    m: usize,
    counts: Vec<u64>,
}

impl TopCounts {
    /// Count for prefix length `level` in `1..=m`.
    pub fn get(&self, level: usize, x: Candidate) -> u64 {
        assert!((1..=self.m).contains(&level), "level {level} outside 1..={}", self.m);
        self.counts[(level - 1) * self.m + x]
    }

    pub fn m(&self) -> usize {
        self.m
    }
}

pub fn top_k_counts(profile: &RankedProfile) -> TopCounts {
    let m = profile.m();
    let pos = position_counts(profile);
    let mut counts = vec![0u64; m * m];
    for x in 0..m {
        let mut acc = 0;
        for level in 1..=m {
            acc += pos[x][level - 1];
            counts[(level - 1) * m + x] = acc;
        }
    }
    TopCounts { m, counts }
}

pub fn pairwise_matrix(profile: &RankedProfile) -> PairwiseMatrix {
    let m = profile.m();
    let mut d = vec![0i64; m * m];
    for (ranking, mult) in profile.votes() {
        let order = ranking.order();
        let mult = *mult as i64;
        for (i, &x) in order.iter().enumerate() {
            for &y in &order[i + 1..] {
                d[x * m + y] += mult;
                d[y * m + x] -= mult;
            }
        }
    }
    PairwiseMatrix { m, d }
}

/// Winners of an election and the per-candidate scores that produced them.
///
/// For Bucklin the score is the Bucklin level (smaller is better); for every
/// other rule larger is better.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Outcome {
    pub winners: Vec<Candidate>,
    pub scores: Vec<Rational>,
}

/// Lowest-index maximum and lowest-index maximum among the rest.
pub fn top_two<T: Ord>(scores: &[T]) -> (Candidate, Option<Candidate>) {
    let best = argmax_excluding(scores, None).expect("scores must be non-empty");
    (best, argmax_excluding(scores, Some(best)))
}

fn argmax_excluding<T: Ord>(scores: &[T], skip: Option<Candidate>) -> Option<Candidate> {
    let mut best: Option<Candidate> = None;
    for (i, s) in scores.iter().enumerate() {
        if Some(i) == skip {
            continue;
        }
        match best {
            Some(b) if scores[b] >= *s => {}
            _ => best = Some(i),
        }
    }
    best
}

fn argmax_set<T: Ord>(scores: &[T]) -> Vec<Candidate> {
    let Some(best) = scores.iter().max() else {
        return Vec::new();
    };
    (0..scores.len()).filter(|&i| scores[i] == *best).collect()
}

/// Maximin score `min_{y≠x} D(x,y)` per candidate. With a single candidate
/// the score is zero.
pub fn maximin_scores(margins: &Margins) -> Vec<Rational> {
    let m = margins.m();
    (0..m)
        .map(|x| {
            (0..m)
                .filter(|&y| y != x)
                .map(|y| margins.get(x, y).clone())
                .min()
                .unwrap_or_else(Rational::zero)
        })
        .collect()
}

/// Copeland^α score: wins plus α times ties.
pub fn copeland_scores(margins: &Margins, alpha: &Rational) -> Vec<Rational> {
    let m = margins.m();
    (0..m)
        .map(|x| {
            let mut wins = 0i64;
            let mut ties = 0i64;
            for y in (0..m).filter(|&y| y != x) {
                let d = margins.get(x, y);
                if d.is_positive() {
                    wins += 1;
                } else if d.is_zero() {
                    ties += 1;
                }
            }
            int(wins) + alpha * int(ties)
        })
        .collect()
}

/// Bucklin level of every candidate: the least `ℓ` at which
/// `has_majority(ℓ, x)` holds. `has_majority(m, x)` must always hold.
pub fn bucklin_levels(m: usize, has_majority: impl Fn(usize, Candidate) -> bool) -> Vec<usize> {
    (0..m)
        .map(|x| (1..=m).find(|&level| has_majority(level, x)).unwrap_or(m))
        .collect()
}

/// Strict majority test `count > n/2`.
pub fn is_majority(count: u64, n: u64) -> bool {
    2 * count > n
}

fn bucklin_outcome(levels: Vec<usize>) -> Outcome {
    let best = *levels.iter().min().expect("at least one candidate");
    Outcome {
        winners: (0..levels.len()).filter(|&x| levels[x] == best).collect(),
        scores: levels.into_iter().map(|l| int(l as i64)).collect(),
    }
}

fn max_outcome(scores: Vec<Rational>) -> Outcome {
    Outcome {
        winners: argmax_set(&scores),
        scores,
    }
}

/// Winner set and scores of `profile` under `rule`.
pub fn winner_set(profile: &Profile, rule: &Rule) -> Result<Outcome> {
    rule.validate(profile.m())?;
    match (profile, rule) {
        (Profile::Approval(p), Rule::Approval) => Ok(max_outcome(
            approval_scores(p).into_iter().map(|s| int(s as i64)).collect(),
        )),
        (Profile::Approval(_), _) => Err(Error::input(format!(
            "rule {rule} needs ranked ballots, got an approval profile"
        ))),
        (Profile::Ranked(_), Rule::Approval) => Err(Error::input(
            "approval rule needs approval ballots, got a ranked profile",
        )),
        (Profile::Ranked(p), rule) => ranked_winner_set(p, rule),
    }
}

/// Winner determination for ranked profiles.
pub fn ranked_winner_set(profile: &RankedProfile, rule: &Rule) -> Result<Outcome> {
    rule.validate(profile.m())?;
    let m = profile.m();
    let outcome = match rule {
        Rule::Scoring(alpha) => max_outcome(positional_scores(profile, alpha)?),
        Rule::KApproval(k) => {
            let top = top_k_counts(profile);
            max_outcome((0..m).map(|x| int(top.get(*k, x) as i64)).collect())
        }
        Rule::Bucklin => {
            let top = top_k_counts(profile);
            let n = profile.n();
            bucklin_outcome(bucklin_levels(m, |level, x| is_majority(top.get(level, x), n)))
        }
        Rule::Maximin => max_outcome(maximin_scores(&pairwise_matrix(profile).to_margins())),
        Rule::Copeland(alpha) => max_outcome(copeland_scores(&pairwise_matrix(profile).to_margins(), alpha)),
        Rule::Approval => {
            return Err(Error::input(
                "approval rule needs approval ballots, got a ranked profile",
            ))
        }
    };
    Ok(outcome)
}

/// Canonical single winner: the lowest-index member of the winner set.
pub fn canonical_winner(outcome: &Outcome) -> Candidate {
    outcome.winners[0]
}
