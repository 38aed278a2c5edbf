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

//! Sampling estimators for the margin of victory.
//!
//! Each estimator draws `ℓ` votes uniformly with replacement, tallies the
//! sample as a profile of its own, scales the tallies by `n/ℓ` and turns
//! the estimated scores into a point estimate `M̄`. With the default `ℓ`
//! the estimate satisfies `|M̄ − MoV| ≤ c·MoV + εn` with probability at
//! least `1 − δ`, where `c` comes from [`approximation_factor`].
//!
//! All estimated quantities are exact rationals, so winner selection on
//! the sample uses the same lowest-index tie-break as the exact rules.

mod sampling;
mod sizes;

pub use sampling::{sample_votes, split_seed, VoteSource};
pub use sizes::{approximation_factor, effective_epsilon, lower_bound_samples, sample_size, sample_size_for_rule};

use crate::error::{Error, Result};
use crate::oracle::{bucklin_delta_with, copeland_gap_in};
use crate::profile::{Candidate, Profile, RankedProfile};
use crate::rational::{from_f64, int, ratio, Rational};
use crate::rules::{
    approval_scores, is_majority, maximin_scores, pairwise_matrix, positional_scores, ranked_winner_set, top_k_counts,
    top_two, Margins, Rule, RuleKind, ScoreVector,
};
use num_traits::Signed;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EstimateParams {
    pub epsilon: Rational,
    pub delta: Rational,
    pub seed: u64,
    /// Overrides the sample size. The reported `ε` is then the one this
    /// budget supports.
    pub samples: Option<u64>,
}

impl EstimateParams {
    pub fn new(epsilon: Rational, delta: Rational, seed: u64) -> Self {
        EstimateParams {
            epsilon,
            delta,
            seed,
            samples: None,
        }
    }
}

/// Estimated per-candidate quantities behind an estimate.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum EstimatedScores {
    /// `s̄(x)`; for scoring rules these use the normalized score vector.
    Scores(Vec<Rational>),
    /// `n̄_ℓ(x)` indexed by `[ℓ − 1][x]`.
    TopCounts(Vec<Vec<Rational>>),
    /// `D̄(x, y)`.
    Pairwise(Margins),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MovEstimate {
    pub rule: Rule,
    pub m_bar: Rational,
    pub ell: u64,
    pub seed: u64,
    pub n: u64,
    pub c: Rational,
    pub epsilon: Rational,
    pub delta: Rational,
    /// Winner of the sampled election.
    pub winner: Candidate,
    /// Runner-up on the sample (for Copeland the opponent minimizing the
    /// estimated relative margin); `None` for the Bucklin sentinel.
    pub runner_up: Option<Candidate>,
    pub estimated: EstimatedScores,
    /// Set when no Bucklin level separates the winner from anyone, in
    /// which case `M̄ = n`.
    pub sentinel: bool,
}

impl MovEstimate {
    /// `c·MoV + εn`.
    pub fn tolerance(&self, mov: u64) -> Rational {
        &self.c * int(mov as i64) + &self.epsilon * int(self.n as i64)
    }

    pub fn error(&self, mov: u64) -> Rational {
        (&self.m_bar - int(mov as i64)).abs()
    }

    pub fn within_guarantee(&self, mov: u64) -> bool {
        self.error(mov) <= self.tolerance(mov)
    }
}

struct Draw<'a> {
    sample: Profile,
    ell: u64,
    n: u64,
    epsilon: Rational,
    source: &'a VoteSource<'a>,
    params: &'a EstimateParams,
}

impl Draw<'_> {
    /// `n/ℓ`.
    fn scale(&self) -> Rational {
        ratio(self.n as i64, self.ell as i64)
    }

    fn ranked(&self) -> Result<&RankedProfile> {
        match &self.sample {
            Profile::Ranked(p) => Ok(p),
            Profile::Approval(_) => Err(Error::input("this estimator needs ranked ballots")),
        }
    }

    fn finish(
        self,
        rule: Rule,
        m_bar: Rational,
        winner: Candidate,
        runner_up: Option<Candidate>,
        estimated: EstimatedScores,
        sentinel: bool,
    ) -> MovEstimate {
        MovEstimate {
            c: approximation_factor(rule.kind(), self.source.m()),
            rule,
            m_bar,
            ell: self.ell,
            seed: self.params.seed,
            n: self.n,
            epsilon: self.epsilon,
            delta: self.params.delta.clone(),
            winner,
            runner_up,
            estimated,
            sentinel,
        }
    }
}

fn draw<'a>(source: &'a VoteSource<'a>, rule: &Rule, params: &'a EstimateParams) -> Result<Draw<'a>> {
    let m = source.m();
    if m < 2 {
        return Err(Error::input("estimation needs at least two candidates"));
    }
    rule.validate(m)?;
    if rule.is_approval() != source.profile().is_approval() {
        return Err(Error::input(format!("rule {rule} does not match the ballot kind")));
    }
    let (ell, epsilon) = match params.samples {
        None => (
            sample_size_for_rule(rule, &params.epsilon, &params.delta, m)?,
            params.epsilon.clone(),
        ),
        Some(0) => return Err(Error::input("need at least one sample")),
        Some(ell) => (ell, from_f64(effective_epsilon(rule, &params.delta, m, ell)?)),
    };
    Ok(Draw {
        sample: source.sample_profile(ell, params.seed)?,
        ell,
        n: source.n(),
        epsilon,
        source,
        params,
    })
}

fn gap_estimate(
    d: Draw<'_>,
    rule: Rule,
    scores: Vec<Rational>,
    divisor: Rational,
    estimated: impl FnOnce(Vec<Rational>) -> EstimatedScores,
) -> MovEstimate {
    let (w, z) = top_two(&scores);
    let z = z.expect("m ≥ 2");
    let m_bar = (&scores[w] - &scores[z]) / divisor;
    d.finish(rule, m_bar, w, Some(z), estimated(scores), false)
}

/// `M̄ = (s̄(w̄) − s̄(z̄)) / (1.5·α₁)` with `α` normalized first.
pub fn estimate_scoring(source: &VoteSource<'_>, alpha: &ScoreVector, params: &EstimateParams) -> Result<MovEstimate> {
    let rule = Rule::Scoring(alpha.clone());
    let d = draw(source, &rule, params)?;
    let alpha = alpha.normalized();
    let scale = d.scale();
    let scores: Vec<Rational> = positional_scores(d.ranked()?, &alpha)?
        .into_iter()
        .map(|s| s * &scale)
        .collect();
    let divisor = ratio(3, 2) * alpha.top();
    Ok(gap_estimate(d, rule, scores, divisor, EstimatedScores::Scores))
}

/// `M̄ = (s̄(w̄) − s̄(z̄)) / 2` with `s̄` the scaled top-`k` counts.
pub fn estimate_kapproval(source: &VoteSource<'_>, k: usize, params: &EstimateParams) -> Result<MovEstimate> {
    let rule = Rule::KApproval(k);
    let d = draw(source, &rule, params)?;
    let scale = d.scale();
    let top = top_k_counts(d.ranked()?);
    let scores: Vec<Rational> = (0..source.m()).map(|x| int(top.get(k, x) as i64) * &scale).collect();
    Ok(gap_estimate(d, rule, scores, int(2), EstimatedScores::Scores))
}

pub fn estimate_approval(source: &VoteSource<'_>, params: &EstimateParams) -> Result<MovEstimate> {
    let rule = Rule::Approval;
    let d = draw(source, &rule, params)?;
    let scale = d.scale();
    let Profile::Approval(sample) = &d.sample else {
        unreachable!("ballot kind checked in draw")
    };
    let scores: Vec<Rational> = approval_scores(sample)
        .into_iter()
        .map(|s| int(s as i64) * &scale)
        .collect();
    Ok(gap_estimate(d, rule, scores, int(2), EstimatedScores::Scores))
}

/// `M̄ = Δ̄ / 1.5`, or `n` when no level separates the sampled winner.
pub fn estimate_bucklin(source: &VoteSource<'_>, params: &EstimateParams) -> Result<MovEstimate> {
    let d = draw(source, &Rule::Bucklin, params)?;
    let sample = d.ranked()?;
    let m = sample.m();
    let top = top_k_counts(sample);
    // n̄_ℓ(x) > n/2 exactly when the sampled count is a strict majority of ℓ.
    let winner = ranked_winner_set(sample, &Rule::Bucklin)?.winners[0];
    debug_assert!(is_majority(top.get(m, winner), d.ell));
    let scale = d.scale();
    let counts: Vec<Vec<Rational>> = (1..=m)
        .map(|level| (0..m).map(|x| int(top.get(level, x) as i64) * &scale).collect())
        .collect();
    let delta = bucklin_delta_with(m, winner, |level, x| top.get(level, x), d.ell);
    let estimated = EstimatedScores::TopCounts(counts);
    Ok(match delta {
        Some(gap_plus_one) => {
            let delta_bar = int(gap_plus_one as i64 - 1) * &scale + int(1);
            let runner_up = (0..m).filter(|&x| x != winner).find(|&x| {
                (1..m).any(|level| {
                    is_majority(top.get(level, winner), d.ell)
                        && !is_majority(top.get(level, x), d.ell)
                        && top.get(level, winner) - top.get(level, x) + 1 == gap_plus_one
                })
            });
            d.finish(
                Rule::Bucklin,
                delta_bar / ratio(3, 2),
                winner,
                runner_up,
                estimated,
                false,
            )
        }
        None => {
            let n = int(d.n as i64);
            d.finish(Rule::Bucklin, n, winner, None, estimated, true)
        }
    })
}

fn estimated_margins(d: &Draw<'_>) -> Result<Margins> {
    let sampled = pairwise_matrix(d.ranked()?);
    let scale = d.scale();
    Ok(Margins::from_fn(sampled.m(), |x, y| int(sampled.get(x, y)) * &scale))
}

/// `M̄ = (s̄(w̄) − s̄(z̄)) / 3` with `s̄(x) = min_y D̄(x, y)`.
pub fn estimate_maximin(source: &VoteSource<'_>, params: &EstimateParams) -> Result<MovEstimate> {
    let d = draw(source, &Rule::Maximin, params)?;
    let margins = estimated_margins(&d)?;
    let scores = maximin_scores(&margins);
    let (w, z) = top_two(&scores);
    let z = z.expect("m ≥ 2");
    let m_bar = (&scores[w] - &scores[z]) / int(3);
    Ok(d.finish(
        Rule::Maximin,
        m_bar,
        w,
        Some(z),
        EstimatedScores::Pairwise(margins),
        false,
    ))
}

/// `M̄ = 4(L+1)/(2L+3) · Γ̄` with `L = ⌈log₂ m⌉` and `Γ̄` computed from `D̄`
/// on both sides of the relative-margin comparison.
pub fn estimate_copeland(source: &VoteSource<'_>, alpha: &Rational, params: &EstimateParams) -> Result<MovEstimate> {
    let rule = Rule::Copeland(alpha.clone());
    let d = draw(source, &rule, params)?;
    let margins = estimated_margins(&d)?;
    let gap = copeland_gap_in(&margins, d.n, alpha)?;
    let l = crate::rational::ceil_log2(source.m()) as i64;
    let m_bar = ratio(4 * (l + 1), 2 * l + 3) * int(gap.gamma as i64);
    Ok(d.finish(
        rule,
        m_bar,
        gap.winner,
        Some(gap.closest),
        EstimatedScores::Pairwise(margins),
        false,
    ))
}

/// Runs the estimator that matches `rule`.
pub fn estimate(source: &VoteSource<'_>, rule: &Rule, params: &EstimateParams) -> Result<MovEstimate> {
    match rule {
        Rule::Scoring(alpha) => estimate_scoring(source, alpha, params),
        Rule::KApproval(k) => estimate_kapproval(source, *k, params),
        Rule::Approval => estimate_approval(source, params),
        Rule::Bucklin => estimate_bucklin(source, params),
        Rule::Maximin => estimate_maximin(source, params),
        Rule::Copeland(alpha) => estimate_copeland(source, alpha, params),
    }
}

/// The rule family's guarantee in words, e.g. for reports.
pub fn guarantee_statement(kind: RuleKind, m: usize) -> String {
    let c = approximation_factor(kind, m);
    format!("P[|M̄−MoV| ≤ {}·MoV + εn] ≥ 1−δ", crate::rational::format_exact(&c))
}
