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

//! Synthetic elections.

use crate::error::{Error, Result};
use crate::estimators::split_seed;
use crate::profile::{ApprovalBallot, ApprovalProfile, Candidate, RankedProfile, Ranking};
use crate::rational::{floor_u64, int, ratio, Rational};
use num_traits::{One, Signed};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::collections::BTreeMap;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Model {
    /// Independent uniformly random rankings.
    ImpartialCulture,
    /// Plurality winner `winner` leads the runner-up by exactly `gap` top
    /// positions.
    PlantedGap { winner: Candidate, gap: u64 },
    /// `⌊p·n⌋` votes `a ≻ b`, the rest `b ≻ a`.
    TwoCandidate { p: Rational },
    /// An impartial-culture profile of `base_n` votes with every
    /// multiplicity multiplied by `n / base_n`.
    Replicated { base_n: u64 },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GenSpec {
    pub model: Model,
    pub n: u64,
    pub m: usize,
    pub seed: u64,
}

impl GenSpec {
    pub fn new(model: Model, n: u64, m: usize, seed: u64) -> Self {
        GenSpec { model, n, m, seed }
    }
}

pub fn generate(spec: &GenSpec) -> Result<RankedProfile> {
    if spec.n == 0 || spec.m == 0 {
        return Err(Error::input("n and m must be positive"));
    }
    let m = spec.m;
    match &spec.model {
        Model::ImpartialCulture => Ok(impartial_culture(m, spec.n, spec.seed)),
        Model::PlantedGap { winner, gap } => planted_gap(m, spec.n, *winner, *gap),
        Model::TwoCandidate { p } => two_candidate(m, spec.n, p),
        Model::Replicated { base_n } => {
            if *base_n == 0 || !spec.n.is_multiple_of(*base_n) {
                return Err(Error::input(format!(
                    "n = {} is not a multiple of base n = {base_n}",
                    spec.n
                )));
            }
            Ok(impartial_culture(m, *base_n, spec.seed).scaled(spec.n / base_n))
        }
    }
}

fn impartial_culture(m: usize, n: u64, seed: u64) -> RankedProfile {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut counts: BTreeMap<Vec<Candidate>, u64> = BTreeMap::new();
    let mut order: Vec<Candidate> = (0..m).collect();
    for _ in 0..n {
        order.shuffle(&mut rng);
        *counts.entry(order.clone()).or_default() += 1;
    }
    let votes = counts
        .into_iter()
        .map(|(o, c)| (Ranking::new(o).expect("shuffle keeps a permutation"), c))
        .collect();
    RankedProfile::new(m, None, votes).expect("valid by construction")
}

/// `top` first, then everyone else in ascending order.
fn canonical_ranking(m: usize, top: Candidate) -> Ranking {
    let order = std::iter::once(top).chain((0..m).filter(|&x| x != top)).collect();
    Ranking::new(order).expect("permutation")
}

fn planted_gap(m: usize, n: u64, winner: Candidate, gap: u64) -> Result<RankedProfile> {
    if m < 2 || winner >= m {
        return Err(Error::input(
            "planted gap needs m ≥ 2 and a winner among the candidates",
        ));
    }
    if gap == 0 || gap > n {
        return Err(Error::input(format!("gap must lie in 1..={n}")));
    }
    let others = (m - 1) as u64;
    let lead = (n + others * gap).div_ceil(m as u64);
    let cap = lead - gap;
    if n - lead < cap {
        return Err(Error::input(format!(
            "gap {gap} is not achievable with n = {n}, m = {m}"
        )));
    }
    let mut tops = vec![0u64; m];
    tops[winner] = lead;
    let mut left = n - lead;
    for x in (0..m).filter(|&x| x != winner) {
        let take = cap.min(left);
        tops[x] = take;
        left -= take;
    }
    debug_assert_eq!(left, 0);
    let votes = (0..m)
        .filter(|&x| tops[x] > 0)
        .map(|x| (canonical_ranking(m, x), tops[x]))
        .collect();
    RankedProfile::new(m, None, votes)
}

fn two_candidate(m: usize, n: u64, p: &Rational) -> Result<RankedProfile> {
    if m != 2 {
        return Err(Error::input("the two-candidate model needs m = 2"));
    }
    if p.is_negative() || *p > Rational::one() {
        return Err(Error::input("p must lie in [0, 1]"));
    }
    let for_a = floor_u64(&(p * int(n as i64)));
    let votes = [(vec![0, 1], for_a), (vec![1, 0], n - for_a)]
        .into_iter()
        .filter(|(_, c)| *c > 0)
        .map(|(o, c)| (Ranking::new(o).expect("permutation"), c))
        .collect();
    RankedProfile::new(m, None, votes)
}

/// Share of `a ≻ b` votes a two-candidate profile actually realizes.
pub fn realized_fraction(profile: &RankedProfile) -> Rational {
    let for_a: u64 = profile
        .votes()
        .iter()
        .filter(|(r, _)| r.top() == 0)
        .map(|(_, c)| c)
        .sum();
    ratio(for_a as i64, profile.n() as i64)
}

/// Approval profile from the ranked model: every ballot approves a prefix
/// of its ranking whose length is uniform on `0..=m`.
pub fn generate_approval(spec: &GenSpec) -> Result<ApprovalProfile> {
    let ranked = generate(spec)?;
    let m = spec.m;
    let mut rng = ChaCha8Rng::seed_from_u64(split_seed(spec.seed, 1));
    let mut counts: BTreeMap<Vec<Candidate>, u64> = BTreeMap::new();
    for (ranking, mult) in ranked.votes() {
        for _ in 0..*mult {
            let k = rng.gen_range(0..=m);
            let mut set = ranking.order()[..k].to_vec();
            set.sort_unstable();
            *counts.entry(set).or_default() += 1;
        }
    }
    let votes = counts
        .into_iter()
        .map(|(s, c)| Ok((ApprovalBallot::new(m, s)?, c)))
        .collect::<Result<Vec<_>>>()?;
    ApprovalProfile::new(m, None, votes)
}
