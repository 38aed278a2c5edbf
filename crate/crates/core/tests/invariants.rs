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

//! Structural invariants of winners, estimators and the file format.

use mov_core::estimators::{estimate, estimate_kapproval, EstimateParams, EstimatedScores, VoteSource};
use mov_core::io::{parse_election, write_election};
use mov_core::oracle::{mov_brute_force, BruteForceOptions};
use mov_core::profile::{ApprovalBallot, ApprovalProfile, RankedProfile, Ranking};
use mov_core::rational::{int, ratio, to_f64};
use mov_core::rules::{copeland_scores, pairwise_matrix};
use mov_core::{winner_set, Profile, Rational, Rule, ScoreVector};
use proptest::prelude::*;

fn ranked_profile(max_m: usize, max_entries: usize) -> impl Strategy<Value = RankedProfile> {
    (2..=max_m).prop_flat_map(move |m| {
        let count = Ranking::all(m).len();
        prop::collection::vec((0..count, 1..5u64), 1..=max_entries).prop_map(move |votes| {
            let all = Ranking::all(m);
            RankedProfile::new(m, None, votes.into_iter().map(|(i, c)| (all[i].clone(), c)).collect()).unwrap()
        })
    })
}

fn approval_profile(max_m: usize, max_entries: usize) -> impl Strategy<Value = ApprovalProfile> {
    (1..=max_m).prop_flat_map(move |m| {
        prop::collection::vec((0..1usize << m, 1..5u64), 1..=max_entries).prop_map(move |votes| {
            let all = ApprovalBallot::all(m);
            ApprovalProfile::new(m, None, votes.into_iter().map(|(i, c)| (all[i].clone(), c)).collect()).unwrap()
        })
    })
}

fn ranked_rules(m: usize) -> Vec<Rule> {
    let mut rules = vec![
        Rule::Scoring(ScoreVector::borda(m).unwrap()),
        Rule::KApproval(1),
        Rule::Bucklin,
        Rule::Maximin,
        Rule::Copeland(ratio(0, 1)),
        Rule::Copeland(ratio(1, 2)),
        Rule::Copeland(ratio(1, 1)),
    ];
    if m > 2 {
        rules.push(Rule::KApproval(m - 1));
    }
    rules
}

/// Non-increasing raw score vector with `α₁ > α_m`.
fn score_vector(m: usize) -> impl Strategy<Value = Vec<i64>> {
    prop::collection::vec(0..6i64, m).prop_filter_map("constant vector", |mut v| {
        v.sort_unstable_by(|a, b| b.cmp(a));
        (v[0] > v[v.len() - 1]).then_some(v)
    })
}

fn mapped(winners: &[usize], perm: &[usize]) -> Vec<usize> {
    let mut out: Vec<usize> = winners.iter().map(|&w| perm[w]).collect();
    out.sort_unstable();
    out
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn scoring_winners_ignore_affine_maps(
        (p, raw) in ranked_profile(5, 8).prop_flat_map(|p| { let m = p.m(); (Just(p), score_vector(m)) }),
        a in 1..5i64,
        b in -4..5i64,
    ) {
        let profile: Profile = p.into();
        let base = Rule::Scoring(ScoreVector::from_integers(&raw).unwrap());
        let shifted: Vec<i64> = raw.iter().map(|x| a * x + b).collect();
        let moved = Rule::Scoring(ScoreVector::from_integers(&shifted).unwrap());
        prop_assert_eq!(winner_set(&profile, &base).unwrap().winners, winner_set(&profile, &moved).unwrap().winners);
    }

    #[test]
    fn kapproval_is_the_matching_scoring_rule(p in ranked_profile(5, 8), k_seed in 0usize..10) {
        let m = p.m();
        let k = 1 + k_seed % (m - 1);
        let profile: Profile = p.into();
        let scoring = Rule::Scoring(ScoreVector::k_approval(m, k).unwrap());
        prop_assert_eq!(
            winner_set(&profile, &Rule::KApproval(k)).unwrap().winners,
            winner_set(&profile, &scoring).unwrap().winners
        );
    }

    #[test]
    fn winner_sets_follow_relabeling(p in ranked_profile(5, 8), shuffle in any::<u64>()) {
        let m = p.m();
        let mut perm: Vec<usize> = (0..m).collect();
        let mut state = shuffle;
        for i in (1..m).rev() {
            state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            perm.swap(i, (state >> 33) as usize % (i + 1));
        }
        let original: Profile = p.clone().into();
        let renamed: Profile = p.relabeled(&perm).unwrap().into();
        for rule in ranked_rules(m) {
            let before = winner_set(&original, &rule).unwrap().winners;
            let after = winner_set(&renamed, &rule).unwrap().winners;
            prop_assert_eq!(mapped(&before, &perm), after, "{}", rule);
        }
    }

    #[test]
    fn approval_winners_follow_relabeling(p in approval_profile(5, 8)) {
        let m = p.m();
        let perm: Vec<usize> = (0..m).rev().collect();
        let before = winner_set(&p.clone().into(), &Rule::Approval).unwrap().winners;
        let after = winner_set(&p.relabeled(&perm).unwrap().into(), &Rule::Approval).unwrap().winners;
        prop_assert_eq!(mapped(&before, &perm), after);
    }

    #[test]
    fn half_copeland_scores_share_every_pair(p in ranked_profile(6, 10)) {
        let m = p.m() as i64;
        let scores = copeland_scores(&pairwise_matrix(&p).to_margins(), &ratio(1, 2));
        let total: Rational = scores.iter().sum();
        prop_assert_eq!(total, int(m * (m - 1) / 2));
    }

    #[test]
    fn estimates_repeat_per_seed_and_pairwise_estimates_are_antisymmetric(
        p in ranked_profile(5, 8),
        seed in any::<u64>(),
    ) {
        let profile: Profile = p.into();
        let source = VoteSource::new(&profile).unwrap();
        let params = EstimateParams { samples: Some(40), ..EstimateParams::new(ratio(1, 10), ratio(1, 20), seed) };
        for rule in ranked_rules(profile.m()) {
            let first = estimate(&source, &rule, &params).unwrap();
            prop_assert_eq!(&first, &estimate(&source, &rule, &params).unwrap());
            if let EstimatedScores::Pairwise(d) = &first.estimated {
                for x in 0..profile.m() {
                    for y in 0..profile.m() {
                        prop_assert_eq!(d.get(x, y), &-d.get(y, x));
                    }
                }
            }
        }
    }

    #[test]
    fn files_round_trip(ranked in ranked_profile(6, 12), approval in approval_profile(6, 12)) {
        for profile in [Profile::from(ranked), Profile::from(approval)] {
            let text = write_election(&profile);
            let parsed = parse_election(&text).unwrap();
            prop_assert_eq!(&parsed, &profile.canonical());
            prop_assert_eq!(write_election(&parsed), text);
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(40))]

    #[test]
    fn margin_of_victory_ignores_relabeling(p in ranked_profile(3, 4)) {
        let m = p.m();
        let perm: Vec<usize> = (0..m).rev().collect();
        let original: Profile = p.clone().into();
        let renamed: Profile = p.relabeled(&perm).unwrap().into();
        let options = BruteForceOptions { budget: 4, ..BruteForceOptions::default() };
        for rule in ranked_rules(m) {
            let a = mov_brute_force(&original, &rule, &options).unwrap().value();
            let b = mov_brute_force(&renamed, &rule, &options).unwrap().value();
            prop_assert_eq!(a, b, "{}", rule);
        }
    }
}

#[test]
fn sampled_scores_are_unbiased() {
    let all = Ranking::all(4);
    let votes = vec![
        (all[0].clone(), 37),
        (all[7].clone(), 21),
        (all[13].clone(), 30),
        (all[22].clone(), 12),
    ];
    let profile: Profile = RankedProfile::new(4, None, votes).unwrap().into();
    let source = VoteSource::new(&profile).unwrap();
    let truth = [37.0, 21.0, 30.0, 12.0];
    let trials = 2000;
    let mut sums = [0.0f64; 4];
    let mut squares = [0.0f64; 4];
    for seed in 0..trials {
        let params = EstimateParams {
            samples: Some(25),
            ..EstimateParams::new(ratio(1, 10), ratio(1, 20), seed)
        };
        let est = estimate_kapproval(&source, 1, &params).unwrap();
        let EstimatedScores::Scores(scores) = est.estimated else {
            panic!("k-approval estimates scores")
        };
        for (x, s) in scores.iter().enumerate() {
            let v = to_f64(s);
            sums[x] += v;
            squares[x] += v * v;
        }
    }
    let t = trials as f64;
    for x in 0..4 {
        let mean = sums[x] / t;
        let var = squares[x] / t - mean * mean;
        let se = (var / t).sqrt();
        assert!(
            (mean - truth[x]).abs() <= 3.0 * se,
            "candidate {x}: mean {mean}, truth {}, se {se}",
            truth[x]
        );
    }
}
