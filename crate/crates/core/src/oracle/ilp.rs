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

//! Exact margins of victory by integer programming.
//!
//! A modification is described by how many copies of each possible
//! ballot are removed (`r_b ≤ c_b`) and added (`a_b`), with `Σr = Σa`.
//! The new winner set depends only on the modified counts
//! `c′ = c − r + a`, and it differs from the original set `W` exactly when
//!
//! * some `x ∉ W` joins the winners, or
//! * some `w ∈ W` is beaten by another candidate.
//!
//! For every rule each of these events splits into finitely many systems
//! of linear constraints on `c′` (a choice of pairwise opponents for
//! maximin, a pattern of pairwise outcomes for Copeland, a level for
//! Bucklin). Minimizing `Σr` over each system and taking the smallest
//! optimum gives the margin of victory. The solver works in floating
//! point, so the optimal modification is replayed in exact arithmetic
//! before it is reported.

use crate::error::{Error, Result};
use crate::oracle::brute::{build_witness, ExactMovResult, MovStatus};
use crate::profile::{Ballot, Candidate, Profile};
use crate::rational::Rational;
use crate::rules::{winner_set, Rule};
use good_lp::{constraint, microlp, variable, Expression, ResolutionError, Solution, SolverModel, Variable};
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};
use std::collections::HashMap;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IlpOptions {
    /// Largest ballot universe (`m!` or `2^m`) to accept.
    pub max_ballots: usize,
}

impl Default for IlpOptions {
    fn default() -> Self {
        IlpOptions { max_ballots: 24 }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Rel {
    Ge,
    Le,
    Eq,
}

/// `Σ_b coef[b]·c′_b (rel) rhs`.
#[derive(Clone, Debug)]
struct Row {
    coef: Vec<i64>,
    rel: Rel,
    rhs: i64,
}

impl Row {
    /// Strengthens the row for integer points with `Σ c′ = n`: shifts
    /// every coefficient by the `λ ∈ [−2, 2]` that maximizes their gcd
    /// (adding `λn` to the right-hand side), divides through by the gcd
    /// and rounds the right-hand side inward. `None` if no integer point
    /// satisfies the row.
    fn tightened(&self, n: i64) -> Option<Row> {
        let gcd_of = |shift: i64| self.coef.iter().fold(0i64, |acc, &k| acc.gcd(&(k + shift)));
        let shift = [0, 1, -1, 2, -2]
            .into_iter()
            .max_by_key(|&l| (gcd_of(l), -(l.abs())))
            .expect("non-empty");
        let coef: Vec<i64> = self.coef.iter().map(|k| k + shift).collect();
        let rhs = self.rhs + shift * n;
        let g = gcd_of(shift);
        if g == 0 {
            let ok = match self.rel {
                Rel::Ge => 0 >= rhs,
                Rel::Le => 0 <= rhs,
                Rel::Eq => rhs == 0,
            };
            return ok.then_some(Row {
                coef,
                rel: self.rel,
                rhs,
            });
        }
        let rhs = match self.rel {
            Rel::Ge => Integer::div_ceil(&rhs, &g),
            Rel::Le => Integer::div_floor(&rhs, &g),
            Rel::Eq if rhs % g != 0 => return None,
            Rel::Eq => rhs / g,
        };
        Some(Row {
            coef: coef.iter().map(|k| k / g).collect(),
            rel: self.rel,
            rhs,
        })
    }

    fn holds(&self, counts: &[u64]) -> bool {
        let lhs: i64 = self.coef.iter().zip(counts).map(|(k, &c)| k * c as i64).sum();
        match self.rel {
            Rel::Ge => lhs >= self.rhs,
            Rel::Le => lhs <= self.rhs,
            Rel::Eq => lhs == self.rhs,
        }
    }
}

type Event = Vec<Row>;

fn diff(a: &[i64], b: &[i64]) -> Vec<i64> {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

fn scale(a: &[i64], k: i64) -> Vec<i64> {
    a.iter().map(|x| x * k).collect()
}

/// Per-candidate score contribution of every ballot, scaled to integers.
fn linear_features(rule: &Rule, universe: &[Ballot], m: usize) -> Result<Vec<Vec<i64>>> {
    let weights: Vec<i64> = match rule {
        Rule::Scoring(alpha) => {
            let lcm = alpha
                .alphas()
                .iter()
                .fold(num_bigint::BigInt::one(), |acc, a| acc.lcm(a.denom()));
            alpha
                .alphas()
                .iter()
                .map(|a| {
                    (a * Rational::from_integer(lcm.clone()))
                        .to_integer()
                        .to_i64()
                        .ok_or_else(|| Error::input("score vector too large for the integer program"))
                })
                .collect::<Result<_>>()?
        }
        Rule::KApproval(k) => (0..m).map(|p| i64::from(p < *k)).collect(),
        _ => Vec::new(),
    };
    Ok((0..m)
        .map(|x| {
            universe
                .iter()
                .map(|b| match b {
                    Ballot::Ranked(r) => weights[r.positions()[x]],
                    Ballot::Approval(a) => i64::from(a.contains(x)),
                })
                .collect()
        })
        .collect())
}

fn linear_events(f: &[Vec<i64>], winners: &[Candidate]) -> Vec<Event> {
    let m = f.len();
    let mut events = Vec::new();
    for x in (0..m).filter(|x| !winners.contains(x)) {
        events.push(
            (0..m)
                .filter(|&y| y != x)
                .map(|y| Row {
                    coef: diff(&f[x], &f[y]),
                    rel: Rel::Ge,
                    rhs: 0,
                })
                .collect(),
        );
    }
    for &w in winners {
        for y in (0..m).filter(|&y| y != w) {
            events.push(vec![Row {
                coef: diff(&f[y], &f[w]),
                rel: Rel::Ge,
                rhs: 1,
            }]);
        }
    }
    events
}

/// `pair[x][y][b]` is `+1` when ballot `b` ranks `x` above `y`, else `−1`.
fn pairwise_features(universe: &[Ballot], m: usize) -> Vec<Vec<Vec<i64>>> {
    let positions: Vec<Vec<usize>> = universe
        .iter()
        .map(|b| match b {
            Ballot::Ranked(r) => r.positions(),
            Ballot::Approval(_) => unreachable!("pairwise rules use ranked ballots"),
        })
        .collect();
    (0..m)
        .map(|x| {
            (0..m)
                .map(|y| {
                    positions
                        .iter()
                        .map(|pos| {
                            if x == y {
                                0
                            } else if pos[x] < pos[y] {
                                1
                            } else {
                                -1
                            }
                        })
                        .collect()
                })
                .collect()
        })
        .collect()
}

/// All maps from `domain` to choices, where `choices(d)` lists the options
/// for `d`.
fn choice_functions(domain: &[usize], choices: impl Fn(usize) -> Vec<usize>) -> Vec<Vec<usize>> {
    domain.iter().fold(vec![Vec::new()], |acc, &d| {
        acc.into_iter()
            .flat_map(|prefix| {
                choices(d).into_iter().map(move |c| {
                    let mut next = prefix.clone();
                    next.push(c);
                    next
                })
            })
            .collect()
    })
}

fn maximin_events(pair: &[Vec<Vec<i64>>], winners: &[Candidate]) -> Vec<Event> {
    let m = pair.len();
    let mut events = Vec::new();
    // x joins: for every y some D′(y, b_y) is at most every D′(x, a).
    for x in (0..m).filter(|x| !winners.contains(x)) {
        let others: Vec<usize> = (0..m).filter(|&y| y != x).collect();
        for picks in choice_functions(&others, |y| (0..m).filter(|&b| b != y).collect()) {
            let mut rows = Vec::new();
            for (&y, &b) in others.iter().zip(&picks) {
                for a in (0..m).filter(|&a| a != x) {
                    rows.push(Row {
                        coef: diff(&pair[x][a], &pair[y][b]),
                        rel: Rel::Ge,
                        rhs: 0,
                    });
                }
            }
            events.push(rows);
        }
    }
    // w drops: some y has every D′(y, a) above D′(w, b).
    for &w in winners {
        for y in (0..m).filter(|&y| y != w) {
            for b in (0..m).filter(|&b| b != w) {
                events.push(
                    (0..m)
                        .filter(|&a| a != y)
                        .map(|a| Row {
                            coef: diff(&pair[y][a], &pair[w][b]),
                            rel: Rel::Ge,
                            rhs: 1,
                        })
                        .collect(),
                );
            }
        }
    }
    events
}

fn copeland_events(pair: &[Vec<Vec<i64>>], alpha: &Rational, winners: &[Candidate]) -> Vec<Event> {
    let m = pair.len();
    let pairs: Vec<(usize, usize)> = (0..m).flat_map(|x| (x + 1..m).map(move |y| (x, y))).collect();
    let mut events = Vec::new();
    for pattern in choice_functions(&(0..pairs.len()).collect::<Vec<_>>(), |_| vec![0, 1, 2]) {
        let mut scores = vec![Rational::zero(); m];
        for (&(x, y), &p) in pairs.iter().zip(&pattern) {
            match p {
                0 => scores[x] += Rational::one(),
                1 => scores[y] += Rational::one(),
                _ => {
                    scores[x] += alpha;
                    scores[y] += alpha;
                }
            }
        }
        let best = scores.iter().max().expect("m ≥ 2");
        let outcome: Vec<Candidate> = (0..m).filter(|&c| scores[c] == *best).collect();
        if outcome == winners {
            continue;
        }
        events.push(
            pairs
                .iter()
                .zip(&pattern)
                .map(|(&(x, y), &p)| match p {
                    0 => Row {
                        coef: pair[x][y].clone(),
                        rel: Rel::Ge,
                        rhs: 1,
                    },
                    1 => Row {
                        coef: pair[x][y].clone(),
                        rel: Rel::Le,
                        rhs: -1,
                    },
                    _ => Row {
                        coef: pair[x][y].clone(),
                        rel: Rel::Eq,
                        rhs: 0,
                    },
                })
                .collect(),
        );
    }
    events
}

fn bucklin_events(universe: &[Ballot], m: usize, n: u64, winners: &[Candidate]) -> Vec<Event> {
    // top[level][x][b] for level in 1..=m, stored at level − 1.
    let top: Vec<Vec<Vec<i64>>> = (1..=m)
        .map(|level| {
            (0..m)
                .map(|x| {
                    universe
                        .iter()
                        .map(|b| match b {
                            Ballot::Ranked(r) => i64::from(r.positions()[x] < level),
                            Ballot::Approval(_) => unreachable!("Bucklin uses ranked ballots"),
                        })
                        .collect()
                })
                .collect()
        })
        .collect();
    let n = n as i64;
    let majority = |level: usize, x: usize| Row {
        coef: scale(&top[level - 1][x], 2),
        rel: Rel::Ge,
        rhs: n + 1,
    };
    let minority = |level: usize, x: usize| Row {
        coef: scale(&top[level - 1][x], 2),
        rel: Rel::Le,
        rhs: n,
    };
    let mut events = Vec::new();
    // x joins at level L: nobody has a majority before L.
    for x in (0..m).filter(|x| !winners.contains(x)) {
        for level in 1..=m {
            let mut rows = vec![majority(level, x)];
            if level >= 2 {
                rows.extend((0..m).map(|y| minority(level - 1, y)));
            }
            events.push(rows);
        }
    }
    // w drops: some y reaches a majority at a level where w has none.
    for &w in winners {
        for y in (0..m).filter(|&y| y != w) {
            for level in 1..m {
                events.push(vec![majority(level, y), minority(level, w)]);
            }
        }
    }
    events
}

fn build_events(profile: &Profile, rule: &Rule, universe: &[Ballot], winners: &[Candidate]) -> Result<Vec<Event>> {
    let m = profile.m();
    Ok(match rule {
        Rule::Scoring(_) | Rule::KApproval(_) | Rule::Approval => {
            linear_events(&linear_features(rule, universe, m)?, winners)
        }
        Rule::Maximin => maximin_events(&pairwise_features(universe, m), winners),
        Rule::Copeland(alpha) => copeland_events(&pairwise_features(universe, m), alpha, winners),
        Rule::Bucklin => bucklin_events(universe, m, profile.n(), winners),
    })
}

struct Modification {
    removed: Vec<u64>,
    added: Vec<u64>,
}

impl Modification {
    fn size(&self) -> u64 {
        self.removed.iter().sum()
    }
}

/// Cheapest modification satisfying `event`, if any changes at most
/// `cap` votes.
fn solve(event: &Event, counts: &[u64], n: u64, cap: u64) -> Result<Option<Modification>> {
    let mut vars = good_lp::variables!();
    let removed: Vec<Variable> = counts
        .iter()
        .map(|&c| vars.add(variable().integer().min(0).max(c as f64)))
        .collect();
    let added: Vec<Variable> = counts
        .iter()
        .map(|_| vars.add(variable().integer().min(0).max(n as f64)))
        .collect();
    let total_removed: Expression = removed.iter().sum();
    let total_added: Expression = added.iter().sum();
    let mut model = vars
        .minimise(total_removed.clone())
        .using(microlp)
        .with(constraint!(total_removed.clone() == total_added))
        .with(constraint!(total_removed <= cap as f64));
    for row in event {
        let base: i64 = row.coef.iter().zip(counts).map(|(k, &c)| k * c as i64).sum();
        let mut lhs = Expression::from(0.0);
        for (b, &k) in row.coef.iter().enumerate() {
            if k != 0 {
                lhs += (k as f64) * added[b] - (k as f64) * removed[b];
            }
        }
        let rhs = (row.rhs - base) as f64;
        model = match row.rel {
            Rel::Ge => model.with(constraint!(lhs >= rhs)),
            Rel::Le => model.with(constraint!(lhs <= rhs)),
            Rel::Eq => model.with(constraint!(lhs == rhs)),
        };
    }
    let solution = match model.solve() {
        Ok(s) => s,
        Err(ResolutionError::Infeasible) => return Ok(None),
        Err(e) => return Err(Error::input(format!("integer program failed: {e}"))),
    };
    let round = |v: &Variable| solution.value(*v).round().max(0.0) as u64;
    let mut modification = Modification {
        removed: removed.iter().map(round).collect(),
        added: added.iter().map(round).collect(),
    };
    for b in 0..counts.len() {
        let common = modification.removed[b].min(modification.added[b]);
        modification.removed[b] -= common;
        modification.added[b] -= common;
    }
    Ok(Some(modification))
}

/// Exact margin of victory for profiles whose ballot universe has at most
/// `options.max_ballots` members.
pub fn mov_ilp(profile: &Profile, rule: &Rule, options: &IlpOptions) -> Result<ExactMovResult> {
    let original = winner_set(profile, rule)?.winners;
    if profile.m() < 2 {
        return Err(Error::input("margin of victory needs at least two candidates"));
    }
    let universe = profile.ballot_universe();
    if universe.len() > options.max_ballots {
        return Err(Error::NotApplicable(format!(
            "{} possible ballots exceed the integer-program limit of {}",
            universe.len(),
            options.max_ballots
        )));
    }
    let index: HashMap<&Ballot, usize> = universe.iter().enumerate().map(|(i, b)| (b, i)).collect();
    let mut counts = vec![0u64; universe.len()];
    for (ballot, count) in profile.entries() {
        counts[index[&ballot]] += count;
    }
    let n = profile.n();

    let mut best: Option<Modification> = None;
    for event in build_events(profile, rule, &universe, &original)? {
        let Some(event) = event.iter().map(|r| r.tightened(n as i64)).collect::<Option<Event>>() else {
            continue;
        };
        let cap = best.as_ref().map_or(n, |b| b.size().saturating_sub(1));
        if best.is_some() && cap == 0 {
            break;
        }
        let Some(found) = solve(&event, &counts, n, cap)? else {
            continue;
        };
        let modified: Vec<u64> = (0..counts.len())
            .map(|b| counts[b] - found.removed[b] + found.added[b])
            .collect();
        if !event.iter().all(|row| row.holds(&modified)) {
            return Err(Error::input("integer program returned an infeasible point"));
        }
        if best.as_ref().is_none_or(|b| found.size() < b.size()) {
            best = Some(found);
        }
    }
    let best = best.ok_or_else(|| Error::input("no modification changes the winner set"))?;

    let expand = |v: &[u64]| -> Vec<usize> {
        v.iter()
            .enumerate()
            .flat_map(|(b, &k)| std::iter::repeat_n(b, k as usize))
            .collect()
    };
    let witness = build_witness(profile, &universe, &expand(&best.removed), &expand(&best.added));
    let after = crate::oracle::apply_replacements(profile, &witness)?;
    if winner_set(&after, rule)?.winners == original {
        return Err(Error::input(
            "integer-program modification leaves the winner set unchanged",
        ));
    }
    Ok(ExactMovResult {
        status: MovStatus::Exact(best.size()),
        witness,
    })
}
