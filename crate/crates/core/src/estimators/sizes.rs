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

//! Sample complexities, the matching lower bound, and approximation
//! factors per rule.

use crate::error::{Error, Result};
use crate::rational::{ceil_log2, int, ratio, to_f64, Rational};
use crate::rules::{Rule, RuleKind};
use num_traits::{One, Zero};

/// Leading constant `C` and union-bound count `N` in `ℓ = ⌈(C/ε²)·ln(2N/δ)⌉`.
fn constants(kind: RuleKind, m: usize, k: Option<usize>) -> Result<(i64, usize)> {
    if m < 2 {
        return Err(Error::input("sample sizes need m ≥ 2"));
    }
    match (kind, k) {
        (RuleKind::KApproval, Some(k)) if (1..m).contains(&k) => Ok((12, k)),
        (RuleKind::KApproval, Some(k)) => Err(Error::input(format!("k = {k} outside 1..={}", m - 1))),
        (RuleKind::KApproval, None) => Err(Error::input("k-approval needs k")),
        (_, Some(_)) => Err(Error::input(format!("k only applies to k-approval, not {kind}"))),
        (RuleKind::Scoring | RuleKind::Approval | RuleKind::Bucklin, None) => Ok((12, m)),
        (RuleKind::Maximin, None) => Ok((24, m)),
        (RuleKind::Copeland, None) => Ok((96, m)),
    }
}

fn check_open_unit(name: &str, value: &Rational) -> Result<()> {
    if *value <= Rational::zero() || *value >= Rational::one() {
        return Err(Error::input(format!("{name} must lie strictly between 0 and 1")));
    }
    Ok(())
}

fn log_term(count: usize, delta: &Rational) -> f64 {
    to_f64(&(int(2 * count as i64) / delta)).ln()
}

pub fn sample_size(kind: RuleKind, epsilon: &Rational, delta: &Rational, m: usize, k: Option<usize>) -> Result<u64> {
    check_open_unit("epsilon", epsilon)?;
    check_open_unit("delta", delta)?;
    let (c, count) = constants(kind, m, k)?;
    let scale = to_f64(&(int(c) / (epsilon * epsilon)));
    Ok((scale * log_term(count, delta)).ceil() as u64)
}

fn k_of(rule: &Rule) -> Option<usize> {
    match rule {
        Rule::KApproval(k) => Some(*k),
        _ => None,
    }
}

pub fn sample_size_for_rule(rule: &Rule, epsilon: &Rational, delta: &Rational, m: usize) -> Result<u64> {
    sample_size(rule.kind(), epsilon, delta, m, k_of(rule))
}

/// The `ε` that a budget of `ell` samples supports for `rule`, inverting
/// the sample-size formula.
pub fn effective_epsilon(rule: &Rule, delta: &Rational, m: usize, ell: u64) -> Result<f64> {
    check_open_unit("delta", delta)?;
    if ell == 0 {
        return Err(Error::input("need at least one sample"));
    }
    let (c, count) = constants(rule.kind(), m, k_of(rule))?;
    Ok((c as f64 * log_term(count, delta) / ell as f64).sqrt())
}

/// `((1−c)²/(36ε²))·ln(1/(8e√π·δ))`, clamped at zero.
pub fn lower_bound_samples(c: &Rational, epsilon: &Rational, delta: &Rational) -> f64 {
    let one_minus_c = to_f64(&(Rational::one() - c));
    let eps = to_f64(epsilon);
    let arg = 1.0 / (8.0 * std::f64::consts::E * std::f64::consts::PI.sqrt() * to_f64(delta));
    (one_minus_c * one_minus_c / (36.0 * eps * eps) * arg.ln()).max(0.0)
}

/// Multiplicative slack `c` of each estimator's guarantee.
pub fn approximation_factor(kind: RuleKind, m: usize) -> Rational {
    match kind {
        RuleKind::KApproval | RuleKind::Approval => Rational::zero(),
        RuleKind::Scoring | RuleKind::Bucklin | RuleKind::Maximin => ratio(1, 3),
        RuleKind::Copeland => {
            let l = ceil_log2(m) as i64;
            ratio(2 * l + 1, 2 * l + 3)
        }
    }
}
