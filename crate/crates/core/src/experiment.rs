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

//! Monte-Carlo checks of the estimators' guarantees.

use crate::error::{Error, Result};
use crate::estimators::{approximation_factor, estimate, split_seed, EstimateParams, MovEstimate, VoteSource};
use crate::generation::{generate, generate_approval, realized_fraction, GenSpec, Model};
use crate::io::ExperimentRow;
use crate::oracle::{closed_form_mov, mov_bounds, mov_brute_force, mov_ilp, BruteForceOptions, IlpOptions};
use crate::profile::Profile;
use crate::rational::{int, ratio, to_f64, Rational};
use crate::rules::{Rule, RuleKind};
use num_traits::Zero;
use rayon::prelude::*;
use std::fmt;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ProfileSource {
    /// A fresh profile per trial; `approval` derives approval ballots.
    Generated { spec: GenSpec, approval: bool },
    /// The same profile in every trial.
    Fixed(Profile),
}

/// How each trial's exact margin of victory is obtained.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum OraclePolicy {
    BruteForce(BruteForceOptions),
    /// k-approval and approval only.
    ClosedForm,
    BoundsOnly,
    /// Integer programming over the ballot universe; needs a small `m`.
    IntegerProgram(IlpOptions),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExperimentConfig {
    pub rule: Rule,
    pub source: ProfileSource,
    pub epsilon: Rational,
    pub delta: Rational,
    pub trials: u64,
    pub seed: u64,
    pub policy: OraclePolicy,
    pub samples: Option<u64>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct ExperimentSummary {
    pub trials: u64,
    /// Trials whose guarantee could be checked.
    pub checked: u64,
    pub violations: u64,
    /// Trials without a known margin of victory.
    pub unresolved: u64,
    pub delta: f64,
}

impl ExperimentSummary {
    pub fn from_rows(rows: &[ExperimentRow], delta: &Rational) -> Self {
        let checked = rows.iter().filter(|r| r.within_guarantee.is_some()).count() as u64;
        ExperimentSummary {
            trials: rows.len() as u64,
            checked,
            violations: rows.iter().filter(|r| r.within_guarantee == Some(false)).count() as u64,
            unresolved: rows.len() as u64 - checked,
            delta: to_f64(delta),
        }
    }

    pub fn rate(&self) -> f64 {
        if self.checked == 0 {
            0.0
        } else {
            self.violations as f64 / self.checked as f64
        }
    }

    /// `δ·T + 2·sqrt(δ(1−δ)·T)` for `T` checked trials.
    pub fn tolerance(&self) -> f64 {
        binomial_tolerance(self.delta, self.checked)
    }

    pub fn pass(&self) -> bool {
        self.checked > 0 && self.violations as f64 <= self.tolerance()
    }
}

impl fmt::Display for ExperimentSummary {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "violations {}/{} (rate {:.4}, allowed {:.2}), unresolved {}: {}",
            self.violations,
            self.checked,
            self.rate(),
            self.tolerance(),
            self.unresolved,
            if self.pass() { "PASS" } else { "FAIL" }
        )
    }
}

pub fn binomial_tolerance(p: f64, trials: u64) -> f64 {
    let t = trials as f64;
    p * t + 2.0 * (p * (1.0 - p) * t).sqrt()
}

fn check_config(config: &ExperimentConfig) -> Result<()> {
    if config.trials == 0 {
        return Err(Error::input("trials must be at least 1"));
    }
    if config.policy == OraclePolicy::ClosedForm
        && !matches!(config.rule.kind(), RuleKind::KApproval | RuleKind::Approval)
    {
        return Err(Error::input(
            "the closed-form oracle only covers k-approval and approval",
        ));
    }
    let approval_source = match &config.source {
        ProfileSource::Generated { approval, .. } => *approval,
        ProfileSource::Fixed(p) => p.is_approval(),
    };
    if approval_source != config.rule.is_approval() {
        return Err(Error::input(format!(
            "rule {} does not match the ballot kind",
            config.rule
        )));
    }
    Ok(())
}

fn trial_profile(source: &ProfileSource, seed: u64) -> Result<Profile> {
    match source {
        ProfileSource::Fixed(p) => Ok(p.clone()),
        ProfileSource::Generated { spec, approval } => {
            let spec = GenSpec { seed, ..spec.clone() };
            Ok(if *approval {
                generate_approval(&spec)?.into()
            } else {
                generate(&spec)?.into()
            })
        }
    }
}

fn exact_mov(profile: &Profile, rule: &Rule, policy: &OraclePolicy, range: (u64, Option<u64>)) -> Result<Option<u64>> {
    if range.1 == Some(range.0) {
        return Ok(Some(range.0));
    }
    match policy {
        OraclePolicy::BruteForce(options) => match mov_brute_force(profile, rule, options) {
            Ok(r) => Ok(r.value()),
            Err(e) if e.is_resource() => Ok(None),
            Err(e) => Err(e),
        },
        OraclePolicy::ClosedForm => match closed_form_mov(profile, rule) {
            Ok(v) => Ok(Some(v)),
            Err(Error::NotApplicable(_)) => Ok(None),
            Err(e) => Err(e),
        },
        OraclePolicy::BoundsOnly => Ok(None),
        OraclePolicy::IntegerProgram(options) => Ok(mov_ilp(profile, rule, options)?.value()),
    }
}

/// Distance from `value` to the interval `[lo, hi]`.
fn distance(value: &Rational, lo: u64, hi: Option<u64>) -> Rational {
    let lo = int(lo as i64);
    if *value < lo {
        return lo - value;
    }
    match hi.map(|h| int(h as i64)) {
        Some(h) if *value > h => value - h,
        _ => Rational::zero(),
    }
}

/// Guarantee check when only `MoV ∈ [lo, hi]` is known: the estimate must
/// lie in `[lo − c·hi − εn, hi + c·hi + εn]`.
fn within_interval(est: &MovEstimate, lo: u64, hi: Option<u64>) -> bool {
    let Some(hi) = hi else { return true };
    let slack = &est.c * int(hi as i64) + &est.epsilon * int(est.n as i64);
    let lower = int(lo as i64) - &slack;
    let upper = int(hi as i64) + slack;
    lower <= est.m_bar && est.m_bar <= upper
}

pub fn run_trial(config: &ExperimentConfig, trial: u64) -> Result<ExperimentRow> {
    let seed = split_seed(config.seed, trial);
    let profile = trial_profile(&config.source, split_seed(seed, 0))?;
    let bounds = mov_bounds(&profile, &config.rule)?;
    let (lo, hi) = bounds.integer_range();
    let exact = exact_mov(&profile, &config.rule, &config.policy, (lo, hi))?;
    let source = VoteSource::new(&profile)?;
    let params = EstimateParams {
        epsilon: config.epsilon.clone(),
        delta: config.delta.clone(),
        seed: split_seed(seed, 1),
        samples: config.samples,
    };
    let est = estimate(&source, &config.rule, &params)?;
    let (abs_error, within) = match exact {
        Some(mov) => (est.error(mov), Some(est.within_guarantee(mov))),
        None => (
            distance(&est.m_bar, lo, hi),
            (config.policy == OraclePolicy::BoundsOnly).then(|| within_interval(&est, lo, hi)),
        ),
    };
    Ok(ExperimentRow {
        trial,
        seed,
        rule: config.rule.to_string(),
        n: profile.n(),
        m: profile.m(),
        epsilon: est.epsilon.clone(),
        delta: est.delta.clone(),
        ell: est.ell,
        mov_exact: exact,
        mov_lower: Some(lo),
        mov_upper: hi,
        estimate: est.m_bar,
        abs_error: Some(abs_error),
        within_guarantee: within,
    })
}

/// Runs every trial in parallel; rows come back in trial order.
pub fn run_experiment(config: &ExperimentConfig) -> Result<Vec<ExperimentRow>> {
    check_config(config)?;
    (0..config.trials)
        .into_par_iter()
        .map(|t| run_trial(config, t))
        .collect()
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DistinguishConfig {
    pub epsilon: Rational,
    pub delta: Rational,
    pub n: u64,
    pub trials: u64,
    pub seed: u64,
    /// Overrides the plurality sample size.
    pub samples: Option<u64>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct DistinguishReport {
    pub n: u64,
    pub ell: u64,
    /// Share of `a ≻ b` votes realized in `X`.
    pub fraction_x: Rational,
    /// `M̄` above this classifies the sample as `X`.
    pub threshold: Rational,
    pub trials: u64,
    pub errors_x: u64,
    pub errors_y: u64,
    pub delta: f64,
}

impl DistinguishReport {
    pub fn rate_x(&self) -> f64 {
        self.errors_x as f64 / self.trials as f64
    }

    pub fn rate_y(&self) -> f64 {
        self.errors_y as f64 / self.trials as f64
    }

    /// Error of the distinguisher when `X` and `Y` are equally likely.
    pub fn combined_rate(&self) -> f64 {
        (self.errors_x + self.errors_y) as f64 / (2 * self.trials) as f64
    }

    /// Each error count stays within `2δ` plus binomial slack.
    pub fn pass(&self) -> bool {
        let allowed = binomial_tolerance((2.0 * self.delta).min(1.0), self.trials);
        self.errors_x as f64 <= allowed && self.errors_y as f64 <= allowed
    }
}

impl fmt::Display for DistinguishReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(
            f,
            "n = {}, ell = {}, X fraction = {}",
            self.n,
            self.ell,
            crate::rational::format_trimmed(&self.fraction_x, 6)
        )?;
        writeln!(
            f,
            "error on X: {}/{} ({:.4})",
            self.errors_x,
            self.trials,
            self.rate_x()
        )?;
        writeln!(
            f,
            "error on Y: {}/{} ({:.4})",
            self.errors_y,
            self.trials,
            self.rate_y()
        )?;
        write!(
            f,
            "combined error: {:.4} (bound 2δ = {:.4}): {}",
            self.combined_rate(),
            2.0 * self.delta,
            if self.pass() { "PASS" } else { "FAIL" }
        )
    }
}

/// Two-candidate populations `X` (a `1/2 + 6ε` share prefers `a`) and `Y`
/// (an exact tie), told apart by thresholding the plurality estimate at
/// `1.5εn`.
pub fn distinguish(config: &DistinguishConfig) -> Result<DistinguishReport> {
    if config.trials == 0 {
        return Err(Error::input("trials must be at least 1"));
    }
    let p_x = ratio(1, 2) + int(6) * &config.epsilon;
    if p_x > int(1) {
        return Err(Error::input(
            "epsilon must be below 1/12 for the two-candidate construction",
        ));
    }
    let c = approximation_factor(RuleKind::KApproval, 2);
    let threshold = &c + ratio(3, 2) * &config.epsilon * int(config.n as i64);
    let population = |p: Rational, seed| -> Result<Profile> {
        Ok(generate(&GenSpec::new(Model::TwoCandidate { p }, config.n, 2, seed))?.into())
    };
    let x = population(p_x, 0)?;
    let y = population(ratio(1, 2), 0)?;
    let (sx, sy) = (VoteSource::new(&x)?, VoteSource::new(&y)?);
    let rule = Rule::KApproval(1);
    let outcomes: Vec<(bool, bool, u64)> = (0..config.trials)
        .into_par_iter()
        .map(|t| -> Result<(bool, bool, u64)> {
            let seed = split_seed(config.seed, t);
            let params = |s| EstimateParams {
                epsilon: config.epsilon.clone(),
                delta: config.delta.clone(),
                seed: s,
                samples: config.samples,
            };
            let ex = estimate(&sx, &rule, &params(split_seed(seed, 0)))?;
            let ey = estimate(&sy, &rule, &params(split_seed(seed, 1)))?;
            Ok((ex.m_bar <= threshold, ey.m_bar > threshold, ex.ell))
        })
        .collect::<Result<_>>()?;
    let Profile::Ranked(xr) = &x else { unreachable!() };
    Ok(DistinguishReport {
        n: config.n,
        ell: outcomes[0].2,
        fraction_x: realized_fraction(xr),
        threshold,
        trials: config.trials,
        errors_x: outcomes.iter().filter(|o| o.0).count() as u64,
        errors_y: outcomes.iter().filter(|o| o.1).count() as u64,
        delta: to_f64(&config.delta),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rules::ScoreVector;

    fn planted(trials: u64) -> ExperimentConfig {
        ExperimentConfig {
            rule: Rule::KApproval(1),
            source: ProfileSource::Generated {
                spec: GenSpec::new(Model::PlantedGap { winner: 0, gap: 40 }, 400, 3, 0),
                approval: false,
            },
            epsilon: ratio(1, 10),
            delta: ratio(1, 20),
            trials,
            seed: 5,
            policy: OraclePolicy::ClosedForm,
            samples: None,
        }
    }

    #[test]
    fn rows_are_deterministic_and_ordered() {
        let config = planted(6);
        let rows = run_experiment(&config).unwrap();
        assert_eq!(rows, run_experiment(&config).unwrap());
        assert_eq!(
            rows.iter().map(|r| r.trial).collect::<Vec<_>>(),
            (0..6).collect::<Vec<_>>()
        );
        assert!(rows.iter().all(|r| r.mov_exact == Some(20)));
        let summary = ExperimentSummary::from_rows(&rows, &config.delta);
        assert_eq!(summary.checked, 6);
    }

    #[test]
    fn closed_form_policy_is_restricted() {
        let config = ExperimentConfig {
            rule: Rule::Maximin,
            ..planted(1)
        };
        assert!(run_experiment(&config).is_err());
        assert!(run_experiment(&ExperimentConfig {
            trials: 0,
            ..planted(1)
        })
        .is_err());
    }

    #[test]
    fn bounds_only_checks_against_interval() {
        let config = ExperimentConfig {
            rule: Rule::Scoring(ScoreVector::borda(3).unwrap()),
            source: ProfileSource::Generated {
                spec: GenSpec::new(Model::ImpartialCulture, 300, 3, 0),
                approval: false,
            },
            policy: OraclePolicy::BoundsOnly,
            ..planted(4)
        };
        let rows = run_experiment(&config).unwrap();
        assert!(rows.iter().all(|r| r.within_guarantee.is_some()));
    }

    #[test]
    fn distance_to_interval() {
        assert_eq!(distance(&int(1), 3, Some(5)), int(2));
        assert_eq!(distance(&int(4), 3, Some(5)), int(0));
        assert_eq!(distance(&int(9), 3, None), int(0));
        assert_eq!(distance(&ratio(11, 2), 3, Some(5)), ratio(1, 2));
    }

    #[test]
    fn single_sample_distinguisher_is_a_coin() {
        let report = distinguish(&DistinguishConfig {
            epsilon: ratio(1, 20),
            delta: ratio(1, 20),
            n: 1000,
            trials: 50,
            seed: 3,
            samples: Some(1),
        })
        .unwrap();
        assert_eq!(report.combined_rate(), 0.5);
        assert!(!report.pass());
    }

    #[test]
    fn distinguisher_rejects_large_epsilon() {
        let config = DistinguishConfig {
            epsilon: ratio(1, 10),
            delta: ratio(1, 20),
            n: 1000,
            trials: 5,
            seed: 3,
            samples: None,
        };
        assert!(distinguish(&config).is_err());
    }
}
