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

//! End-to-end acceptance checks. Each criterion prints one PASS/FAIL line;
//! the process exits non-zero if any of them fails.

use mov_core::estimators::{sample_size, split_seed, VoteSource};
use mov_core::experiment::{
    binomial_tolerance, distinguish, run_experiment, DistinguishConfig, ExperimentConfig, ExperimentSummary,
    OraclePolicy, ProfileSource,
};
use mov_core::generation::{generate, generate_approval, GenSpec, Model};
use mov_core::io::{parse_election, write_election, ExperimentRow};
use mov_core::oracle::{
    bucklin_delta, mov_bounds, mov_brute_force, mov_kapproval_closed_form, BruteForceOptions, IlpOptions,
};
use mov_core::profile::{ApprovalBallot, ApprovalProfile, Ballot, RankedProfile, Ranking};
use mov_core::rational::ratio;
use mov_core::{winner_set, Profile, Rule, RuleKind, RuleSpec};
use num_bigint::BigInt;
use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::process::{Command, ExitCode};
use std::time::Instant;

struct Outcome {
    pass: bool,
    details: Vec<String>,
}

impl Outcome {
    fn new() -> Self {
        Outcome {
            pass: true,
            details: Vec::new(),
        }
    }

    fn check(&mut self, ok: bool, detail: String) {
        self.pass &= ok;
        self.details
            .push(format!("{} {detail}", if ok { "ok  " } else { "BAD " }));
    }

    fn note(&mut self, detail: String) {
        self.details.push(format!("     {detail}"));
    }
}

// ---------------------------------------------------------------------------
// 1. Sample sizes against a fixed-point natural log.

/// Fixed-point scale for the log oracle.
fn scale() -> BigInt {
    BigInt::from(10u32).pow(60)
}

/// `atanh(p/q)·S` by the odd power series; requires `|p/q| ≤ 1/3`.
fn atanh_fixed(p: &BigInt, q: &BigInt) -> BigInt {
    let mut power = scale() * p / q;
    let (p2, q2) = (p * p, q * q);
    let mut sum = BigInt::zero();
    let mut k = 1u32;
    while !power.is_zero() {
        sum += &power / BigInt::from(k);
        power = power * &p2 / &q2;
        k += 2;
    }
    sum
}

/// `ln(p/q)·S` for positive `p/q`.
fn ln_fixed(p: &BigInt, q: &BigInt) -> BigInt {
    let ln2 = 2 * atanh_fixed(&BigInt::one(), &BigInt::from(3));
    let (mut p, mut q) = (p.clone(), q.clone());
    let mut j: i64 = 0;
    while p >= &q * 2 {
        q *= 2;
        j += 1;
    }
    while p < q {
        p *= 2;
        j -= 1;
    }
    // now 1 ≤ p/q < 2 and ln(y) = 2·atanh((y − 1)/(y + 1))
    ln2 * j + 2 * atanh_fixed(&(&p - &q), &(&p + &q))
}

/// `⌈(c/ε²)·ln(2N/δ)⌉` with `ε = e_num/e_den`, `δ = d_num/d_den`.
fn sample_size_oracle(c: u64, n_cap: u64, e: (u64, u64), d: (u64, u64)) -> Option<u64> {
    let big = |v: u64| BigInt::from(v);
    let ln = ln_fixed(&(big(2 * n_cap) * big(d.1)), &big(d.0));
    let value = ln * big(c) * big(e.1) * big(e.1) / (big(e.0) * big(e.0));
    let s = scale();
    let (whole, frac) = (&value / &s, &value % &s);
    // refuse to round when the value sits within rounding noise of an integer
    let noise = BigInt::from(10u32).pow(20);
    if frac < noise || (&s - &frac) < noise {
        return None;
    }
    u64::try_from(whole + 1).ok()
}

fn criterion_sample_sizes() -> Outcome {
    let mut out = Outcome::new();
    let (eps, delta) = (ratio(1, 10), ratio(1, 100));
    let cases: [(&str, RuleKind, Option<usize>, u64, u64); 6] = [
        ("k-approval k=1", RuleKind::KApproval, Some(1), 12, 1),
        ("scoring", RuleKind::Scoring, None, 12, 5),
        ("approval", RuleKind::Approval, None, 12, 5),
        ("bucklin", RuleKind::Bucklin, None, 12, 5),
        ("maximin", RuleKind::Maximin, None, 24, 5),
        ("copeland", RuleKind::Copeland, None, 96, 5),
    ];
    for (name, kind, k, c, n_cap) in cases {
        let got = sample_size(kind, &eps, &delta, 5, k);
        let want = sample_size_oracle(c, n_cap, (1, 10), (1, 100));
        match (got, want) {
            (Ok(g), Some(w)) => out.check(g == w, format!("{name}: computed {g}, high-precision value {w}")),
            (got, want) => out.check(false, format!("{name}: computed {got:?}, oracle {want:?}")),
        }
    }
    out
}

// ---------------------------------------------------------------------------
// 2 and 3. Sandwich bounds and the k-approval closed form on small profiles.

const RANKED_RULES: [&str; 8] = [
    "plurality",
    "kapproval:2",
    "borda",
    "bucklin",
    "maximin",
    "copeland:0",
    "copeland:0.5",
    "copeland:1",
];

struct SmallCase {
    profile: Profile,
    rule: Rule,
    label: String,
}

fn small_suite() -> Vec<SmallCase> {
    let mut cases = Vec::new();
    let mut push = |profile: Profile, spec: &str| {
        let rule = spec.parse::<RuleSpec>().unwrap().resolve(profile.m());
        if let Ok(rule) = rule {
            cases.push(SmallCase {
                label: format!("{spec} on {}", write_election(&profile).replace('\n', " ")),
                profile,
                rule,
            });
        }
    };
    for spec in RANKED_RULES.iter().chain(["approval"].iter()) {
        for i in 0..500u64 {
            let seed = split_seed(0xACCE_0002, i);
            let n = 1 + seed % 6;
            let gen = GenSpec::new(Model::ImpartialCulture, n, 3, seed);
            let profile: Profile = if *spec == "approval" {
                generate_approval(&gen).unwrap().into()
            } else {
                generate(&gen).unwrap().into()
            };
            push(profile, spec);
        }
    }
    // m = 2: every ranked profile with n ≤ 6 and every approval profile with n ≤ 4
    let (ab, ba) = (Ranking::new(vec![0, 1]).unwrap(), Ranking::new(vec![1, 0]).unwrap());
    for n in 1..=6u64 {
        for first in 0..=n {
            let votes: Vec<(Ranking, u64)> = [(ab.clone(), first), (ba.clone(), n - first)]
                .into_iter()
                .filter(|(_, c)| *c > 0)
                .collect();
            let profile: Profile = RankedProfile::new(2, None, votes).unwrap().into();
            for spec in RANKED_RULES {
                push(profile.clone(), spec);
            }
        }
    }
    let sets = ApprovalBallot::all(2);
    for n in 1..=4u64 {
        for counts in compositions(n, sets.len()) {
            let votes = sets.iter().cloned().zip(counts).filter(|(_, c)| *c > 0).collect();
            push(ApprovalProfile::new(2, None, votes).unwrap().into(), "approval");
        }
    }
    cases
}

/// Every way of writing `n` as an ordered sum of `parts` non-negative terms.
fn compositions(n: u64, parts: usize) -> Vec<Vec<u64>> {
    if parts == 1 {
        return vec![vec![n]];
    }
    (0..=n)
        .flat_map(|head| {
            compositions(n - head, parts - 1).into_iter().map(move |mut tail| {
                tail.insert(0, head);
                tail
            })
        })
        .collect()
}

fn brute(case: &SmallCase) -> Option<u64> {
    let options = BruteForceOptions {
        budget: 6,
        ..BruteForceOptions::default()
    };
    mov_brute_force(&case.profile, &case.rule, &options).ok()?.value()
}

fn criterion_sandwich(suite: &[SmallCase], exact: &[Option<u64>]) -> Outcome {
    let mut out = Outcome::new();
    let mut violations = Vec::new();
    let mut unresolved = 0;
    for (case, mov) in suite.iter().zip(exact) {
        let Some(mov) = *mov else {
            unresolved += 1;
            continue;
        };
        let bounds = mov_bounds(&case.profile, &case.rule).unwrap();
        if !bounds.contains(mov) {
            violations.push(format!("MoV {mov} outside {bounds:?} for {}", case.label));
        }
    }
    out.check(
        unresolved == 0,
        format!(
            "{} instances solved by exhaustive search, {unresolved} unsolved",
            suite.len()
        ),
    );
    out.check(violations.is_empty(), format!("{} bound violations", violations.len()));
    for v in violations.iter().take(5) {
        out.note(v.clone());
    }
    out
}

fn criterion_closed_form(suite: &[SmallCase], exact: &[Option<u64>]) -> Outcome {
    let mut out = Outcome::new();
    let (mut compared, mut mismatches) = (0, Vec::new());
    for (case, mov) in suite.iter().zip(exact) {
        let Rule::KApproval(k) = case.rule else { continue };
        if winner_set(&case.profile, &case.rule).unwrap().winners.len() != 1 {
            continue;
        }
        let Profile::Ranked(ranked) = &case.profile else {
            continue;
        };
        compared += 1;
        let closed = mov_kapproval_closed_form(ranked, k).ok();
        if closed != *mov {
            mismatches.push(format!("closed form {closed:?}, exhaustive {mov:?} for {}", case.label));
        }
    }
    out.check(
        compared >= 500,
        format!("{compared} tie-free k-approval instances compared"),
    );
    out.check(mismatches.is_empty(), format!("{} mismatches", mismatches.len()));
    for m in mismatches.iter().take(5) {
        out.note(m.clone());
    }
    out
}

// ---------------------------------------------------------------------------
// 4. Guarantee coverage at n = 2000.

fn criterion_coverage() -> Outcome {
    let mut out = Outcome::new();
    let n = 2000;
    let m = 3;
    let planted = GenSpec::new(Model::PlantedGap { winner: 0, gap: 120 }, n, m, 0);
    let ic = GenSpec::new(Model::ImpartialCulture, n, m, 0);
    let replicated = GenSpec::new(Model::Replicated { base_n: 5 }, n, m, 0);
    let ilp = OraclePolicy::IntegerProgram(IlpOptions::default());
    let runs: Vec<(&str, GenSpec, bool, OraclePolicy)> = vec![
        ("plurality", planted.clone(), false, OraclePolicy::ClosedForm),
        ("kapproval:2", ic.clone(), false, ilp.clone()),
        ("approval", ic.clone(), true, ilp.clone()),
        ("borda", replicated.clone(), false, ilp.clone()),
        ("bucklin", replicated.clone(), false, ilp.clone()),
        ("maximin", replicated.clone(), false, ilp.clone()),
        ("copeland:0.5", replicated.clone(), false, ilp.clone()),
    ];
    for (i, (spec, gen, approval, policy)) in runs.into_iter().enumerate() {
        let start = Instant::now();
        let config = ExperimentConfig {
            rule: spec.parse::<RuleSpec>().unwrap().resolve(m).unwrap(),
            source: ProfileSource::Generated { spec: gen, approval },
            epsilon: ratio(1, 10),
            delta: ratio(1, 20),
            trials: 200,
            seed: split_seed(0xACCE_0004, i as u64),
            policy,
            samples: None,
        };
        match run_experiment(&config) {
            Ok(rows) => {
                let summary = ExperimentSummary::from_rows(&rows, &config.delta);
                let ell = rows.first().map_or(0, |r| r.ell);
                out.check(
                    summary.pass() && summary.unresolved == 0,
                    format!("{spec}: ℓ = {ell}, {summary} [{:.1?}]", start.elapsed()),
                );
                if config.rule == Rule::Bucklin {
                    out.note(bucklin_diagnostic(&config, &rows));
                }
            }
            Err(e) => out.check(false, format!("{spec}: {e}")),
        }
    }
    out
}

/// The Bucklin estimator targets Δ/1.5, which is only accurate when
/// Δ/2 ≤ MoV. Counts the trials where that lower bound fails.
fn bucklin_diagnostic(config: &ExperimentConfig, rows: &[ExperimentRow]) -> String {
    let ProfileSource::Generated { spec, .. } = &config.source else {
        return String::new();
    };
    let mut below = 0;
    for row in rows {
        let gen = GenSpec {
            seed: split_seed(row.seed, 0),
            ..spec.clone()
        };
        let profile = generate(&gen).unwrap();
        if let (Some(delta), Some(mov)) = (bucklin_delta(&profile), row.mov_exact) {
            below += (2 * mov < delta) as u32;
        }
    }
    format!("bucklin: exact MoV < Δ/2 in {below}/{} trials", rows.len())
}

// ---------------------------------------------------------------------------
// 5. Concentration of sampled plurality scores.

fn criterion_concentration() -> Outcome {
    let mut out = Outcome::new();
    let m = 4;
    let (n, trials) = (2000u64, 400u64);
    let ell = sample_size(RuleKind::Scoring, &ratio(1, 10), &ratio(1, 20), m, None).unwrap();
    let profile: Profile = generate(&GenSpec::new(Model::ImpartialCulture, n, m, 0xACCE_0005))
        .unwrap()
        .into();
    let mut truth = vec![0u64; m];
    for (ballot, count) in profile.entries() {
        if let Ballot::Ranked(r) = ballot {
            truth[r.top()] += count;
        }
    }
    let source = VoteSource::new(&profile).unwrap();
    let mut bad = 0u64;
    for t in 0..trials {
        let mut counts = vec![0u64; m];
        for ballot in source.draw(ell, split_seed(0xACCE_0005, t)) {
            if let Ballot::Ranked(r) = ballot {
                counts[r.top()] += 1;
            }
        }
        // |count·n/ℓ − s| > (ε/2)·n with ε = 1/10, cleared of denominators
        let off = (0..m).any(|x| {
            let diff = (counts[x] as i128 * n as i128 - truth[x] as i128 * ell as i128).abs();
            20 * diff > (n as i128) * (ell as i128)
        });
        bad += off as u64;
    }
    let allowed = binomial_tolerance(0.05, trials);
    out.check(
        bad as f64 <= allowed,
        format!("ℓ = {ell}: {bad}/{trials} trials with some |s̄ − s| > εn/2 (allowed {allowed:.2})"),
    );
    out
}

// ---------------------------------------------------------------------------
// 6. f(x) + f(y) ≤ f(x + y) for f(t) = exp(−λ/t) when x < y and λ/(x+y) > 2.

fn criterion_convexity() -> Outcome {
    let mut out = Outcome::new();
    let f = |lambda: f64, t: f64| (-lambda / t).exp();
    let lambdas = [0.01, 0.1, 0.5, 1.0, 2.0, 5.0, 10.0, 50.0, 100.0, 1000.0];
    let (mut points, mut worst, mut failures) = (0u64, f64::NEG_INFINITY, 0u64);
    for &lambda in &lambdas {
        for i in 1..=50 {
            let x = i as f64 / 51.0 * lambda / 4.0;
            for j in 1..=50 {
                let y = x + j as f64 / 51.0 * (lambda / 2.0 - 2.0 * x);
                debug_assert!(0.0 < x && x < y && lambda / (x + y) > 2.0);
                let excess = f(lambda, x) + f(lambda, y) - f(lambda, x + y);
                worst = worst.max(excess);
                failures += (excess > 1e-12) as u64;
                points += 1;
            }
        }
    }
    out.check(
        failures == 0,
        format!("{points} grid points, {failures} above tolerance, largest f(x)+f(y)−f(x+y) = {worst:.3e}"),
    );
    out
}

// ---------------------------------------------------------------------------
// 7. Distinguishing the two plurality populations.

fn criterion_distinguish() -> Outcome {
    let mut out = Outcome::new();
    let config = DistinguishConfig {
        epsilon: ratio(1, 20),
        delta: ratio(1, 20),
        n: 100_000,
        trials: 500,
        seed: 0xACCE_0007,
        samples: None,
    };
    match distinguish(&config) {
        Ok(report) => {
            out.check(report.pass(), report.to_string().replace('\n', "; "));
        }
        Err(e) => out.check(false, e.to_string()),
    }
    out
}

// ---------------------------------------------------------------------------
// 8. Reproducible commands and file round trips.

fn run_cli(args: &[&str]) -> (Option<i32>, Vec<u8>, Vec<u8>) {
    let output = Command::new(env!("CARGO_BIN_EXE_movest"))
        .args(args)
        .output()
        .expect("movest runs");
    (output.status.code(), output.stdout, output.stderr)
}

fn random_profile(rng: &mut ChaCha8Rng) -> Profile {
    let m = rng.gen_range(1..=6usize);
    let names = rng.gen_bool(0.5).then(|| {
        let mut names: Vec<String> = Vec::new();
        while names.len() < m {
            let len = rng.gen_range(1..=6);
            let name: String = (0..len).map(|_| rng.gen_range(b'a'..=b'z') as char).collect();
            if !names.contains(&name) {
                names.push(name);
            }
        }
        names
    });
    let entries = rng.gen_range(1..=12);
    if rng.gen_bool(0.5) {
        let all = Ranking::all(m);
        let votes = (0..entries)
            .map(|_| (all[rng.gen_range(0..all.len())].clone(), rng.gen_range(1..=1000)))
            .collect();
        RankedProfile::new(m, names, votes).unwrap().into()
    } else {
        let all = ApprovalBallot::all(m);
        let votes = (0..entries)
            .map(|_| (all[rng.gen_range(0..all.len())].clone(), rng.gen_range(1..=1000)))
            .collect();
        ApprovalProfile::new(m, names, votes).unwrap().into()
    }
}

fn criterion_determinism() -> Outcome {
    let mut out = Outcome::new();
    let dir = std::env::temp_dir().join(format!("movest-acceptance-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let election = dir.join("election.txt");
    let generated = run_cli(&["generate", "--model", "ic", "--n", "500", "--m", "4", "--seed", "7"]);
    std::fs::write(&election, &generated.1).unwrap();
    let election = election.to_str().unwrap();
    let commands: Vec<Vec<&str>> = vec![
        vec!["generate", "--model", "ic", "--n", "500", "--m", "4", "--seed", "7"],
        vec![
            "generate", "--model", "planted", "--n", "300", "--m", "3", "--gap", "30", "--seed", "9",
        ],
        vec![
            "generate",
            "--model",
            "replicated",
            "--n",
            "60",
            "--m",
            "3",
            "--base-n",
            "6",
            "--seed",
            "2",
        ],
        vec!["generate", "--n", "40", "--m", "3", "--approval", "--seed", "4"],
        vec![
            "mov", "--mode", "estimate", "--rule", "copeland", "--input", election, "--seed", "11",
        ],
        vec![
            "mov",
            "--mode",
            "estimate",
            "--rule",
            "bucklin",
            "--input",
            election,
            "--seed",
            "12",
            "--samples",
            "50",
        ],
        vec![
            "experiment",
            "--rule",
            "maximin",
            "--n",
            "300",
            "--m",
            "3",
            "--trials",
            "8",
            "--seed",
            "5",
        ],
        vec![
            "experiment",
            "--rule",
            "plurality",
            "--model",
            "planted",
            "--n",
            "300",
            "--m",
            "3",
            "--gap",
            "40",
            "--trials",
            "8",
            "--seed",
            "6",
            "--oracle",
            "closed",
        ],
        vec![
            "distinguish",
            "--epsilon",
            "0.05",
            "--delta",
            "0.1",
            "--trials",
            "20",
            "--seed",
            "3",
            "--n",
            "10000",
        ],
    ];
    for args in &commands {
        let first = run_cli(args);
        let second = run_cli(args);
        let ok = first == second && first.0 == Some(0) && !first.1.is_empty();
        out.check(ok, format!("movest {} ({} bytes)", args.join(" "), first.1.len()));
    }
    let _ = std::fs::remove_dir_all(&dir);

    let mut rng = ChaCha8Rng::seed_from_u64(0xACCE_0008);
    let mut failures = 0;
    for _ in 0..1000 {
        let profile = random_profile(&mut rng);
        let text = write_election(&profile);
        let ok = match parse_election(&text) {
            Ok(parsed) => parsed == profile.canonical() && write_election(&parsed) == text,
            Err(_) => false,
        };
        failures += !ok as u32;
    }
    out.check(
        failures == 0,
        format!("1000 random profiles written and re-read, {failures} mismatches"),
    );
    out
}

fn main() -> ExitCode {
    let mut all_pass = true;
    let mut report = |id: u32, name: &str, start: Instant, outcome: Outcome| {
        all_pass &= outcome.pass;
        let verdict = if outcome.pass { "PASS" } else { "FAIL" };
        println!("criterion {id} {name}: {verdict} [{:.1?}]", start.elapsed());
        for d in &outcome.details {
            println!("    {d}");
        }
    };

    let t = Instant::now();
    report(1, "sample sizes", t, criterion_sample_sizes());

    let t = Instant::now();
    let suite = small_suite();
    let exact: Vec<Option<u64>> = suite.iter().map(brute).collect();
    let t2 = Instant::now();
    report(2, "sandwich bounds", t, criterion_sandwich(&suite, &exact));
    report(3, "k-approval closed form", t2, criterion_closed_form(&suite, &exact));

    let t = Instant::now();
    report(4, "guarantee coverage", t, criterion_coverage());
    let t = Instant::now();
    report(5, "score concentration", t, criterion_concentration());
    let t = Instant::now();
    report(6, "convexity", t, criterion_convexity());
    let t = Instant::now();
    report(7, "distinguisher", t, criterion_distinguish());
    let t = Instant::now();
    report(8, "determinism and round trip", t, criterion_determinism());

    if all_pass {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
