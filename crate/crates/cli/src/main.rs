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

//! `movest`: winners, margins of victory and sampling estimates from the
//! command line.

use anyhow::{bail, Context};
use clap::{Args, Parser, Subcommand, ValueEnum};
use mov_core::estimators::{
    estimate, guarantee_statement, lower_bound_samples, sample_size, EstimateParams, VoteSource,
};
use mov_core::experiment::{
    distinguish, run_experiment, DistinguishConfig, ExperimentConfig, ExperimentSummary, OraclePolicy, ProfileSource,
};
use mov_core::generation::{generate, generate_approval, GenSpec, Model};
use mov_core::io::{parse_election, write_election, write_experiment_csv};
use mov_core::oracle::{
    mov_bounds, mov_brute_force, mov_ilp, BruteForceOptions, ExactMovResult, IlpOptions, MovStatus,
};
use mov_core::rational::{format_exact, format_significant, format_trimmed, parse_rational, Rational};
use mov_core::{winner_set, Profile, Rule, RuleKind, RuleSpec};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

#[derive(Parser)]
#[command(name = "movest", version, about = "Margins of victory for single-winner elections")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Print the winner set and every candidate's score.
    Winner {
        #[arg(long)]
        input: PathBuf,
        #[arg(long, value_parser = parse_rule)]
        rule: RuleSpec,
    },
    /// Exact margin of victory, its bounds, or a sampling estimate.
    Mov(MovArgs),
    /// Number of samples an estimator draws.
    Samplesize {
        #[arg(long, value_parser = parse_kind)]
        rule: RuleKind,
        /// Number of candidates; k-approval defaults to k + 1.
        #[arg(long)]
        m: Option<usize>,
        #[arg(long)]
        k: Option<usize>,
        #[arg(long, value_parser = parse_number)]
        epsilon: Rational,
        #[arg(long, value_parser = parse_number)]
        delta: Rational,
    },
    /// Samples any estimator needs for plurality with two candidates.
    Lowerbound {
        #[arg(long, value_parser = parse_number)]
        c: Rational,
        #[arg(long, value_parser = parse_number)]
        epsilon: Rational,
        #[arg(long, value_parser = parse_number)]
        delta: Rational,
    },
    /// Write a synthetic election file.
    Generate {
        #[command(flatten)]
        model: ModelArgs,
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Monte-Carlo check of an estimator's guarantee.
    Experiment(ExperimentArgs),
    /// Tell two nearby two-candidate populations apart with the plurality estimator.
    Distinguish {
        #[arg(long, value_parser = parse_number)]
        epsilon: Rational,
        #[arg(long, value_parser = parse_number)]
        delta: Rational,
        #[arg(long, default_value_t = 500)]
        trials: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 100_000)]
        n: u64,
        /// Samples per estimate instead of the theorem's budget.
        #[arg(long)]
        samples: Option<u64>,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Mode {
    Exact,
    Bounds,
    Estimate,
}

#[derive(Clone, Copy, ValueEnum)]
enum ExactMethod {
    Brute,
    Ilp,
}

#[derive(Args)]
struct MovArgs {
    #[arg(long)]
    input: PathBuf,
    #[arg(long, value_parser = parse_rule)]
    rule: RuleSpec,
    #[arg(long, value_enum)]
    mode: Mode,
    /// Exact mode: search method.
    #[arg(long, value_enum, default_value = "brute")]
    method: ExactMethod,
    /// Exact mode: largest number of changed votes to try.
    #[arg(long, default_value_t = 8)]
    budget: u32,
    /// Exact mode: maximum number of winner evaluations.
    #[arg(long, default_value_t = 50_000_000)]
    work_limit: u64,
    #[arg(long, value_parser = parse_number, default_value = "0.1")]
    epsilon: Rational,
    #[arg(long, value_parser = parse_number, default_value = "0.05")]
    delta: Rational,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    samples: Option<u64>,
}

#[derive(Clone, Copy, ValueEnum)]
enum ModelKind {
    Ic,
    Planted,
    Two,
    Replicated,
}

#[derive(Args)]
struct ModelArgs {
    #[arg(long, value_enum, default_value = "ic")]
    model: ModelKind,
    #[arg(long)]
    n: u64,
    #[arg(long)]
    m: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Planted model: the winner's index.
    #[arg(long, default_value_t = 0)]
    winner: usize,
    /// Planted model: plurality score gap.
    #[arg(long, default_value_t = 1)]
    gap: u64,
    /// Two-candidate model: share of a≻b votes.
    #[arg(long, value_parser = parse_number, default_value = "1/2")]
    p: Rational,
    /// Replicated model: size of the base profile.
    #[arg(long, default_value_t = 5)]
    base_n: u64,
    /// Approve a uniformly long prefix of each ranking instead.
    #[arg(long)]
    approval: bool,
}

impl ModelArgs {
    fn spec(&self) -> GenSpec {
        let model = match self.model {
            ModelKind::Ic => Model::ImpartialCulture,
            ModelKind::Planted => Model::PlantedGap {
                winner: self.winner,
                gap: self.gap,
            },
            ModelKind::Two => Model::TwoCandidate { p: self.p.clone() },
            ModelKind::Replicated => Model::Replicated { base_n: self.base_n },
        };
        GenSpec::new(model, self.n, self.m, self.seed)
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum Oracle {
    Brute,
    Closed,
    Bounds,
    Ilp,
}

#[derive(Args)]
struct ExperimentArgs {
    #[arg(long, value_parser = parse_rule)]
    rule: RuleSpec,
    #[arg(long, value_parser = parse_number, default_value = "0.1")]
    epsilon: Rational,
    #[arg(long, value_parser = parse_number, default_value = "0.05")]
    delta: Rational,
    #[arg(long, default_value_t = 200)]
    trials: u64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, value_enum, default_value = "bounds")]
    oracle: Oracle,
    #[arg(long, default_value_t = 8)]
    budget: u32,
    #[arg(long, default_value_t = 50_000_000)]
    work_limit: u64,
    #[arg(long)]
    samples: Option<u64>,
    /// Use this election in every trial instead of generating one.
    #[arg(long, conflicts_with_all = ["model", "n", "m"])]
    input: Option<PathBuf>,
    #[arg(long, value_enum)]
    model: Option<ModelKind>,
    #[arg(long)]
    n: Option<u64>,
    #[arg(long)]
    m: Option<usize>,
    #[arg(long, default_value_t = 0)]
    winner: usize,
    #[arg(long, default_value_t = 1)]
    gap: u64,
    #[arg(long, value_parser = parse_number, default_value = "1/2")]
    p: Rational,
    #[arg(long, default_value_t = 5)]
    base_n: u64,
    #[arg(long)]
    approval: bool,
    /// CSV destination; standard output when absent.
    #[arg(long)]
    output: Option<PathBuf>,
}

fn parse_rule(s: &str) -> Result<RuleSpec, String> {
    s.parse().map_err(|e: mov_core::Error| e.to_string())
}

fn parse_kind(s: &str) -> Result<RuleKind, String> {
    s.parse().map_err(|e: mov_core::Error| e.to_string())
}

fn parse_number(s: &str) -> Result<Rational, String> {
    parse_rational(s).map_err(|e| e.to_string())
}

fn load(path: &Path) -> anyhow::Result<Profile> {
    let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    Ok(parse_election(&text)?)
}

fn emit(output: &Option<PathBuf>, text: &str) -> anyhow::Result<()> {
    match output {
        Some(path) => std::fs::write(path, text).with_context(|| format!("writing {}", path.display())),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn cmd_winner(input: &Path, spec: &RuleSpec) -> anyhow::Result<String> {
    let profile = load(input)?;
    let rule = spec.resolve(profile.m())?;
    let outcome = winner_set(&profile, &rule)?;
    let names: Vec<String> = outcome.winners.iter().map(|&c| profile.label(c)).collect();
    let key = if rule == Rule::Bucklin { "level" } else { "s" };
    let scores: Vec<String> = (0..profile.m())
        .map(|c| format!("{key}({})={}", profile.label(c), format_exact(&outcome.scores[c])))
        .collect();
    Ok(format!("winners: {}; {}\n", names.join(", "), scores.join(" ")))
}

fn describe_exact(profile: &Profile, result: &ExactMovResult) -> String {
    match result.status {
        MovStatus::Exact(v) => {
            let entries = profile.entries();
            let mut out = format!("MoV = {v}\n");
            for change in &result.witness {
                let from = entries[change.vote].0.render(|c| profile.label(c));
                let to = change.ballot.render(|c| profile.label(c));
                out.push_str(&format!("  change one {from} to {to}\n"));
            }
            out
        }
        MovStatus::ExceedsBudget(budget) => format!("MoV > {budget} (exceeds budget)\n"),
    }
}

/// Report text, plus whether an exact search ran out of change budget.
fn cmd_mov(args: &MovArgs) -> anyhow::Result<(String, bool)> {
    let profile = load(&args.input)?;
    let rule = args.rule.resolve(profile.m())?;
    match args.mode {
        Mode::Exact => {
            let result = match args.method {
                ExactMethod::Brute => mov_brute_force(
                    &profile,
                    &rule,
                    &BruteForceOptions {
                        budget: args.budget,
                        work_limit: args.work_limit,
                    },
                )?,
                ExactMethod::Ilp => mov_ilp(&profile, &rule, &IlpOptions::default())?,
            };
            let exhausted = matches!(result.status, MovStatus::ExceedsBudget(_));
            Ok((describe_exact(&profile, &result), exhausted))
        }
        Mode::Bounds => {
            let b = mov_bounds(&profile, &rule)?;
            let upper = match &b.upper {
                Some(u) => format_trimmed(u, 9),
                None => "∞".to_string(),
            };
            let close = if b.upper_open || b.upper.is_none() { ')' } else { ']' };
            let (lo, hi) = b.integer_range();
            let hi = hi.map_or("∞)".to_string(), |h| format!("{h}]"));
            let text = format!(
                "MoV ∈ [{}, {upper}{close} ({})\ninteger range: [{lo}, {hi}\n",
                format_trimmed(&b.lower, 9),
                b.source
            );
            Ok((text, false))
        }
        Mode::Estimate => {
            let source = VoteSource::new(&profile)?;
            let params = EstimateParams {
                epsilon: args.epsilon.clone(),
                delta: args.delta.clone(),
                seed: args.seed,
                samples: args.samples,
            };
            let est = estimate(&source, &rule, &params)?;
            let mut out = format!(
                "M̄ = {} ({})\nsamples: {}\nseed: {}\nsample winner: {}\n",
                format_significant(&est.m_bar),
                format_exact(&est.m_bar),
                est.ell,
                est.seed,
                profile.label(est.winner)
            );
            if est.sentinel {
                out.push_str("no level separates the sample winner; reporting n\n");
            }
            out.push_str(&format!(
                "guarantee: {} with ε = {}, δ = {}, n = {}\n",
                guarantee_statement(rule.kind(), profile.m()),
                format_trimmed(&est.epsilon, 9),
                format_trimmed(&est.delta, 9),
                est.n
            ));
            Ok((out, false))
        }
    }
}

fn cmd_samplesize(
    kind: RuleKind,
    m: Option<usize>,
    k: Option<usize>,
    epsilon: &Rational,
    delta: &Rational,
) -> anyhow::Result<String> {
    let k = match (kind, k) {
        (RuleKind::KApproval, None) => Some(1),
        (_, k) => k,
    };
    let m = match (m, kind, k) {
        (Some(m), _, _) => m,
        (None, RuleKind::KApproval, Some(k)) => k + 1,
        (None, _, _) => bail!(mov_core::Error::Input(format!("--m is required for {kind}"))),
    };
    Ok(format!("{}\n", sample_size(kind, epsilon, delta, m, k)?))
}

fn cmd_generate(model: &ModelArgs) -> anyhow::Result<String> {
    let spec = model.spec();
    let profile: Profile = if model.approval {
        generate_approval(&spec)?.into()
    } else {
        generate(&spec)?.into()
    };
    Ok(write_election(&profile))
}

fn cmd_experiment(args: &ExperimentArgs) -> anyhow::Result<String> {
    let (source, m) = match &args.input {
        Some(path) => {
            let profile = load(path)?;
            let m = profile.m();
            (ProfileSource::Fixed(profile), m)
        }
        None => {
            let (Some(n), Some(m)) = (args.n, args.m) else {
                bail!(mov_core::Error::Input(
                    "either --input or both --n and --m are required".into()
                ));
            };
            let model = ModelArgs {
                model: args.model.unwrap_or(ModelKind::Ic),
                n,
                m,
                seed: 0,
                winner: args.winner,
                gap: args.gap,
                p: args.p.clone(),
                base_n: args.base_n,
                approval: args.approval,
            };
            let source = ProfileSource::Generated {
                spec: model.spec(),
                approval: args.approval,
            };
            (source, m)
        }
    };
    let policy = match args.oracle {
        Oracle::Brute => OraclePolicy::BruteForce(BruteForceOptions {
            budget: args.budget,
            work_limit: args.work_limit,
        }),
        Oracle::Closed => OraclePolicy::ClosedForm,
        Oracle::Bounds => OraclePolicy::BoundsOnly,
        Oracle::Ilp => OraclePolicy::IntegerProgram(IlpOptions::default()),
    };
    let config = ExperimentConfig {
        rule: args.rule.resolve(m)?,
        source,
        epsilon: args.epsilon.clone(),
        delta: args.delta.clone(),
        trials: args.trials,
        seed: args.seed,
        policy,
        samples: args.samples,
    };
    let rows = run_experiment(&config)?;
    let summary = ExperimentSummary::from_rows(&rows, &config.delta);
    let csv = write_experiment_csv(&rows);
    match &args.output {
        Some(_) => {
            emit(&args.output, &csv)?;
            Ok(format!("{summary}\n"))
        }
        None => {
            eprintln!("{summary}");
            Ok(csv)
        }
    }
}

const EXIT_INPUT: u8 = 2;
const EXIT_RESOURCE: u8 = 3;

fn run(cli: Cli) -> anyhow::Result<ExitCode> {
    let text = match &cli.command {
        Command::Winner { input, rule } => cmd_winner(input, rule)?,
        Command::Mov(args) => {
            let (text, exhausted) = cmd_mov(args)?;
            print!("{text}");
            let code = if exhausted {
                ExitCode::from(EXIT_RESOURCE)
            } else {
                ExitCode::SUCCESS
            };
            return Ok(code);
        }
        Command::Samplesize {
            rule,
            m,
            k,
            epsilon,
            delta,
        } => cmd_samplesize(*rule, *m, *k, epsilon, delta)?,
        Command::Lowerbound { c, epsilon, delta } => {
            for (name, v) in [("epsilon", epsilon), ("delta", delta)] {
                if *v <= Rational::from_integer(0.into()) || *v >= Rational::from_integer(1.into()) {
                    bail!(mov_core::Error::Input(format!(
                        "{name} must lie strictly between 0 and 1"
                    )));
                }
            }
            if *c < Rational::from_integer(0.into()) || *c >= Rational::from_integer(1.into()) {
                bail!(mov_core::Error::Input("c must lie in [0, 1)".into()));
            }
            format!("{:.6}\n", lower_bound_samples(c, epsilon, delta))
        }
        Command::Generate { model, output } => {
            let text = cmd_generate(model)?;
            emit(output, &text)?;
            return Ok(ExitCode::SUCCESS);
        }
        Command::Experiment(args) => cmd_experiment(args)?,
        Command::Distinguish {
            epsilon,
            delta,
            trials,
            seed,
            n,
            samples,
        } => {
            let report = distinguish(&DistinguishConfig {
                epsilon: epsilon.clone(),
                delta: delta.clone(),
                n: *n,
                trials: *trials,
                seed: *seed,
                samples: *samples,
            })?;
            format!("{report}\n")
        }
    };
    print!("{text}");
    Ok(ExitCode::SUCCESS)
}

fn exit_code(err: &anyhow::Error) -> u8 {
    let resource = err
        .downcast_ref::<mov_core::Error>()
        .is_some_and(mov_core::Error::is_resource);
    if resource {
        EXIT_RESOURCE
    } else {
        EXIT_INPUT
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => code,
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::from(exit_code(&err))
        }
    }
}
