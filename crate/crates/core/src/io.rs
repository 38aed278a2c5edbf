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

//! Election files and experiment CSV output.
//!
//! ```text
//! # comment
//! m 3
//! candidates alice,bob,carol
//! 4: alice>bob>carol
//! 2: carol>alice>bob
//! ```
//!
//! Approval files use `COUNT: {alice,carol}` lines instead; `{}` is the
//! empty ballot. Without a `candidates` line the names are `a`, `b`, …
//! (or `0`, `1`, … beyond 26 candidates). Bare 0-based indices are always
//! accepted.

use crate::error::{Error, Result};
use crate::profile::{ApprovalBallot, ApprovalProfile, Ballot, Candidate, Profile, RankedProfile, Ranking};
use crate::rational::{format_significant, format_trimmed, Rational};
use std::collections::HashMap;

const RESERVED: &[char] = &['>', ',', '{', '}', ':', '#'];

struct Header {
    m: usize,
    names: Option<Vec<String>>,
    lookup: HashMap<String, Candidate>,
}

impl Header {
    fn new(m: usize, names: Option<Vec<String>>) -> Self {
        let lookup = match &names {
            Some(names) => names.iter().enumerate().map(|(i, s)| (s.clone(), i)).collect(),
            None => (0..m).map(|c| (crate::profile::default_label(m, c), c)).collect(),
        };
        Header { m, names, lookup }
    }

    fn resolve(&self, token: &str, line: usize) -> Result<Candidate> {
        let token = token.trim();
        if let Some(&c) = self.lookup.get(token) {
            return Ok(c);
        }
        match token.parse::<usize>() {
            Ok(c) if c < self.m => Ok(c),
            _ => Err(Error::parse(line, format!("unknown candidate '{token}'"))),
        }
    }
}

fn parse_names(rest: &str, m: usize, line: usize) -> Result<Vec<String>> {
    let names: Vec<String> = rest.split(',').map(|s| s.trim().to_string()).collect();
    if names.len() != m {
        return Err(Error::parse(
            line,
            format!("expected {m} candidate names, got {}", names.len()),
        ));
    }
    let mut seen = std::collections::HashSet::new();
    for name in &names {
        if name.is_empty() || name.contains(RESERVED) || name.contains(char::is_whitespace) {
            return Err(Error::parse(line, format!("invalid candidate name '{name}'")));
        }
        if !seen.insert(name.as_str()) {
            return Err(Error::parse(line, format!("duplicate candidate name '{name}'")));
        }
    }
    Ok(names)
}

fn parse_ballot(header: &Header, text: &str, line: usize) -> Result<Ballot> {
    let text = text.trim();
    if let Some(inner) = text.strip_prefix('{') {
        let inner = inner
            .strip_suffix('}')
            .ok_or_else(|| Error::parse(line, "approval ballot is missing '}'"))?;
        let mut members = Vec::new();
        if !inner.trim().is_empty() {
            for token in inner.split(',') {
                let c = header.resolve(token, line)?;
                if members.contains(&c) {
                    return Err(Error::parse(
                        line,
                        format!("candidate '{}' approved twice", token.trim()),
                    ));
                }
                members.push(c);
            }
        }
        let ballot = ApprovalBallot::new(header.m, members).map_err(|e| Error::parse(line, e.to_string()))?;
        return Ok(Ballot::Approval(ballot));
    }
    let mut order = Vec::with_capacity(header.m);
    for token in text.split('>') {
        let c = header.resolve(token, line)?;
        if order.contains(&c) {
            return Err(Error::parse(line, format!("duplicate candidate '{}'", token.trim())));
        }
        order.push(c);
    }
    if order.len() != header.m {
        return Err(Error::parse(
            line,
            format!("ranking lists {} of {} candidates", order.len(), header.m),
        ));
    }
    let ranking = Ranking::new(order).map_err(|e| Error::parse(line, e.to_string()))?;
    Ok(Ballot::Ranked(ranking))
}

pub fn parse_election(text: &str) -> Result<Profile> {
    let mut header: Option<Header> = None;
    let mut ranked: Vec<(Ranking, u64)> = Vec::new();
    let mut approval: Vec<(ApprovalBallot, u64)> = Vec::new();
    let mut last_line = 0;
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        last_line = line;
        let content = raw.trim();
        if content.is_empty() || content.starts_with('#') {
            continue;
        }
        let Some(h) = &mut header else {
            let m = content
                .strip_prefix("m ")
                .and_then(|rest| rest.trim().parse::<usize>().ok())
                .filter(|&m| m > 0)
                .ok_or_else(|| Error::parse(line, "expected header 'm <candidates>'"))?;
            header = Some(Header::new(m, None));
            continue;
        };
        if let Some(rest) = content.strip_prefix("candidates ") {
            if h.names.is_some() || !ranked.is_empty() || !approval.is_empty() {
                return Err(Error::parse(line, "'candidates' must directly follow the 'm' line"));
            }
            *h = Header::new(h.m, Some(parse_names(rest, h.m, line)?));
            continue;
        }
        let (count, ballot) = content
            .split_once(':')
            .ok_or_else(|| Error::parse(line, "expected 'COUNT: ballot'"))?;
        let count: u64 = count
            .trim()
            .parse()
            .ok()
            .filter(|&c| c > 0)
            .ok_or_else(|| Error::parse(line, format!("invalid count '{}'", count.trim())))?;
        match parse_ballot(h, ballot, line)? {
            Ballot::Ranked(r) if approval.is_empty() => ranked.push((r, count)),
            Ballot::Approval(a) if ranked.is_empty() => approval.push((a, count)),
            _ => return Err(Error::parse(line, "ranked and approval ballots cannot be mixed")),
        }
    }
    let header = header.ok_or_else(|| Error::parse(last_line.max(1), "missing 'm' header"))?;
    if ranked.is_empty() && approval.is_empty() {
        return Err(Error::parse(last_line.max(1), "no ballot lines"));
    }
    if approval.is_empty() {
        Ok(RankedProfile::new(header.m, header.names, ranked)?.into())
    } else {
        Ok(ApprovalProfile::new(header.m, header.names, approval)?.into())
    }
}

/// Canonical text: merged multiplicities, ballots in lexicographic order.
pub fn write_election(profile: &Profile) -> String {
    let canonical = profile.canonical();
    let mut out = format!("m {}\n", canonical.m());
    if let Some(names) = canonical.names() {
        out.push_str(&format!("candidates {}\n", names.join(",")));
    }
    for (ballot, count) in canonical.entries() {
        out.push_str(&format!("{count}: {}\n", ballot.render(|c| canonical.label(c))));
    }
    out
}

pub const EXPERIMENT_HEADER: [&str; 14] = [
    "trial",
    "seed",
    "rule",
    "n",
    "m",
    "epsilon",
    "delta",
    "ell",
    "mov_exact",
    "mov_lower",
    "mov_upper",
    "estimate",
    "abs_error",
    "within_guarantee",
];

/// One Monte-Carlo trial.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExperimentRow {
    pub trial: u64,
    pub seed: u64,
    pub rule: String,
    pub n: u64,
    pub m: usize,
    pub epsilon: Rational,
    pub delta: Rational,
    pub ell: u64,
    pub mov_exact: Option<u64>,
    pub mov_lower: Option<u64>,
    /// `None` when the upper bound is infinite or unknown.
    pub mov_upper: Option<u64>,
    pub estimate: Rational,
    /// Distance to the exact value, or to the bounds interval.
    pub abs_error: Option<Rational>,
    /// Only known when the exact value is.
    pub within_guarantee: Option<bool>,
}

fn opt<T: ToString>(value: &Option<T>) -> String {
    value.as_ref().map(T::to_string).unwrap_or_default()
}

pub fn write_experiment_csv(rows: &[ExperimentRow]) -> String {
    let mut writer = csv::Writer::from_writer(Vec::new());
    writer.write_record(EXPERIMENT_HEADER).expect("writing to memory");
    for row in rows {
        writer
            .write_record([
                row.trial.to_string(),
                row.seed.to_string(),
                row.rule.clone(),
                row.n.to_string(),
                row.m.to_string(),
                format_trimmed(&row.epsilon, 12),
                format_trimmed(&row.delta, 12),
                row.ell.to_string(),
                opt(&row.mov_exact),
                opt(&row.mov_lower),
                opt(&row.mov_upper),
                format_significant(&row.estimate),
                row.abs_error.as_ref().map(format_significant).unwrap_or_default(),
                opt(&row.within_guarantee),
            ])
            .expect("writing to memory");
    }
    String::from_utf8(writer.into_inner().expect("flush to memory")).expect("CSV output is UTF-8")
}
