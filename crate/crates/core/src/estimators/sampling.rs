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

//! Uniform sampling of votes with replacement.

use crate::error::{Error, Result};
use crate::profile::{Ballot, Profile};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// A population of `n` ballots that can be sampled uniformly with
/// replacement. Draws are deterministic given the seed.
#[derive(Clone, Debug)]
pub struct VoteSource<'a> {
    profile: &'a Profile,
    entries: Vec<(Ballot, u64)>,
    /// `cumulative[i]` is the number of ballots in entries `0..=i`.
    cumulative: Vec<u64>,
}

impl<'a> VoteSource<'a> {
    pub fn new(profile: &'a Profile) -> Result<Self> {
        let entries: Vec<(Ballot, u64)> = profile.entries().into_iter().filter(|(_, c)| *c > 0).collect();
        let cumulative: Vec<u64> = entries
            .iter()
            .scan(0u64, |acc, (_, c)| {
                *acc += c;
                Some(*acc)
            })
            .collect();
        if cumulative.last().copied().unwrap_or(0) == 0 {
            return Err(Error::input("cannot sample from an empty profile"));
        }
        Ok(VoteSource {
            profile,
            entries,
            cumulative,
        })
    }

    pub fn n(&self) -> u64 {
        *self.cumulative.last().expect("non-empty")
    }

    pub fn m(&self) -> usize {
        self.profile.m()
    }

    pub fn profile(&self) -> &'a Profile {
        self.profile
    }

    /// Indices into the non-empty entries of the profile, one per draw.
    pub fn draw_indices(&self, count: u64, seed: u64) -> Vec<usize> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let n = self.n();
        (0..count)
            .map(|_| {
                let r = rng.gen_range(0..n);
                self.cumulative.partition_point(|&c| c <= r)
            })
            .collect()
    }

    pub fn draw(&self, count: u64, seed: u64) -> Vec<Ballot> {
        self.draw_indices(count, seed)
            .into_iter()
            .map(|i| self.entries[i].0.clone())
            .collect()
    }

    /// The `count` sampled ballots as a profile of their own.
    pub fn sample_profile(&self, count: u64, seed: u64) -> Result<Profile> {
        let mut hist = vec![0u64; self.entries.len()];
        for i in self.draw_indices(count, seed) {
            hist[i] += 1;
        }
        self.profile
            .with_entries(self.entries.iter().map(|(b, _)| b.clone()).zip(hist))
    }
}

pub fn sample_votes(source: &VoteSource<'_>, ell: u64, seed: u64) -> Result<Vec<Ballot>> {
    if ell == 0 {
        return Err(Error::input("need at least one sample"));
    }
    Ok(source.draw(ell, seed))
}

/// Seed for trial `index` derived from `base` with a splitmix64 step.
pub fn split_seed(base: u64, index: u64) -> u64 {
    let mut z = base.wrapping_add(index.wrapping_add(1).wrapping_mul(0x9E37_79B9_7F4A_7C15));
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}
