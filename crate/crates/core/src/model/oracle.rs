// Copyright 2026 The pickseq Authors
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

//! Exhaustive averages over all `(p!)^n` equally likely profiles.
//!
//! These are deliberately literal: every profile is played out and the
//! results are averaged exactly. They serve as the reference the
//! polynomial-time engines are checked against.

use num_bigint::BigInt;

use super::{Policy, Profile, ScoringFunction};
use crate::error::Result;
use crate::exec::Execution;
use crate::expectation::ExpectationVector;
use crate::limits::Limits;
use crate::numerics::Rational;

/// All permutations of `0..items` in lexicographic order.
pub(crate) fn permutations(items: usize) -> Vec<Vec<u8>> {
    let mut current: Vec<u8> = (0..items as u8).collect();
    let mut out = vec![current.clone()];
    loop {
        let Some(i) = (1..current.len())
            .rev()
            .find(|&i| current[i - 1] < current[i])
        else {
            return out;
        };
        let j = (i..current.len())
            .rev()
            .find(|&j| current[j] > current[i - 1])
            .expect("pivot has a larger successor");
        current.swap(i - 1, j);
        current[i..].reverse();
        out.push(current.clone());
    }
}

/// Folds `visit` over every profile of `agents` permutations of `items`.
///
/// Work is split by the first agent's permutation; each part owns its
/// accumulator, and parts are merged in order.
pub(crate) fn sweep_profiles<A, I, V, M>(
    agents: usize,
    items: usize,
    limits: &Limits,
    exec: Execution,
    init: I,
    visit: V,
    merge: M,
) -> Result<(A, u128)>
where
    A: Send,
    I: Fn() -> A + Sync + Send,
    V: Fn(&mut A, &[&[u8]]) + Sync + Send,
    M: Fn(A, A) -> A,
{
    let total = limits.check_profiles(agents, items)?;
    let perms = permutations(items);
    let parts = exec.map_range(perms.len(), |first| {
        let mut acc = init();
        let mut idx = vec![0usize; agents];
        idx[0] = first;
        let mut rows: Vec<&[u8]> = idx.iter().map(|&i| perms[i].as_slice()).collect();
        loop {
            visit(&mut acc, &rows);
            // odometer over agents 2..=n, last agent fastest
            let mut j = agents;
            loop {
                if j <= 1 {
                    return acc;
                }
                j -= 1;
                idx[j] += 1;
                if idx[j] < perms.len() {
                    rows[j] = &perms[idx[j]];
                    break;
                }
                idx[j] = 0;
                rows[j] = &perms[0];
            }
        }
    });
    let merged = parts
        .into_iter()
        .reduce(merge)
        .expect("at least one permutation");
    Ok((merged, total))
}

/// Streams every profile in lexicographic order of the concatenated rankings.
#[derive(Debug, Clone)]
pub struct ProfileEnumeration {
    perms: Vec<Vec<u8>>,
    idx: Vec<usize>,
    done: bool,
}

impl Iterator for ProfileEnumeration {
    type Item = Profile;

    fn next(&mut self) -> Option<Profile> {
        if self.done {
            return None;
        }
        let rows: Vec<Vec<u8>> = self.idx.iter().map(|&i| self.perms[i].clone()).collect();
        let mut j = self.idx.len();
        loop {
            if j == 0 {
                self.done = true;
                break;
            }
            j -= 1;
            self.idx[j] += 1;
            if self.idx[j] < self.perms.len() {
                break;
            }
            self.idx[j] = 0;
        }
        Some(Profile::from_zero_based(&rows))
    }
}

pub fn enumerate_profiles(agents: usize, items: usize) -> Result<ProfileEnumeration> {
    enumerate_profiles_with(agents, items, &Limits::default())
}

pub fn enumerate_profiles_with(
    agents: usize,
    items: usize,
    limits: &Limits,
) -> Result<ProfileEnumeration> {
    if agents == 0 || items == 0 {
        return crate::error::invalid("profiles need at least one agent and one item");
    }
    limits.check_profiles(agents, items)?;
    Ok(ProfileEnumeration {
        perms: permutations(items),
        idx: vec![0; agents],
        done: false,
    })
}

/// Truthful play on 0-based rankings; adds one to `counts[agent * p + rank]`
/// for every item received. Supports up to 255 items and 64 agents.
pub(crate) fn play_ranks(turns: &[usize], rows: &[&[u8]], counts: &mut [u64]) {
    let p = turns.len();
    let mut taken = [0u64; 4];
    let mut cursor = [0usize; 64];
    let is_taken = |taken: &[u64; 4], item: u8| taken[item as usize >> 6] & (1 << (item & 63)) != 0;
    // cursor[a] walks agent a's ranking, so its position is the rank taken
    for &a in turns {
        let row = rows[a];
        let c = &mut cursor[a];
        while is_taken(&taken, row[*c]) {
            *c += 1;
        }
        let item = row[*c];
        taken[item as usize >> 6] |= 1 << (item & 63);
        counts[a * p + *c] += 1;
    }
}

/// Exact expected utilities by playing out every profile.
pub fn brute_force_expectation(
    policy: &Policy,
    scoring: &ScoringFunction,
) -> Result<ExpectationVector> {
    brute_force_expectation_with(policy, scoring, &Limits::default(), Execution::default())
}

pub fn brute_force_expectation_with(
    policy: &Policy,
    scoring: &ScoringFunction,
    limits: &Limits,
    exec: Execution,
) -> Result<ExpectationVector> {
    let p = policy.len();
    let n = policy.agents();
    scoring.check_items(p)?;
    if n > 64 {
        return crate::error::invalid("the brute-force oracle supports at most 64 agents");
    }
    let turns: Vec<usize> = policy.turns().iter().map(|a| a - 1).collect();
    let (counts, total) = sweep_profiles(
        n,
        p,
        limits,
        exec,
        || vec![0u64; n * p],
        |acc, rows| play_ranks(&turns, rows, acc),
        |mut a, b| {
            a.iter_mut().zip(b).for_each(|(x, y)| *x += y);
            a
        },
    )?;
    let total = BigInt::from(total);
    let utilities = (0..n)
        .map(|a| {
            let sum: Rational = (0..p)
                .map(|r| {
                    Rational::from_integer(BigInt::from(counts[a * p + r])) * scoring.value(r + 1)
                })
                .sum();
            sum / Rational::from_integer(total.clone())
        })
        .collect();
    Ok(ExpectationVector::new(utilities))
}
