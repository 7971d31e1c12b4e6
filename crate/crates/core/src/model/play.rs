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

use num_traits::Zero;

use super::{Policy, Profile, ScoringFunction};
use crate::error::{invalid, Result};
use crate::numerics::Rational;

/// Items received by each agent, in the order they were picked.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Allocation {
    bundles: Vec<Vec<usize>>,
}

impl Allocation {
    pub(crate) fn from_bundles(bundles: Vec<Vec<usize>>) -> Self {
        Allocation { bundles }
    }

    pub fn agents(&self) -> usize {
        self.bundles.len()
    }

    /// Items of `agent` (1-based), in pick order.
    pub fn bundle(&self, agent: usize) -> &[usize] {
        &self.bundles[agent - 1]
    }

    pub fn bundles(&self) -> &[Vec<usize>] {
        &self.bundles
    }

    /// Bundles are disjoint and together cover exactly `1..=items`.
    pub fn is_partition_of(&self, items: usize) -> bool {
        let mut seen = vec![false; items];
        let mut total = 0;
        for &item in self.bundles.iter().flatten() {
            if item == 0 || item > items || std::mem::replace(&mut seen[item - 1], true) {
                return false;
            }
            total += 1;
        }
        total == items
    }

    /// Bundle sizes match the agents' turn counts in `policy`.
    pub fn matches_turn_counts(&self, policy: &Policy) -> bool {
        (1..=self.agents()).all(|a| self.bundle(a).len() == policy.turn_count(a))
    }
}

pub(crate) fn check_instance(policy: &Policy, profile: &Profile) -> Result<()> {
    if profile.items() != policy.len() {
        return invalid(format!(
            "profile has {} items but the policy has {} turns",
            profile.items(),
            policy.len()
        ));
    }
    let used = policy.turns().iter().copied().max().unwrap_or(0);
    if used > profile.agents() {
        return invalid(format!(
            "policy uses agent {used} but the profile has {} agents",
            profile.agents()
        ));
    }
    Ok(())
}

/// Every agent, on her turn, takes her highest-ranked remaining item.
pub fn truthful_play(policy: &Policy, profile: &Profile) -> Result<Allocation> {
    check_instance(policy, profile)?;
    let p = policy.len();
    let mut taken = vec![false; p];
    let mut cursor = vec![0usize; profile.agents()];
    let mut bundles = vec![Vec::new(); profile.agents()];
    for &agent in policy.turns() {
        let ranking = profile.ranking(agent);
        let c = &mut cursor[agent - 1];
        while taken[ranking[*c] - 1] {
            *c += 1;
        }
        let item = ranking[*c];
        taken[item - 1] = true;
        bundles[agent - 1].push(item);
    }
    Ok(Allocation { bundles })
}

/// Sum of `g(rank)` over `agent`'s bundle.
pub fn bundle_utility(
    allocation: &Allocation,
    profile: &Profile,
    scoring: &ScoringFunction,
    agent: usize,
) -> Result<Rational> {
    if agent == 0 || agent > allocation.agents() || agent > profile.agents() {
        return invalid(format!("unknown agent {agent}"));
    }
    scoring.check_items(profile.items())?;
    Ok(allocation
        .bundle(agent)
        .iter()
        .map(|&item| scoring.value(profile.rank_of(agent, item)))
        .fold(Rational::zero(), |acc, g| acc + g))
}

/// Utilities of every agent, indexed by `agent - 1`.
pub fn utilities(
    allocation: &Allocation,
    profile: &Profile,
    scoring: &ScoringFunction,
) -> Result<Vec<Rational>> {
    (1..=allocation.agents())
        .map(|a| bundle_utility(allocation, profile, scoring, a))
        .collect()
}
