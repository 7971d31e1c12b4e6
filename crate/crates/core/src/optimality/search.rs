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

//! Exhaustive search over canonical policies.

use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{invalid, Result};
use crate::exec::Execution;
use crate::expectation::expected_utilities;
use crate::limits::Limits;
use crate::model::{Policy, ScoringFunction};
use crate::numerics::{int, Rational};

/// Prefix length used to split an enumeration across workers.
const SPLIT_DEPTH: usize = 8;

/// Canonical policies in lexicographic order: the first turn is agent 1 and
/// each new agent is the smallest unused label.
#[derive(Debug, Clone)]
pub struct PolicyEnumeration {
    turns: Vec<usize>,
    agents: usize,
    fixed: usize,
    started: bool,
    done: bool,
}

impl PolicyEnumeration {
    fn with_prefix(agents: usize, items: usize, prefix: &[usize]) -> Self {
        let mut turns = prefix.to_vec();
        turns.resize(items, 1);
        PolicyEnumeration {
            turns,
            agents,
            fixed: prefix.len().max(1),
            started: false,
            done: false,
        }
    }

    fn advance(&mut self) -> bool {
        for t in (self.fixed..self.turns.len()).rev() {
            let seen = self.turns[..t].iter().copied().max().unwrap_or(0);
            if self.turns[t] < self.agents.min(seen + 1) {
                self.turns[t] += 1;
                self.turns[t + 1..].iter_mut().for_each(|a| *a = 1);
                return true;
            }
        }
        false
    }
}

impl Iterator for PolicyEnumeration {
    type Item = Policy;

    fn next(&mut self) -> Option<Policy> {
        if self.done {
            return None;
        }
        if self.started && !self.advance() {
            self.done = true;
            return None;
        }
        self.started = true;
        Some(Policy::from_parts(self.turns.clone(), self.agents))
    }
}

/// All canonical policies for `agents` agents and `items` items.
pub fn enumerate_policies(agents: usize, items: usize) -> Result<PolicyEnumeration> {
    enumerate_policies_with(agents, items, &Limits::default())
}

pub fn enumerate_policies_with(
    agents: usize,
    items: usize,
    limits: &Limits,
) -> Result<PolicyEnumeration> {
    check_shape(agents, items)?;
    limits.check_policies(agents, items)?;
    Ok(PolicyEnumeration::with_prefix(agents, items, &[]))
}

fn check_shape(agents: usize, items: usize) -> Result<()> {
    if agents == 0 || items == 0 {
        return invalid("policy search needs at least one agent and one item");
    }
    Ok(())
}

/// The welfare-maximizing canonical policies.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OptimalPolicies {
    /// Every policy attaining the maximum, in enumeration order.
    pub policies: Vec<Policy>,
    pub sw: Rational,
    /// Number of policies evaluated.
    pub evaluated: u128,
}

impl OptimalPolicies {
    pub fn contains(&self, policy: &Policy) -> bool {
        self.policies.contains(policy)
    }

    /// True when `policy` is the only maximizer.
    pub fn is_unique(&self, policy: &Policy) -> bool {
        self.policies.len() == 1 && &self.policies[0] == policy
    }

    fn offer(&mut self, policy: Policy, sw: Rational) {
        self.evaluated += 1;
        if self.policies.is_empty() || sw > self.sw {
            self.sw = sw;
            self.policies = vec![policy];
        } else if sw == self.sw {
            self.policies.push(policy);
        }
    }

    fn merge(&mut self, other: OptimalPolicies) {
        self.evaluated += other.evaluated;
        if other.policies.is_empty() {
            return;
        }
        if self.policies.is_empty() || other.sw > self.sw {
            self.sw = other.sw;
            self.policies = other.policies;
        } else if other.sw == self.sw {
            self.policies.extend(other.policies);
        }
    }

    fn empty() -> Self {
        OptimalPolicies {
            policies: Vec::new(),
            sw: Rational::zero(),
            evaluated: 0,
        }
    }
}

/// Exhaustive exact argmax of expected welfare over canonical policies.
pub fn optimal_policy(
    agents: usize,
    items: usize,
    scoring: &ScoringFunction,
) -> Result<OptimalPolicies> {
    optimal_policy_with(
        agents,
        items,
        scoring,
        &Limits::default(),
        Execution::default(),
    )
}

pub fn optimal_policy_with(
    agents: usize,
    items: usize,
    scoring: &ScoringFunction,
    limits: &Limits,
    exec: Execution,
) -> Result<OptimalPolicies> {
    check_shape(agents, items)?;
    scoring.check_items(items)?;
    limits.check_policies(agents, items)?;
    let prefixes: Vec<Vec<usize>> =
        PolicyEnumeration::with_prefix(agents, items.min(SPLIT_DEPTH), &[])
            .map(|p| p.turns().to_vec())
            .collect();
    let parts = exec.map_slice(&prefixes, |prefix| -> Result<OptimalPolicies> {
        let mut best = OptimalPolicies::empty();
        for policy in PolicyEnumeration::with_prefix(agents, items, prefix) {
            let sw = expected_utilities(&policy, scoring)?.sw().clone();
            best.offer(policy, sw);
        }
        Ok(best)
    });
    let mut best = OptimalPolicies::empty();
    for part in parts {
        best.merge(part?);
    }
    Ok(best)
}

/// A two-agent instance where the alternating policy is not among the
/// welfare maximizers under k-approval.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ApprovalWitness {
    pub items: usize,
    pub threshold: usize,
    pub alternating_sw: Rational,
    pub optimal: OptimalPolicies,
}

/// Searches `2 <= p <= max_items` and `1 <= k < p` in order and returns the
/// first instance where alternation is strictly suboptimal.
pub fn find_approval_witness(max_items: usize) -> Result<Option<ApprovalWitness>> {
    for items in 2..=max_items {
        let alternating = Policy::alternating(2, items)?;
        for threshold in 1..items {
            let scoring = ScoringFunction::approval(items, threshold);
            let optimal = optimal_policy(2, items, &scoring)?;
            if !optimal.contains(&alternating) {
                let alternating_sw = expected_utilities(&alternating, &scoring)?.sw().clone();
                return Ok(Some(ApprovalWitness {
                    items,
                    threshold,
                    alternating_sw,
                    optimal,
                }));
            }
        }
    }
    Ok(None)
}

/// One convex scoring table and how alternation fared on it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConvexTrial {
    pub scoring: ScoringFunction,
    pub alternating_sw: Rational,
    pub alternating_optimal: bool,
    pub optimal: OptimalPolicies,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConvexExploration {
    pub items: usize,
    pub seed: u64,
    pub trials: Vec<ConvexTrial>,
}

impl ConvexExploration {
    /// Trials where some policy beats alternation.
    pub fn counterexamples(&self) -> impl Iterator<Item = &ConvexTrial> {
        self.trials.iter().filter(|t| !t.alternating_optimal)
    }
}

/// Two-agent search over the lexicographic table plus `samples` random
/// convex, non-increasing integer tables. Reports outcomes only.
pub fn explore_convex(items: usize, samples: usize, seed: u64) -> Result<ConvexExploration> {
    check_shape(2, items)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut tables = vec![ScoringFunction::lexicographic(items)];
    for _ in 0..samples {
        let mut gaps: Vec<i64> = (1..items).map(|_| rng.gen_range(0..=9)).collect();
        gaps.sort_unstable_by(|a, b| b.cmp(a));
        let mut table = vec![int(0); items];
        for r in (0..items.saturating_sub(1)).rev() {
            table[r] = &table[r + 1] + int(gaps[r]);
        }
        tables.push(ScoringFunction::from_table(table)?);
    }
    let alternating = Policy::alternating(2, items)?;
    let trials = tables
        .into_iter()
        .map(|scoring| {
            let optimal = optimal_policy(2, items, &scoring)?;
            let alternating_sw = expected_utilities(&alternating, &scoring)?.sw().clone();
            Ok(ConvexTrial {
                alternating_optimal: optimal.contains(&alternating),
                scoring,
                alternating_sw,
                optimal,
            })
        })
        .collect::<Result<_>>()?;
    Ok(ConvexExploration {
        items,
        seed,
        trials,
    })
}
