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

use std::fmt;
use std::str::FromStr;

use crate::error::{invalid, Error, Result};

/// A picking sequence: at step `t` agent `turns[t]` takes one item.
///
/// Agents are labelled `1..=agents`. Agents that never appear in `turns`
/// are allowed; they receive nothing.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Policy {
    turns: Vec<usize>,
    agents: usize,
}

/// A canonical policy together with the relabelling that produced it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Canonical {
    pub policy: Policy,
    /// `relabel[old - 1]` is the new label of agent `old`.
    pub relabel: Vec<usize>,
}

impl Policy {
    pub fn new(turns: Vec<usize>, agents: usize) -> Result<Self> {
        if turns.is_empty() {
            return invalid("a policy needs at least one turn");
        }
        if agents == 0 {
            return invalid("a policy needs at least one agent");
        }
        if let Some(&bad) = turns.iter().find(|&&a| a == 0 || a > agents) {
            return invalid(format!("agent {bad} is outside 1..={agents}"));
        }
        Ok(Policy { turns, agents })
    }

    /// Skips validation; callers guarantee labels in `1..=agents`.
    pub(crate) fn from_parts(turns: Vec<usize>, agents: usize) -> Self {
        debug_assert!(turns.iter().all(|&a| a >= 1 && a <= agents));
        Policy { turns, agents }
    }

    /// Uses the largest label in `turns` as the agent count.
    pub fn from_turns(turns: Vec<usize>) -> Result<Self> {
        let agents = turns.iter().copied().max().unwrap_or(0);
        Policy::new(turns, agents)
    }

    /// `1 2 ... n 1 2 ... n ...` truncated to `items` turns.
    pub fn alternating(agents: usize, items: usize) -> Result<Self> {
        if agents == 0 {
            return invalid("alternating policy needs at least one agent");
        }
        Policy::new((0..items).map(|t| t % agents + 1).collect(), agents)
    }

    /// Parses `"121212"` or, for labels of two or more digits, `"1,2,10"`.
    pub fn parse(s: &str) -> Result<Self> {
        Policy::from_turns(parse_turns(s)?)
    }

    /// Like [`Policy::parse`] but with an explicit agent count.
    pub fn parse_with_agents(s: &str, agents: usize) -> Result<Self> {
        Policy::new(parse_turns(s)?, agents)
    }

    pub fn turns(&self) -> &[usize] {
        &self.turns
    }

    pub fn agents(&self) -> usize {
        self.agents
    }

    /// Number of items `p` the policy allocates.
    pub fn len(&self) -> usize {
        self.turns.len()
    }

    pub fn is_empty(&self) -> bool {
        self.turns.is_empty()
    }

    pub fn turn_count(&self, agent: usize) -> usize {
        self.turns.iter().filter(|&&a| a == agent).count()
    }

    /// Turn counts indexed by `agent - 1`.
    pub fn turn_counts(&self) -> Vec<usize> {
        let mut counts = vec![0; self.agents];
        for &a in &self.turns {
            counts[a - 1] += 1;
        }
        counts
    }

    /// The same sequence with a different agent count (at least the largest label).
    pub fn with_agents(&self, agents: usize) -> Result<Self> {
        Policy::new(self.turns.clone(), agents)
    }

    /// Drops the first turn.
    pub fn tail(&self) -> Option<Policy> {
        (self.turns.len() > 1).then(|| Policy {
            turns: self.turns[1..].to_vec(),
            agents: self.agents,
        })
    }

    pub fn is_canonical(&self) -> bool {
        let mut next = 1;
        for &a in &self.turns {
            if a > next {
                return false;
            }
            if a == next {
                next += 1;
            }
        }
        true
    }

    /// Relabels agents in order of first appearance; agents that never move
    /// keep their relative order after the ones that do.
    pub fn canonicalize(&self) -> Canonical {
        let mut relabel = vec![0; self.agents];
        let mut next = 1;
        for &a in &self.turns {
            if relabel[a - 1] == 0 {
                relabel[a - 1] = next;
                next += 1;
            }
        }
        for slot in relabel.iter_mut().filter(|s| **s == 0) {
            *slot = next;
            next += 1;
        }
        let turns = self.turns.iter().map(|&a| relabel[a - 1]).collect();
        Canonical {
            policy: Policy {
                turns,
                agents: self.agents,
            },
            relabel,
        }
    }

    /// Every complete round of `n` turns is a permutation of all agents and
    /// the trailing partial round has no repeated agent.
    pub fn is_balanced(&self) -> bool {
        let n = self.agents;
        self.turns.chunks(n).all(|round| {
            let mut seen = vec![false; n];
            round
                .iter()
                .all(|&a| !std::mem::replace(&mut seen[a - 1], true))
        })
    }

    /// The turn sequence in reverse order, not canonicalized.
    pub fn reversed(&self) -> Policy {
        let mut turns = self.turns.clone();
        turns.reverse();
        Policy {
            turns,
            agents: self.agents,
        }
    }

    /// True when the reversal equals the policy up to a relabelling of agents.
    pub fn is_reversal_symmetric(&self) -> bool {
        self.reversed().canonicalize().policy.turns == self.canonicalize().policy.turns
    }
}

fn parse_turns(s: &str) -> Result<Vec<usize>> {
    let s = s.trim();
    if s.is_empty() {
        return Err(Error::Parse("policy string is empty".into()));
    }
    let turns: Option<Vec<usize>> = if s.contains(',') {
        s.split(',').map(|t| t.trim().parse().ok()).collect()
    } else {
        s.chars()
            .map(|c| c.to_digit(10).map(|d| d as usize))
            .collect()
    };
    match turns {
        Some(t) if t.iter().all(|&a| a > 0) => Ok(t),
        _ => Err(Error::Parse(format!(
            "{s:?} is not a policy; use digits 1-9 (\"1212\") or comma-separated labels (\"1,2,10\")"
        ))),
    }
}

impl fmt::Display for Policy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.turns.iter().all(|&a| a < 10) {
            for a in &self.turns {
                write!(f, "{a}")?;
            }
            Ok(())
        } else {
            let parts: Vec<String> = self.turns.iter().map(|a| a.to_string()).collect();
            f.write_str(&parts.join(","))
        }
    }
}

impl FromStr for Policy {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Policy::parse(s)
    }
}
