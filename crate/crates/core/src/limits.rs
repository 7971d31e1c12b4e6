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

//! Size guards for the exhaustive computations.
//!
//! Every guard has a default and can be overridden through an environment
//! variable or by constructing [`Limits`] directly.

use crate::error::{Error, Result};

pub const PROFILE_LIMIT_ENV: &str = "PICKSEQ_PROFILE_LIMIT";
pub const POLICY_LIMIT_ENV: &str = "PICKSEQ_POLICY_LIMIT";
pub const AK_DEPTH_LIMIT_ENV: &str = "PICKSEQ_AK_DEPTH_LIMIT";
pub const TREE_DEPTH_LIMIT_ENV: &str = "PICKSEQ_TREE_DEPTH_LIMIT";
pub const STRATEGIC_ITEMS_LIMIT_ENV: &str = "PICKSEQ_STRATEGIC_ITEMS_LIMIT";

/// Upper bounds on the exhaustive enumerations.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Limits {
    /// Maximum number of profiles, `(p!)^n`, an exhaustive average may visit.
    pub profiles: u128,
    /// Maximum `n^(p-1)` for policy enumeration.
    pub policies: u128,
    /// Maximum depth `k` of an `A_k` construction.
    pub ak_depth: usize,
    /// Maximum depth of the policy tree.
    pub tree_depth: usize,
    /// Maximum item count for the subgame-perfect solver.
    pub strategic_items: usize,
}

impl Default for Limits {
    fn default() -> Self {
        Limits {
            profiles: 26_000_000,
            policies: 1 << 24,
            ak_depth: 24,
            tree_depth: 16,
            strategic_items: 15,
        }
    }
}

impl Limits {
    /// Defaults overridden by any of the `PICKSEQ_*_LIMIT` variables that are set.
    pub fn from_env() -> Result<Self> {
        let mut limits = Limits::default();
        if let Some(v) = read_env(PROFILE_LIMIT_ENV)? {
            limits.profiles = v;
        }
        if let Some(v) = read_env(POLICY_LIMIT_ENV)? {
            limits.policies = v;
        }
        if let Some(v) = read_env(AK_DEPTH_LIMIT_ENV)? {
            limits.ak_depth = v as usize;
        }
        if let Some(v) = read_env(TREE_DEPTH_LIMIT_ENV)? {
            limits.tree_depth = v as usize;
        }
        if let Some(v) = read_env(STRATEGIC_ITEMS_LIMIT_ENV)? {
            limits.strategic_items = v as usize;
        }
        Ok(limits)
    }

    pub(crate) fn check_profiles(&self, agents: usize, items: usize) -> Result<u128> {
        let count = profile_count(agents, items);
        match count {
            Some(c) if c <= self.profiles => Ok(c),
            _ => Err(Error::SizeLimit {
                what: "exhaustive profile enumeration",
                required: format!("({items}!)^{agents} profiles"),
                limit: self.profiles,
                env: PROFILE_LIMIT_ENV,
            }),
        }
    }

    pub(crate) fn check_policies(&self, agents: usize, items: usize) -> Result<()> {
        let count = (agents as u128).checked_pow(items.saturating_sub(1) as u32);
        match count {
            Some(c) if c <= self.policies => Ok(()),
            _ => Err(Error::SizeLimit {
                what: "policy enumeration",
                required: format!("{agents}^{} candidate policies", items.saturating_sub(1)),
                limit: self.policies,
                env: POLICY_LIMIT_ENV,
            }),
        }
    }

    pub(crate) fn check_ak_depth(&self, k: usize) -> Result<()> {
        if k <= self.ak_depth {
            Ok(())
        } else {
            Err(Error::SizeLimit {
                what: "A_k construction",
                required: format!("depth {k} (2^{} points)", k - 1),
                limit: self.ak_depth as u128,
                env: AK_DEPTH_LIMIT_ENV,
            })
        }
    }

    pub(crate) fn check_tree_depth(&self, depth: usize) -> Result<()> {
        if depth <= self.tree_depth {
            Ok(())
        } else {
            Err(Error::SizeLimit {
                what: "policy tree",
                required: format!("depth {depth}"),
                limit: self.tree_depth as u128,
                env: TREE_DEPTH_LIMIT_ENV,
            })
        }
    }

    pub(crate) fn check_strategic_items(&self, items: usize) -> Result<()> {
        if items <= self.strategic_items {
            Ok(())
        } else {
            Err(Error::SizeLimit {
                what: "subgame-perfect solver",
                required: format!("{items} items (2^{items} states)"),
                limit: self.strategic_items as u128,
                env: STRATEGIC_ITEMS_LIMIT_ENV,
            })
        }
    }
}

/// `(p!)^n`, or `None` on overflow.
pub fn profile_count(agents: usize, items: usize) -> Option<u128> {
    let mut fact: u128 = 1;
    for k in 2..=items as u128 {
        fact = fact.checked_mul(k)?;
    }
    fact.checked_pow(agents as u32)
}

fn read_env(name: &str) -> Result<Option<u128>> {
    match std::env::var(name) {
        Ok(raw) => raw
            .trim()
            .parse::<u128>()
            .map(Some)
            .map_err(|_| Error::Parse(format!("{name}={raw:?} is not a non-negative integer"))),
        Err(_) => Ok(None),
    }
}
