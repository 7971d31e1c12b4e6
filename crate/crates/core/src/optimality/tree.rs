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

//! The binary tree of two-agent canonical policies: the left child of a node
//! follows alternation, the right child repeats the first mover.

use serde_json::{json, Value};

use crate::error::{invalid, Result};
use crate::expectation::expected_utilities_borda;
use crate::limits::Limits;
use crate::model::Policy;
use crate::numerics::{format_exact, to_decimal_f64, Rational};

/// A canonical policy with its expected Borda welfare.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PolicyTreeNode {
    pub policy: Policy,
    pub sw: Rational,
    pub left: Option<Box<PolicyTreeNode>>,
    pub right: Option<Box<PolicyTreeNode>>,
}

impl PolicyTreeNode {
    fn build(policy: Policy, remaining: usize) -> Self {
        let sw = expected_utilities_borda(&policy).sw().clone();
        let (left, right) = if remaining == 0 {
            (None, None)
        } else {
            let mut follow = vec![1];
            follow.extend(policy.turns().iter().map(|&a| 3 - a));
            let mut deviate = vec![1];
            deviate.extend_from_slice(policy.turns());
            (
                Some(Box::new(Self::build(
                    Policy::from_parts(follow, 2),
                    remaining - 1,
                ))),
                Some(Box::new(Self::build(
                    Policy::from_parts(deviate, 2),
                    remaining - 1,
                ))),
            )
        };
        PolicyTreeNode {
            policy,
            sw,
            left,
            right,
        }
    }

    /// Follows a path of `L`/`R` steps from this node.
    pub fn node_at(&self, path: &str) -> Option<&PolicyTreeNode> {
        path.chars().try_fold(self, |node, step| match step {
            'L' | 'l' => node.left.as_deref(),
            'R' | 'r' => node.right.as_deref(),
            _ => None,
        })
    }

    /// The nodes without children, left to right.
    pub fn leaves(&self) -> Vec<&PolicyTreeNode> {
        match (&self.left, &self.right) {
            (Some(l), Some(r)) => {
                let mut out = l.leaves();
                out.extend(r.leaves());
                out
            }
            _ => vec![self],
        }
    }

    /// Number of levels below and including this node.
    pub fn depth(&self) -> usize {
        1 + self.left.as_ref().map_or(0, |l| l.depth())
    }

    pub fn to_json(&self, places: usize) -> Value {
        let child =
            |c: &Option<Box<PolicyTreeNode>>| c.as_ref().map_or(Value::Null, |n| n.to_json(places));
        json!({
            "policy": self.policy.to_string(),
            "sw_exact": format_exact(&self.sw),
            "sw_decimal": to_decimal_f64(&self.sw, places),
            "left": child(&self.left),
            "right": child(&self.right),
        })
    }
}

/// The full tree with `depth` levels, rooted at the one-item policy `1`.
pub fn policy_tree(depth: usize) -> Result<PolicyTreeNode> {
    policy_tree_with(depth, &Limits::default())
}

pub fn policy_tree_with(depth: usize, limits: &Limits) -> Result<PolicyTreeNode> {
    if depth == 0 {
        return invalid("the policy tree needs at least one level");
    }
    limits.check_tree_depth(depth)?;
    Ok(PolicyTreeNode::build(
        Policy::from_parts(vec![1], 2),
        depth - 1,
    ))
}
