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

//! The sets `A_k` of two-agent expectation differences relative to the
//! alternating policy, built from their recursion or from the definition.

use crate::error::Result;
use crate::exec::Execution;
use crate::expectation::expected_utilities_borda;
use crate::limits::Limits;
use crate::model::Policy;
use crate::numerics::Rational;

use super::operators::{apply_f, apply_g, Point};
use super::search::enumerate_policies_with;

/// `(ū_1(π) - ū_1(π*_k), ū_2(π) - ū_2(π*_k))`, optionally tagged with `π`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AkPoint {
    pub a: Rational,
    pub b: Rational,
    pub provenance: Option<Policy>,
}

impl AkPoint {
    pub fn point(&self) -> Point {
        Point::new(self.a.clone(), self.b.clone())
    }

    pub fn sum(&self) -> Rational {
        &self.a + &self.b
    }
}

/// Swaps agents 1 and 2 and puts agent 1 in front.
fn follow(policy: &Policy) -> Policy {
    let mut turns = Vec::with_capacity(policy.len() + 1);
    turns.push(1);
    turns.extend(policy.turns().iter().map(|&a| 3 - a));
    Policy::from_parts(turns, 2)
}

fn deviate(policy: &Policy) -> Policy {
    let mut turns = Vec::with_capacity(policy.len() + 1);
    turns.push(1);
    turns.extend_from_slice(policy.turns());
    Policy::from_parts(turns, 2)
}

/// `A_1 = {(0,0)}` and `A_{j+1} = f_j(A_j) ∪ g_j(A_j)`, with provenance.
pub fn ak_from_recursion(k: usize) -> Result<Vec<AkPoint>> {
    ak_from_recursion_with(k, &Limits::default(), Execution::default())
}

pub fn ak_from_recursion_with(k: usize, limits: &Limits, exec: Execution) -> Result<Vec<AkPoint>> {
    check_depth(k, limits)?;
    let mut set = vec![AkPoint {
        a: Point::origin().x,
        b: Point::origin().y,
        provenance: Some(Policy::from_parts(vec![1], 2)),
    }];
    for j in 1..k {
        set = ak_step(j, &set, exec)?;
    }
    Ok(set)
}

fn check_depth(k: usize, limits: &Limits) -> Result<()> {
    if k == 0 {
        return crate::error::invalid("A_k is defined for k >= 1");
    }
    limits.check_ak_depth(k)
}

/// `A_{j+1}` from `A_j`: all `f_j` images, then all `g_j` images.
pub(crate) fn ak_step(j: usize, set: &[AkPoint], exec: Execution) -> Result<Vec<AkPoint>> {
    let image = |map: fn(usize, &Point) -> Result<Point>, tag: fn(&Policy) -> Policy| {
        exec.map_slice(set, |pt| {
            let q = map(j, &pt.point())?;
            Ok(AkPoint {
                a: q.x,
                b: q.y,
                provenance: pt.provenance.as_ref().map(tag),
            })
        })
        .into_iter()
        .collect::<Result<Vec<_>>>()
    };
    let mut next = image(apply_f, follow)?;
    next.extend(image(apply_g, deviate)?);
    Ok(next)
}

/// Every canonical two-agent policy of length `k`, evaluated directly.
pub fn ak_from_definition(k: usize) -> Result<Vec<AkPoint>> {
    ak_from_definition_with(k, &Limits::default(), Execution::default())
}

pub fn ak_from_definition_with(k: usize, limits: &Limits, exec: Execution) -> Result<Vec<AkPoint>> {
    check_depth(k, limits)?;
    let policies: Vec<Policy> = enumerate_policies_with(2, k, limits)?.collect();
    let reference = expected_utilities_borda(&Policy::alternating(2, k)?);
    Ok(exec.map_slice(&policies, |policy| {
        let u = expected_utilities_borda(policy);
        AkPoint {
            a: u.utility(1) - reference.utility(1),
            b: u.utility(2) - reference.utility(2),
            provenance: Some(policy.clone()),
        }
    }))
}

/// Multiset equality of the coordinates, ignoring provenance.
pub fn ak_multiset_eq(left: &[AkPoint], right: &[AkPoint]) -> bool {
    let sorted = |set: &[AkPoint]| {
        let mut pts: Vec<Point> = set.iter().map(AkPoint::point).collect();
        pts.sort();
        pts
    };
    left.len() == right.len() && sorted(left) == sorted(right)
}
