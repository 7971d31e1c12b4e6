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

//! Optimal-policy search, the policy tree, the `A_k` difference sets and
//! the operator machinery used to show that alternation is optimal for two
//! agents under Borda scoring.

mod aksets;
mod operators;
mod search;
mod tree;
mod verify;

pub use aksets::{
    ak_from_definition, ak_from_definition_with, ak_from_recursion, ak_from_recursion_with,
    ak_multiset_eq, AkPoint,
};
pub use operators::{
    apply_f, apply_g, coordinate_sum_f, coordinate_sum_g, f_composed, f_explicit, g_composed,
    g_explicit, Point,
};
pub use search::{
    enumerate_policies, enumerate_policies_with, explore_convex, find_approval_witness,
    optimal_policy, optimal_policy_with, ApprovalWitness, ConvexExploration, ConvexTrial,
    OptimalPolicies, PolicyEnumeration,
};
pub use tree::{policy_tree, policy_tree_with, PolicyTreeNode};
pub use verify::{
    verify_ak_sets, verify_gamma_inequalities, verify_operator_sums, verify_operator_sums_with,
    AkReport, InequalityReport, InequalityViolation, OperatorFamily, OperatorSumReport,
    OperatorSumViolation,
};
