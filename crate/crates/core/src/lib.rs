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

//! Exact analysis of picking-sequence allocation of indivisible items.
//!
//! Agents take turns picking one remaining item according to a policy such
//! as `121212`. With independent, uniformly random strict preferences and
//! additive rank-based utilities, this crate computes every agent's
//! expected utility exactly (as a rational number) in polynomial time,
//! searches for welfare-maximizing policies, reproduces the difference-set
//! machinery behind the optimality of alternation for two agents under
//! Borda scoring, and solves the strategic game by backward induction.
//!
//! Exhaustive sweeps run on rayon when the default `parallel` feature is
//! enabled; see [`exec::Execution`].

pub mod error;
pub mod exec;
pub mod expectation;
pub mod limits;
pub mod model;
pub mod numerics;
pub mod optimality;
pub mod report;
pub mod strategic;

pub use error::{Error, Result};
pub use exec::Execution;
pub use expectation::ExpectationVector;
pub use limits::Limits;
pub use model::{Allocation, Policy, Profile, ScoringFunction, ScoringSpec};
pub use numerics::Rational;
