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

//! Policies, profiles, scoring rules, truthful play and the exhaustive and
//! sampled reference computations built on them.

mod mechanisms;
mod oracle;
mod play;
mod policy;
mod profile;
mod sampling;
mod scoring;

pub use mechanisms::{
    bestpref_allocation, bestpref_borda_welfare, brute_force_bestpref_sw,
    brute_force_bestpref_sw_with,
};
pub(crate) use oracle::sweep_profiles;
pub use oracle::{
    brute_force_expectation, brute_force_expectation_with, enumerate_profiles,
    enumerate_profiles_with, ProfileEnumeration,
};
pub(crate) use play::check_instance;
pub use play::{bundle_utility, truthful_play, utilities, Allocation};
pub use policy::{Canonical, Policy};
pub use profile::Profile;
pub use sampling::{
    monte_carlo, sample_bestpref_gap, sample_bestpref_gap_with, sample_expectation,
    sample_expectation_with, Estimate, GapSample, Moments, SampledExpectation, BLOCK_TRIALS,
};
pub use scoring::{ScoringFunction, ScoringSpec};
