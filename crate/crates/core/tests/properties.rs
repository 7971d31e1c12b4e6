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

mod common;

use num_traits::Zero;
use pickseq::expectation::{
    expected_utilities_borda, expected_utilities_general, pick_probabilities,
};
use pickseq::model::{truthful_play, utilities};
use pickseq::numerics::{format_exact, parse_exact};
use pickseq::{Policy, Profile, Rational, ScoringFunction};
use proptest::prelude::*;

use common::r;

fn policy() -> impl Strategy<Value = Policy> {
    (1usize..=4, 1usize..=12).prop_flat_map(|(n, p)| {
        prop::collection::vec(1..=n, p).prop_map(move |turns| Policy::new(turns, n).unwrap())
    })
}

fn policy_and_profile() -> impl Strategy<Value = (Policy, Profile)> {
    policy().prop_flat_map(|policy| {
        let items: Vec<usize> = (1..=policy.len()).collect();
        let ranking = Just(items).prop_shuffle();
        let rankings = prop::collection::vec(ranking, policy.agents());
        (
            Just(policy),
            rankings.prop_map(|r| Profile::new(r).unwrap()),
        )
    })
}

proptest! {
    #[test]
    fn canonical_relabelling_preserves_expectations(policy in policy()) {
        let canonical = policy.canonicalize();
        prop_assert!(canonical.policy.is_canonical());
        prop_assert_eq!(&canonical.policy.canonicalize().policy, &canonical.policy);
        let original = expected_utilities_borda(&policy);
        prop_assert_eq!(
            original.relabeled(&canonical.relabel),
            expected_utilities_borda(&canonical.policy)
        );
    }

    #[test]
    fn pick_probability_rows_sum_to_turn_counts(policy in policy()) {
        let probs = pick_probabilities(&policy);
        for a in 1..=policy.agents() {
            prop_assert_eq!(probs.row_sum(a), r(policy.turn_count(a) as i64, 1));
            prop_assert!(probs.row(a).iter().all(|x| *x >= Rational::zero()));
        }
    }

    #[test]
    fn first_round_top_item_probability(policy in policy()) {
        let p = policy.len();
        let probs = pick_probabilities(&policy);
        let mut seen = Vec::new();
        for &a in policy.turns() {
            if seen.contains(&a) {
                break;
            }
            seen.push(a);
            let j = seen.len();
            prop_assert_eq!(probs.get(a, p), r((p - j + 1) as i64, p as i64));
        }
    }

    #[test]
    fn linear_scoring_is_affine_in_borda(
        policy in policy(),
        alpha in (-6i64..=0, 1i64..=4),
        beta in (-10i64..=10, 1i64..=4),
    ) {
        let p = policy.len();
        let (alpha, beta) = (r(alpha.0, alpha.1), r(beta.0, beta.1));
        let g = ScoringFunction::linear(p, &alpha, &beta).unwrap();
        let general = expected_utilities_general(&policy, &g).unwrap();
        let borda = expected_utilities_borda(&policy);
        let shift = &alpha * r(p as i64 + 1, 1) + &beta;
        for a in 1..=policy.agents() {
            let expected = -&alpha * borda.utility(a) + &shift * r(policy.turn_count(a) as i64, 1);
            prop_assert_eq!(general.utility(a), &expected);
        }
    }

    #[test]
    fn general_engine_matches_borda_recursion(policy in policy()) {
        let general = expected_utilities_general(&policy, &ScoringFunction::borda(policy.len())).unwrap();
        prop_assert_eq!(general, expected_utilities_borda(&policy));
    }

    #[test]
    fn sw_is_the_sum_of_utilities(policy in policy()) {
        let ev = expected_utilities_borda(&policy);
        let total: Rational = ev.utilities().iter().sum();
        prop_assert_eq!(ev.sw(), &total);
    }

    #[test]
    fn truthful_play_partitions_the_items((policy, profile) in policy_and_profile()) {
        let alloc = truthful_play(&policy, &profile).unwrap();
        prop_assert!(alloc.is_partition_of(policy.len()));
        prop_assert!(alloc.matches_turn_counts(&policy));
        let expected = common::truthful(policy.turns(), profile.rankings());
        prop_assert_eq!(alloc.bundles(), &expected[..]);
        let u = utilities(&alloc, &profile, &ScoringFunction::borda(policy.len())).unwrap();
        let total: Rational = u.iter().sum();
        prop_assert!(total <= r((policy.len() * policy.len()) as i64, 1));
    }

    #[test]
    fn policy_text_round_trips(policy in policy()) {
        let text = policy.to_string();
        prop_assert_eq!(Policy::parse_with_agents(&text, policy.agents()).unwrap(), policy);
    }

    #[test]
    fn exact_rationals_round_trip(n in -10_000i64..10_000, d in 1i64..10_000) {
        let x = r(n, d);
        prop_assert_eq!(parse_exact(&format_exact(&x)).unwrap(), x);
    }
}
