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

//! Reference mechanisms that are not picking sequences.

use num_bigint::BigInt;

use super::oracle::sweep_profiles;
use super::{Allocation, Profile};
use crate::error::Result;
use crate::exec::Execution;
use crate::limits::Limits;
use crate::numerics::Rational;

/// Each item goes to the agent who ranks it highest; ties go to the lowest
/// agent index. Welfare does not depend on the tie-break because tied
/// agents value the item equally.
pub fn bestpref_allocation(profile: &Profile) -> Allocation {
    let ranks = profile.rank_tables();
    let mut bundles = vec![Vec::new(); profile.agents()];
    for item in 1..=profile.items() {
        let winner = (0..profile.agents())
            .min_by_key(|&a| (ranks[a][item - 1], a))
            .expect("at least one agent");
        bundles[winner].push(item);
    }
    Allocation::from_bundles(bundles)
}

/// Borda welfare of the best-preference allocation for one profile.
pub fn bestpref_borda_welfare(profile: &Profile) -> u64 {
    let p = profile.items();
    let ranks = profile.rank_tables();
    (0..p)
        .map(|item| {
            let best = ranks.iter().map(|r| r[item]).min().expect("agents");
            (p - best + 1) as u64
        })
        .sum()
}

pub(crate) fn bestpref_borda_welfare_rows(rows: &[&[u8]], scratch: &mut [u8]) -> u64 {
    let p = scratch.len();
    scratch.fill(u8::MAX);
    for row in rows {
        for (rank, &item) in row.iter().enumerate() {
            let slot = &mut scratch[item as usize];
            *slot = (*slot).min(rank as u8);
        }
    }
    scratch.iter().map(|&best| (p - best as usize) as u64).sum()
}

/// Expected Borda welfare of best-preference allocation, averaged over
/// every profile.
pub fn brute_force_bestpref_sw(agents: usize, items: usize) -> Result<Rational> {
    brute_force_bestpref_sw_with(agents, items, &Limits::default(), Execution::default())
}

pub fn brute_force_bestpref_sw_with(
    agents: usize,
    items: usize,
    limits: &Limits,
    exec: Execution,
) -> Result<Rational> {
    if agents == 0 || items == 0 {
        return crate::error::invalid("need at least one agent and one item");
    }
    let (sum, total) = sweep_profiles(
        agents,
        items,
        limits,
        exec,
        || (0u64, vec![0u8; items]),
        |(acc, scratch), rows| *acc += bestpref_borda_welfare_rows(rows, scratch),
        |a, b| (a.0 + b.0, a.1),
    )?;
    Ok(Rational::new(BigInt::from(sum.0), BigInt::from(total)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::rat;

    #[test]
    fn bestpref_tie_goes_to_lowest_agent() {
        let profile = Profile::new(vec![vec![1, 2], vec![1, 2]]).unwrap();
        let alloc = bestpref_allocation(&profile);
        assert_eq!(alloc.bundle(1), &[1, 2]);
        assert!(alloc.bundle(2).is_empty());
        assert_eq!(bestpref_borda_welfare(&profile), 3);
    }

    #[test]
    fn bestpref_small_cases() {
        assert_eq!(brute_force_bestpref_sw(2, 2).unwrap(), rat(7, 2));
        assert_eq!(brute_force_bestpref_sw(1, 4).unwrap(), rat(10, 1));
    }
}
