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

//! Polynomial-time expected utilities for truthful play under a uniformly
//! random profile, plus closed forms for the alternating policy and the
//! reference mechanisms.
//!
//! Both engines peel the policy from the back: the suffix of length `L`
//! is a complete game on `L` items, and prepending one turn moves from
//! `L - 1` to `L`.

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::error::{invalid, Result};
use crate::model::{Policy, ScoringFunction};
use crate::numerics::{gamma, int, scale, Rational};

/// Expected utility per agent (index `agent - 1`) and their sum.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExpectationVector {
    utilities: Vec<Rational>,
    sw: Rational,
}

impl ExpectationVector {
    pub fn new(utilities: Vec<Rational>) -> Self {
        let sw = utilities.iter().sum();
        ExpectationVector { utilities, sw }
    }

    pub fn utilities(&self) -> &[Rational] {
        &self.utilities
    }

    /// Expected utility of `agent` (1-based).
    pub fn utility(&self, agent: usize) -> &Rational {
        &self.utilities[agent - 1]
    }

    /// Expected utilitarian social welfare.
    pub fn sw(&self) -> &Rational {
        &self.sw
    }

    /// Reindexes after an agent relabelling: entry `relabel[a] - 1` of the
    /// result is entry `a` of `self`.
    pub fn relabeled(&self, relabel: &[usize]) -> ExpectationVector {
        let mut utilities = vec![Rational::zero(); self.utilities.len()];
        for (old, u) in self.utilities.iter().enumerate() {
            utilities[relabel[old] - 1] = u.clone();
        }
        ExpectationVector {
            utilities,
            sw: self.sw.clone(),
        }
    }
}

/// Borda expectations in `O(np)` exact steps.
///
/// The mover of a suffix game on `L` items gains `L` on top of her value
/// in the shorter game; everyone else's expectation scales by `(L+1)/L`.
pub fn expected_utilities_borda(policy: &Policy) -> ExpectationVector {
    let mut u = vec![Rational::zero(); policy.agents()];
    for (len, &mover) in policy.turns().iter().rev().enumerate() {
        let len = len as u64 + 1;
        for (a, value) in u.iter_mut().enumerate() {
            if a + 1 == mover {
                *value += int(len as i64);
            } else {
                *value = scale(value, len + 1, len);
            }
        }
    }
    ExpectationVector::new(u)
}

/// `a_i(q, π)`: the probability that agent `i` receives the item she values
/// at `q` under Borda (the item she ranks at `p - q + 1`).
///
/// Stored as integer numerators over the common denominator `p!`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PickProbabilityMatrix {
    numerators: Vec<Vec<BigInt>>,
    denominator: BigInt,
}

impl PickProbabilityMatrix {
    pub fn agents(&self) -> usize {
        self.numerators.len()
    }

    pub fn items(&self) -> usize {
        self.numerators.first().map_or(0, Vec::len)
    }

    /// `a_agent(q)` for 1-based `agent` and value index `q`.
    pub fn get(&self, agent: usize, q: usize) -> Rational {
        Rational::new(
            self.numerators[agent - 1][q - 1].clone(),
            self.denominator.clone(),
        )
    }

    /// `[a_agent(1), ..., a_agent(p)]`.
    pub fn row(&self, agent: usize) -> Vec<Rational> {
        (1..=self.items()).map(|q| self.get(agent, q)).collect()
    }

    /// Expected number of items `agent` receives.
    pub fn row_sum(&self, agent: usize) -> Rational {
        let total: BigInt = self.numerators[agent - 1].iter().sum();
        Rational::new(total, self.denominator.clone())
    }

    pub fn numerators(&self) -> &[Vec<BigInt>] {
        &self.numerators
    }

    /// `p!`.
    pub fn denominator(&self) -> &BigInt {
        &self.denominator
    }
}

/// Pick probabilities for every agent and value index.
///
/// With `A_L = L! * a` on the suffix game of length `L`, a non-mover
/// satisfies `A_L(q) = (q-1) A_{L-1}(q-1) + (L-q) A_{L-1}(q)`. The mover
/// takes her top item (`A_L(L) = L!`); her remaining items keep their value
/// indices in the shorter game, so `A_L(q) = L * A_{L-1}(q)` for `q < L`.
pub fn pick_probabilities(policy: &Policy) -> PickProbabilityMatrix {
    let n = policy.agents();
    let mut rows: Vec<Vec<BigInt>> = vec![Vec::new(); n];
    let mut factorial = BigInt::one();
    for (len, &mover) in policy.turns().iter().rev().enumerate() {
        let len = len + 1;
        factorial *= len;
        for (a, prev) in rows.iter_mut().enumerate() {
            let mut next = Vec::with_capacity(len);
            if a + 1 == mover {
                next.extend(prev.iter().map(|x| x * len));
                next.push(factorial.clone());
            } else {
                for q in 1..=len {
                    let mut v = BigInt::zero();
                    if q >= 2 {
                        v += &prev[q - 2] * (q - 1);
                    }
                    if q < len {
                        v += &prev[q - 1] * (len - q);
                    }
                    next.push(v);
                }
            }
            *prev = next;
        }
    }
    PickProbabilityMatrix {
        numerators: rows,
        denominator: factorial,
    }
}

/// Expectations for an arbitrary scoring table in `O(np^2)` exact steps:
/// `ū_i = Σ_q a_i(q) g(p - q + 1)`.
pub fn expected_utilities_general(
    policy: &Policy,
    scoring: &ScoringFunction,
) -> Result<ExpectationVector> {
    let p = policy.len();
    scoring.check_items(p)?;
    let probs = pick_probabilities(policy);
    let (values, denom) = scoring.integer_table();
    let total_denom = probs.denominator() * denom;
    let utilities = probs
        .numerators()
        .iter()
        .map(|row| {
            let sum: BigInt = row
                .iter()
                .enumerate()
                .map(|(q0, a)| a * &values[p - 1 - q0])
                .sum();
            Rational::new(sum, total_denom.clone())
        })
        .collect();
    Ok(ExpectationVector::new(utilities))
}

/// Expectations under any scoring table, using the Borda recursion when
/// the table is Borda and the general engine otherwise.
pub fn expected_utilities(policy: &Policy, scoring: &ScoringFunction) -> Result<ExpectationVector> {
    scoring.check_items(policy.len())?;
    if scoring.is_borda() {
        Ok(expected_utilities_borda(policy))
    } else {
        expected_utilities_general(policy, scoring)
    }
}

/// Two-agent alternating policy on `p` items, closed form.
pub fn alt_closed_form_two_agents(p: usize) -> Result<ExpectationVector> {
    if p == 0 {
        return invalid("the alternating policy needs at least one item");
    }
    let pr = int(p as i64);
    let g = gamma(p + 1)? / int(3);
    let first = &pr * (&pr + int(1)) / int(3);
    let second = (&pr * &pr - int(1)) / int(3);
    let utilities = if p.is_multiple_of(2) {
        vec![first, second + g]
    } else {
        vec![first + g, second]
    };
    Ok(ExpectationVector::new(utilities))
}

/// Expected Borda utility of agent `i` under the `n`-agent alternating
/// policy on `p` items, valid when `p ≡ i - 1 (mod n)`:
/// `(p - i + 1)(p + 1) / (n + 1)`.
pub fn alt_residue_closed_form(n: usize, p: usize, i: usize) -> Result<Rational> {
    if n == 0 || i == 0 || i > n {
        return invalid(format!("agent {i} is outside 1..={n}"));
    }
    if p == 0 {
        return invalid("at least one item is required");
    }
    if p % n != (i - 1) % n {
        return invalid(format!(
            "closed form for agent {i} of {n} needs p ≡ {} (mod {n}); got p = {p}",
            (i - 1) % n
        ));
    }
    Ok(Rational::new(
        BigInt::from((p + 1 - i) * (p + 1)),
        BigInt::from(n + 1),
    ))
}

/// Finite bounds `p²/(n+1) - 2p <= ū_i <= p²/(n+1) + 2p + n` for the
/// `n`-agent alternating policy.
pub fn alt_bounds(n: usize, p: usize, i: usize) -> Result<(Rational, Rational)> {
    if n == 0 || i == 0 || i > n {
        return invalid(format!("agent {i} is outside 1..={n}"));
    }
    let base = Rational::new(BigInt::from(p * p), BigInt::from(n + 1));
    let two_p = int(2 * p as i64);
    Ok((&base - &two_p, base + two_p + int(n as i64)))
}

/// Expected Borda welfare when each item goes to the agent ranking it
/// highest: `p (p - p^{-n} Σ_{j=1}^{p-1} j^n)`.
pub fn bestpref_expected_sw(n: usize, p: usize) -> Result<Rational> {
    if n == 0 || p == 0 {
        return invalid("need at least one agent and one item");
    }
    let power_sum: BigInt = (1..p).map(|j| num_traits::pow(BigInt::from(j), n)).sum();
    let pn = num_traits::pow(BigInt::from(p), n);
    let per_item = int(p as i64) - Rational::new(power_sum, pn);
    Ok(per_item * int(p as i64))
}

/// Expected Borda welfare when each item goes to a uniformly random agent:
/// `p (p + 1) / 2`, independent of the number of agents.
pub fn random_expected_sw(p: usize) -> Rational {
    Rational::new(BigInt::from(p * (p + 1)), BigInt::from(2))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::rat;

    fn pol(s: &str) -> Policy {
        Policy::parse(s).unwrap()
    }

    #[test]
    fn borda_table_rows() {
        let e = expected_utilities_borda(&pol("121212"));
        assert_eq!(e.utilities(), &[int(14), rat(595, 48)]);
        assert_eq!(e.sw(), &rat(1267, 48));
        let e = expected_utilities_borda(&pol("111222"));
        assert_eq!(e.utilities(), &[int(15), rat(21, 2)]);
        assert_eq!(e.sw(), &rat(51, 2));
        let e = expected_utilities_borda(&pol("112"));
        assert_eq!(e.utilities(), &[int(5), int(2)]);
    }

    #[test]
    fn pick_probability_examples() {
        let m = pick_probabilities(&pol("12"));
        assert_eq!(m.row(2), vec![rat(1, 2), rat(1, 2)]);
        assert_eq!(m.row(1), vec![int(0), int(1)]);
        let m = pick_probabilities(&pol("123456"));
        assert_eq!(m.get(3, 6), rat(4, 6));
    }

    #[test]
    fn general_scoring_examples() {
        let e = expected_utilities_general(&pol("12"), &ScoringFunction::approval(2, 1)).unwrap();
        assert_eq!(e.utilities(), &[int(1), rat(1, 2)]);
        let quasi = ScoringFunction::quasi_indifferent(2, &int(100));
        let e = expected_utilities_general(&pol("12"), &quasi).unwrap();
        assert_eq!(e.utilities(), &[int(102), rat(203, 2)]);
        let borda = ScoringFunction::borda(6);
        assert_eq!(
            expected_utilities_general(&pol("121212"), &borda).unwrap(),
            expected_utilities_borda(&pol("121212"))
        );
        assert!(expected_utilities_general(&pol("12"), &borda).is_err());
    }

    #[test]
    fn alternating_closed_form_examples() {
        let e = alt_closed_form_two_agents(6).unwrap();
        assert_eq!(e.utilities(), &[int(14), rat(595, 48)]);
        let e = alt_closed_form_two_agents(1).unwrap();
        assert_eq!(e.utilities(), &[int(1), int(0)]);
        let e = alt_closed_form_two_agents(4).unwrap();
        assert_eq!(e.utilities(), &[rat(20, 3), rat(45, 8)]);
        assert!(alt_closed_form_two_agents(0).is_err());
    }

    #[test]
    fn residue_closed_form_examples() {
        assert_eq!(alt_residue_closed_form(2, 6, 1).unwrap(), int(14));
        assert_eq!(alt_residue_closed_form(3, 2, 3).unwrap(), int(0));
        assert_eq!(alt_residue_closed_form(3, 3, 1).unwrap(), int(3));
        assert_eq!(expected_utilities_borda(&pol("123")).utility(1), &int(3));
        let err = alt_residue_closed_form(3, 4, 1).unwrap_err().to_string();
        assert!(err.contains("p ≡ 0 (mod 3)"), "{err}");
    }

    #[test]
    fn bounds_examples() {
        let (lo, hi) = alt_bounds(2, 6, 2).unwrap();
        assert_eq!((lo.clone(), hi.clone()), (int(0), int(26)));
        assert!(lo <= rat(595, 48) && rat(595, 48) <= hi);
        let (lo, _) = alt_bounds(2, 1, 1).unwrap();
        assert_eq!(lo, rat(1, 3) - int(2));
        let alt = Policy::alternating(3, 30).unwrap();
        let u = expected_utilities_borda(&alt);
        let (lo, hi) = alt_bounds(3, 30, 2).unwrap();
        assert!(&lo <= u.utility(2) && u.utility(2) <= &hi);
    }

    #[test]
    fn mechanism_closed_forms() {
        assert_eq!(bestpref_expected_sw(2, 6).unwrap(), rat(161, 6));
        assert_eq!(bestpref_expected_sw(2, 2).unwrap(), rat(7, 2));
        for p in 1..10 {
            assert_eq!(
                bestpref_expected_sw(1, p).unwrap(),
                rat((p * (p + 1) / 2) as i64, 1)
            );
        }
        assert_eq!(random_expected_sw(6), int(21));
        assert_eq!(random_expected_sw(1), int(1));
        assert_eq!(random_expected_sw(100), int(5050));
    }

    #[test]
    fn relabel_permutes_entries() {
        let e = expected_utilities_borda(&pol("212"));
        let c = pol("212").canonicalize();
        assert_eq!(e.relabeled(&c.relabel), expected_utilities_borda(&c.policy));
    }
}
