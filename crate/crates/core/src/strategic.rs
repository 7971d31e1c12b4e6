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

//! Strategic play: the subgame-perfect equilibrium of the picking game
//! with perfect information, computed by backward induction.
//!
//! States are the sets of remaining items, stored as bitmasks; the step is
//! implied by the set size. Among payoff-equal picks the mover takes the
//! item she ranks highest.

use num_bigint::BigInt;

use crate::error::{invalid, Error, Result};
use crate::exec::Execution;
use crate::expectation::{expected_utilities, ExpectationVector};
use crate::limits::Limits;
use crate::model::{
    check_instance, monte_carlo, sweep_profiles, truthful_play, utilities, Allocation, Estimate,
    Moments, Policy, Profile, SampledExpectation, ScoringFunction,
};
use crate::numerics::Rational;
use crate::optimality::enumerate_policies_with;

/// A position of the game: the items still available and the turn index.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct GameState {
    /// Bit `i` set when item `i + 1` is still available.
    pub remaining: u32,
    pub step: usize,
}

impl GameState {
    pub fn initial(items: usize) -> Self {
        GameState {
            remaining: full_mask(items),
            step: 0,
        }
    }

    fn after(self, item0: usize) -> Self {
        GameState {
            remaining: self.remaining & !(1 << item0),
            step: self.step + 1,
        }
    }
}

fn full_mask(items: usize) -> u32 {
    if items >= 32 {
        u32::MAX
    } else {
        (1u32 << items) - 1
    }
}

/// Equilibrium allocation with the resulting utilities.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StrategicOutcome {
    pub allocation: Allocation,
    /// Indexed by `agent - 1`.
    pub utilities: Vec<Rational>,
    /// True when some bundle differs from truthful play.
    pub manipulated: bool,
}

/// Backward-induction tables for one policy, reused across profiles.
pub(crate) struct Solver {
    turns: Vec<usize>,
    agents: usize,
    items: usize,
    scores: Vec<i128>,
    values: Vec<i128>,
    choice: Vec<u8>,
}

impl Solver {
    /// `turns` are 0-based; `scores[r]` is the scaled value of rank `r + 1`.
    pub(crate) fn new(turns: Vec<usize>, agents: usize, scores: Vec<i128>) -> Self {
        let items = turns.len();
        let states = 1usize << items;
        Solver {
            turns,
            agents,
            items,
            scores,
            values: vec![0; states * agents],
            choice: vec![0; states],
        }
    }

    /// Fills every state of the game on 0-based `rows` (item at each rank).
    pub(crate) fn solve(&mut self, rows: &[&[u8]]) {
        let (n, p) = (self.agents, self.items);
        self.values[..n].iter_mut().for_each(|v| *v = 0);
        for mask in 1..(1usize << p) {
            let step = p - mask.count_ones() as usize;
            let mover = self.turns[step];
            let mut best: Option<(i128, usize, usize)> = None;
            for (r, &item) in rows[mover].iter().enumerate() {
                let bit = 1usize << item;
                if mask & bit == 0 {
                    continue;
                }
                let v = self.values[(mask ^ bit) * n + mover] + self.scores[r];
                if best.is_none_or(|(b, _, _)| v > b) {
                    best = Some((v, r, item as usize));
                }
            }
            let (_, r, item) = best.expect("non-empty state has a move");
            let sub = mask ^ (1 << item);
            self.values.copy_within(sub * n..sub * n + n, mask * n);
            self.values[mask * n + mover] += self.scores[r];
            self.choice[mask] = item as u8;
        }
    }

    /// Scaled equilibrium payoffs from `state` after [`Solver::solve`].
    pub(crate) fn payoffs(&self, state: GameState) -> &[i128] {
        let m = state.remaining as usize * self.agents;
        &self.values[m..m + self.agents]
    }

    /// Equilibrium pick at `state`, 0-based.
    pub(crate) fn pick(&self, state: GameState) -> usize {
        self.choice[state.remaining as usize] as usize
    }

    /// 0-based bundles in pick order, replayed from the initial state.
    pub(crate) fn bundles(&self) -> Vec<Vec<usize>> {
        let mut bundles = vec![Vec::new(); self.agents];
        let mut state = GameState::initial(self.items);
        while state.step < self.items {
            let item = self.pick(state);
            bundles[self.turns[state.step]].push(item);
            state = state.after(item);
        }
        bundles
    }
}

fn scaled_scores(scoring: &ScoringFunction, headroom: usize) -> Result<(Vec<i128>, BigInt)> {
    scoring.small_integer_table(headroom).ok_or_else(|| {
        Error::Overflow("scoring table is too large for the equilibrium solver".into())
    })
}

fn check_items(items: usize, limits: &Limits) -> Result<()> {
    limits.check_strategic_items(items)?;
    if items > 24 {
        return invalid("the equilibrium solver supports at most 24 items");
    }
    Ok(())
}

/// Subgame-perfect play of `policy` on `profile`.
pub fn spne_play(
    policy: &Policy,
    profile: &Profile,
    scoring: &ScoringFunction,
) -> Result<StrategicOutcome> {
    spne_play_with(policy, profile, scoring, &Limits::default())
}

pub fn spne_play_with(
    policy: &Policy,
    profile: &Profile,
    scoring: &ScoringFunction,
    limits: &Limits,
) -> Result<StrategicOutcome> {
    check_instance(policy, profile)?;
    let p = policy.len();
    scoring.check_items(p)?;
    check_items(p, limits)?;
    let (scores, _) = scaled_scores(scoring, p)?;
    let rows: Vec<Vec<u8>> = profile
        .rankings()
        .iter()
        .map(|r| r.iter().map(|&i| (i - 1) as u8).collect())
        .collect();
    let rows: Vec<&[u8]> = rows.iter().map(Vec::as_slice).collect();
    let turns = policy.turns().iter().map(|a| a - 1).collect();
    let mut solver = Solver::new(turns, profile.agents(), scores);
    solver.solve(&rows);
    let bundles: Vec<Vec<usize>> = solver
        .bundles()
        .into_iter()
        .map(|b| b.into_iter().map(|i| i + 1).collect())
        .collect();
    let allocation = Allocation::from_bundles(bundles);
    let truthful = truthful_play(policy, profile)?;
    let sorted = |a: &Allocation| {
        a.bundles()
            .iter()
            .map(|b| {
                let mut b = b.clone();
                b.sort_unstable();
                b
            })
            .collect::<Vec<_>>()
    };
    let manipulated = sorted(&allocation) != sorted(&truthful);
    Ok(StrategicOutcome {
        utilities: utilities(&allocation, profile, scoring)?,
        allocation,
        manipulated,
    })
}

/// The turn sequence read backwards.
pub fn reverse_policy(policy: &Policy) -> Policy {
    policy.reversed()
}

/// Whether the reversal equals the policy up to relabelling agents.
pub fn is_reversal_symmetric(policy: &Policy) -> bool {
    policy.is_reversal_symmetric()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StrategicMode {
    /// Average over every profile.
    Exact,
    /// Average over seeded random profiles.
    Sampled { trials: u64, seed: u64 },
}

#[derive(Debug, Clone, PartialEq)]
pub enum StrategicExpectation {
    Exact(ExpectationVector),
    Sampled(SampledExpectation),
}

/// Expected utilities when every agent plays the equilibrium strategy.
pub fn expected_strategic_utilities(
    policy: &Policy,
    scoring: &ScoringFunction,
    mode: StrategicMode,
) -> Result<StrategicExpectation> {
    expected_strategic_utilities_with(
        policy,
        scoring,
        mode,
        &Limits::default(),
        Execution::default(),
    )
}

pub fn expected_strategic_utilities_with(
    policy: &Policy,
    scoring: &ScoringFunction,
    mode: StrategicMode,
    limits: &Limits,
    exec: Execution,
) -> Result<StrategicExpectation> {
    let p = policy.len();
    let n = policy.agents();
    scoring.check_items(p)?;
    check_items(p, limits)?;
    let turns: Vec<usize> = policy.turns().iter().map(|a| a - 1).collect();
    match mode {
        StrategicMode::Exact => {
            let total = limits.check_profiles(n, p)?;
            let headroom = (p as u128).saturating_mul(total).min(usize::MAX as u128) as usize;
            let (scores, denom) = scaled_scores(scoring, headroom)?;
            let ((_, sums), total) = sweep_profiles(
                n,
                p,
                limits,
                exec,
                || (None::<Solver>, vec![0i128; n]),
                |(solver, sums), rows| {
                    let solver =
                        solver.get_or_insert_with(|| Solver::new(turns.clone(), n, scores.clone()));
                    solver.solve(rows);
                    let full = GameState::initial(p);
                    for (s, v) in sums.iter_mut().zip(solver.payoffs(full)) {
                        *s += v;
                    }
                },
                |(a, mut x), (_, y)| {
                    x.iter_mut().zip(y).for_each(|(s, t)| *s += t);
                    (a, x)
                },
            )?;
            let scale = denom * BigInt::from(total);
            Ok(StrategicExpectation::Exact(ExpectationVector::new(
                sums.into_iter()
                    .map(|s| Rational::new(BigInt::from(s), scale.clone()))
                    .collect(),
            )))
        }
        StrategicMode::Sampled { trials, seed } => {
            let (scores, denom) = scaled_scores(scoring, p)?;
            let unit = crate::numerics::to_f64(&Rational::new(BigInt::from(1), denom));
            let moments = monte_carlo(n, p, trials, seed, n + 1, exec, |rows, out| {
                let mut solver = Solver::new(turns.clone(), n, scores.clone());
                solver.solve(rows);
                let pay = solver.payoffs(GameState::initial(p));
                let mut sw = 0.0;
                for a in 0..n {
                    out[a] = pay[a] as f64 * unit;
                    sw += out[a];
                }
                out[n] = sw;
            })?;
            let mut agents: Vec<Estimate> = moments.iter().map(Moments::estimate).collect();
            let sw = agents.pop().expect("sw column");
            Ok(StrategicExpectation::Sampled(SampledExpectation {
                seed,
                trials,
                agents,
                sw,
            }))
        }
    }
}

/// Truthful and strategic expected welfare of one policy.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StrategicRow {
    pub policy: Policy,
    pub reversal_symmetric: bool,
    pub truthful_sw: Rational,
    pub strategic_sw: Rational,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StrategicReport {
    pub items: usize,
    /// Every canonical two-agent policy, in enumeration order.
    pub rows: Vec<StrategicRow>,
    pub max_strategic_sw: Rational,
    pub argmax: Vec<Policy>,
    pub alternating_optimal: bool,
}

impl StrategicReport {
    pub fn reversal_symmetric(&self) -> impl Iterator<Item = &StrategicRow> {
        self.rows.iter().filter(|r| r.reversal_symmetric)
    }
}

/// Exact strategic welfare of every canonical two-agent policy on `items`
/// items, and whether alternation attains the maximum.
pub fn verify_strategic_optimality(
    items: usize,
    scoring: &ScoringFunction,
) -> Result<StrategicReport> {
    verify_strategic_optimality_with(items, scoring, &Limits::default(), Execution::default())
}

pub fn verify_strategic_optimality_with(
    items: usize,
    scoring: &ScoringFunction,
    limits: &Limits,
    exec: Execution,
) -> Result<StrategicReport> {
    if items == 0 {
        return invalid("at least one item is required");
    }
    scoring.check_items(items)?;
    limits.check_profiles(2, items)?;
    let mut rows = Vec::new();
    for policy in enumerate_policies_with(2, items, limits)? {
        let strategic = match expected_strategic_utilities_with(
            &policy,
            scoring,
            StrategicMode::Exact,
            limits,
            exec,
        )? {
            StrategicExpectation::Exact(v) => v.sw().clone(),
            StrategicExpectation::Sampled(_) => unreachable!("exact mode"),
        };
        rows.push(StrategicRow {
            reversal_symmetric: policy.is_reversal_symmetric(),
            truthful_sw: expected_utilities(&policy, scoring)?.sw().clone(),
            strategic_sw: strategic,
            policy,
        });
    }
    let max_strategic_sw = rows
        .iter()
        .map(|r| r.strategic_sw.clone())
        .max()
        .expect("at least one policy");
    let argmax: Vec<Policy> = rows
        .iter()
        .filter(|r| r.strategic_sw == max_strategic_sw)
        .map(|r| r.policy.clone())
        .collect();
    let alternating = Policy::alternating(2, items)?;
    Ok(StrategicReport {
        items,
        alternating_optimal: argmax.contains(&alternating),
        rows,
        max_strategic_sw,
        argmax,
    })
}
