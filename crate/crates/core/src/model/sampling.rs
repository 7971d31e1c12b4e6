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

//! Seeded Monte Carlo estimates over uniformly random profiles.
//!
//! Trials are split into fixed blocks of [`BLOCK_TRIALS`]. Block `b` draws
//! from a ChaCha8 generator seeded with the user seed on stream `b`, and
//! block sums are combined in block order, so results are identical for a
//! given seed whatever the thread count.

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::mechanisms::bestpref_borda_welfare_rows;
use super::oracle::play_ranks;
use super::{Policy, ScoringFunction};
use crate::error::{invalid, Result};
use crate::exec::Execution;

pub const BLOCK_TRIALS: u64 = 4096;

/// Running first and second moments of one sampled quantity.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct Moments {
    pub count: u64,
    pub sum: f64,
    pub sum_sq: f64,
}

impl Moments {
    pub fn push(&mut self, x: f64) {
        self.count += 1;
        self.sum += x;
        self.sum_sq += x * x;
    }

    pub fn merge(&mut self, other: &Moments) {
        self.count += other.count;
        self.sum += other.sum;
        self.sum_sq += other.sum_sq;
    }

    pub fn estimate(&self) -> Estimate {
        let n = self.count as f64;
        let mean = self.sum / n;
        let var = if self.count > 1 {
            ((self.sum_sq - n * mean * mean) / (n - 1.0)).max(0.0)
        } else {
            0.0
        };
        Estimate {
            mean,
            std_error: (var / n).sqrt(),
        }
    }
}

/// Sample mean with its standard error.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Estimate {
    pub mean: f64,
    pub std_error: f64,
}

/// Runs `trials` draws of a uniform random profile (0-based rankings) and
/// accumulates the `outputs` values `trial` writes per draw.
pub fn monte_carlo<F>(
    agents: usize,
    items: usize,
    trials: u64,
    seed: u64,
    outputs: usize,
    exec: Execution,
    trial: F,
) -> Result<Vec<Moments>>
where
    F: Fn(&[&[u8]], &mut [f64]) + Sync + Send,
{
    if trials == 0 {
        return invalid("trials must be at least 1");
    }
    if items == 0 || items > 255 || agents == 0 {
        return invalid("sampling needs 1..=255 items and at least one agent");
    }
    let blocks = trials.div_ceil(BLOCK_TRIALS);
    let parts = exec.map_range(blocks as usize, |b| {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(b as u64);
        let start = b as u64 * BLOCK_TRIALS;
        let count = BLOCK_TRIALS.min(trials - start);
        let mut rankings: Vec<Vec<u8>> = vec![(0..items as u8).collect(); agents];
        let mut values = vec![0.0; outputs];
        let mut moments = vec![Moments::default(); outputs];
        for _ in 0..count {
            for r in rankings.iter_mut() {
                r.shuffle(&mut rng);
            }
            let rows: Vec<&[u8]> = rankings.iter().map(Vec::as_slice).collect();
            trial(&rows, &mut values);
            for (m, &v) in moments.iter_mut().zip(&values) {
                m.push(v);
            }
        }
        moments
    });
    let mut total = vec![Moments::default(); outputs];
    for part in &parts {
        for (t, m) in total.iter_mut().zip(part) {
            t.merge(m);
        }
    }
    Ok(total)
}

/// Sampled expected utilities under truthful play.
#[derive(Debug, Clone, PartialEq)]
pub struct SampledExpectation {
    pub seed: u64,
    pub trials: u64,
    pub agents: Vec<Estimate>,
    pub sw: Estimate,
}

pub fn sample_expectation(
    policy: &Policy,
    scoring: &ScoringFunction,
    trials: u64,
    seed: u64,
) -> Result<SampledExpectation> {
    sample_expectation_with(policy, scoring, trials, seed, Execution::default())
}

pub fn sample_expectation_with(
    policy: &Policy,
    scoring: &ScoringFunction,
    trials: u64,
    seed: u64,
    exec: Execution,
) -> Result<SampledExpectation> {
    let p = policy.len();
    let n = policy.agents();
    scoring.check_items(p)?;
    if p > 255 || n > 64 {
        return invalid("sampled truthful play supports at most 255 items and 64 agents");
    }
    let g = scoring.to_f64_table();
    let turns: Vec<usize> = policy.turns().iter().map(|a| a - 1).collect();
    let moments = monte_carlo(n, p, trials, seed, n + 1, exec, |rows, out| {
        let mut counts = vec![0u64; n * p];
        play_ranks(&turns, rows, &mut counts);
        let mut sw = 0.0;
        for a in 0..n {
            let u: f64 = (0..p).map(|r| counts[a * p + r] as f64 * g[r]).sum();
            out[a] = u;
            sw += u;
        }
        out[n] = sw;
    })?;
    let mut estimates: Vec<Estimate> = moments.iter().map(Moments::estimate).collect();
    let sw = estimates.pop().expect("sw column");
    Ok(SampledExpectation {
        seed,
        trials,
        agents: estimates,
        sw,
    })
}

/// Sampled gap between best-preference welfare and alternating-policy
/// welfare for two agents under Borda scoring.
#[derive(Debug, Clone, PartialEq)]
pub struct GapSample {
    pub items: usize,
    pub epsilon: f64,
    pub seed: u64,
    pub trials: u64,
    /// `p / (6 epsilon)`.
    pub threshold: f64,
    /// Fraction of trials with gap at least `threshold`.
    pub exceed_frequency: f64,
    pub gap: Estimate,
    /// Trials where the alternating policy beat best preference (always 0).
    pub negative_trials: u64,
}

pub fn sample_bestpref_gap(
    items: usize,
    epsilon: f64,
    trials: u64,
    seed: u64,
) -> Result<GapSample> {
    sample_bestpref_gap_with(items, epsilon, trials, seed, Execution::default())
}

pub fn sample_bestpref_gap_with(
    items: usize,
    epsilon: f64,
    trials: u64,
    seed: u64,
    exec: Execution,
) -> Result<GapSample> {
    if !(epsilon > 0.0 && epsilon.is_finite()) {
        return invalid("epsilon must be positive");
    }
    if items > 255 {
        return invalid("gap sampling supports at most 255 items");
    }
    let threshold = items as f64 / (6.0 * epsilon);
    let turns: Vec<usize> = (0..items).map(|t| t % 2).collect();
    let moments = monte_carlo(2, items, trials, seed, 3, exec, |rows, out| {
        let mut counts = vec![0u64; 2 * items];
        play_ranks(&turns, rows, &mut counts);
        let alt: u64 = counts
            .iter()
            .enumerate()
            .map(|(i, &c)| c * (items - i % items) as u64)
            .sum();
        let mut scratch = vec![0u8; items];
        let best = bestpref_borda_welfare_rows(rows, &mut scratch);
        let gap = best as f64 - alt as f64;
        out[0] = gap;
        out[1] = (gap >= threshold) as u8 as f64;
        out[2] = (gap < 0.0) as u8 as f64;
    })?;
    Ok(GapSample {
        items,
        epsilon,
        seed,
        trials,
        threshold,
        exceed_frequency: moments[1].sum / trials as f64,
        gap: moments[0].estimate(),
        negative_trials: moments[2].sum as u64,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn zero_trials_rejected() {
        let g = ScoringFunction::borda(2);
        assert!(sample_expectation(&Policy::parse("12").unwrap(), &g, 0, 1).is_err());
    }

    #[test]
    fn deterministic_for_fixed_seed() {
        let g = ScoringFunction::borda(4);
        let pol = Policy::parse("1212").unwrap();
        let a = sample_expectation_with(&pol, &g, 10_000, 7, Execution::Sequential).unwrap();
        let b = sample_expectation_with(&pol, &g, 10_000, 7, Execution::Parallel).unwrap();
        assert_eq!(a, b);
        let c = sample_expectation(&pol, &g, 10_000, 8).unwrap();
        assert_ne!(a, c);
    }

    #[test]
    fn first_mover_estimate_near_two() {
        let g = ScoringFunction::borda(2);
        let s = sample_expectation(&Policy::parse("12").unwrap(), &g, 100_000, 11).unwrap();
        assert!((s.agents[0].mean - 2.0).abs() <= 5.0 * s.agents[0].std_error.max(1e-12));
        // the first mover always gets her top item: zero variance
        assert_eq!(s.agents[0].std_error, 0.0);
        assert!((s.agents[1].mean - 1.5).abs() <= 5.0 * s.agents[1].std_error);
    }
}
