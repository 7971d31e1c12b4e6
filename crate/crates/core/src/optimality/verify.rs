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

//! Exhaustive exact sweeps over the `A_k` sets, the iterated operators and
//! the `γ̄` bounds they rely on.

use num_traits::Zero;

use crate::error::{invalid, Result};
use crate::exec::Execution;
use crate::limits::Limits;
use crate::model::Policy;
use crate::numerics::{delta, gamma_bar, rat, scale, Rational};

use super::aksets::{ak_from_definition_with, ak_multiset_eq, ak_step, AkPoint};
use super::operators::Point;

/// A failed instance of one of the two `γ̄` bounds.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InequalityViolation {
    pub k: usize,
    pub m: usize,
    /// 1 for the odd-stride bound, 2 for the shifted one.
    pub which: u8,
    pub lhs: Rational,
    pub rhs: Rational,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InequalityReport {
    pub k_max: usize,
    pub m_max: usize,
    pub checked: u64,
    pub violations: Vec<InequalityViolation>,
}

/// Checks, for `2 <= k <= k_max` and `0 <= m <= m_max`,
/// `γ̄_k - γ̄_{k+2⌊(m+1)/2⌋} <= m(m+1)/(2k)` and
/// `γ̄_{k+1} - γ̄_{k+2⌊m/2⌋+1} <= m²/(2k)`.
pub fn verify_gamma_inequalities(
    k_max: usize,
    m_max: usize,
    exec: Execution,
) -> Result<InequalityReport> {
    if k_max < 2 {
        return invalid("the gamma-bar bounds start at k = 2");
    }
    let bars = (0..=k_max + m_max + 2)
        .map(|k| {
            if k == 0 {
                Ok(Rational::zero())
            } else {
                gamma_bar(k)
            }
        })
        .collect::<Result<Vec<_>>>()?;
    let rows = exec.map_range(k_max - 1, |i| {
        let k = i + 2;
        let mut out = Vec::new();
        for m in 0..=m_max {
            let mi = m as i64;
            let den = 2 * k as i64;
            let checks = [
                (
                    1,
                    &bars[k] - &bars[k + 2 * m.div_ceil(2)],
                    rat(mi * (mi + 1), den),
                ),
                (
                    2,
                    &bars[k + 1] - &bars[k + 2 * (m / 2) + 1],
                    rat(mi * mi, den),
                ),
            ];
            for (which, lhs, rhs) in checks {
                if lhs > rhs {
                    out.push(InequalityViolation {
                        k,
                        m,
                        which,
                        lhs,
                        rhs,
                    });
                }
            }
        }
        out
    });
    Ok(InequalityReport {
        k_max,
        m_max,
        checked: 2 * (k_max as u64 - 1) * (m_max as u64 + 1),
        violations: rows.into_iter().flatten().collect(),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OperatorFamily {
    G,
    F,
}

/// A point of `A_k` whose image has a positive coordinate sum.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OperatorSumViolation {
    pub k: usize,
    pub m: usize,
    pub family: OperatorFamily,
    pub point: Point,
    pub provenance: Option<Policy>,
    pub sum: Rational,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OperatorSumReport {
    pub k_max: usize,
    pub m_max: usize,
    pub points: u64,
    pub evaluations: u64,
    /// Largest coordinate sum seen over all images.
    pub max_sum: Rational,
    pub violations: Vec<OperatorSumViolation>,
}

/// Image sums are affine in the point: `G_km` gives `x + c y + d` and
/// `F_km` gives `y + c x + e`, with `c = (k+m+1)/(k+1)`.
struct Offsets {
    g: Vec<Rational>,
    f: Vec<Rational>,
}

fn offsets(k: usize, m_max: usize) -> Result<Offsets> {
    let mut g = Vec::with_capacity(m_max + 1);
    let mut f = Vec::with_capacity(m_max + 1);
    let (mut plain, mut weighted) = (Rational::zero(), Rational::zero());
    for m in 0..=m_max {
        if m >= 1 {
            let d = delta(k + m)?;
            weighted += scale(&d, 1, (k + m) as u64);
            plain += d;
        }
        let stretch = (k + m + 1) as u64;
        g.push(&plain - scale(&weighted, stretch, 1));
        if m >= 1 {
            let d1 = delta(k + 1)?;
            let w1 = scale(&d1, 1, k as u64 + 1);
            f.push((&plain - d1) - scale(&(&weighted - w1), stretch, 1));
        } else {
            f.push(Rational::zero());
        }
    }
    Ok(Offsets { g, f })
}

/// For every point of `A_k` with `k <= k_max` and every `m <= m_max`, checks
/// that `G_km` and (for `m >= 1`) `F_km` map it to a non-positive coordinate sum.
pub fn verify_operator_sums(
    k_max: usize,
    m_max: usize,
    exec: Execution,
) -> Result<OperatorSumReport> {
    verify_operator_sums_with(k_max, m_max, &Limits::default(), exec)
}

pub fn verify_operator_sums_with(
    k_max: usize,
    m_max: usize,
    limits: &Limits,
    exec: Execution,
) -> Result<OperatorSumReport> {
    if k_max == 0 {
        return invalid("k_max must be at least 1");
    }
    limits.check_ak_depth(k_max)?;
    let mut report = OperatorSumReport {
        k_max,
        m_max,
        points: 0,
        evaluations: 0,
        max_sum: Rational::zero(),
        violations: Vec::new(),
    };
    let mut first = true;
    let mut set = vec![AkPoint {
        a: Rational::zero(),
        b: Rational::zero(),
        provenance: Some(Policy::from_parts(vec![1], 2)),
    }];
    for k in 1..=k_max {
        if k > 1 {
            set = ak_step(k - 1, &set, exec)?;
        }
        let off = offsets(k, m_max)?;
        let per_point = exec.map_slice(&set, |pt| {
            let mut worst: Option<Rational> = None;
            let mut bad = Vec::new();
            for m in 0..=m_max {
                let stretch = (k + m + 1) as u64;
                let base = k as u64 + 1;
                let mut sums = vec![(
                    OperatorFamily::G,
                    &pt.a + scale(&pt.b, stretch, base) + &off.g[m],
                )];
                if m >= 1 {
                    sums.push((
                        OperatorFamily::F,
                        &pt.b + scale(&pt.a, stretch, base) + &off.f[m],
                    ));
                }
                for (family, sum) in sums {
                    if worst.as_ref().is_none_or(|w| sum > *w) {
                        worst = Some(sum.clone());
                    }
                    if sum > Rational::zero() {
                        bad.push(OperatorSumViolation {
                            k,
                            m,
                            family,
                            point: pt.point(),
                            provenance: pt.provenance.clone(),
                            sum,
                        });
                    }
                }
            }
            (worst, bad)
        });
        report.points += set.len() as u64;
        report.evaluations += set.len() as u64 * (2 * m_max as u64 + 1);
        for (worst, bad) in per_point {
            if let Some(w) = worst {
                if first || w > report.max_sum {
                    report.max_sum = w;
                    first = false;
                }
            }
            report.violations.extend(bad);
        }
    }
    Ok(report)
}

/// Cross-checks of the `A_k` constructions.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AkReport {
    /// Depths at which recursion and definition were compared.
    pub definition_depth: usize,
    /// Depths at which the coordinate-sum sign was checked.
    pub sum_depth: usize,
    pub points_checked: u64,
    /// Depths where the two constructions differ as multisets.
    pub multiset_mismatches: Vec<usize>,
    /// Recursion points whose provenance evaluates to different coordinates.
    pub provenance_mismatches: Vec<(usize, AkPoint)>,
    /// Points with `a + b > 0`.
    pub positive_points: Vec<(usize, AkPoint)>,
}

impl AkReport {
    pub fn is_clean(&self) -> bool {
        self.multiset_mismatches.is_empty()
            && self.provenance_mismatches.is_empty()
            && self.positive_points.is_empty()
    }
}

/// Compares recursion against definition for `k <= definition_depth` and
/// checks `a + b <= 0` for `k <= sum_depth`.
pub fn verify_ak_sets(
    definition_depth: usize,
    sum_depth: usize,
    limits: &Limits,
    exec: Execution,
) -> Result<AkReport> {
    let depth = definition_depth.max(sum_depth);
    if depth == 0 {
        return invalid("nothing to check at depth 0");
    }
    limits.check_ak_depth(depth)?;
    let mut report = AkReport {
        definition_depth,
        sum_depth,
        points_checked: 0,
        multiset_mismatches: Vec::new(),
        provenance_mismatches: Vec::new(),
        positive_points: Vec::new(),
    };
    let mut set = vec![AkPoint {
        a: Rational::zero(),
        b: Rational::zero(),
        provenance: Some(Policy::from_parts(vec![1], 2)),
    }];
    for k in 1..=depth {
        if k > 1 {
            set = ak_step(k - 1, &set, exec)?;
        }
        report.points_checked += set.len() as u64;
        if k <= definition_depth {
            let def = ak_from_definition_with(k, limits, exec)?;
            if !ak_multiset_eq(&set, &def) {
                report.multiset_mismatches.push(k);
            }
            let by_policy: std::collections::HashMap<&Policy, &AkPoint> = def
                .iter()
                .filter_map(|d| d.provenance.as_ref().map(|p| (p, d)))
                .collect();
            for pt in &set {
                let twin = pt.provenance.as_ref().and_then(|p| by_policy.get(p));
                if twin.is_none_or(|t| t.a != pt.a || t.b != pt.b) {
                    report.provenance_mismatches.push((k, pt.clone()));
                }
            }
        }
        if k <= sum_depth {
            report.positive_points.extend(
                set.iter()
                    .filter(|pt| pt.sum() > Rational::zero())
                    .map(|pt| (k, pt.clone())),
            );
        }
    }
    Ok(report)
}
