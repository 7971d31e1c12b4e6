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

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed};

use crate::error::{invalid, Error, Result};
use crate::numerics::{format_exact, int, parse_exact, Rational};

/// Utility of an item as a function of its rank: `table[k - 1] = g(k)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ScoringFunction {
    table: Vec<Rational>,
}

impl ScoringFunction {
    pub fn from_table(table: Vec<Rational>) -> Result<Self> {
        if table.is_empty() {
            return invalid("a scoring table needs at least one entry");
        }
        Ok(ScoringFunction { table })
    }

    /// `g(k) = p - k + 1`.
    pub fn borda(items: usize) -> Self {
        ScoringFunction {
            table: (1..=items).map(|k| int((items - k + 1) as i64)).collect(),
        }
    }

    /// `g(i) = 1` for `i <= k`, else 0.
    pub fn approval(items: usize, k: usize) -> Self {
        ScoringFunction {
            table: (1..=items).map(|i| int((i <= k) as i64)).collect(),
        }
    }

    /// `g(k) = N + (p - k + 1)`.
    pub fn quasi_indifferent(items: usize, big_n: &Rational) -> Self {
        ScoringFunction {
            table: (1..=items)
                .map(|k| big_n + int((items - k + 1) as i64))
                .collect(),
        }
    }

    /// `g(k) = alpha * k + beta`, which must be non-increasing (`alpha <= 0`).
    pub fn linear(items: usize, alpha: &Rational, beta: &Rational) -> Result<Self> {
        if alpha.is_positive() {
            return invalid("linear scoring needs alpha <= 0");
        }
        Ok(ScoringFunction {
            table: (1..=items).map(|k| alpha * int(k as i64) + beta).collect(),
        })
    }

    /// `g(k) = 2^(p - k)`: each item outweighs all lower-ranked items together.
    pub fn lexicographic(items: usize) -> Self {
        ScoringFunction {
            table: (1..=items)
                .map(|k| Rational::from_integer(BigInt::one() << (items - k)))
                .collect(),
        }
    }

    /// Number of ranks the table covers.
    pub fn items(&self) -> usize {
        self.table.len()
    }

    /// `g(rank)` for a 1-based rank.
    pub fn value(&self, rank: usize) -> &Rational {
        &self.table[rank - 1]
    }

    pub fn table(&self) -> &[Rational] {
        &self.table
    }

    pub(crate) fn check_items(&self, items: usize) -> Result<()> {
        if self.items() == items {
            Ok(())
        } else {
            invalid(format!(
                "scoring table has {} entries but the instance has {items} items",
                self.items()
            ))
        }
    }

    /// True when the table is `p, p-1, ..., 1`.
    pub fn is_borda(&self) -> bool {
        let p = self.table.len();
        self.table
            .iter()
            .enumerate()
            .all(|(r, g)| g.is_integer() && *g.numer() == BigInt::from(p - r))
    }

    /// Non-increasing in rank.
    pub fn is_monotone(&self) -> bool {
        self.table.windows(2).all(|w| w[0] >= w[1])
    }

    /// Discrete convexity in rank: `g(k-1) + g(k+1) >= 2 g(k)`.
    pub fn is_convex(&self) -> bool {
        self.table
            .windows(3)
            .all(|w| &w[0] + &w[2] >= &w[1] + &w[1])
    }

    /// Integer numerators over the least common denominator of the table.
    pub(crate) fn integer_table(&self) -> (Vec<BigInt>, BigInt) {
        let denom = self
            .table
            .iter()
            .fold(BigInt::one(), |acc, g| acc.lcm(g.denom()));
        let values = self
            .table
            .iter()
            .map(|g| g.numer() * (&denom / g.denom()))
            .collect();
        (values, denom)
    }

    /// Integer table as `i128`, if every value fits with room for `headroom` summands.
    pub(crate) fn small_integer_table(&self, headroom: usize) -> Option<(Vec<i128>, BigInt)> {
        let (values, denom) = self.integer_table();
        let cap = i128::MAX / (headroom.max(1) as i128);
        let small: Option<Vec<i128>> = values
            .iter()
            .map(|v| i128::try_from(v).ok().filter(|x| x.abs() <= cap))
            .collect();
        small.map(|s| (s, denom))
    }

    pub(crate) fn to_f64_table(&self) -> Vec<f64> {
        self.table.iter().map(crate::numerics::to_f64).collect()
    }
}

/// A scoring rule independent of the item count; [`ScoringSpec::build`]
/// produces the concrete table.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub enum ScoringSpec {
    #[default]
    Borda,
    Approval(usize),
    QuasiIndifferent(Rational),
    Linear {
        alpha: Rational,
        beta: Rational,
    },
    Lexicographic,
    Table(Vec<Rational>),
}

impl ScoringSpec {
    pub fn build(&self, items: usize) -> Result<ScoringFunction> {
        match self {
            ScoringSpec::Borda => Ok(ScoringFunction::borda(items)),
            ScoringSpec::Approval(k) => Ok(ScoringFunction::approval(items, *k)),
            ScoringSpec::QuasiIndifferent(n) => Ok(ScoringFunction::quasi_indifferent(items, n)),
            ScoringSpec::Linear { alpha, beta } => ScoringFunction::linear(items, alpha, beta),
            ScoringSpec::Lexicographic => Ok(ScoringFunction::lexicographic(items)),
            ScoringSpec::Table(t) => {
                let g = ScoringFunction::from_table(t.clone())?;
                g.check_items(items)?;
                Ok(g)
            }
        }
    }

    /// Strictly decreasing linear rule (Borda or `Linear` with `alpha < 0`).
    pub fn is_strictly_linear(&self) -> bool {
        match self {
            ScoringSpec::Borda | ScoringSpec::QuasiIndifferent(_) => true,
            ScoringSpec::Linear { alpha, .. } => alpha.is_negative(),
            _ => false,
        }
    }
}

impl FromStr for ScoringSpec {
    type Err = Error;

    /// `borda`, `approval:K`, `quasi:N`, `linear:ALPHA:BETA`, `lex`, or
    /// `table:G1,G2,...`.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let (head, rest) = s.split_once(':').unwrap_or((s, ""));
        let usage = || {
            Error::Parse(format!(
                "unknown scoring {s:?}; expected borda, approval:K, quasi:N, linear:A:B, lex or table:G1,G2,..."
            ))
        };
        match head.to_ascii_lowercase().as_str() {
            "borda" if rest.is_empty() => Ok(ScoringSpec::Borda),
            "approval" | "k-approval" => {
                rest.parse().map(ScoringSpec::Approval).map_err(|_| usage())
            }
            "quasi" | "quasi-indifferent" => Ok(ScoringSpec::QuasiIndifferent(parse_exact(rest)?)),
            "linear" => {
                let (a, b) = rest.split_once(':').ok_or_else(usage)?;
                let alpha = parse_exact(a)?;
                if alpha.is_positive() {
                    return Err(Error::InvalidArgument(
                        "linear scoring needs alpha <= 0".into(),
                    ));
                }
                Ok(ScoringSpec::Linear {
                    alpha,
                    beta: parse_exact(b)?,
                })
            }
            "lex" | "lexicographic" if rest.is_empty() => Ok(ScoringSpec::Lexicographic),
            "table" => rest
                .split(',')
                .map(parse_exact)
                .collect::<Result<Vec<_>>>()
                .map(ScoringSpec::Table),
            _ => Err(usage()),
        }
    }
}

impl fmt::Display for ScoringSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ScoringSpec::Borda => f.write_str("borda"),
            ScoringSpec::Approval(k) => write!(f, "approval:{k}"),
            ScoringSpec::QuasiIndifferent(n) => write!(f, "quasi:{}", format_exact(n)),
            ScoringSpec::Linear { alpha, beta } => {
                write!(f, "linear:{}:{}", format_exact(alpha), format_exact(beta))
            }
            ScoringSpec::Lexicographic => f.write_str("lex"),
            ScoringSpec::Table(t) => {
                let parts: Vec<String> = t.iter().map(format_exact).collect();
                write!(f, "table:{}", parts.join(","))
            }
        }
    }
}
