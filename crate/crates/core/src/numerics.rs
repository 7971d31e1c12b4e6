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

//! Exact rational helpers and the auxiliary sequences `γ_k`, `γ̄_k = γ_k / k`
//! and `Δ_k = (k + (-1)^k γ_k) / 3`.
//!
//! `Δ_k` is indexed so that `Δ_{p+1}` is the expected-utility gap between
//! the first and second mover of the two-agent alternating policy on `p`
//! items.

use std::sync::{OnceLock, RwLock};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{invalid, Error, Result};

/// Exact fraction over arbitrary-precision integers, always in lowest terms.
pub type Rational = BigRational;

/// Number of decimal places used when a caller does not ask for another.
pub const DEFAULT_DECIMAL_PLACES: usize = 6;

pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// `num / den`, reduced. Panics if `den == 0`.
pub fn rat(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

fn gcd_u64(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

fn rem_u64(x: &BigInt, m: u64) -> u64 {
    (x.magnitude() % m).to_u64().unwrap_or(0)
}

/// `r * num / den` for machine-sized factors.
///
/// Reduction only needs remainders of the big parts modulo the small
/// factors, so this stays linear in the size of `r`.
pub fn scale(r: &Rational, num: u64, den: u64) -> Rational {
    assert!(den != 0, "scale by a zero denominator");
    if num == 0 || r.is_zero() {
        return Rational::zero();
    }
    let g = gcd_u64(num, den);
    let (num, den) = (num / g, den / g);
    let g1 = gcd_u64(den, rem_u64(r.numer(), den));
    let g2 = gcd_u64(num, rem_u64(r.denom(), num));
    let numer = (r.numer() / g1) * (num / g2);
    let denom = (r.denom() / g2) * (den / g1);
    Rational::new_raw(numer, denom)
}

/// Nearest `f64`, correct to within a couple of ulps even when numerator
/// and denominator are far outside the `f64` range.
pub fn to_f64(r: &Rational) -> f64 {
    if r.is_zero() {
        return 0.0;
    }
    let n = r.numer().abs();
    let d = r.denom();
    let shift = d.bits() as i64 - n.bits() as i64 + 64;
    let q = if shift >= 0 {
        (n << shift as usize) / d
    } else {
        n / (d << (-shift) as usize)
    };
    let mut value = q.to_f64().unwrap_or(f64::INFINITY);
    // Apply 2^-shift in bounded steps so intermediate powers stay finite.
    let mut e = -shift;
    while e != 0 {
        let step = e.clamp(-1000, 1000);
        value *= 2f64.powi(step as i32);
        e -= step;
    }
    if r.is_negative() {
        -value
    } else {
        value
    }
}

/// Decimal rendering with `places` fractional digits, rounding half to even.
pub fn to_decimal(r: &Rational, places: usize) -> String {
    let pow = num_traits::pow(BigInt::from(10), places);
    let scaled = r.numer().abs() * &pow;
    let (mut q, rem): (BigInt, BigInt) = scaled.div_rem(r.denom());
    let twice: BigInt = rem * 2;
    match twice.cmp(r.denom()) {
        std::cmp::Ordering::Greater => q += 1,
        std::cmp::Ordering::Equal if q.is_odd() => q += 1,
        _ => {}
    }
    let negative = r.is_negative() && !q.is_zero();
    let digits = q.to_string();
    let body = if places == 0 {
        digits
    } else if digits.len() > places {
        let (whole, frac) = digits.split_at(digits.len() - places);
        format!("{whole}.{frac}")
    } else {
        format!("0.{}{}", "0".repeat(places - digits.len()), digits)
    };
    if negative {
        format!("-{body}")
    } else {
        body
    }
}

/// The decimal rendering as a JSON-friendly float.
pub fn to_decimal_f64(r: &Rational, places: usize) -> f64 {
    to_decimal(r, places).parse().unwrap_or(f64::NAN)
}

/// `"numerator/denominator"`, always with an explicit denominator.
pub fn format_exact(r: &Rational) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

/// Parses `"a/b"`, `"a"` or a finite decimal such as `"-2.75"`.
pub fn parse_exact(s: &str) -> Result<Rational> {
    let s = s.trim();
    let bad = || Error::Parse(format!("{s:?} is not a rational number"));
    if let Some((n, d)) = s.split_once('/') {
        let n: BigInt = n.trim().parse().map_err(|_| bad())?;
        let d: BigInt = d.trim().parse().map_err(|_| bad())?;
        if d.is_zero() {
            return Err(Error::Parse(format!("{s:?} has a zero denominator")));
        }
        return Ok(Rational::new(n, d));
    }
    if let Some((whole, frac)) = s.split_once('.') {
        if frac.is_empty() || !frac.bytes().all(|b| b.is_ascii_digit()) {
            return Err(bad());
        }
        let negative = whole.starts_with('-');
        let whole: BigInt = match whole.trim_start_matches(['-', '+']) {
            "" => BigInt::zero(),
            w => w.parse().map_err(|_| bad())?,
        };
        let frac_num: BigInt = frac.parse().map_err(|_| bad())?;
        let pow = num_traits::pow(BigInt::from(10), frac.len());
        let value = Rational::new(whole * &pow + frac_num, pow);
        return Ok(if negative { -value } else { value });
    }
    let n: BigInt = s.parse().map_err(|_| bad())?;
    Ok(Rational::from_integer(n))
}

#[derive(Debug, Clone)]
struct GammaEntry {
    gamma: Rational,
    gamma_bar: Rational,
}

/// Memoized `γ_k` / `γ̄_k` values, extended one index at a time through the
/// `γ̄` recursion. Reads take a shared lock; extension is serialized.
#[derive(Debug, Default)]
pub struct GammaTable {
    entries: RwLock<Vec<GammaEntry>>,
}

impl GammaTable {
    pub fn new() -> Self {
        Self::default()
    }

    fn entry(&self, k: usize) -> Result<GammaEntry> {
        if k == 0 {
            return invalid("gamma index must be at least 1");
        }
        {
            let entries = self.entries.read().expect("gamma table lock poisoned");
            if let Some(e) = entries.get(k - 1) {
                return Ok(e.clone());
            }
        }
        let mut entries = self.entries.write().expect("gamma table lock poisoned");
        if entries.is_empty() {
            entries.push(GammaEntry {
                gamma: Rational::one(),
                gamma_bar: Rational::one(),
            });
        }
        while entries.len() < k {
            let last = entries.last().expect("table is non-empty");
            let next = step(entries.len(), last);
            entries.push(next);
        }
        Ok(entries[k - 1].clone())
    }

    pub fn gamma(&self, k: usize) -> Result<Rational> {
        self.entry(k).map(|e| e.gamma)
    }

    pub fn gamma_bar(&self, k: usize) -> Result<Rational> {
        self.entry(k).map(|e| e.gamma_bar)
    }

    pub fn delta(&self, k: usize) -> Result<Rational> {
        if k < 2 {
            return invalid(format!("delta index must be at least 2, got {k}"));
        }
        let g = self.gamma(k)?;
        let k_r = Rational::from_integer(BigInt::from(k));
        let signed = if k.is_multiple_of(2) {
            k_r + g
        } else {
            k_r - g
        };
        Ok(scale(&signed, 1, 3))
    }
}

// (γ_k, γ̄_k) -> (γ_{k+1}, γ̄_{k+1})
fn step(k: usize, prev: &GammaEntry) -> GammaEntry {
    let k = k as u64;
    if k.is_multiple_of(2) {
        GammaEntry {
            gamma: scale(&prev.gamma, k + 1, k),
            gamma_bar: prev.gamma_bar.clone(),
        }
    } else {
        GammaEntry {
            gamma: prev.gamma.clone(),
            gamma_bar: scale(&prev.gamma_bar, k, k + 1),
        }
    }
}

fn shared_table() -> &'static GammaTable {
    static TABLE: OnceLock<GammaTable> = OnceLock::new();
    TABLE.get_or_init(GammaTable::new)
}

/// `γ_k`; errors for `k = 0`.
pub fn gamma(k: usize) -> Result<Rational> {
    shared_table().gamma(k)
}

/// `γ̄_k = γ_k / k`; errors for `k = 0`.
pub fn gamma_bar(k: usize) -> Result<Rational> {
    shared_table().gamma_bar(k)
}

/// `Δ_k = (k + (-1)^k γ_k) / 3`; errors for `k < 2`.
pub fn delta(k: usize) -> Result<Rational> {
    shared_table().delta(k)
}

/// Streams `(k, γ_k, γ̄_k)` for `k = 1, 2, ...` without retaining old terms.
///
/// Use this instead of the shared table for very large `k`, where the
/// memoized values would hold hundreds of megabytes.
#[derive(Debug, Clone)]
pub struct GammaSequence {
    k: usize,
    current: GammaEntry,
}

impl Default for GammaSequence {
    fn default() -> Self {
        GammaSequence {
            k: 0,
            current: GammaEntry {
                gamma: Rational::one(),
                gamma_bar: Rational::one(),
            },
        }
    }
}

impl GammaSequence {
    pub fn new() -> Self {
        Self::default()
    }
}

impl Iterator for GammaSequence {
    type Item = (usize, Rational, Rational);

    fn next(&mut self) -> Option<Self::Item> {
        if self.k > 0 {
            self.current = step(self.k, &self.current);
        }
        self.k += 1;
        Some((
            self.k,
            self.current.gamma.clone(),
            self.current.gamma_bar.clone(),
        ))
    }
}
