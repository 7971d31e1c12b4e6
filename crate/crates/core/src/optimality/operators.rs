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

//! The one-step maps `f_k` (follow alternation) and `g_k` (deviate), their
//! iterates `G_km = g_{k+m-1} ∘ ... ∘ g_k` and `F_km = G_{k+1,m-1} ∘ f_k`,
//! closed forms for both, and closed forms for their coordinate sums.

use num_traits::Zero;

use crate::error::{invalid, Result};
use crate::numerics::{delta, gamma_bar, int, rat, scale, Rational};

/// A point of the plane with exact coordinates.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Point {
    pub x: Rational,
    pub y: Rational,
}

impl Point {
    pub fn new(x: Rational, y: Rational) -> Self {
        Point { x, y }
    }

    pub fn origin() -> Self {
        Point::new(Rational::zero(), Rational::zero())
    }

    pub fn sum(&self) -> Rational {
        &self.x + &self.y
    }
}

fn check_level(k: usize) -> Result<()> {
    if k == 0 {
        return invalid("operator level k must be at least 1");
    }
    Ok(())
}

fn check_f_steps(m: usize) -> Result<()> {
    if m == 0 {
        return invalid("F_km needs m >= 1");
    }
    Ok(())
}

/// `f_k(x, y) = (y, (k+2)/(k+1) x)`.
pub fn apply_f(k: usize, point: &Point) -> Result<Point> {
    check_level(k)?;
    let k = k as u64;
    Ok(Point::new(point.y.clone(), scale(&point.x, k + 2, k + 1)))
}

/// `g_k(x, y) = (x + Δ_{k+1}, (k+2)/(k+1) (y - Δ_{k+1}))`.
pub fn apply_g(k: usize, point: &Point) -> Result<Point> {
    check_level(k)?;
    let d = delta(k + 1)?;
    let k = k as u64;
    Ok(Point::new(
        &point.x + &d,
        scale(&(&point.y - &d), k + 2, k + 1),
    ))
}

/// `G_km` by composing `m` applications of `g`.
pub fn g_composed(k: usize, m: usize, point: &Point) -> Result<Point> {
    check_level(k)?;
    let mut p = point.clone();
    for j in 0..m {
        p = apply_g(k + j, &p)?;
    }
    Ok(p)
}

/// `F_km` by composing `f_k` with `G_{k+1,m-1}`.
pub fn f_composed(k: usize, m: usize, point: &Point) -> Result<Point> {
    check_f_steps(m)?;
    g_composed(k + 1, m - 1, &apply_f(k, point)?)
}

/// `Σ_{j=from}^{m} Δ_{k+j}` and `Σ_{j=from}^{m} Δ_{k+j}/(k+j)`.
fn delta_sums(k: usize, from: usize, m: usize) -> Result<(Rational, Rational)> {
    let mut plain = Rational::zero();
    let mut weighted = Rational::zero();
    for j in from..=m {
        let d = delta(k + j)?;
        weighted += scale(&d, 1, (k + j) as u64);
        plain += d;
    }
    Ok((plain, weighted))
}

/// Closed form of `G_km`.
pub fn g_explicit(k: usize, m: usize, point: &Point) -> Result<Point> {
    check_level(k)?;
    let (plain, weighted) = delta_sums(k, 1, m)?;
    let y = scale(&point.y, 1, k as u64 + 1) - weighted;
    Ok(Point::new(
        &point.x + plain,
        scale(&y, (k + m + 1) as u64, 1),
    ))
}

/// Closed form of `F_km`, `m >= 1`.
pub fn f_explicit(k: usize, m: usize, point: &Point) -> Result<Point> {
    check_level(k)?;
    check_f_steps(m)?;
    let (plain, weighted) = delta_sums(k, 2, m)?;
    let y = scale(&point.x, 1, k as u64 + 1) - weighted;
    Ok(Point::new(
        &point.y + plain,
        scale(&y, (k + m + 1) as u64, 1),
    ))
}

/// `Σ_{j=1}^{count} γ̄_{start + 2(j-1)}`.
fn gamma_bar_stride(start: usize, count: usize) -> Result<Rational> {
    (0..count).try_fold(Rational::zero(), |acc, j| {
        Ok(acc + gamma_bar(start + 2 * j)?)
    })
}

/// Coordinate sum of `G_km(x, y)` from the parity-split closed form.
pub fn coordinate_sum_g(k: usize, m: usize, point: &Point) -> Result<Rational> {
    check_level(k)?;
    let mu = m as i64;
    let base = point.sum() + scale(&point.y, m as u64, k as u64 + 1) - rat(mu * (mu + 1), 6);
    let tail = if k % 2 == 1 {
        -gamma_bar_stride(k + 1, m.div_ceil(2))? / int(3)
    } else {
        (gamma_bar(k + 1)? * int(mu) - gamma_bar_stride(k + 2, m / 2)?) / int(3)
    };
    Ok(base + tail)
}

/// Coordinate sum of `F_km(x, y)` from the parity-split closed form, `m >= 1`.
pub fn coordinate_sum_f(k: usize, m: usize, point: &Point) -> Result<Rational> {
    check_level(k)?;
    check_f_steps(m)?;
    let mu = m as i64;
    let base = point.sum() + scale(&point.x, m as u64, k as u64 + 1) - rat((mu - 1) * mu, 6);
    let tail = if k % 2 == 1 {
        (gamma_bar(k + 2)? * int(mu - 1) - gamma_bar_stride(k + 3, (m - 1) / 2)?) / int(3)
    } else {
        -gamma_bar_stride(k + 2, m / 2)? / int(3)
    };
    Ok(base + tail)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::to_decimal;

    fn pt(x: Rational, y: Rational) -> Point {
        Point::new(x, y)
    }

    #[test]
    fn one_step_maps() {
        assert_eq!(apply_f(1, &Point::origin()).unwrap(), Point::origin());
        assert_eq!(
            apply_g(1, &Point::origin()).unwrap(),
            pt(int(1), rat(-3, 2))
        );
        assert!(apply_f(0, &Point::origin()).is_err());
    }

    #[test]
    fn deviation_from_hypothetical_point() {
        let image = apply_g(10, &pt(int(-12), rat(119, 10))).unwrap();
        assert_eq!(to_decimal(&image.x, 4), "-9.2357");
        assert_eq!(to_decimal(&image.y, 4), "9.9662");
        assert!(image.sum() > Rational::zero());
    }

    #[test]
    fn explicit_forms_match_compositions() {
        let p = pt(rat(-7, 3), rat(5, 4));
        for k in 1..=8 {
            assert_eq!(g_explicit(k, 0, &p).unwrap(), p);
            for m in 0..=8 {
                assert_eq!(g_explicit(k, m, &p).unwrap(), g_composed(k, m, &p).unwrap());
                if m >= 1 {
                    assert_eq!(f_explicit(k, m, &p).unwrap(), f_composed(k, m, &p).unwrap());
                }
            }
        }
        assert_eq!(
            g_explicit(1, 1, &Point::origin()).unwrap(),
            pt(int(1), rat(-3, 2))
        );
        assert_eq!(f_explicit(1, 1, &Point::origin()).unwrap(), Point::origin());
        assert!(f_explicit(1, 0, &Point::origin()).is_err());
        assert!(coordinate_sum_f(1, 0, &Point::origin()).is_err());
    }

    #[test]
    fn coordinate_sums_small_cases() {
        assert_eq!(
            coordinate_sum_g(1, 1, &Point::origin()).unwrap(),
            rat(-1, 2)
        );
        let p = pt(rat(2, 5), rat(-3, 7));
        assert_eq!(coordinate_sum_g(1, 0, &p).unwrap(), p.sum());
        assert_eq!(
            coordinate_sum_g(2, 2, &Point::origin()).unwrap(),
            g_explicit(2, 2, &Point::origin()).unwrap().sum()
        );
    }

    #[test]
    fn coordinate_sums_match_explicit_forms() {
        let p = pt(rat(-11, 6), rat(9, 8));
        for k in 1..=10 {
            for m in 0..=10 {
                assert_eq!(
                    coordinate_sum_g(k, m, &p).unwrap(),
                    g_explicit(k, m, &p).unwrap().sum(),
                    "G k={k} m={m}"
                );
                if m >= 1 {
                    assert_eq!(
                        coordinate_sum_f(k, m, &p).unwrap(),
                        f_explicit(k, m, &p).unwrap().sum(),
                        "F k={k} m={m}"
                    );
                }
            }
        }
    }
}
