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

//! Naive reference implementations used only by the tests. They share no
//! code with the library beyond the exact rational type.

#![allow(dead_code)]

use num_bigint::BigInt;
use pickseq::Rational;

pub fn r(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

pub fn parse_turns(s: &str) -> Vec<usize> {
    s.chars()
        .map(|c| c.to_digit(10).unwrap() as usize)
        .collect()
}

/// All orderings of `1..=p`.
pub fn permutations(p: usize) -> Vec<Vec<usize>> {
    if p == 0 {
        return vec![Vec::new()];
    }
    let mut out = Vec::new();
    for rest in permutations(p - 1) {
        for pos in 0..=rest.len() {
            let mut v = rest.clone();
            v.insert(pos, p);
            out.push(v);
        }
    }
    out
}

/// Calls `visit` on every profile of `n` rankings over `1..=p`.
pub fn for_each_profile(n: usize, p: usize, mut visit: impl FnMut(&[Vec<usize>])) {
    let perms = permutations(p);
    let mut idx = vec![0usize; n];
    loop {
        let profile: Vec<Vec<usize>> = idx.iter().map(|&i| perms[i].clone()).collect();
        visit(&profile);
        let mut j = n;
        loop {
            if j == 0 {
                return;
            }
            j -= 1;
            idx[j] += 1;
            if idx[j] < perms.len() {
                break;
            }
            idx[j] = 0;
        }
    }
}

/// Rank (1-based) of `item` in `ranking`.
pub fn rank(ranking: &[usize], item: usize) -> usize {
    ranking.iter().position(|&x| x == item).unwrap() + 1
}

/// Each mover takes her best remaining item; returns bundles per agent.
pub fn truthful(turns: &[usize], profile: &[Vec<usize>]) -> Vec<Vec<usize>> {
    let mut taken = Vec::new();
    let mut bundles = vec![Vec::new(); profile.len()];
    for &a in turns {
        let item = *profile[a - 1].iter().find(|i| !taken.contains(*i)).unwrap();
        taken.push(item);
        bundles[a - 1].push(item);
    }
    bundles
}

/// Exact expected utilities under truthful play, averaging over every profile.
/// `g[r - 1]` is the value of rank `r`.
pub fn expectation(turns: &[usize], n: usize, g: &[i64]) -> Vec<Rational> {
    let p = turns.len();
    let mut sums = vec![0i64; n];
    let mut count = 0i64;
    for_each_profile(n, p, |profile| {
        count += 1;
        for (a, bundle) in truthful(turns, profile).iter().enumerate() {
            sums[a] += bundle
                .iter()
                .map(|&i| g[rank(&profile[a], i) - 1])
                .sum::<i64>();
        }
    });
    sums.into_iter().map(|s| r(s, count)).collect()
}

pub fn borda(p: usize) -> Vec<i64> {
    (1..=p).rev().map(|v| v as i64).collect()
}

/// Borda expectations by recursing on the first turn: the mover gains `p`,
/// everyone else scales by `(p+1)/p`.
pub fn borda_recursion(turns: &[usize], n: usize) -> Vec<Rational> {
    if turns.is_empty() {
        return vec![r(0, 1); n];
    }
    let p = turns.len() as i64;
    let mut u = borda_recursion(&turns[1..], n);
    for (a, v) in u.iter_mut().enumerate() {
        if a + 1 == turns[0] {
            *v += r(p, 1);
        } else {
            *v *= r(p + 1, p);
        }
    }
    u
}

/// Backward induction without memoization. Returns payoffs and bundles;
/// among equal payoffs the mover keeps the item she ranks highest.
pub fn spne(turns: &[usize], profile: &[Vec<usize>], g: &[i64]) -> (Vec<i64>, Vec<Vec<usize>>) {
    fn go(
        turns: &[usize],
        profile: &[Vec<usize>],
        g: &[i64],
        remaining: &[usize],
    ) -> (Vec<i64>, Vec<Vec<usize>>) {
        let n = profile.len();
        if turns.is_empty() {
            return (vec![0; n], vec![Vec::new(); n]);
        }
        let mover = turns[0] - 1;
        let mut best: Option<(Vec<i64>, Vec<Vec<usize>>)> = None;
        for &item in &profile[mover] {
            if !remaining.contains(&item) {
                continue;
            }
            let rest: Vec<usize> = remaining.iter().copied().filter(|&i| i != item).collect();
            let (mut pay, mut bundles) = go(&turns[1..], profile, g, &rest);
            pay[mover] += g[rank(&profile[mover], item) - 1];
            bundles[mover].insert(0, item);
            if best.as_ref().is_none_or(|(b, _)| pay[mover] > b[mover]) {
                best = Some((pay, bundles));
            }
        }
        best.unwrap()
    }
    let all: Vec<usize> = (1..=turns.len()).collect();
    go(turns, profile, g, &all)
}

/// Exact expected strategic utilities over every profile.
pub fn spne_expectation(turns: &[usize], n: usize, g: &[i64]) -> Vec<Rational> {
    let mut sums = vec![0i64; n];
    let mut count = 0i64;
    for_each_profile(n, turns.len(), |profile| {
        count += 1;
        for (s, v) in sums.iter_mut().zip(spne(turns, profile, g).0) {
            *s += v;
        }
    });
    sums.into_iter().map(|s| r(s, count)).collect()
}

/// Expected Borda welfare when each item goes to an agent ranking it highest.
pub fn bestpref(n: usize, p: usize) -> Rational {
    let mut total = 0i64;
    let mut count = 0i64;
    for_each_profile(n, p, |profile| {
        count += 1;
        for item in 1..=p {
            let best = profile.iter().map(|row| rank(row, item)).min().unwrap();
            total += (p - best + 1) as i64;
        }
    });
    r(total, count)
}

/// `γ_k` from its product definition, as an unreduced fraction.
pub fn gamma_product(k: usize) -> (BigInt, BigInt) {
    let mut num = BigInt::from(1);
    let mut den = BigInt::from(1);
    for j in 1..=(k.saturating_sub(1) / 2) {
        num *= 2 * j + 1;
        den *= 2 * j;
    }
    (num, den)
}

/// Canonical two-agent policies of length `p`: first turn 1, then any mix.
pub fn two_agent_policies(p: usize) -> Vec<Vec<usize>> {
    (0..1usize << (p - 1))
        .map(|bits| {
            let mut t = vec![1];
            t.extend((0..p - 1).map(|i| 1 + ((bits >> (p - 2 - i)) & 1)));
            t
        })
        .collect()
}
