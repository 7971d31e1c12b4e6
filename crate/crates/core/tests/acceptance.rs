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

//! End-to-end acceptance checks. Each criterion prints one line and the
//! binary exits non-zero if any criterion fails or exceeds its budget.

mod common;

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::process::ExitCode;
use std::time::{Duration, Instant};

use num_bigint::BigInt;
use num_traits::{Signed, Zero};
use pickseq::expectation::{
    alt_bounds, alt_closed_form_two_agents, alt_residue_closed_form, bestpref_expected_sw,
    expected_utilities, expected_utilities_borda, expected_utilities_general, pick_probabilities,
    random_expected_sw,
};
use pickseq::model::{
    brute_force_bestpref_sw, brute_force_expectation, sample_bestpref_gap, truthful_play, utilities,
};
use pickseq::numerics::{delta, gamma_bar, parse_exact, to_decimal, to_f64, GammaSequence};
use pickseq::optimality::{
    ak_from_recursion, apply_g, coordinate_sum_f, coordinate_sum_g, f_composed, f_explicit,
    find_approval_witness, g_composed, g_explicit, optimal_policy, verify_ak_sets,
    verify_gamma_inequalities, verify_operator_sums, Point,
};
use pickseq::strategic::{
    expected_strategic_utilities, spne_play, verify_strategic_optimality, StrategicExpectation,
    StrategicMode,
};
use pickseq::{Execution, Limits, Policy, Profile, Rational, ScoringFunction, ScoringSpec};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use common::r;

fn pol(s: &str, n: usize) -> Policy {
    Policy::parse_with_agents(s, n).unwrap()
}

fn suffix_table() {
    // suffix, exact ū_1 and ū_2, then the cells as printed in the table
    let rows = [
        ("2", r(0, 1), r(1, 1), "0", "1", "1"),
        ("12", r(2, 1), r(3, 2), "2", "1.5", "3.5"),
        ("212", r(8, 3), r(9, 2), "2.67", "4.5", "7.17"),
        ("1212", r(20, 3), r(45, 8), "6.67", "5.63", "12.3"),
        ("21212", r(8, 1), r(85, 8), "8", "10.63", "18.63"),
        ("121212", r(14, 1), r(595, 48), "14", "12.4", "26.4"),
        ("2", r(0, 1), r(1, 1), "0", "1", "1"),
        ("22", r(0, 1), r(3, 1), "0", "3", "3"),
        ("222", r(0, 1), r(6, 1), "0", "6", "6"),
        ("1222", r(4, 1), r(15, 2), "4", "7.5", "11.5"),
        ("11222", r(9, 1), r(9, 1), "9", "9", "18"),
        ("111222", r(15, 1), r(21, 2), "15", "10.5", "25.5"),
    ];
    for (s, u1, u2, d1, d2, dsw) in rows {
        let ev = expected_utilities_borda(&pol(s, 2));
        assert_eq!(ev.utilities(), [u1.clone(), u2.clone()], "{s}");
        assert_eq!(ev.sw(), &(&u1 + &u2), "{s}");
        for (value, printed) in [(ev.utility(1), d1), (ev.utility(2), d2), (ev.sw(), dsw)] {
            let cell = parse_exact(printed).unwrap();
            let places = printed.split_once('.').map_or(0, |(_, f)| f.len() as u32);
            let half_unit = r(1, 2 * 10i64.pow(places));
            assert!(
                (value - cell).abs() <= half_unit,
                "{s}: {value} vs {printed}"
            );
        }
        assert_eq!(
            ev.utilities(),
            common::borda_recursion(&common::parse_turns(s), 2)
        );
    }
    assert_eq!(
        expected_utilities_borda(&pol("121212", 2)).sw(),
        &r(1267, 48)
    );
}

fn borda_recursion_vs_oracle() {
    for p in 1..=5 {
        for turns in common::two_agent_policies(p) {
            let policy = Policy::new(turns.clone(), 2).unwrap();
            let dp = expected_utilities_borda(&policy);
            let naive = common::expectation(&turns, 2, &common::borda(p));
            assert_eq!(dp.utilities(), naive, "{policy}");
            let lib_oracle = brute_force_expectation(&policy, &ScoringFunction::borda(p)).unwrap();
            assert_eq!(dp, lib_oracle, "{policy}");
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    for _ in 0..20 {
        let p = rng.gen_range(1..=4);
        let turns: Vec<usize> = (0..p).map(|_| rng.gen_range(1..=3)).collect();
        let policy = Policy::new(turns.clone(), 3).unwrap();
        let naive = common::expectation(&turns, 3, &common::borda(p));
        assert_eq!(
            expected_utilities_borda(&policy).utilities(),
            naive,
            "{policy}"
        );
    }
}

fn general_engine_consistency() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for _ in 0..200 {
        let p = rng.gen_range(1..=12);
        let n = rng.gen_range(1..=4);
        let turns: Vec<usize> = (0..p).map(|_| rng.gen_range(1..=n)).collect();
        let policy = Policy::new(turns, n).unwrap();
        let general = expected_utilities_general(&policy, &ScoringFunction::borda(p)).unwrap();
        assert_eq!(general, expected_utilities_borda(&policy), "{policy}");
        let probs = pick_probabilities(&policy);
        for a in 1..=n {
            assert_eq!(
                probs.row_sum(a),
                r(policy.turn_count(a) as i64, 1),
                "{policy}"
            );
        }
    }
}

fn closed_forms() {
    for p in 1..=50 {
        let alt = Policy::alternating(2, p).unwrap();
        assert_eq!(
            alt_closed_form_two_agents(p).unwrap(),
            expected_utilities_borda(&alt),
            "p={p}"
        );
    }
    for n in 1..=5 {
        for p in 1..=40 {
            let ev = expected_utilities_borda(&Policy::alternating(n, p).unwrap());
            for i in 1..=n {
                if p % n == (i - 1) % n {
                    let expected = r(((p + 1 - i) * (p + 1)) as i64, (n + 1) as i64);
                    assert_eq!(alt_residue_closed_form(n, p, i).unwrap(), expected);
                    assert_eq!(ev.utility(i), &expected, "n={n} p={p} i={i}");
                }
                let (lo, hi) = alt_bounds(n, p, i).unwrap();
                let base = r((p * p) as i64, (n + 1) as i64);
                assert_eq!(lo, &base - r(2 * p as i64, 1));
                assert_eq!(hi, &base + r((2 * p + n) as i64, 1));
                assert!(
                    lo <= *ev.utility(i) && *ev.utility(i) <= hi,
                    "n={n} p={p} i={i}"
                );
            }
        }
    }
}

fn mechanisms() {
    for p in 1..=100i64 {
        let expected = r((p + 1) * (4 * p - 1), 6);
        assert_eq!(
            bestpref_expected_sw(2, p as usize).unwrap(),
            expected,
            "p={p}"
        );
        assert_eq!(random_expected_sw(p as usize), r(p * (p + 1), 2));
    }
    for (n, max_p) in [(2, 6), (3, 5)] {
        for p in 1..=max_p {
            assert_eq!(
                brute_force_bestpref_sw(n, p).unwrap(),
                bestpref_expected_sw(n, p).unwrap(),
                "n={n} p={p}"
            );
        }
    }
    for (n, p) in [(2, 4), (3, 3)] {
        assert_eq!(common::bestpref(n, p), bestpref_expected_sw(n, p).unwrap());
    }
}

fn alternation_is_optimal() {
    let linear: ScoringSpec = "linear:-3:1/2".parse().unwrap();
    assert!(linear.is_strictly_linear());
    for p in 2..=16 {
        let alt = Policy::alternating(2, p).unwrap();
        for spec in [ScoringSpec::Borda, linear.clone()] {
            let g = spec.build(p).unwrap();
            let opt = optimal_policy(2, p, &g).unwrap();
            assert_eq!(opt.evaluated, 1u128 << (p - 1));
            assert!(opt.is_unique(&alt), "p={p} {spec}: {:?}", opt.policies);
        }
    }
}

fn ak_machinery() {
    let report = verify_ak_sets(12, 16, &Limits::default(), Execution::default()).unwrap();
    assert!(report.is_clean(), "{report:?}");

    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut random_point = || {
        Point::new(
            r(rng.gen_range(-50..=50), rng.gen_range(1..=12)),
            r(rng.gen_range(-50..=50), rng.gen_range(1..=12)),
        )
    };
    for k in 1..=30 {
        let pt = random_point();
        for m in 0..=30 {
            assert_eq!(
                g_explicit(k, m, &pt).unwrap(),
                g_composed(k, m, &pt).unwrap()
            );
            if m >= 1 {
                assert_eq!(
                    f_explicit(k, m, &pt).unwrap(),
                    f_composed(k, m, &pt).unwrap()
                );
            }
        }
    }
    for k in 1..=20 {
        let pt = random_point();
        for m in 0..=20 {
            assert_eq!(
                coordinate_sum_g(k, m, &pt).unwrap(),
                g_explicit(k, m, &pt).unwrap().sum()
            );
            if m >= 1 {
                assert_eq!(
                    coordinate_sum_f(k, m, &pt).unwrap(),
                    f_explicit(k, m, &pt).unwrap().sum()
                );
            }
        }
    }

    let ineq = verify_gamma_inequalities(200, 200, Execution::default()).unwrap();
    assert!(ineq.violations.is_empty(), "{:?}", ineq.violations.first());

    let thm = verify_operator_sums(14, 30, Execution::default()).unwrap();
    assert!(thm.violations.is_empty(), "{:?}", thm.violations.first());
    assert_eq!(thm.points, (1 << 14) - 1);

    let hypothetical = Point::new(r(-12, 1), r(119, 10));
    let image = apply_g(10, &hypothetical).unwrap();
    assert_eq!(to_decimal(&image.x, 4), "-9.2357");
    assert_eq!(to_decimal(&image.y, 4), "9.9662");
    assert!(image.sum().is_positive());
    assert!(ak_from_recursion(10)
        .unwrap()
        .iter()
        .all(|p| p.point() != hypothetical));
}

fn fixed_profile_welfare() {
    let profile = Profile::new(vec![vec![1, 2, 3, 4, 5, 6], vec![1, 6, 2, 3, 4, 5]]).unwrap();
    let g = ScoringFunction::borda(6);
    let sw = |s: &str| -> Rational {
        let alloc = truthful_play(&pol(s, 2), &profile).unwrap();
        utilities(&alloc, &profile, &g).unwrap().into_iter().sum()
    };
    assert_eq!(sw("121212"), r(23, 1));
    assert_eq!(sw("121111"), r(25, 1));
    let rows = profile.rankings().to_vec();
    assert_eq!(
        common::truthful(&[1, 2, 1, 2, 1, 2], &rows),
        [vec![1, 2, 4], vec![6, 3, 5]]
    );
}

fn strategic() {
    let profile = Profile::new(vec![vec![1, 2, 3], vec![2, 3, 1]]).unwrap();
    let g = ScoringFunction::borda(3);
    let out = spne_play(&pol("121", 2), &profile, &g).unwrap();
    assert_eq!(out.utilities, [r(5, 1), r(2, 1)]);
    let mut first = out.allocation.bundle(1).to_vec();
    first.sort();
    assert_eq!(first, [1, 2]);
    assert_eq!(out.allocation.bundle(2), &[3]);
    let (naive, _) = common::spne(&[1, 2, 1], profile.rankings(), &common::borda(3));
    assert_eq!(naive, [5, 2]);
    let truthful = truthful_play(&pol("121", 2), &profile).unwrap();
    assert_eq!(
        utilities(&truthful, &profile, &g).unwrap(),
        [r(4, 1), r(3, 1)]
    );

    for p in 1..=4 {
        let g = ScoringFunction::borda(p);
        let table = common::borda(p);
        for turns in common::two_agent_policies(p) {
            let policy = Policy::new(turns.clone(), 2).unwrap();
            common::for_each_profile(2, p, |rows| {
                let profile = Profile::new(rows.to_vec()).unwrap();
                let out = spne_play(&policy, &profile, &g).unwrap();
                let (payoffs, bundles) = common::spne(&turns, rows, &table);
                let payoffs: Vec<Rational> = payoffs.iter().map(|&v| r(v, 1)).collect();
                assert_eq!(out.utilities, payoffs, "{policy} {rows:?}");
                for (a, bundle) in bundles.iter().enumerate() {
                    assert_eq!(
                        out.allocation.bundle(a + 1),
                        &bundle[..],
                        "{policy} {rows:?}"
                    );
                }
            });
        }
    }

    let exact =
        match expected_strategic_utilities(&pol("121", 2), &g, StrategicMode::Exact).unwrap() {
            StrategicExpectation::Exact(ev) => ev,
            StrategicExpectation::Sampled(_) => unreachable!(),
        };
    assert_eq!(exact.utilities(), [r(14, 3), r(5, 2)]);
    assert_eq!(
        exact.utilities(),
        common::spne_expectation(&[1, 2, 1], 2, &common::borda(3))
    );

    for p in 1..=5 {
        let report = verify_strategic_optimality(p, &ScoringFunction::borda(p)).unwrap();
        assert!(report.alternating_optimal, "p={p}: {:?}", report.argmax);
        let alt = report
            .rows
            .iter()
            .find(|row| row.policy == Policy::alternating(2, p).unwrap())
            .unwrap();
        for row in report.reversal_symmetric() {
            assert!(alt.strategic_sw >= row.strategic_sw, "p={p} {}", row.policy);
        }
    }
}

fn concentration() {
    let s = sample_bestpref_gap(100, 0.1, 10_000, 2024).unwrap();
    assert_eq!(s.trials, 10_000);
    assert!(s.exceed_frequency <= 0.1, "{s:?}");
    assert!(s.gap.mean < 100.0 / 6.0 + 5.0 * s.gap.std_error, "{s:?}");
    assert_eq!(s.negative_trials, 0);
}

fn approval_witness() {
    let w = find_approval_witness(8).unwrap().expect("a witness exists");
    assert_eq!((w.items, w.threshold), (3, 2));
    assert_eq!(w.alternating_sw, r(5, 2));
    assert_eq!(w.optimal.sw, r(8, 3));
    let names: Vec<String> = w.optimal.policies.iter().map(Policy::to_string).collect();
    assert_eq!(names, ["112"]);
    let g = ScoringFunction::approval(3, 2);
    let table = [1, 1, 0];
    for turns in common::two_agent_policies(3) {
        let policy = Policy::new(turns.clone(), 2).unwrap();
        let naive: Rational = common::expectation(&turns, 2, &table).into_iter().sum();
        assert_eq!(
            expected_utilities(&policy, &g).unwrap().sw(),
            &naive,
            "{policy}"
        );
        assert!(naive <= r(8, 3));
    }
}

fn numerics() {
    let mut previous: Option<(usize, Rational, Rational)> = None;
    let (mut num, mut den) = (BigInt::from(1), BigInt::from(1));
    for (k, gamma, bar) in GammaSequence::new().take(10_000) {
        if k >= 3 && k % 2 == 1 {
            num *= k;
            den *= k - 1;
        }
        if k <= 300 || k % 1000 == 0 {
            assert_eq!((gamma.numer() * &den), (&num * gamma.denom()), "k={k}");
        }
        assert_eq!(bar, &gamma / r(k as i64, 1));
        if let Some((pk, _, pbar)) = &previous {
            let expected = if pk % 2 == 0 {
                pbar.clone()
            } else {
                pbar * r(*pk as i64, k as i64)
            };
            assert_eq!(bar, expected, "k={k}");
        }
        previous = Some((k, gamma, bar));
    }
    let (k, gamma, _) = previous.unwrap();
    assert_eq!(k, 10_000);
    let (pn, pd) = common::gamma_product(k);
    assert_eq!(gamma.numer() * &pd, &pn * gamma.denom());
    let ratio = to_f64(&gamma) / (2.0 * k as f64 / std::f64::consts::PI).sqrt();
    assert!((ratio - 1.0).abs() < 0.01, "ratio {ratio}");

    for p in 1..=50 {
        let ev = expected_utilities_borda(&Policy::alternating(2, p).unwrap());
        assert_eq!(
            delta(p + 1).unwrap(),
            ev.utility(1) - ev.utility(2),
            "p={p}"
        );
    }
    assert!(gamma_bar(2).unwrap() > Rational::zero());
}

fn main() -> ExitCode {
    let criteria: [(&str, u64, fn()); 12] = [
        ("suffix expectations of 121212 and 111222", 1, suffix_table),
        (
            "Borda recursion equals brute force",
            120,
            borda_recursion_vs_oracle,
        ),
        (
            "general engine equals Borda recursion",
            30,
            general_engine_consistency,
        ),
        ("alternating closed forms and bounds", 60, closed_forms),
        ("best-preference and random welfare", 120, mechanisms),
        (
            "alternation is the unique optimum",
            600,
            alternation_is_optimal,
        ),
        ("A_k sets and operator sweeps", 600, ak_machinery),
        (
            "welfare of two policies on a fixed profile",
            1,
            fixed_profile_welfare,
        ),
        ("strategic play", 900, strategic),
        ("best-preference gap concentration", 300, concentration),
        ("k-approval witness", 120, approval_witness),
        ("gamma sequence and asymptotics", 30, numerics),
    ];
    std::panic::set_hook(Box::new(|_| {}));
    let mut failed = 0;
    for (i, (name, budget, check)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let result = catch_unwind(AssertUnwindSafe(check));
        let elapsed = start.elapsed();
        let status = match &result {
            Ok(()) if elapsed <= Duration::from_secs(*budget) => "PASS".to_string(),
            Ok(()) => format!("FAIL (over the {budget} s budget)"),
            Err(e) => {
                let msg = e
                    .downcast_ref::<String>()
                    .cloned()
                    .or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string()))
                    .unwrap_or_default();
                format!("FAIL ({msg})")
            }
        };
        if !status.starts_with("PASS") {
            failed += 1;
        }
        println!(
            "criterion {:>2}: {status} {name} [{:.2} s]",
            i + 1,
            elapsed.as_secs_f64()
        );
    }
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        println!("{failed} criteria failed");
        ExitCode::FAILURE
    }
}
