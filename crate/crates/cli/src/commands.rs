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

use pickseq::expectation::{
    bestpref_expected_sw, expected_utilities, expected_utilities_borda, expected_utilities_general,
    pick_probabilities, random_expected_sw,
};
use pickseq::model::{
    brute_force_expectation_with, sample_bestpref_gap_with, sample_expectation_with,
};
use pickseq::numerics::{format_exact, rat, to_decimal, to_decimal_f64};
use pickseq::optimality::{
    ak_from_definition_with, ak_from_recursion_with, coordinate_sum_f, coordinate_sum_g,
    explore_convex, f_composed, f_explicit, find_approval_witness, g_composed, g_explicit,
    optimal_policy_with, policy_tree_with, verify_ak_sets, verify_gamma_inequalities,
    verify_operator_sums_with, AkPoint, OperatorFamily, Point, PolicyTreeNode,
};
use pickseq::report::{
    exact_value, expectation_csv, expectation_json, probabilities_csv, probabilities_json,
};
use pickseq::strategic::{
    expected_strategic_utilities_with, spne_play_with, verify_strategic_optimality_with,
    StrategicExpectation, StrategicMode,
};
use pickseq::{
    Error, Execution, ExpectationVector, Limits, Policy, Profile, Rational, Result, ScoringSpec,
};
use serde_json::{json, Value};

use crate::args::{Command, Engine, Play, PolicyArgs};

pub struct Ctx {
    pub places: usize,
    pub limits: Limits,
    pub exec: Execution,
}

/// A rendered result. `failure` holds the witness when a check fails.
pub struct Outcome {
    pub json: Value,
    pub csv: String,
    pub failure: Option<String>,
}

impl Outcome {
    fn ok(json: Value, csv: String) -> Self {
        Outcome {
            json,
            csv,
            failure: None,
        }
    }
}

fn parse_policy(args: &PolicyArgs) -> Result<Policy> {
    parse_policy_str(&args.policy, args.agents)
}

fn parse_policy_str(text: &str, agents: Option<usize>) -> Result<Policy> {
    match agents {
        Some(n) => Policy::parse_with_agents(text, n),
        None => Policy::parse(text),
    }
}

fn policy_names(policies: &[Policy]) -> Vec<String> {
    policies.iter().map(Policy::to_string).collect()
}

pub fn run(command: &Command, ctx: &Ctx) -> Result<Outcome> {
    let places = ctx.places;
    match command {
        Command::Expect {
            policy,
            scoring,
            engine,
        } => {
            let policy = parse_policy(policy)?;
            let g = scoring.scoring.build(policy.len())?;
            let ev = match engine {
                Engine::Auto => expected_utilities(&policy, &g)?,
                Engine::General => expected_utilities_general(&policy, &g)?,
                Engine::Borda => {
                    if scoring.scoring != ScoringSpec::Borda {
                        return Err(Error::InvalidArgument(
                            "--engine borda needs --scoring borda".into(),
                        ));
                    }
                    expected_utilities_borda(&policy)
                }
            };
            Ok(Outcome::ok(
                expectation_json(&policy, &ev, places),
                expectation_csv(&policy, &ev, places),
            ))
        }
        Command::Probabilities { policy } => {
            let policy = parse_policy(policy)?;
            let probs = pick_probabilities(&policy);
            Ok(Outcome::ok(
                probabilities_json(&policy, &probs, places),
                probabilities_csv(&policy, &probs, places),
            ))
        }
        Command::Optimize {
            agents,
            items,
            scoring,
            approval_witness,
        } => {
            if *approval_witness {
                return approval(*items, places);
            }
            let g = scoring.scoring.build(*items)?;
            let opt = optimal_policy_with(*agents, *items, &g, &ctx.limits, ctx.exec)?;
            let alternating = Policy::alternating(*agents, *items)?;
            let mut csv = String::from("policy,exact,decimal\n");
            for p in &opt.policies {
                csv.push_str(&format!(
                    "{p},{},{}\n",
                    format_exact(&opt.sw),
                    to_decimal(&opt.sw, places)
                ));
            }
            Ok(Outcome::ok(
                json!({
                    "argmax": policy_names(&opt.policies),
                    "sw": exact_value(&opt.sw, places),
                    "evaluated": opt.evaluated as u64,
                    "alternating_optimal": opt.contains(&alternating),
                    "alternating_unique": opt.is_unique(&alternating),
                }),
                csv,
            ))
        }
        Command::Compare { agents, items } => {
            let alt = expected_utilities_borda(&Policy::alternating(*agents, *items)?);
            let rows = [
                ("AltPolicy", alt.sw().clone()),
                ("BestPref", bestpref_expected_sw(*agents, *items)?),
                ("Random", random_expected_sw(*items)),
            ];
            let mut csv = String::from("mechanism,exact,decimal\n");
            let mut list = Vec::new();
            for (name, sw) in &rows {
                csv.push_str(&format!(
                    "{name},{},{}\n",
                    format_exact(sw),
                    to_decimal(sw, places)
                ));
                list.push(json!({
                    "mechanism": name,
                    "exact": format_exact(sw),
                    "decimal": to_decimal_f64(sw, places),
                }));
            }
            Ok(Outcome::ok(json!({ "mechanisms": list }), csv))
        }
        Command::Tree { depth, path } => {
            let root = policy_tree_with(*depth, &ctx.limits)?;
            let (node, prefix) = match path {
                Some(p) => (
                    root.node_at(p).ok_or_else(|| {
                        Error::InvalidArgument(format!(
                            "path {p:?} leaves a tree of depth {depth}; use L and R steps"
                        ))
                    })?,
                    p.to_ascii_uppercase(),
                ),
                None => (&root, String::new()),
            };
            let mut csv = String::from("path,policy,exact,decimal\n");
            tree_rows(node, &mut prefix.clone(), places, &mut csv);
            Ok(Outcome::ok(node.to_json(places), csv))
        }
        Command::Aksets {
            k,
            definition,
            verify,
            definition_depth,
        } => {
            if *verify {
                return aksets_verify(*k, (*definition_depth).min(*k), ctx);
            }
            let set = if *definition {
                ak_from_definition_with(*k, &ctx.limits, ctx.exec)?
            } else {
                ak_from_recursion_with(*k, &ctx.limits, ctx.exec)?
            };
            let mut csv = String::from("policy,a,b,sum,a_decimal,b_decimal\n");
            for pt in &set {
                csv.push_str(&format!(
                    "{},{},{},{},{},{}\n",
                    provenance(pt),
                    format_exact(&pt.a),
                    format_exact(&pt.b),
                    format_exact(&pt.sum()),
                    to_decimal(&pt.a, places),
                    to_decimal(&pt.b, places)
                ));
            }
            let points: Vec<Value> = set.iter().map(|pt| ak_json(pt, places)).collect();
            Ok(Outcome::ok(
                json!({ "k": k, "size": set.len(), "points": points }),
                csv,
            ))
        }
        Command::Lemmas {
            k_max,
            m_max,
            gamma_k_max,
            gamma_m_max,
            forms_max,
        } => lemmas(*k_max, *m_max, *gamma_k_max, *gamma_m_max, *forms_max, ctx),
        Command::Oracle {
            policy,
            scoring,
            mode,
            profile,
        } => {
            let policy = parse_policy(policy)?;
            let g = scoring.scoring.build(policy.len())?;
            if let Some(text) = profile {
                return single_profile(&policy, &Profile::from_json(text)?, &g, *mode, ctx);
            }
            let ev = match mode {
                Play::Truthful => brute_force_expectation_with(&policy, &g, &ctx.limits, ctx.exec)?,
                Play::Spne => exact_strategic(&policy, &g, ctx)?,
            };
            Ok(Outcome::ok(
                expectation_json(&policy, &ev, places),
                expectation_csv(&policy, &ev, places),
            ))
        }
        Command::Strategic {
            policy,
            items,
            scoring,
            exact: _,
            trials,
            seed,
            check_optimality,
        } => {
            if *check_optimality {
                let items = items.expect("clap enforces --items");
                return strategic_optimality(items, &scoring.scoring, ctx);
            }
            let Some(text) = policy else {
                return Err(Error::InvalidArgument(
                    "strategic needs --policy, or --items with --check-optimality".into(),
                ));
            };
            let policy = Policy::parse(text)?;
            let g = scoring.scoring.build(policy.len())?;
            match trials {
                None => {
                    let ev = exact_strategic(&policy, &g, ctx)?;
                    Ok(Outcome::ok(
                        expectation_json(&policy, &ev, places),
                        expectation_csv(&policy, &ev, places),
                    ))
                }
                Some(trials) => {
                    let mode = StrategicMode::Sampled {
                        trials: *trials,
                        seed: *seed,
                    };
                    match expected_strategic_utilities_with(
                        &policy,
                        &g,
                        mode,
                        &ctx.limits,
                        ctx.exec,
                    )? {
                        StrategicExpectation::Sampled(s) => {
                            Ok(sampled(&policy, &s.agents, &s.sw, s.trials, s.seed, places))
                        }
                        StrategicExpectation::Exact(_) => unreachable!("sampled mode"),
                    }
                }
            }
        }
        Command::Sample {
            policy,
            agents,
            scoring,
            trials,
            seed,
            gap,
            items,
            epsilon,
        } => {
            if *gap {
                let items = items.expect("clap enforces --items");
                return gap_check(items, *epsilon, *trials, *seed, ctx);
            }
            let text = policy.as_deref().expect("clap enforces --policy");
            let policy = parse_policy_str(text, *agents)?;
            let g = scoring.scoring.build(policy.len())?;
            let s = sample_expectation_with(&policy, &g, *trials, *seed, ctx.exec)?;
            Ok(sampled(&policy, &s.agents, &s.sw, s.trials, s.seed, places))
        }
        Command::ExploreConvex {
            items,
            samples,
            seed,
        } => {
            let report = explore_convex(*items, *samples, *seed)?;
            let mut csv =
                String::from("table,alternating_optimal,alternating_sw,optimal_sw,argmax\n");
            let mut trials = Vec::new();
            for t in &report.trials {
                let table: Vec<String> = t.scoring.table().iter().map(format_exact).collect();
                csv.push_str(&format!(
                    "{},{},{},{},{}\n",
                    table.join(" "),
                    t.alternating_optimal,
                    format_exact(&t.alternating_sw),
                    format_exact(&t.optimal.sw),
                    policy_names(&t.optimal.policies).join(" ")
                ));
                trials.push(json!({
                    "table": table,
                    "alternating_optimal": t.alternating_optimal,
                    "alternating_sw": exact_value(&t.alternating_sw, places),
                    "optimal_sw": exact_value(&t.optimal.sw, places),
                    "argmax": policy_names(&t.optimal.policies),
                }));
            }
            Ok(Outcome::ok(
                json!({
                    "items": items,
                    "counterexamples": report.counterexamples().count(),
                    "trials": trials,
                }),
                csv,
            ))
        }
    }
}

fn approval(max_items: usize, places: usize) -> Result<Outcome> {
    let Some(w) = find_approval_witness(max_items)? else {
        return Ok(Outcome {
            json: json!({ "witness": Value::Null, "searched_items": max_items }),
            csv: String::from("items,threshold,alternating_sw,optimal_sw,argmax\n"),
            failure: Some(format!(
                "no k-approval witness with at most {max_items} items"
            )),
        });
    };
    let names = policy_names(&w.optimal.policies);
    Ok(Outcome::ok(
        json!({
            "witness": {
                "items": w.items,
                "threshold": w.threshold,
                "alternating_sw": exact_value(&w.alternating_sw, places),
                "optimal_sw": exact_value(&w.optimal.sw, places),
                "argmax": names,
            }
        }),
        format!(
            "items,threshold,alternating_sw,optimal_sw,argmax\n{},{},{},{},{}\n",
            w.items,
            w.threshold,
            format_exact(&w.alternating_sw),
            format_exact(&w.optimal.sw),
            names.join(" ")
        ),
    ))
}

fn tree_rows(node: &PolicyTreeNode, path: &mut String, places: usize, csv: &mut String) {
    csv.push_str(&format!(
        "{path},{},{},{}\n",
        node.policy,
        format_exact(&node.sw),
        to_decimal(&node.sw, places)
    ));
    for (step, child) in [('L', &node.left), ('R', &node.right)] {
        if let Some(c) = child {
            path.push(step);
            tree_rows(c, path, places, csv);
            path.pop();
        }
    }
}

fn provenance(pt: &AkPoint) -> String {
    pt.provenance
        .as_ref()
        .map(Policy::to_string)
        .unwrap_or_default()
}

fn ak_json(pt: &AkPoint, places: usize) -> Value {
    json!({
        "policy": pt.provenance.as_ref().map(Policy::to_string),
        "a": exact_value(&pt.a, places),
        "b": exact_value(&pt.b, places),
        "sum": exact_value(&pt.sum(), places),
    })
}

fn aksets_verify(k: usize, definition_depth: usize, ctx: &Ctx) -> Result<Outcome> {
    let report = verify_ak_sets(definition_depth, k, &ctx.limits, ctx.exec)?;
    let positive: Vec<Value> = report
        .positive_points
        .iter()
        .map(|(k, pt)| json!({ "k": k, "point": ak_json(pt, ctx.places) }))
        .collect();
    let provenance_bad: Vec<Value> = report
        .provenance_mismatches
        .iter()
        .map(|(k, pt)| json!({ "k": k, "point": ak_json(pt, ctx.places) }))
        .collect();
    let failure = (!report.is_clean()).then(|| {
        if let Some(k) = report.multiset_mismatches.first() {
            format!("A_{k}: recursion and definition differ")
        } else if let Some((k, pt)) = report.provenance_mismatches.first() {
            format!("A_{k}: point for policy {} is wrong", provenance(pt))
        } else {
            let (k, pt) = &report.positive_points[0];
            format!(
                "A_{k}: policy {} has a+b = {} > 0",
                provenance(pt),
                format_exact(&pt.sum())
            )
        }
    });
    Ok(Outcome {
        csv: format!(
            "check,depth,failures\nmultiset,{},{}\nprovenance,{},{}\nsign,{},{}\n",
            definition_depth,
            report.multiset_mismatches.len(),
            definition_depth,
            report.provenance_mismatches.len(),
            k,
            report.positive_points.len()
        ),
        json: json!({
            "definition_depth": definition_depth,
            "sum_depth": k,
            "points_checked": report.points_checked,
            "multiset_mismatches": report.multiset_mismatches,
            "provenance_mismatches": provenance_bad,
            "positive_points": positive,
            "clean": report.is_clean(),
        }),
        failure,
    })
}

fn lemmas(
    k_max: usize,
    m_max: usize,
    gamma_k_max: usize,
    gamma_m_max: usize,
    forms_max: usize,
    ctx: &Ctx,
) -> Result<Outcome> {
    let places = ctx.places;
    let mut failures = Vec::new();

    let points = [
        Point::origin(),
        Point::new(rat(-7, 3), rat(5, 4)),
        Point::new(rat(13, 2), rat(-41, 5)),
    ];
    let mut form_checks = 0u64;
    let mut form_bad = Vec::new();
    for k in 1..=forms_max.max(1) {
        for m in 0..=forms_max {
            for p in &points {
                let g = g_explicit(k, m, p)?;
                form_checks += 2;
                if g != g_composed(k, m, p)? {
                    form_bad.push(format!(
                        "G_{{{k},{m}}} closed form differs from composition"
                    ));
                }
                if coordinate_sum_g(k, m, p)? != g.sum() {
                    form_bad.push(format!("G_{{{k},{m}}} coordinate-sum form differs"));
                }
                if m >= 1 {
                    let f = f_explicit(k, m, p)?;
                    form_checks += 2;
                    if f != f_composed(k, m, p)? {
                        form_bad.push(format!(
                            "F_{{{k},{m}}} closed form differs from composition"
                        ));
                    }
                    if coordinate_sum_f(k, m, p)? != f.sum() {
                        form_bad.push(format!("F_{{{k},{m}}} coordinate-sum form differs"));
                    }
                }
            }
        }
    }
    failures.extend(form_bad.iter().take(1).cloned());

    let ineq = verify_gamma_inequalities(gamma_k_max, gamma_m_max, ctx.exec)?;
    if let Some(v) = ineq.violations.first() {
        failures.push(format!(
            "gamma-bar bound {} fails at k={}, m={}: {} > {}",
            v.which,
            v.k,
            v.m,
            format_exact(&v.lhs),
            format_exact(&v.rhs)
        ));
    }

    let thm = verify_operator_sums_with(k_max, m_max, &ctx.limits, ctx.exec)?;
    if let Some(v) = thm.violations.first() {
        let family = match v.family {
            OperatorFamily::G => "G",
            OperatorFamily::F => "F",
        };
        failures.push(format!(
            "{family}_{{{},{}}} maps policy {} to coordinate sum {} > 0",
            v.k,
            v.m,
            v.provenance
                .as_ref()
                .map(Policy::to_string)
                .unwrap_or_default(),
            format_exact(&v.sum)
        ));
    }

    let json = json!({
        "closed_forms": {
            "max": forms_max,
            "checks": form_checks,
            "mismatches": form_bad.len(),
        },
        "gamma_inequalities": {
            "k_max": ineq.k_max,
            "m_max": ineq.m_max,
            "checks": ineq.checked,
            "violations": ineq.violations.len(),
        },
        "operator_sums": {
            "k_max": thm.k_max,
            "m_max": thm.m_max,
            "points": thm.points,
            "evaluations": thm.evaluations,
            "max_sum": exact_value(&thm.max_sum, places),
            "violations": thm.violations.len(),
        },
    });
    let csv = format!(
        "check,evaluated,violations\nclosed_forms,{form_checks},{}\ngamma_inequalities,{},{}\noperator_sums,{},{}\n",
        form_bad.len(),
        ineq.checked,
        ineq.violations.len(),
        thm.evaluations,
        thm.violations.len()
    );
    Ok(Outcome {
        json,
        csv,
        failure: (!failures.is_empty()).then(|| failures.join("; ")),
    })
}

fn exact_strategic(
    policy: &Policy,
    g: &pickseq::ScoringFunction,
    ctx: &Ctx,
) -> Result<ExpectationVector> {
    match expected_strategic_utilities_with(policy, g, StrategicMode::Exact, &ctx.limits, ctx.exec)?
    {
        StrategicExpectation::Exact(ev) => Ok(ev),
        StrategicExpectation::Sampled(_) => unreachable!("exact mode"),
    }
}

fn single_profile(
    policy: &Policy,
    profile: &Profile,
    g: &pickseq::ScoringFunction,
    mode: Play,
    ctx: &Ctx,
) -> Result<Outcome> {
    let (allocation, utilities, manipulated) = match mode {
        Play::Truthful => {
            let a = pickseq::model::truthful_play(policy, profile)?;
            let u = pickseq::model::utilities(&a, profile, g)?;
            (a, u, false)
        }
        Play::Spne => {
            let out = spne_play_with(policy, profile, g, &ctx.limits)?;
            (out.allocation, out.utilities, out.manipulated)
        }
    };
    let mut csv = String::from("agent,bundle,exact,decimal\n");
    let mut agents = Vec::new();
    for (a, u) in utilities.iter().enumerate() {
        let bundle = allocation.bundle(a + 1);
        let items: Vec<String> = bundle.iter().map(usize::to_string).collect();
        csv.push_str(&format!(
            "{},{},{},{}\n",
            a + 1,
            items.join(" "),
            format_exact(u),
            to_decimal(u, ctx.places)
        ));
        agents.push(json!({
            "agent": a + 1,
            "bundle": bundle,
            "exact": format_exact(u),
            "decimal": to_decimal_f64(u, ctx.places),
        }));
    }
    let sw: Rational = utilities.iter().sum();
    Ok(Outcome::ok(
        json!({
            "policy": policy.to_string(),
            "profile": profile.to_json(),
            "agents": agents,
            "sw": exact_value(&sw, ctx.places),
            "manipulated": manipulated,
        }),
        csv,
    ))
}

fn strategic_optimality(items: usize, spec: &ScoringSpec, ctx: &Ctx) -> Result<Outcome> {
    let g = spec.build(items)?;
    let report = verify_strategic_optimality_with(items, &g, &ctx.limits, ctx.exec)?;
    let places = ctx.places;
    let mut csv =
        String::from("policy,reversal_symmetric,truthful_sw,strategic_sw,strategic_decimal\n");
    let mut rows = Vec::new();
    for r in &report.rows {
        csv.push_str(&format!(
            "{},{},{},{},{}\n",
            r.policy,
            r.reversal_symmetric,
            format_exact(&r.truthful_sw),
            format_exact(&r.strategic_sw),
            to_decimal(&r.strategic_sw, places)
        ));
        rows.push(json!({
            "policy": r.policy.to_string(),
            "reversal_symmetric": r.reversal_symmetric,
            "truthful_sw": exact_value(&r.truthful_sw, places),
            "strategic_sw": exact_value(&r.strategic_sw, places),
        }));
    }
    let failure = (!report.alternating_optimal).then(|| {
        format!(
            "alternation is not strategically optimal on {items} items: {} reaches {}",
            policy_names(&report.argmax).join(" "),
            format_exact(&report.max_strategic_sw)
        )
    });
    Ok(Outcome {
        json: json!({
            "items": items,
            "argmax": policy_names(&report.argmax),
            "max_strategic_sw": exact_value(&report.max_strategic_sw, places),
            "alternating_optimal": report.alternating_optimal,
            "policies": rows,
        }),
        csv,
        failure,
    })
}

fn estimate_json(e: &pickseq::model::Estimate) -> Value {
    json!({ "mean": e.mean, "std_error": e.std_error })
}

fn sampled(
    policy: &Policy,
    agents: &[pickseq::model::Estimate],
    sw: &pickseq::model::Estimate,
    trials: u64,
    seed: u64,
    places: usize,
) -> Outcome {
    let round = |x: f64| format!("{x:.places$}");
    let mut csv = String::from("policy,agent,mean,std_error\n");
    let mut list = Vec::new();
    for (a, e) in agents.iter().enumerate() {
        csv.push_str(&format!(
            "{policy},{},{},{}\n",
            a + 1,
            round(e.mean),
            round(e.std_error)
        ));
        let mut v = estimate_json(e);
        v["agent"] = json!(a + 1);
        list.push(v);
    }
    csv.push_str(&format!(
        "{policy},sw,{},{}\n",
        round(sw.mean),
        round(sw.std_error)
    ));
    Outcome::ok(
        json!({
            "policy": policy.to_string(),
            "trials": trials,
            "seed": seed,
            "agents": list,
            "sw": estimate_json(sw),
        }),
        csv,
    )
}

fn gap_check(items: usize, epsilon: f64, trials: u64, seed: u64, ctx: &Ctx) -> Result<Outcome> {
    let s = sample_bestpref_gap_with(items, epsilon, trials, seed, ctx.exec)?;
    let mean_bound = items as f64 / 6.0;
    let frequency_ok = s.exceed_frequency <= epsilon;
    let mean_ok = s.gap.mean < mean_bound + 5.0 * s.gap.std_error;
    let failure = if !frequency_ok {
        Some(format!(
            "gap reached {} in a fraction {} of trials, above epsilon {epsilon}",
            s.threshold, s.exceed_frequency
        ))
    } else if !mean_ok {
        Some(format!(
            "mean gap {} exceeds p/6 + 5 standard errors = {}",
            s.gap.mean,
            mean_bound + 5.0 * s.gap.std_error
        ))
    } else {
        None
    };
    Ok(Outcome {
        json: json!({
            "items": items,
            "epsilon": epsilon,
            "trials": trials,
            "seed": seed,
            "threshold": s.threshold,
            "exceed_frequency": s.exceed_frequency,
            "gap": estimate_json(&s.gap),
            "mean_bound": mean_bound,
            "negative_trials": s.negative_trials,
            "frequency_ok": frequency_ok,
            "mean_ok": mean_ok,
        }),
        csv: format!(
            "items,epsilon,trials,seed,threshold,exceed_frequency,gap_mean,gap_std_error\n{items},{epsilon},{trials},{seed},{},{},{},{}\n",
            s.threshold, s.exceed_frequency, s.gap.mean, s.gap.std_error
        ),
        failure,
    })
}
