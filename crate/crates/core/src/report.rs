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

//! JSON and CSV renderings of results. Exact values are `"num/den"`
//! strings next to a rounded decimal.

use serde_json::{json, Value};

use crate::expectation::{ExpectationVector, PickProbabilityMatrix};
use crate::model::Policy;
use crate::numerics::{format_exact, to_decimal, to_decimal_f64, Rational};

/// `{"exact": "n/d", "decimal": x}`.
pub fn exact_value(r: &Rational, places: usize) -> Value {
    json!({
        "exact": format_exact(r),
        "decimal": to_decimal_f64(r, places),
    })
}

/// Per-agent expectations and welfare of one policy.
pub fn expectation_json(policy: &Policy, ev: &ExpectationVector, places: usize) -> Value {
    let agents: Vec<Value> = ev
        .utilities()
        .iter()
        .enumerate()
        .map(|(a, u)| {
            json!({
                "agent": a + 1,
                "exact": format_exact(u),
                "decimal": to_decimal_f64(u, places),
            })
        })
        .collect();
    json!({
        "policy": policy.to_string(),
        "agents": agents,
        "sw": exact_value(ev.sw(), places),
    })
}

/// Header plus one row per agent and a final `sw` row.
pub fn expectation_csv(policy: &Policy, ev: &ExpectationVector, places: usize) -> String {
    let mut out = String::from("policy,agent,exact,decimal\n");
    let name = policy.to_string();
    for (a, u) in ev.utilities().iter().enumerate() {
        out.push_str(&format!(
            "{name},{},{},{}\n",
            a + 1,
            format_exact(u),
            to_decimal(u, places)
        ));
    }
    out.push_str(&format!(
        "{name},sw,{},{}\n",
        format_exact(ev.sw()),
        to_decimal(ev.sw(), places)
    ));
    out
}

/// Rows `a_i(q)` for `q = 1..=p`, exact and decimal.
pub fn probabilities_json(policy: &Policy, probs: &PickProbabilityMatrix, places: usize) -> Value {
    let rows: Vec<Value> = (1..=probs.agents())
        .map(|a| {
            let row = probs.row(a);
            json!({
                "agent": a,
                "exact": row.iter().map(format_exact).collect::<Vec<_>>(),
                "decimal": row.iter().map(|r| to_decimal_f64(r, places)).collect::<Vec<_>>(),
                "row_sum": format_exact(&probs.row_sum(a)),
            })
        })
        .collect();
    json!({ "policy": policy.to_string(), "probabilities": rows })
}

/// One row per `(agent, q)` pair.
pub fn probabilities_csv(policy: &Policy, probs: &PickProbabilityMatrix, places: usize) -> String {
    let mut out = String::from("policy,agent,q,exact,decimal\n");
    let name = policy.to_string();
    for a in 1..=probs.agents() {
        for q in 1..=probs.items() {
            let v = probs.get(a, q);
            out.push_str(&format!(
                "{name},{a},{q},{},{}\n",
                format_exact(&v),
                to_decimal(&v, places)
            ));
        }
    }
    out
}
