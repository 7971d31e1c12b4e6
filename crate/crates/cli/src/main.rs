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

//! `pickseq`: exact expected welfare of picking sequences from the command line.

mod args;
mod commands;

use std::io::{self, Write};
use std::process::ExitCode;

use clap::Parser;
use pickseq::{Error, Execution, Limits};
use serde_json::{json, Map, Value};

use args::{Cli, Command, Format};
use commands::Ctx;

fn command_config(command: &Command) -> (&'static str, Value) {
    match command {
        Command::Expect {
            policy,
            scoring,
            engine,
        } => (
            "expect",
            json!({
                "policy": policy.policy,
                "agents": policy.agents,
                "scoring": scoring.scoring.to_string(),
                "engine": format!("{engine:?}").to_lowercase(),
            }),
        ),
        Command::Probabilities { policy } => (
            "probabilities",
            json!({ "policy": policy.policy, "agents": policy.agents }),
        ),
        Command::Optimize {
            agents,
            items,
            scoring,
            approval_witness,
        } => (
            "optimize",
            json!({
                "agents": agents,
                "items": items,
                "scoring": scoring.scoring.to_string(),
                "approval_witness": approval_witness,
            }),
        ),
        Command::Compare { agents, items } => {
            ("compare", json!({ "agents": agents, "items": items }))
        }
        Command::Tree { depth, path } => ("tree", json!({ "depth": depth, "path": path })),
        Command::Aksets {
            k,
            definition,
            verify,
            definition_depth,
        } => (
            "aksets",
            json!({
                "k": k,
                "definition": definition,
                "verify": verify,
                "definition_depth": definition_depth,
            }),
        ),
        Command::Lemmas {
            k_max,
            m_max,
            gamma_k_max,
            gamma_m_max,
            forms_max,
        } => (
            "lemmas",
            json!({
                "k_max": k_max,
                "m_max": m_max,
                "gamma_k_max": gamma_k_max,
                "gamma_m_max": gamma_m_max,
                "forms_max": forms_max,
            }),
        ),
        Command::Oracle {
            policy,
            scoring,
            mode,
            profile,
        } => (
            "oracle",
            json!({
                "policy": policy.policy,
                "agents": policy.agents,
                "scoring": scoring.scoring.to_string(),
                "mode": format!("{mode:?}").to_lowercase(),
                "profile": profile,
            }),
        ),
        Command::Strategic {
            policy,
            items,
            scoring,
            exact: _,
            trials,
            seed,
            check_optimality,
        } => (
            "strategic",
            json!({
                "policy": policy,
                "items": items,
                "scoring": scoring.scoring.to_string(),
                "exact": trials.is_none(),
                "trials": trials,
                "seed": seed,
                "check_optimality": check_optimality,
            }),
        ),
        Command::Sample {
            policy,
            agents,
            scoring,
            trials,
            seed,
            gap,
            items,
            epsilon,
        } => (
            "sample",
            json!({
                "policy": policy,
                "agents": agents,
                "scoring": scoring.scoring.to_string(),
                "trials": trials,
                "seed": seed,
                "gap": gap,
                "items": items,
                "epsilon": epsilon,
            }),
        ),
        Command::ExploreConvex {
            items,
            samples,
            seed,
        } => (
            "explore-convex",
            json!({ "items": items, "samples": samples, "seed": seed }),
        ),
    }
}

fn run_config(cli: &Cli, limits: &Limits) -> Value {
    let (name, args) = command_config(&cli.command);
    let mut config = Map::new();
    config.insert("command".into(), json!(name));
    if let Value::Object(fields) = args {
        config.extend(fields);
    }
    config.insert(
        "format".into(),
        json!(format!("{:?}", cli.output.format).to_lowercase()),
    );
    config.insert("places".into(), json!(cli.output.places));
    config.insert(
        "limits".into(),
        json!({
            "profiles": limits.profiles.to_string(),
            "policies": limits.policies.to_string(),
            "ak_depth": limits.ak_depth,
            "tree_depth": limits.tree_depth,
            "strategic_items": limits.strategic_items,
        }),
    );
    Value::Object(config)
}

fn exit_code(err: &Error) -> u8 {
    match err {
        Error::Overflow(_) => 1,
        _ => 2,
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => e.exit(),
    };
    let limits = match Limits::from_env() {
        Ok(l) => l,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    };
    let ctx = Ctx {
        places: cli.output.places,
        limits,
        exec: Execution::default(),
    };
    let outcome = match commands::run(&cli.command, &ctx) {
        Ok(o) => o,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(exit_code(&e));
        }
    };
    let config = run_config(&cli, &limits);
    let text = match cli.output.format {
        Format::Json => {
            let mut payload = outcome.json;
            if let Value::Object(map) = &mut payload {
                map.insert("config".into(), config);
            }
            let body = serde_json::to_string_pretty(&payload).expect("values serialize");
            format!("{body}\n")
        }
        Format::Csv => format!("# config: {config}\n{}", outcome.csv),
    };
    let mut out = io::stdout().lock();
    if let Err(e) = out.write_all(text.as_bytes()).and_then(|_| out.flush()) {
        if e.kind() != io::ErrorKind::BrokenPipe {
            eprintln!("error: cannot write output: {e}");
            return ExitCode::from(1);
        }
    }
    match outcome.failure {
        Some(witness) => {
            eprintln!("verification failed: {witness}");
            ExitCode::from(1)
        }
        None => ExitCode::SUCCESS,
    }
}
