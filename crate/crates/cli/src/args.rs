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

use clap::{Args, Parser, Subcommand, ValueEnum};
use pickseq::ScoringSpec;

#[derive(Debug, Parser)]
#[command(
    name = "pickseq",
    version,
    about = "Expected welfare of picking sequences for allocating indivisible items",
    after_help = "Size guards can be raised with PICKSEQ_PROFILE_LIMIT, PICKSEQ_POLICY_LIMIT, \
                  PICKSEQ_AK_DEPTH_LIMIT, PICKSEQ_TREE_DEPTH_LIMIT and PICKSEQ_STRATEGIC_ITEMS_LIMIT."
)]
pub struct Cli {
    #[command(flatten)]
    pub output: OutputArgs,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

#[derive(Debug, Args)]
pub struct OutputArgs {
    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    pub format: Format,
    /// Decimal places for rounded values.
    #[arg(long, global = true, default_value_t = pickseq::numerics::DEFAULT_DECIMAL_PLACES)]
    pub places: usize,
}

#[derive(Debug, Args)]
pub struct PolicyArgs {
    /// Turn sequence, e.g. 121212 or 1,2,10.
    #[arg(long)]
    pub policy: String,
    /// Number of agents (defaults to the largest label in the policy).
    #[arg(long)]
    pub agents: Option<usize>,
}

#[derive(Debug, Args)]
pub struct ScoringArgs {
    /// borda, approval:K, quasi:N, linear:ALPHA:BETA, lex or table:G1,G2,...
    #[arg(long, default_value = "borda")]
    pub scoring: ScoringSpec,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Engine {
    /// Borda recursion for Borda tables, the general engine otherwise.
    Auto,
    Borda,
    General,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Play {
    Truthful,
    Spne,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Exact expected utility of every agent and the expected welfare.
    Expect {
        #[command(flatten)]
        policy: PolicyArgs,
        #[command(flatten)]
        scoring: ScoringArgs,
        #[arg(long, value_enum, default_value_t = Engine::Auto)]
        engine: Engine,
    },
    /// Probability that each agent receives her q-th least preferred item.
    Probabilities {
        #[command(flatten)]
        policy: PolicyArgs,
    },
    /// Exhaustive search for the welfare-maximizing canonical policies.
    Optimize {
        #[arg(long, default_value_t = 2)]
        agents: usize,
        #[arg(long)]
        items: usize,
        #[command(flatten)]
        scoring: ScoringArgs,
        /// Instead, search items 2..=ITEMS for a k-approval rule under which
        /// alternation is strictly suboptimal.
        #[arg(long)]
        approval_witness: bool,
    },
    /// Expected Borda welfare of alternation, best preference and random assignment.
    Compare {
        #[arg(long, default_value_t = 2)]
        agents: usize,
        #[arg(long)]
        items: usize,
    },
    /// The two-agent policy tree with exact welfare at every node.
    Tree {
        #[arg(long)]
        depth: usize,
        /// Print only the node reached by a path of L and R steps.
        #[arg(long)]
        path: Option<String>,
    },
    /// The difference sets A_k of two-agent policies.
    Aksets {
        #[arg(long)]
        k: usize,
        /// Build from the definition instead of the recursion.
        #[arg(long)]
        definition: bool,
        /// Cross-check recursion and definition and the sign of a+b up to K.
        #[arg(long)]
        verify: bool,
        /// Deepest level compared against the definition when verifying.
        #[arg(long, default_value_t = 12)]
        definition_depth: usize,
    },
    /// Exact sweeps of the operator closed forms and bounds.
    Lemmas {
        #[arg(long, default_value_t = 14)]
        k_max: usize,
        #[arg(long, default_value_t = 30)]
        m_max: usize,
        #[arg(long, default_value_t = 200)]
        gamma_k_max: usize,
        #[arg(long, default_value_t = 200)]
        gamma_m_max: usize,
        /// Grid size for comparing the closed forms with the compositions.
        #[arg(long, default_value_t = 20)]
        forms_max: usize,
    },
    /// Brute force over every profile, or play out a single profile.
    Oracle {
        #[command(flatten)]
        policy: PolicyArgs,
        #[command(flatten)]
        scoring: ScoringArgs,
        #[arg(long, value_enum, default_value_t = Play::Truthful)]
        mode: Play,
        /// JSON rankings, e.g. [[1,2,3],[2,3,1]]; plays this profile only.
        #[arg(long)]
        profile: Option<String>,
    },
    /// Expected welfare under subgame-perfect strategic play.
    Strategic {
        #[arg(long, conflicts_with = "items")]
        policy: Option<String>,
        /// Item count for --check-optimality.
        #[arg(long)]
        items: Option<usize>,
        #[command(flatten)]
        scoring: ScoringArgs,
        /// Average over every profile (the default).
        #[arg(long, conflicts_with = "trials")]
        exact: bool,
        /// Sample this many random profiles instead.
        #[arg(long)]
        trials: Option<u64>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Check that alternation maximizes strategic welfare on --items items.
        #[arg(long, requires = "items")]
        check_optimality: bool,
    },
    /// Seeded Monte Carlo estimates.
    Sample {
        #[arg(long, required_unless_present = "gap")]
        policy: Option<String>,
        #[arg(long)]
        agents: Option<usize>,
        #[command(flatten)]
        scoring: ScoringArgs,
        #[arg(long, default_value_t = 10_000)]
        trials: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Estimate how often best preference beats alternation by p/(6 epsilon).
        #[arg(long, requires = "items")]
        gap: bool,
        #[arg(long)]
        items: Option<usize>,
        #[arg(long, default_value_t = 0.1)]
        epsilon: f64,
    },
    /// Whether alternation is optimal for random convex scoring tables.
    ExploreConvex {
        #[arg(long)]
        items: usize,
        #[arg(long, default_value_t = 20)]
        samples: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}
