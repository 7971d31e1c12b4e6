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

use crate::error::{invalid, Error, Result};

/// One strict preference order per agent over items `1..=p`, most preferred first.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Profile {
    rankings: Vec<Vec<usize>>,
}

impl Profile {
    pub fn new(rankings: Vec<Vec<usize>>) -> Result<Self> {
        let Some(first) = rankings.first() else {
            return invalid("a profile needs at least one agent");
        };
        let p = first.len();
        if p == 0 {
            return invalid("a profile needs at least one item");
        }
        for (i, r) in rankings.iter().enumerate() {
            if r.len() != p {
                return invalid(format!(
                    "agent {} ranks {} items, expected {p}",
                    i + 1,
                    r.len()
                ));
            }
            let mut seen = vec![false; p];
            for &item in r {
                if item == 0 || item > p || std::mem::replace(&mut seen[item - 1], true) {
                    return invalid(format!(
                        "agent {}'s ranking is not a permutation of 1..={p}",
                        i + 1
                    ));
                }
            }
        }
        Ok(Profile { rankings })
    }

    /// Parses a JSON array of permutations such as `[[1,2,3],[2,3,1]]`.
    pub fn from_json(text: &str) -> Result<Self> {
        let value: serde_json::Value =
            serde_json::from_str(text).map_err(|e| Error::Parse(format!("profile JSON: {e}")))?;
        let bad = || Error::Parse("a profile must be a JSON array of integer arrays".into());
        let rows = value.as_array().ok_or_else(bad)?;
        let rankings = rows
            .iter()
            .map(|row| {
                row.as_array()
                    .ok_or_else(bad)?
                    .iter()
                    .map(|v| v.as_u64().map(|x| x as usize).ok_or_else(bad))
                    .collect::<Result<Vec<_>>>()
            })
            .collect::<Result<Vec<_>>>()?;
        Profile::new(rankings)
    }

    pub(crate) fn from_zero_based(rankings: &[Vec<u8>]) -> Self {
        Profile {
            rankings: rankings
                .iter()
                .map(|r| r.iter().map(|&x| x as usize + 1).collect())
                .collect(),
        }
    }

    pub fn agents(&self) -> usize {
        self.rankings.len()
    }

    pub fn items(&self) -> usize {
        self.rankings[0].len()
    }

    /// Agent `agent`'s order, most preferred first.
    pub fn ranking(&self, agent: usize) -> &[usize] {
        &self.rankings[agent - 1]
    }

    pub fn rankings(&self) -> &[Vec<usize>] {
        &self.rankings
    }

    /// 1-based position of `item` in `agent`'s order.
    pub fn rank_of(&self, agent: usize, item: usize) -> usize {
        self.rankings[agent - 1]
            .iter()
            .position(|&x| x == item)
            .map(|i| i + 1)
            .expect("item belongs to the profile")
    }

    /// Per agent, the rank of every item (`ranks[a][item - 1]`).
    pub(crate) fn rank_tables(&self) -> Vec<Vec<usize>> {
        self.rankings
            .iter()
            .map(|r| {
                let mut ranks = vec![0; r.len()];
                for (pos, &item) in r.iter().enumerate() {
                    ranks[item - 1] = pos + 1;
                }
                ranks
            })
            .collect()
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!(self.rankings)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn json_round_trip() {
        let p = Profile::from_json("[[1,2,3],[2,3,1]]").unwrap();
        assert_eq!(p.agents(), 2);
        assert_eq!(p.items(), 3);
        assert_eq!(p.rank_of(2, 1), 3);
        assert_eq!(Profile::from_json(&p.to_json().to_string()).unwrap(), p);
    }

    #[test]
    fn rejects_non_permutations() {
        assert!(Profile::new(vec![vec![1, 1, 2]]).is_err());
        assert!(Profile::new(vec![vec![1, 2], vec![1, 2, 3]]).is_err());
        assert!(Profile::new(vec![]).is_err());
        assert!(Profile::from_json("[[1,2],[\"a\",1]]").is_err());
        assert!(Profile::from_json("{").is_err());
    }
}
