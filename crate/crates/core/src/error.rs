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

//! Error type shared by every module of the crate.

use thiserror::Error;

/// Errors reported by the library.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    /// An argument is outside the domain of the operation.
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    /// Input text could not be parsed.
    #[error("parse error: {0}")]
    Parse(String),
    /// An exhaustive computation would exceed a configured guard.
    #[error("{what} requires {required}, which exceeds the limit of {limit}; raise it with the {env} environment variable")]
    SizeLimit {
        what: &'static str,
        required: String,
        limit: u128,
        env: &'static str,
    },
    /// Fixed-width arithmetic used by an internal fast path would overflow.
    #[error("overflow: {0}")]
    Overflow(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn invalid<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::InvalidArgument(msg.into()))
}
