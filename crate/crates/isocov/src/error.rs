use std::fmt::Write as _;

use thiserror::Error;

use crate::model::ValidationIssue;

#[derive(Debug, Error)]
pub enum Error {
    /// The decision problem or topology violates one or more model rules.
    #[error("{}", format_issues(.0))]
    Validation(Vec<ValidationIssue>),

    /// An input file could not be read.
    #[error("{path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },

    /// An input file could not be parsed.
    #[error("{path}: {message}")]
    Parse { path: String, message: String },

    /// Route enumeration produced more paths than the configured cap allows.
    #[error("route enumeration exceeded the cap of {cap} paths")]
    RouteCapExceeded { cap: usize },

    /// A result violated an internal invariant; indicates a bug.
    #[error("internal invariant violated: {0}")]
    Invariant(String),
}

fn format_issues(issues: &[ValidationIssue]) -> String {
    let mut out = String::from("validation failed:");
    for issue in issues {
        let _ = write!(out, "\n  - {issue}");
    }
    out
}
