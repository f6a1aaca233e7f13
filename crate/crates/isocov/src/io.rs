//! File ingestion: CSV decision matrices, JSON criteria specifications, and
//! JSON topologies, plus the lossless JSON form of a decision problem.

use std::collections::HashSet;
use std::fs;
use std::path::Path;

use crate::error::Error;
use crate::model::{CriterionSpec, DecisionProblem};
use crate::topology::Topology;

fn read(path: &Path) -> Result<String, Error> {
    fs::read_to_string(path).map_err(|source| Error::Io {
        path: path.display().to_string(),
        source,
    })
}

fn parse_error(path: &Path, message: impl Into<String>) -> Error {
    Error::Parse {
        path: path.display().to_string(),
        message: message.into(),
    }
}

/// Loads a criteria specification: a JSON array of objects with `name`,
/// `nature` (`"benefit"` or `"cost"`), `weight`, and nullable `lower_bound` /
/// `upper_bound` (null means the bound is open).
pub fn load_criteria(path: &Path) -> Result<Vec<CriterionSpec>, Error> {
    let text = read(path)?;
    serde_json::from_str(&text).map_err(|e| parse_error(path, e.to_string()))
}

/// Loads a decision matrix and its criteria specification.
///
/// The matrix is CSV: a header row whose first cell names the id column and
/// whose remaining cells must match the criteria names in order, then one row
/// per alternative with its id followed by decimal ratings.
pub fn load_problem(
    matrix_path: &Path,
    criteria_path: &Path,
    hard: bool,
) -> Result<DecisionProblem, Error> {
    let criteria = load_criteria(criteria_path)?;
    let text = read(matrix_path)?;

    let mut reader = csv::ReaderBuilder::new()
        .trim(csv::Trim::All)
        .from_reader(text.as_bytes());

    let headers = reader
        .headers()
        .map_err(|e| parse_error(matrix_path, e.to_string()))?
        .clone();
    if headers.len() != criteria.len() + 1 {
        return Err(parse_error(
            matrix_path,
            format!(
                "expected {} columns (id column + {} criteria), found {}",
                criteria.len() + 1,
                criteria.len(),
                headers.len()
            ),
        ));
    }
    for (j, crit) in criteria.iter().enumerate() {
        let header = &headers[j + 1];
        if header != crit.name {
            return Err(parse_error(
                matrix_path,
                format!(
                    "column {} header '{}' does not match criterion '{}' (columns must follow the criteria order)",
                    j + 2,
                    header,
                    crit.name
                ),
            ));
        }
    }

    let mut alternatives = Vec::new();
    let mut ratings = Vec::new();
    let mut seen: HashSet<String> = HashSet::new();
    for record in reader.records() {
        let record = record.map_err(|e| parse_error(matrix_path, e.to_string()))?;
        let line = record
            .position()
            .map(|p| p.line().to_string())
            .unwrap_or_else(|| "?".into());
        let id = record.get(0).unwrap_or("");
        if id.is_empty() {
            return Err(parse_error(
                matrix_path,
                format!("row {line}: empty alternative id"),
            ));
        }
        if !seen.insert(id.to_string()) {
            return Err(parse_error(
                matrix_path,
                format!("row {line}: duplicate alternative id '{id}'"),
            ));
        }
        let mut row = Vec::with_capacity(criteria.len());
        for (j, cell) in record.iter().skip(1).enumerate() {
            let value: f64 = cell.parse().map_err(|_| {
                parse_error(
                    matrix_path,
                    format!(
                        "row {line} (alternative '{id}'), column '{}': invalid number '{cell}'",
                        criteria[j].name
                    ),
                )
            })?;
            row.push(value);
        }
        alternatives.push(id.to_string());
        ratings.push(row);
    }

    Ok(DecisionProblem {
        alternatives,
        criteria,
        ratings,
        hard,
    })
}

/// Loads and validates a topology from its JSON form:
/// `{nodes, links: [{from, to, metrics}], source, destination, rules}`.
pub fn load_topology(path: &Path) -> Result<Topology, Error> {
    let text = read(path)?;
    let topology: Topology =
        serde_json::from_str(&text).map_err(|e| parse_error(path, e.to_string()))?;
    let issues = topology.validate();
    if !issues.is_empty() {
        return Err(Error::Validation(issues));
    }
    Ok(topology)
}

/// Lossless JSON form of a problem; floats survive a round-trip bit-exactly.
pub fn problem_to_json(problem: &DecisionProblem) -> Result<String, Error> {
    serde_json::to_string_pretty(problem)
        .map(|mut s| {
            s.push('\n');
            s
        })
        .map_err(|e| Error::Invariant(format!("problem not serializable: {e}")))
}

pub fn problem_from_json(text: &str) -> Result<DecisionProblem, Error> {
    serde_json::from_str(text).map_err(|e| Error::Parse {
        path: "<json>".into(),
        message: e.to_string(),
    })
}
