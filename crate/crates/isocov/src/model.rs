//! Domain model: criteria, decision problems, validation, and the resolved
//! view of constraint intervals against the observed rating columns.

use std::collections::HashSet;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::Error;

/// Absolute tolerance accepted on the sum of criterion weights.
pub const WEIGHT_SUM_TOLERANCE: f64 = 1e-9;

/// Whether a metric is to be maximised (benefit) or minimised (cost).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Nature {
    Benefit,
    Cost,
}

/// One QoS metric: its optimisation direction, relative importance, and the
/// preferred value interval.
///
/// A `None` bound is open and resolves to the corresponding extreme of the
/// metric's rating column, so `lower_bound: None, upper_bound: None` accepts
/// the full observed range.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CriterionSpec {
    pub name: String,
    pub nature: Nature,
    pub weight: f64,
    #[serde(default)]
    pub lower_bound: Option<f64>,
    #[serde(default)]
    pub upper_bound: Option<f64>,
}

impl CriterionSpec {
    pub fn new(name: impl Into<String>, nature: Nature, weight: f64) -> Self {
        CriterionSpec {
            name: name.into(),
            nature,
            weight,
            lower_bound: None,
            upper_bound: None,
        }
    }

    pub fn with_bounds(mut self, lower: Option<f64>, upper: Option<f64>) -> Self {
        self.lower_bound = lower;
        self.upper_bound = upper;
        self
    }
}

/// How constraint intervals that fall outside a column's data range are
/// handled: reject the problem, or clamp the interval to the range.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum BoundsPolicy {
    #[default]
    Strict,
    Clamp,
}

/// A multi-criteria ranking problem: `m` alternatives rated against `n`
/// criteria, plus the flag marking the value constraints as mandatory.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DecisionProblem {
    pub alternatives: Vec<String>,
    pub criteria: Vec<CriterionSpec>,
    /// Row-major ratings; `ratings[i][j]` rates alternative `i` on criterion `j`.
    pub ratings: Vec<Vec<f64>>,
    pub hard: bool,
}

/// A criterion with its constraint interval resolved against the observed
/// column range: open bounds replaced by the column extremes.
#[derive(Debug, Clone, PartialEq)]
pub struct ResolvedCriterion {
    pub spec: CriterionSpec,
    pub col_min: f64,
    pub col_max: f64,
    pub lower: f64,
    pub upper: f64,
}

impl ResolvedCriterion {
    /// Closed-interval membership; both endpoints count as inside.
    pub fn contains(&self, d: f64) -> bool {
        self.lower <= d && d <= self.upper
    }

    /// Largest slack the interval leaves inside the data range:
    /// `max(lower - col_min, col_max - upper)`. Zero when the interval spans
    /// the whole range.
    pub fn interval_margin(&self) -> f64 {
        (self.lower - self.col_min).max(self.col_max - self.upper)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ValidationRule {
    EmptyAlternatives,
    EmptyCriteria,
    RatingsShape,
    NonFiniteRating,
    WeightOutOfRange,
    WeightSum,
    BoundOrder,
    BoundOutOfRange,
    DuplicateAlternative,
    DuplicateCriterion,
    // topology rules
    UnknownNode,
    DuplicateNode,
    DuplicateLink,
    MissingLinkMetric,
    NonFiniteLinkMetric,
    SourceEqualsDestination,
    UnknownMetric,
    EmptyRouteSet,
}

/// One violated rule, naming the offending criterion, alternative, or link.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ValidationIssue {
    pub rule: ValidationRule,
    pub subject: String,
    pub message: String,
}

impl ValidationIssue {
    pub(crate) fn new(
        rule: ValidationRule,
        subject: impl Into<String>,
        message: impl Into<String>,
    ) -> Self {
        ValidationIssue {
            rule,
            subject: subject.into(),
            message: message.into(),
        }
    }
}

impl fmt::Display for ValidationIssue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}", self.subject, self.message)
    }
}

impl DecisionProblem {
    pub fn num_alternatives(&self) -> usize {
        self.alternatives.len()
    }

    pub fn num_criteria(&self) -> usize {
        self.criteria.len()
    }

    /// Minimum and maximum of rating column `j`. Requires a consistent shape.
    pub(crate) fn column_bounds(&self, j: usize) -> (f64, f64) {
        let mut min = f64::INFINITY;
        let mut max = f64::NEG_INFINITY;
        for row in &self.ratings {
            min = min.min(row[j]);
            max = max.max(row[j]);
        }
        (min, max)
    }

    /// Checks every model rule, with constraint intervals required to lie
    /// inside their column's data range.
    pub fn validate(&self) -> Vec<ValidationIssue> {
        self.validation_issues(Some(BoundsPolicy::Strict))
    }

    /// Like [`validate`](Self::validate), but under [`BoundsPolicy::Clamp`]
    /// out-of-range constraint intervals are accepted (they are clamped by
    /// [`resolve_with`](Self::resolve_with)).
    pub fn validate_with(&self, policy: BoundsPolicy) -> Vec<ValidationIssue> {
        self.validation_issues(Some(policy))
    }

    /// Validation for methods that ignore value constraints entirely.
    pub(crate) fn validate_ignoring_bounds(&self) -> Vec<ValidationIssue> {
        self.validation_issues(None)
    }

    fn validation_issues(&self, bounds: Option<BoundsPolicy>) -> Vec<ValidationIssue> {
        let mut issues = Vec::new();
        let m = self.alternatives.len();
        let n = self.criteria.len();

        if m == 0 {
            issues.push(ValidationIssue::new(
                ValidationRule::EmptyAlternatives,
                "problem",
                "at least one alternative is required",
            ));
        }
        if n == 0 {
            issues.push(ValidationIssue::new(
                ValidationRule::EmptyCriteria,
                "problem",
                "at least one criterion is required",
            ));
        }

        let mut shape_ok = self.ratings.len() == m;
        if !shape_ok {
            issues.push(ValidationIssue::new(
                ValidationRule::RatingsShape,
                "ratings",
                format!("expected {m} rows, found {}", self.ratings.len()),
            ));
        }
        for (i, row) in self.ratings.iter().enumerate() {
            if row.len() != n {
                shape_ok = false;
                let subject = self
                    .alternatives
                    .get(i)
                    .cloned()
                    .unwrap_or_else(|| format!("row {i}"));
                issues.push(ValidationIssue::new(
                    ValidationRule::RatingsShape,
                    subject,
                    format!("expected {n} ratings, found {}", row.len()),
                ));
            }
        }

        let mut all_finite = true;
        for (i, row) in self.ratings.iter().enumerate() {
            for (j, &d) in row.iter().enumerate() {
                if !d.is_finite() {
                    all_finite = false;
                    let alt = self.alternatives.get(i).map(String::as_str).unwrap_or("?");
                    let crit = self.criteria.get(j).map(|c| c.name.as_str()).unwrap_or("?");
                    issues.push(ValidationIssue::new(
                        ValidationRule::NonFiniteRating,
                        format!("{alt}/{crit}"),
                        format!("rating {d} is not finite"),
                    ));
                }
            }
        }

        for crit in &self.criteria {
            if !crit.weight.is_finite() || crit.weight < 0.0 || crit.weight > 1.0 {
                issues.push(ValidationIssue::new(
                    ValidationRule::WeightOutOfRange,
                    crit.name.clone(),
                    format!("weight {} must lie in [0, 1]", crit.weight),
                ));
            }
            if let (Some(lo), Some(hi)) = (crit.lower_bound, crit.upper_bound) {
                if lo > hi {
                    issues.push(ValidationIssue::new(
                        ValidationRule::BoundOrder,
                        crit.name.clone(),
                        format!("lower_bound {lo} > upper_bound {hi}"),
                    ));
                }
            }
        }

        if n > 0 {
            let sum: f64 = self.criteria.iter().map(|c| c.weight).sum();
            if !sum.is_finite() || (sum - 1.0).abs() > WEIGHT_SUM_TOLERANCE {
                issues.push(ValidationIssue::new(
                    ValidationRule::WeightSum,
                    "criteria",
                    format!("weights sum to {sum}, expected 1 within {WEIGHT_SUM_TOLERANCE:e}"),
                ));
            }
        }

        let mut seen = HashSet::new();
        for alt in &self.alternatives {
            if !seen.insert(alt.as_str()) {
                issues.push(ValidationIssue::new(
                    ValidationRule::DuplicateAlternative,
                    alt.clone(),
                    "duplicate alternative id",
                ));
            }
        }
        let mut seen = HashSet::new();
        for crit in &self.criteria {
            if !seen.insert(crit.name.as_str()) {
                issues.push(ValidationIssue::new(
                    ValidationRule::DuplicateCriterion,
                    crit.name.clone(),
                    "duplicate criterion name",
                ));
            }
        }

        // Interval-vs-range checks need well-formed, finite columns.
        if bounds == Some(BoundsPolicy::Strict) && shape_ok && all_finite && m > 0 {
            for (j, crit) in self.criteria.iter().enumerate() {
                if matches!((crit.lower_bound, crit.upper_bound), (Some(lo), Some(hi)) if lo > hi) {
                    continue;
                }
                let (col_min, col_max) = self.column_bounds(j);
                if let Some(lo) = crit.lower_bound {
                    if lo < col_min || lo > col_max {
                        issues.push(ValidationIssue::new(
                            ValidationRule::BoundOutOfRange,
                            crit.name.clone(),
                            format!(
                                "lower_bound {lo} outside the column range [{col_min}, {col_max}]"
                            ),
                        ));
                    }
                }
                if let Some(hi) = crit.upper_bound {
                    if hi < col_min || hi > col_max {
                        issues.push(ValidationIssue::new(
                            ValidationRule::BoundOutOfRange,
                            crit.name.clone(),
                            format!(
                                "upper_bound {hi} outside the column range [{col_min}, {col_max}]"
                            ),
                        ));
                    }
                }
            }
        }

        issues
    }

    /// Resolves every criterion against its rating column, replacing open
    /// bounds by the column extremes. Fails with the validation issues if the
    /// problem is invalid.
    pub fn resolve(&self) -> Result<Vec<ResolvedCriterion>, Error> {
        self.resolve_with(BoundsPolicy::Strict)
    }

    pub fn resolve_with(&self, policy: BoundsPolicy) -> Result<Vec<ResolvedCriterion>, Error> {
        let issues = self.validate_with(policy);
        if !issues.is_empty() {
            return Err(Error::Validation(issues));
        }
        Ok(self
            .criteria
            .iter()
            .enumerate()
            .map(|(j, spec)| {
                let (col_min, col_max) = self.column_bounds(j);
                let mut lower = spec.lower_bound.unwrap_or(col_min);
                let mut upper = spec.upper_bound.unwrap_or(col_max);
                if policy == BoundsPolicy::Clamp {
                    lower = lower.clamp(col_min, col_max);
                    upper = upper.clamp(col_min, col_max);
                }
                ResolvedCriterion {
                    spec: spec.clone(),
                    col_min,
                    col_max,
                    lower,
                    upper,
                }
            })
            .collect())
    }
}
