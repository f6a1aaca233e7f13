//! Constraint-aware multi-criteria route ranking.
//!
//! Routes (or any alternatives) are rated against weighted benefit/cost
//! criteria, each optionally carrying a preferred value interval. The ranking
//! engine folds per-rating constraint-satisfaction degrees into a weighted
//! vector normalization and scores every alternative by its Euclidean
//! closeness to the ideal solutions. Constraints can be mandatory — violators
//! rank strictly below satisfiers — or soft. A classical TOPSIS baseline
//! ranks the same problems with constraints ignored, and a topology front end
//! turns weighted digraphs into decision problems by enumerating the acyclic
//! source→destination routes.
//!
//! ```
//! use isocov::{CriterionSpec, DecisionProblem, Nature, rank_isocov};
//!
//! let problem = DecisionProblem {
//!     alternatives: vec!["via-a".into(), "via-b".into()],
//!     criteria: vec![
//!         CriterionSpec::new("delay", Nature::Cost, 0.6).with_bounds(None, Some(4.0)),
//!         CriterionSpec::new("rate", Nature::Benefit, 0.4),
//!     ],
//!     ratings: vec![vec![3.0, 1500.0], vec![5.0, 1800.0]],
//!     hard: true,
//! };
//! let report = rank_isocov(&problem).unwrap();
//! assert_eq!(report.rows[0].alternative, "via-a");
//! ```

pub mod engine;
pub mod error;
pub mod io;
pub mod model;
pub mod report;
pub mod topology;
pub mod topsis;

pub use engine::{
    normalize, rank_isocov, rank_isocov_with, satisfaction_degree, satisfaction_matrix, score,
    weighted_matrix, SatisfactionMatrix, ScoreRow, WeightedMatrix,
};
pub use error::Error;
pub use io::{load_criteria, load_problem, load_topology, problem_from_json, problem_to_json};
pub use model::{
    BoundsPolicy, CriterionSpec, DecisionProblem, Nature, ResolvedCriterion, ValidationIssue,
    ValidationRule, WEIGHT_SUM_TOLERANCE,
};
pub use report::{
    round_to, CompareReport, CompareRow, DegreesReport, Intermediates, Method, OutputFormat,
    RankingReport, DEFAULT_PRECISION,
};
pub use topology::{AggregationRule, Link, Topology, DEFAULT_ROUTE_CAP};
pub use topsis::rank_topsis;
