//! Classical TOPSIS ranking, the unconstrained baseline: vector
//! normalization, weighting, and Euclidean closeness to the ideal solutions.
//! Value constraints and the hard flag are ignored.

use crate::engine::{self, ScoreRow};
use crate::error::Error;
use crate::model::DecisionProblem;
use crate::report::{Intermediates, Method, RankingReport};

pub fn rank_topsis(problem: &DecisionProblem) -> Result<RankingReport, Error> {
    let issues = problem.validate_ignoring_bounds();
    if !issues.is_empty() {
        return Err(Error::Validation(issues));
    }
    let normalized = engine::normalize(problem);
    let weighted: Vec<Vec<f64>> = normalized
        .iter()
        .map(|row| {
            row.iter()
                .zip(&problem.criteria)
                .map(|(&n, crit)| n * crit.weight)
                .collect()
        })
        .collect();
    let (pis, nis) = engine::ideal_vectors(&weighted, &problem.criteria);
    let v_flags = vec![true; problem.num_alternatives()];
    let rows: Vec<ScoreRow> = engine::score_rows(
        &problem.alternatives,
        &weighted,
        &pis,
        &nis,
        &v_flags,
        false,
    );
    engine::check_finite(&rows)?;
    let intermediates = Intermediates {
        alternatives: problem.alternatives.clone(),
        criteria: problem.criteria.iter().map(|c| c.name.clone()).collect(),
        satisfaction: None,
        v_flags: None,
        normalized,
        weighted,
        pis,
        nis,
    };
    Ok(RankingReport::new(
        Method::Topsis,
        rows,
        Some(intermediates),
    ))
}
