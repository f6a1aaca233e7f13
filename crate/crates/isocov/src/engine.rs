//! The constraint-aware ranking pipeline: satisfaction degrees, weighted
//! normalization, ideal vectors, distances, and hard/soft aggregation scores.

use serde::{Deserialize, Serialize};

use crate::error::Error;
use crate::model::{BoundsPolicy, CriterionSpec, DecisionProblem, Nature, ResolvedCriterion};
use crate::report::{Intermediates, Method, RankingReport};

/// Constraint-satisfaction degrees for every rating, plus the per-alternative
/// flag marking alternatives whose ratings fall inside every interval.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SatisfactionMatrix {
    /// `degrees[i][j]` is in `(0, 1]`.
    pub degrees: Vec<Vec<f64>>,
    pub v_flags: Vec<bool>,
}

/// Normalized ratings, their constraint-weighted counterparts, and the
/// per-criterion ideal vectors derived from the weighted matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct WeightedMatrix {
    pub normalized: Vec<Vec<f64>>,
    pub weighted: Vec<Vec<f64>>,
    /// Positive ideal: best weighted value per criterion.
    pub pis: Vec<f64>,
    /// Negative ideal: worst weighted value per criterion.
    pub nis: Vec<f64>,
}

/// Final per-alternative outcome.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScoreRow {
    pub alternative: String,
    /// Euclidean distance from the positive ideal.
    pub s_plus: f64,
    /// Euclidean distance from the negative ideal.
    pub s_minus: f64,
    /// `s_minus / (s_minus + s_plus)`, in `[0, 1]`.
    pub closeness: f64,
    /// Equals `closeness` in soft mode; in hard mode constraint violators are
    /// shifted down by one so they score in `[-1, 0]`.
    pub score: f64,
    pub v_flag: bool,
    pub rank: usize,
}

/// Degree of constraint satisfaction for one rating, in `(0, 1]`.
///
/// Let `M` be the criterion's [`interval_margin`](ResolvedCriterion::interval_margin).
/// A benefit rating scores 1 inside the interval and decays linearly with its
/// distance to the nearest bound, scaled by `M + 1`. A cost rating scores
/// `1 / (M + 1)` inside the interval and `distance / M` outside, so smaller
/// degrees are better for costs.
///
/// `d` must lie within the criterion's column range; when `M = 0` the
/// interval spans the whole range and only the inside branch is reachable.
pub fn satisfaction_degree(d: f64, crit: &ResolvedCriterion) -> f64 {
    debug_assert!(
        d >= crit.col_min && d <= crit.col_max,
        "rating {d} outside the column range [{}, {}] of '{}'",
        crit.col_min,
        crit.col_max,
        crit.spec.name
    );
    let margin = crit.interval_margin();
    match crit.spec.nature {
        Nature::Benefit => {
            if crit.contains(d) {
                1.0
            } else if d < crit.lower {
                1.0 - (crit.lower - d) / (margin + 1.0)
            } else {
                1.0 - (d - crit.upper) / (margin + 1.0)
            }
        }
        Nature::Cost => {
            if crit.contains(d) {
                1.0 / (margin + 1.0)
            } else {
                assert!(
                    margin > 0.0,
                    "out-of-interval rating with zero margin on '{}'",
                    crit.spec.name
                );
                if d < crit.lower {
                    (crit.lower - d) / margin
                } else {
                    (d - crit.upper) / margin
                }
            }
        }
    }
}

/// Satisfaction degrees for the whole problem, with `v_flags[i]` true iff
/// every rating of alternative `i` lies inside its constraint interval.
pub fn satisfaction_matrix(
    problem: &DecisionProblem,
    resolved: &[ResolvedCriterion],
) -> SatisfactionMatrix {
    let degrees = problem
        .ratings
        .iter()
        .map(|row| {
            row.iter()
                .zip(resolved)
                .map(|(&d, crit)| satisfaction_degree(d, crit))
                .collect()
        })
        .collect();
    let v_flags = problem
        .ratings
        .iter()
        .map(|row| row.iter().zip(resolved).all(|(&d, crit)| crit.contains(d)))
        .collect();
    SatisfactionMatrix { degrees, v_flags }
}

/// Vector normalization: each entry divided by the Euclidean norm of its
/// column. An all-zero column stays all-zero.
pub fn normalize(problem: &DecisionProblem) -> Vec<Vec<f64>> {
    let n = problem.num_criteria();
    let norms: Vec<f64> = (0..n)
        .map(|j| {
            problem
                .ratings
                .iter()
                .map(|row| row[j] * row[j])
                .sum::<f64>()
                .sqrt()
        })
        .collect();
    problem
        .ratings
        .iter()
        .map(|row| {
            row.iter()
                .zip(&norms)
                .map(|(&d, &norm)| if norm == 0.0 { 0.0 } else { d / norm })
                .collect()
        })
        .collect()
}

/// Builds the weighted matrix `p = N * w * f` and its ideal vectors.
pub fn weighted_matrix(
    problem: &DecisionProblem,
    satisfaction: &SatisfactionMatrix,
) -> WeightedMatrix {
    let normalized = normalize(problem);
    let weighted: Vec<Vec<f64>> = normalized
        .iter()
        .zip(&satisfaction.degrees)
        .map(|(nrow, frow)| {
            nrow.iter()
                .zip(frow)
                .zip(&problem.criteria)
                .map(|((&n, &f), crit)| n * crit.weight * f)
                .collect()
        })
        .collect();
    let (pis, nis) = ideal_vectors(&weighted, &problem.criteria);
    WeightedMatrix {
        normalized,
        weighted,
        pis,
        nis,
    }
}

/// Per-criterion best (PIS) and worst (NIS) weighted values: max/min of the
/// column for benefits, swapped for costs.
pub(crate) fn ideal_vectors(
    weighted: &[Vec<f64>],
    criteria: &[CriterionSpec],
) -> (Vec<f64>, Vec<f64>) {
    let mut pis = Vec::with_capacity(criteria.len());
    let mut nis = Vec::with_capacity(criteria.len());
    for (j, crit) in criteria.iter().enumerate() {
        let mut min = f64::INFINITY;
        let mut max = f64::NEG_INFINITY;
        for row in weighted {
            min = min.min(row[j]);
            max = max.max(row[j]);
        }
        match crit.nature {
            Nature::Benefit => {
                pis.push(max);
                nis.push(min);
            }
            Nature::Cost => {
                pis.push(min);
                nis.push(max);
            }
        }
    }
    (pis, nis)
}

fn euclidean(x: &[f64], y: &[f64]) -> f64 {
    x.iter()
        .zip(y)
        .map(|(&a, &b)| (a - b) * (a - b))
        .sum::<f64>()
        .sqrt()
}

/// Distances, closeness coefficients, final scores, and ranks. Rows come back
/// in input order with ranks assigned by stable descending score, so equal
/// scores keep the input ordering.
pub(crate) fn score_rows(
    alternatives: &[String],
    weighted: &[Vec<f64>],
    pis: &[f64],
    nis: &[f64],
    v_flags: &[bool],
    hard: bool,
) -> Vec<ScoreRow> {
    let mut rows: Vec<ScoreRow> = alternatives
        .iter()
        .zip(weighted)
        .zip(v_flags)
        .map(|((alternative, wrow), &v_flag)| {
            let s_plus = euclidean(wrow, pis);
            let s_minus = euclidean(wrow, nis);
            // Both distances vanish when every weighted row is identical.
            let closeness = if s_plus + s_minus == 0.0 {
                0.5
            } else {
                s_minus / (s_minus + s_plus)
            };
            let score = if hard && !v_flag {
                closeness - 1.0
            } else {
                closeness
            };
            ScoreRow {
                alternative: alternative.clone(),
                s_plus,
                s_minus,
                closeness,
                score,
                v_flag,
                rank: 0,
            }
        })
        .collect();

    let mut order: Vec<usize> = (0..rows.len()).collect();
    order.sort_by(|&i, &j| rows[j].score.total_cmp(&rows[i].score));
    for (position, &i) in order.iter().enumerate() {
        rows[i].rank = position + 1;
    }
    rows
}

/// Scores every alternative of a prepared problem. Rows are returned in input
/// order; the `rank` field carries the final ordering.
pub fn score(
    problem: &DecisionProblem,
    weighted: &WeightedMatrix,
    satisfaction: &SatisfactionMatrix,
) -> Vec<ScoreRow> {
    score_rows(
        &problem.alternatives,
        &weighted.weighted,
        &weighted.pis,
        &weighted.nis,
        &satisfaction.v_flags,
        problem.hard,
    )
}

pub(crate) fn check_finite(rows: &[ScoreRow]) -> Result<(), Error> {
    for row in rows {
        if !(row.s_plus.is_finite() && row.s_minus.is_finite() && row.score.is_finite()) {
            return Err(Error::Invariant(format!(
                "non-finite score for alternative '{}'",
                row.alternative
            )));
        }
    }
    Ok(())
}

/// Runs the full constraint-aware pipeline and returns the ranked report with
/// all intermediate matrices attached.
pub fn rank_isocov(problem: &DecisionProblem) -> Result<RankingReport, Error> {
    rank_isocov_with(problem, BoundsPolicy::Strict)
}

pub fn rank_isocov_with(
    problem: &DecisionProblem,
    policy: BoundsPolicy,
) -> Result<RankingReport, Error> {
    let resolved = problem.resolve_with(policy)?;
    let satisfaction = satisfaction_matrix(problem, &resolved);
    let weighted = weighted_matrix(problem, &satisfaction);
    let rows = score(problem, &weighted, &satisfaction);
    check_finite(&rows)?;
    let method = if problem.hard {
        Method::IsocovHard
    } else {
        Method::IsocovSoft
    };
    let intermediates = Intermediates {
        alternatives: problem.alternatives.clone(),
        criteria: problem.criteria.iter().map(|c| c.name.clone()).collect(),
        satisfaction: Some(satisfaction.degrees),
        v_flags: Some(satisfaction.v_flags),
        normalized: weighted.normalized,
        weighted: weighted.weighted,
        pis: weighted.pis,
        nis: weighted.nis,
    };
    Ok(RankingReport::new(method, rows, Some(intermediates)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::CriterionSpec;
    use crate::testdata::fixture_problem;

    fn resolved(
        nature: Nature,
        lower: f64,
        upper: f64,
        col_min: f64,
        col_max: f64,
    ) -> ResolvedCriterion {
        ResolvedCriterion {
            spec: CriterionSpec::new("c", nature, 0.1),
            col_min,
            col_max,
            lower,
            upper,
        }
    }

    fn assert_close(actual: f64, expected: f64, tol: f64) {
        assert!(
            (actual - expected).abs() <= tol,
            "expected {expected} within {tol}, got {actual}"
        );
    }

    #[test]
    fn degree_benefit_below_interval() {
        let crit = resolved(Nature::Benefit, 1600.0, 2025.0, 1500.0, 2025.0);
        assert_close(satisfaction_degree(1571.428571, &crit), 0.7171, 1e-4);
    }

    #[test]
    fn degree_benefit_inside_is_one() {
        let crit = resolved(Nature::Benefit, 800.0, 1300.0, 734.0, 1563.0);
        assert_eq!(satisfaction_degree(1000.0, &crit), 1.0);
        assert_eq!(satisfaction_degree(800.0, &crit), 1.0);
        assert_eq!(satisfaction_degree(1300.0, &crit), 1.0);
    }

    #[test]
    fn degree_cost_inside_divides_margin_plus_one() {
        let crit = resolved(Nature::Cost, 3.0, 5.0, 3.0, 7.0);
        assert_eq!(satisfaction_degree(5.0, &crit), 1.0 / 3.0);
    }

    #[test]
    fn degree_cost_above_interval() {
        let crit = resolved(Nature::Cost, 3.0, 5.0, 3.0, 7.0);
        assert_eq!(satisfaction_degree(7.0, &crit), 1.0);
        assert_eq!(satisfaction_degree(6.0, &crit), 0.5);
    }

    #[test]
    fn degree_cost_below_interval() {
        let crit = resolved(Nature::Cost, 0.002, 0.004, 0.001874, 0.004643);
        assert_close(satisfaction_degree(0.001944, &crit), 0.0871, 1e-4);
    }

    #[test]
    fn degree_with_full_range_interval_is_one_for_both_natures() {
        for nature in [Nature::Benefit, Nature::Cost] {
            let crit = resolved(nature, 2.0, 9.0, 2.0, 9.0);
            assert_eq!(crit.interval_margin(), 0.0);
            for d in [2.0, 5.5, 9.0] {
                assert_eq!(satisfaction_degree(d, &crit), 1.0);
            }
        }
    }

    #[test]
    fn fixture_satisfaction_flags_exactly_four_routes() {
        let problem = fixture_problem(true);
        let resolved = problem.resolve().unwrap();
        let sat = satisfaction_matrix(&problem, &resolved);
        let flagged: Vec<&str> = problem
            .alternatives
            .iter()
            .zip(&sat.v_flags)
            .filter(|(_, &v)| v)
            .map(|(a, _)| a.as_str())
            .collect();
        assert_eq!(flagged, ["a4", "a9", "a23", "a24"]);

        // Spot-check the first row against the reference degrees.
        let expected = [1.0, 0.7171, 0.791, 0.8049, 1.0, 0.8466];
        for (j, &want) in expected.iter().enumerate() {
            assert_close(sat.degrees[0][j], want, 1e-3);
        }
    }

    #[test]
    fn open_constraints_give_unit_degrees_everywhere() {
        let mut problem = fixture_problem(false);
        for crit in &mut problem.criteria {
            crit.lower_bound = None;
            crit.upper_bound = None;
        }
        let resolved = problem.resolve().unwrap();
        let sat = satisfaction_matrix(&problem, &resolved);
        assert!(sat.degrees.iter().flatten().all(|&f| f == 1.0));
        assert!(sat.v_flags.iter().all(|&v| v));
    }

    #[test]
    fn single_alternative_problem_scores_by_the_degenerate_rule() {
        let problem = DecisionProblem {
            alternatives: vec!["only".into()],
            criteria: vec![
                CriterionSpec::new("x", Nature::Benefit, 0.5),
                CriterionSpec::new("y", Nature::Cost, 0.5),
            ],
            ratings: vec![vec![10.0, 3.0]],
            hard: true,
        };
        let report = rank_isocov(&problem).unwrap();
        assert_eq!(report.rows.len(), 1);
        assert_eq!(report.rows[0].rank, 1);
        assert!(report.rows[0].v_flag);
        assert_eq!(report.rows[0].closeness, 0.5);
        assert_eq!(report.rows[0].score, 0.5);
    }

    #[test]
    fn normalize_matches_brute_force_column_norm() {
        let problem = fixture_problem(true);
        // Independent check: hop counts are small integers, so the sum of
        // squares is exact.
        let sum_sq: f64 = problem.ratings.iter().map(|row| row[0] * row[0]).sum();
        assert_eq!(sum_sq, 647.0);

        let normalized = normalize(&problem);
        assert_eq!(normalized[0][0], 7.0 / 647f64.sqrt());
        assert_close(normalized[0][0], 0.27520, 1e-5);
    }

    #[test]
    fn normalize_constant_column_is_uniform() {
        let problem = DecisionProblem {
            alternatives: (0..4).map(|i| format!("r{i}")).collect(),
            criteria: vec![CriterionSpec::new("x", Nature::Benefit, 1.0)],
            ratings: vec![vec![3.0]; 4],
            hard: false,
        };
        let normalized = normalize(&problem);
        for row in &normalized {
            assert_close(row[0], 1.0 / 2.0, 1e-15);
        }
    }

    #[test]
    fn normalize_zero_column_stays_zero() {
        let problem = DecisionProblem {
            alternatives: vec!["r1".into(), "r2".into()],
            criteria: vec![
                CriterionSpec::new("x", Nature::Benefit, 0.5),
                CriterionSpec::new("y", Nature::Cost, 0.5),
            ],
            ratings: vec![vec![0.0, 1.0], vec![0.0, 2.0]],
            hard: false,
        };
        let normalized = normalize(&problem);
        assert_eq!(normalized[0][0], 0.0);
        assert_eq!(normalized[1][0], 0.0);
    }

    #[test]
    fn fixture_weighted_matrix_matches_reference_row_and_ideals() {
        let problem = fixture_problem(true);
        let resolved = problem.resolve().unwrap();
        let sat = satisfaction_matrix(&problem, &resolved);
        let wm = weighted_matrix(&problem, &sat);

        let a4 = [0.0033, 0.009, 0.004, 0.0313, 0.063, 0.0429];
        for (j, &want) in a4.iter().enumerate() {
            assert_close(wm.weighted[3][j], want, 1e-4);
        }
        let pis = [0.002, 0.0114, 0.0021, 0.0467, 0.0009, 0.0022];
        let nis = [0.0138, 0.00008, 0.0583, 0.0002, 0.0874, 0.0502];
        for j in 0..6 {
            assert_close(wm.pis[j], pis[j], 1e-4);
            assert_close(wm.nis[j], nis[j], 1e-4);
        }
    }

    #[test]
    fn zero_weight_column_is_all_zero_with_zero_ideals() {
        let problem = DecisionProblem {
            alternatives: vec!["r1".into(), "r2".into()],
            criteria: vec![
                CriterionSpec::new("x", Nature::Benefit, 0.0),
                CriterionSpec::new("y", Nature::Cost, 1.0),
            ],
            ratings: vec![vec![5.0, 1.0], vec![7.0, 2.0]],
            hard: false,
        };
        let resolved = problem.resolve().unwrap();
        let sat = satisfaction_matrix(&problem, &resolved);
        let wm = weighted_matrix(&problem, &sat);
        assert_eq!(wm.weighted[0][0], 0.0);
        assert_eq!(wm.weighted[1][0], 0.0);
        assert_eq!(wm.pis[0], 0.0);
        assert_eq!(wm.nis[0], 0.0);
    }

    // Recomputing a4's distances from the reference weighted row and ideal
    // vectors; the expected values below were frozen from an independent
    // straight-line computation over those rounded reference numbers.
    #[test]
    fn score_recomputes_reference_a4_distances() {
        let row = vec![0.0033, 0.009, 0.004, 0.0313, 0.063, 0.0429];
        let rows = score_rows(
            &["a4".to_string()],
            &[row],
            &[0.002, 0.0114, 0.0021, 0.0467, 0.0009, 0.0022],
            &[0.0138, 0.00008, 0.0583, 0.0002, 0.0874, 0.0502],
            &[true],
            false,
        );
        assert_close(rows[0].s_plus, 0.07590204213326543, 1e-12);
        assert_close(rows[0].s_minus, 0.06895046337770327, 1e-12);
        assert_close(rows[0].closeness, 0.4760046306032457, 1e-12);
        // and at the reference precision
        assert_close(rows[0].s_plus, 0.0759, 1e-4);
        assert_close(rows[0].s_minus, 0.0690, 1e-4);
        assert_close(rows[0].closeness, 0.4757, 1e-3);
    }

    #[test]
    fn fixture_hard_ranking_matches_reference_extremes() {
        let report = rank_isocov(&fixture_problem(true)).unwrap();
        let a9 = report.row("a9").unwrap();
        assert_eq!(a9.rank, 1);
        assert_close(a9.score, 0.6008, 1e-3);
        let a1 = report.row("a1").unwrap();
        assert_eq!(a1.rank, 27);
        assert_close(a1.score, -0.792, 1e-3);
        assert!(!a1.v_flag);
    }

    #[test]
    fn fixture_soft_ranking_matches_reference_extremes() {
        let report = rank_isocov(&fixture_problem(false)).unwrap();
        let a25 = report.row("a25").unwrap();
        assert_eq!(a25.rank, 1);
        assert_close(a25.score, 0.945, 1e-3);
        let a9 = report.row("a9").unwrap();
        assert_eq!(a9.rank, 11);
        assert_close(a9.score, 0.6008, 1e-3);
    }

    #[test]
    fn hard_equals_soft_when_every_alternative_satisfies_the_constraints() {
        let mut problem = fixture_problem(true);
        for crit in &mut problem.criteria {
            crit.lower_bound = None;
            crit.upper_bound = None;
        }
        let hard = rank_isocov(&problem).unwrap();
        problem.hard = false;
        let soft = rank_isocov(&problem).unwrap();
        for (h, s) in hard.rows.iter().zip(&soft.rows) {
            assert_eq!(h.alternative, s.alternative);
            assert_eq!(h.score, s.score);
            assert_eq!(h.rank, s.rank);
        }
    }

    #[test]
    fn tied_scores_keep_input_order() {
        // Identical rating rows produce identical scores; the stable sort
        // must then rank them in input order.
        let problem = DecisionProblem {
            alternatives: vec!["z".into(), "m".into(), "a".into()],
            criteria: vec![
                CriterionSpec::new("x", Nature::Benefit, 0.5),
                CriterionSpec::new("y", Nature::Cost, 0.5),
            ],
            ratings: vec![vec![4.0, 2.0]; 3],
            hard: true,
        };
        let report = rank_isocov(&problem).unwrap();
        let order: Vec<&str> = report.rows.iter().map(|r| r.alternative.as_str()).collect();
        assert_eq!(order, ["z", "m", "a"]);
        assert_eq!(
            report.rows.iter().map(|r| r.rank).collect::<Vec<_>>(),
            [1, 2, 3]
        );
        // All rows identical also exercises the degenerate closeness rule.
        assert!(report.rows.iter().all(|r| r.closeness == 0.5));
    }

    // Hard scores of satisfiers ([0,1]) and violators ([-1,0]) share the
    // endpoint 0: a violator landing exactly on the positive ideal ties a
    // satisfier landing exactly on the negative ideal. The tie-break stays
    // input order even across the two classes.
    #[test]
    fn hard_mode_classes_can_tie_at_exactly_zero() {
        let problem = DecisionProblem {
            alternatives: vec!["v1".into(), "s1".into(), "v2".into()],
            criteria: vec![
                CriterionSpec::new("x", Nature::Cost, 0.5),
                CriterionSpec::new("y", Nature::Cost, 0.5).with_bounds(Some(70.0), None),
            ],
            // The y ratings of v1/v2 sit at the column minimum, so their
            // out-of-interval degree (70 - 0.1) / (70 - 0.1) is exactly 1,
            // while s1's inside degree is the tiny 1 / (margin + 1). That
            // puts the violators exactly on the positive ideal and the lone
            // satisfier exactly on the negative ideal.
            ratings: vec![vec![0.1, 0.1], vec![950.0, 325.0], vec![0.1, 0.1]],
            hard: true,
        };
        let report = rank_isocov(&problem).unwrap();
        assert!(report.rows.iter().all(|r| r.score == 0.0));
        assert_eq!(report.row("v1").unwrap().closeness, 1.0);
        assert_eq!(report.row("s1").unwrap().closeness, 0.0);
        let order: Vec<&str> = report.rows.iter().map(|r| r.alternative.as_str()).collect();
        assert_eq!(order, ["v1", "s1", "v2"]);
    }
}
