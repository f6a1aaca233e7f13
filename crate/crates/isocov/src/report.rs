//! Ranking reports and their serialization: JSON (lossless), CSV, and
//! aligned text tables with configurable decimal precision.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::engine::{SatisfactionMatrix, ScoreRow};
use crate::error::Error;
use crate::model::DecisionProblem;

/// Decimal places used by CSV and table output when none are requested.
pub const DEFAULT_PRECISION: usize = 4;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Method {
    IsocovHard,
    IsocovSoft,
    Topsis,
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Method::IsocovHard => "isocov_hard",
            Method::IsocovSoft => "isocov_soft",
            Method::Topsis => "topsis",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OutputFormat {
    Json,
    Csv,
    Table,
}

/// The matrices behind a ranking, keyed to the input order of
/// `alternatives`. Constraint-free methods carry no satisfaction data.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Intermediates {
    pub alternatives: Vec<String>,
    pub criteria: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub satisfaction: Option<Vec<Vec<f64>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub v_flags: Option<Vec<bool>>,
    pub normalized: Vec<Vec<f64>>,
    pub weighted: Vec<Vec<f64>>,
    pub pis: Vec<f64>,
    pub nis: Vec<f64>,
}

/// A ranked result: rows sorted by rank, best first.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RankingReport {
    pub method: Method,
    pub rows: Vec<ScoreRow>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub intermediates: Option<Intermediates>,
}

impl RankingReport {
    pub fn new(
        method: Method,
        mut rows: Vec<ScoreRow>,
        intermediates: Option<Intermediates>,
    ) -> Self {
        rows.sort_by_key(|r| r.rank);
        RankingReport {
            method,
            rows,
            intermediates,
        }
    }

    pub fn row(&self, alternative: &str) -> Option<&ScoreRow> {
        self.rows.iter().find(|r| r.alternative == alternative)
    }

    pub fn emit(&self, format: OutputFormat, precision: usize) -> String {
        match format {
            OutputFormat::Json => to_json(self),
            OutputFormat::Csv => {
                let mut out = String::from("alternative,score,rank,v_flag\n");
                for row in &self.rows {
                    out.push_str(&format!(
                        "{},{},{},{}\n",
                        csv_field(&row.alternative),
                        fmt_num(row.score, precision),
                        row.rank,
                        flag(row.v_flag)
                    ));
                }
                if let Some(inter) = &self.intermediates {
                    out.push_str(&intermediates_csv(inter, precision));
                }
                out
            }
            OutputFormat::Table => {
                let headers = ["route", "score", "rank", "v"];
                let cells: Vec<Vec<String>> = self
                    .rows
                    .iter()
                    .map(|row| {
                        vec![
                            row.alternative.clone(),
                            fmt_num(row.score, precision),
                            row.rank.to_string(),
                            flag(row.v_flag).to_string(),
                        ]
                    })
                    .collect();
                let mut out = format!("method: {}\n\n", self.method);
                out.push_str(&render_table(&headers, &cells));
                if let Some(inter) = &self.intermediates {
                    out.push_str(&intermediates_table(inter, precision));
                }
                out
            }
        }
    }
}

/// The satisfaction-degree view of a problem: one row per alternative, one
/// degree per criterion, plus the all-constraints-met flag.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DegreesReport {
    pub alternatives: Vec<String>,
    pub criteria: Vec<String>,
    pub degrees: Vec<Vec<f64>>,
    pub v_flags: Vec<bool>,
}

impl DegreesReport {
    pub fn new(problem: &DecisionProblem, satisfaction: &SatisfactionMatrix) -> Self {
        DegreesReport {
            alternatives: problem.alternatives.clone(),
            criteria: problem.criteria.iter().map(|c| c.name.clone()).collect(),
            degrees: satisfaction.degrees.clone(),
            v_flags: satisfaction.v_flags.clone(),
        }
    }

    pub fn emit(&self, format: OutputFormat, precision: usize) -> String {
        match format {
            OutputFormat::Json => to_json(self),
            OutputFormat::Csv => {
                let mut out = String::from("alternative");
                for name in &self.criteria {
                    out.push(',');
                    out.push_str(&csv_field(name));
                }
                out.push_str(",v_flag\n");
                for ((alt, row), &v) in self
                    .alternatives
                    .iter()
                    .zip(&self.degrees)
                    .zip(&self.v_flags)
                {
                    out.push_str(&csv_field(alt));
                    for &d in row {
                        out.push(',');
                        out.push_str(&fmt_num(d, precision));
                    }
                    out.push_str(&format!(",{}\n", flag(v)));
                }
                out
            }
            OutputFormat::Table => {
                let mut headers = vec!["route".to_string()];
                headers.extend(self.criteria.iter().cloned());
                headers.push("v".to_string());
                let cells: Vec<Vec<String>> = self
                    .alternatives
                    .iter()
                    .zip(&self.degrees)
                    .zip(&self.v_flags)
                    .map(|((alt, row), &v)| {
                        let mut line = vec![alt.clone()];
                        line.extend(row.iter().map(|&d| fmt_num(d, precision)));
                        line.push(flag(v).to_string());
                        line
                    })
                    .collect();
                let header_refs: Vec<&str> = headers.iter().map(String::as_str).collect();
                render_table(&header_refs, &cells)
            }
        }
    }
}

/// One alternative across all three methods, for side-by-side comparison.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CompareRow {
    pub alternative: String,
    pub hard_score: f64,
    pub hard_rank: usize,
    pub soft_score: f64,
    pub soft_rank: usize,
    pub topsis_score: f64,
    pub topsis_rank: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CompareReport {
    pub rows: Vec<CompareRow>,
}

impl CompareReport {
    /// Joins three reports over the same alternatives, in `order`.
    pub fn new(
        hard: &RankingReport,
        soft: &RankingReport,
        topsis: &RankingReport,
        order: &[String],
    ) -> Result<Self, Error> {
        let rows = order
            .iter()
            .map(|alt| {
                let h = hard.row(alt);
                let s = soft.row(alt);
                let t = topsis.row(alt);
                match (h, s, t) {
                    (Some(h), Some(s), Some(t)) => Ok(CompareRow {
                        alternative: alt.clone(),
                        hard_score: h.score,
                        hard_rank: h.rank,
                        soft_score: s.score,
                        soft_rank: s.rank,
                        topsis_score: t.score,
                        topsis_rank: t.rank,
                    }),
                    _ => Err(Error::Invariant(format!(
                        "alternative '{alt}' missing from a comparison report"
                    ))),
                }
            })
            .collect::<Result<Vec<_>, Error>>()?;
        Ok(CompareReport { rows })
    }

    pub fn emit(&self, format: OutputFormat, precision: usize) -> String {
        match format {
            OutputFormat::Json => to_json(self),
            OutputFormat::Csv => {
                let mut out = String::from(
                    "alternative,isocov_hard_score,isocov_hard_rank,isocov_soft_score,isocov_soft_rank,topsis_score,topsis_rank\n",
                );
                for row in &self.rows {
                    out.push_str(&format!(
                        "{},{},{},{},{},{},{}\n",
                        csv_field(&row.alternative),
                        fmt_num(row.hard_score, precision),
                        row.hard_rank,
                        fmt_num(row.soft_score, precision),
                        row.soft_rank,
                        fmt_num(row.topsis_score, precision),
                        row.topsis_rank
                    ));
                }
                out
            }
            OutputFormat::Table => {
                let headers = [
                    "route",
                    "hard score",
                    "hard rank",
                    "soft score",
                    "soft rank",
                    "topsis score",
                    "topsis rank",
                ];
                let cells: Vec<Vec<String>> = self
                    .rows
                    .iter()
                    .map(|row| {
                        vec![
                            row.alternative.clone(),
                            fmt_num(row.hard_score, precision),
                            row.hard_rank.to_string(),
                            fmt_num(row.soft_score, precision),
                            row.soft_rank.to_string(),
                            fmt_num(row.topsis_score, precision),
                            row.topsis_rank.to_string(),
                        ]
                    })
                    .collect();
                render_table(&headers, &cells)
            }
        }
    }
}

/// Rounds half away from zero at `places` decimal digits.
pub fn round_to(x: f64, places: usize) -> f64 {
    let scale = 10f64.powi(places as i32);
    (x * scale).round() / scale
}

fn fmt_num(x: f64, places: usize) -> String {
    format!("{:.*}", places, round_to(x, places))
}

fn flag(v: bool) -> u8 {
    v as u8
}

fn to_json<T: Serialize>(value: &T) -> String {
    let mut out = serde_json::to_string_pretty(value).expect("reports contain only finite numbers");
    out.push('\n');
    out
}

fn csv_field(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

fn matrix_csv(
    title: &str,
    alternatives: &[String],
    criteria: &[String],
    matrix: &[Vec<f64>],
    v_flags: Option<&[bool]>,
    precision: usize,
) -> String {
    let mut out = format!("\n# {title}\nalternative");
    for name in criteria {
        out.push(',');
        out.push_str(&csv_field(name));
    }
    if v_flags.is_some() {
        out.push_str(",v_flag");
    }
    out.push('\n');
    for (i, (alt, row)) in alternatives.iter().zip(matrix).enumerate() {
        out.push_str(&csv_field(alt));
        for &x in row {
            out.push(',');
            out.push_str(&fmt_num(x, precision));
        }
        if let Some(flags) = v_flags {
            out.push_str(&format!(",{}", flag(flags[i])));
        }
        out.push('\n');
    }
    out
}

fn intermediates_csv(inter: &Intermediates, precision: usize) -> String {
    let mut out = String::new();
    if let Some(satisfaction) = &inter.satisfaction {
        out.push_str(&matrix_csv(
            "satisfaction degrees",
            &inter.alternatives,
            &inter.criteria,
            satisfaction,
            inter.v_flags.as_deref(),
            precision,
        ));
    }
    out.push_str(&matrix_csv(
        "normalized matrix",
        &inter.alternatives,
        &inter.criteria,
        &inter.normalized,
        None,
        precision,
    ));
    out.push_str(&matrix_csv(
        "weighted matrix",
        &inter.alternatives,
        &inter.criteria,
        &inter.weighted,
        None,
        precision,
    ));
    out.push_str("\n# ideal vectors\ncriterion,positive,negative\n");
    for ((name, &p), &n) in inter.criteria.iter().zip(&inter.pis).zip(&inter.nis) {
        out.push_str(&format!(
            "{},{},{}\n",
            csv_field(name),
            fmt_num(p, precision),
            fmt_num(n, precision)
        ));
    }
    out
}

fn matrix_table(
    title: &str,
    alternatives: &[String],
    criteria: &[String],
    matrix: &[Vec<f64>],
    v_flags: Option<&[bool]>,
    precision: usize,
) -> String {
    let mut headers = vec!["route".to_string()];
    headers.extend(criteria.iter().cloned());
    if v_flags.is_some() {
        headers.push("v".to_string());
    }
    let cells: Vec<Vec<String>> = alternatives
        .iter()
        .zip(matrix)
        .enumerate()
        .map(|(i, (alt, row))| {
            let mut line = vec![alt.clone()];
            line.extend(row.iter().map(|&x| fmt_num(x, precision)));
            if let Some(flags) = v_flags {
                line.push(flag(flags[i]).to_string());
            }
            line
        })
        .collect();
    let header_refs: Vec<&str> = headers.iter().map(String::as_str).collect();
    format!("\n{title}\n{}", render_table(&header_refs, &cells))
}

fn intermediates_table(inter: &Intermediates, precision: usize) -> String {
    let mut out = String::new();
    if let Some(satisfaction) = &inter.satisfaction {
        out.push_str(&matrix_table(
            "satisfaction degrees",
            &inter.alternatives,
            &inter.criteria,
            satisfaction,
            inter.v_flags.as_deref(),
            precision,
        ));
    }
    out.push_str(&matrix_table(
        "normalized matrix",
        &inter.alternatives,
        &inter.criteria,
        &inter.normalized,
        None,
        precision,
    ));
    out.push_str(&matrix_table(
        "weighted matrix",
        &inter.alternatives,
        &inter.criteria,
        &inter.weighted,
        None,
        precision,
    ));
    let cells: Vec<Vec<String>> = inter
        .criteria
        .iter()
        .zip(&inter.pis)
        .zip(&inter.nis)
        .map(|((name, &p), &n)| vec![name.clone(), fmt_num(p, precision), fmt_num(n, precision)])
        .collect();
    out.push_str(&format!(
        "\nideal vectors\n{}",
        render_table(&["criterion", "positive", "negative"], &cells)
    ));
    out
}

/// Left-aligns the first column, right-aligns the rest.
fn render_table(headers: &[&str], rows: &[Vec<String>]) -> String {
    let cols = headers.len();
    let mut widths: Vec<usize> = headers.iter().map(|h| h.len()).collect();
    for row in rows {
        for (j, cell) in row.iter().enumerate() {
            widths[j] = widths[j].max(cell.len());
        }
    }
    let mut out = String::new();
    let mut push_row = |cells: &[String]| {
        for (j, cell) in cells.iter().enumerate() {
            if j > 0 {
                out.push_str("  ");
            }
            if j == 0 {
                out.push_str(&format!("{:<width$}", cell, width = widths[j]));
            } else {
                out.push_str(&format!("{:>width$}", cell, width = widths[j]));
            }
        }
        while out.ends_with(' ') {
            out.pop();
        }
        out.push('\n');
    };
    let header_cells: Vec<String> = headers.iter().map(|h| h.to_string()).collect();
    push_row(&header_cells);
    let _ = cols;
    for row in rows {
        push_row(row);
    }
    out
}
