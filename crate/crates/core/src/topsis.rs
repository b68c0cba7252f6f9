//! TOPSIS ranking.
//!
//! The pipeline is split into its stages so each can be inspected and tested
//! on its own:
//!
//! 1. [`normalize_matrix`]: vector normalization, `r_ij = x_ij / ||x_.j||`
//! 2. [`apply_weights`]: `v_ij = w_j * r_ij` with `w` scaled to sum to one
//! 3. [`ideal_points`]: per-criterion best and worst values, by direction
//! 4. [`separation_distances`]: Euclidean distances to both ideal points
//! 5. [`closeness_and_rank`]: `C_i = S-_i / (S+_i + S-_i)` and the ordering
//!
//! [`topsis`] runs all five.

use std::collections::HashSet;
use std::fmt;
use std::str::FromStr;

use ndarray::{Array1, Array2};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Candidates (rows) scored against criteria (columns).
#[derive(Debug, Clone, PartialEq)]
pub struct DecisionMatrix {
    values: Array2<f64>,
    criteria: Vec<String>,
    candidates: Vec<String>,
}

impl DecisionMatrix {
    pub fn new(values: Array2<f64>, criteria: Vec<String>, candidates: Vec<String>) -> Result<Self> {
        let (m, n) = values.dim();
        if m < 2 {
            return Err(Error::Shape(format!("need at least 2 candidates, got {m}")));
        }
        if n < 1 {
            return Err(Error::Shape("need at least 1 criterion".into()));
        }
        if criteria.len() != n || candidates.len() != m {
            return Err(Error::Shape(format!(
                "{m}x{n} matrix with {} candidate ids and {} criterion names",
                candidates.len(),
                criteria.len()
            )));
        }
        if criteria.iter().collect::<HashSet<_>>().len() != n {
            return Err(Error::Shape("criterion names must be unique".into()));
        }
        if candidates.iter().collect::<HashSet<_>>().len() != m {
            return Err(Error::Shape("candidate ids must be unique".into()));
        }
        if let Some(((i, j), v)) = values.indexed_iter().find(|(_, v)| !v.is_finite()) {
            return Err(Error::range(
                "decision matrix",
                format!("entry ({i}, {j}) is {v}"),
            ));
        }
        Ok(DecisionMatrix {
            values,
            criteria,
            candidates,
        })
    }

    /// Builds a matrix with generated names `c0..` and `k0..`.
    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self> {
        let m = rows.len();
        let n = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|r| r.len() != n) {
            return Err(Error::Shape("ragged rows".into()));
        }
        let values = Array2::from_shape_fn((m, n), |(i, j)| rows[i][j]);
        Self::new(
            values,
            (0..n).map(|j| format!("k{j}")).collect(),
            (0..m).map(|i| format!("c{i}")).collect(),
        )
    }

    pub fn values(&self) -> &Array2<f64> {
        &self.values
    }

    pub fn criteria(&self) -> &[String] {
        &self.criteria
    }

    pub fn candidates(&self) -> &[String] {
        &self.candidates
    }

    pub fn n_candidates(&self) -> usize {
        self.values.nrows()
    }

    pub fn n_criteria(&self) -> usize {
        self.values.ncols()
    }
}

/// Non-negative criterion weights with a positive sum.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<f64>", into = "Vec<f64>")]
pub struct WeightVector(Vec<f64>);

impl WeightVector {
    pub fn new(weights: Vec<f64>) -> Result<Self> {
        if let Some(w) = weights.iter().find(|w| !w.is_finite() || **w < 0.0) {
            return Err(Error::range("weight", format!("{w} must be finite and >= 0")));
        }
        let sum: f64 = weights.iter().sum();
        if !(sum > 0.0) {
            return Err(Error::range("weights", "sum must be positive"));
        }
        Ok(WeightVector(weights))
    }

    pub fn equal(n: usize) -> Self {
        WeightVector(vec![1.0; n])
    }

    pub fn raw(&self) -> &[f64] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Weights scaled to sum to one.
    pub fn normalized(&self) -> Vec<f64> {
        let sum: f64 = self.0.iter().sum();
        self.0.iter().map(|w| w / sum).collect()
    }
}

impl TryFrom<Vec<f64>> for WeightVector {
    type Error = Error;

    fn try_from(v: Vec<f64>) -> Result<Self> {
        WeightVector::new(v)
    }
}

impl From<WeightVector> for Vec<f64> {
    fn from(w: WeightVector) -> Vec<f64> {
        w.0
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Direction {
    /// Larger is better.
    Benefit,
    /// Smaller is better.
    Cost,
}

impl Direction {
    pub fn flipped(self) -> Self {
        match self {
            Direction::Benefit => Direction::Cost,
            Direction::Cost => Direction::Benefit,
        }
    }
}

impl fmt::Display for Direction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Direction::Benefit => "benefit",
            Direction::Cost => "cost",
        })
    }
}

impl FromStr for Direction {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "benefit" => Ok(Direction::Benefit),
            "cost" => Ok(Direction::Cost),
            other => Err(Error::Config(format!(
                "direction `{other}` is neither `benefit` nor `cost`"
            ))),
        }
    }
}

/// Ideal best (A+) and ideal worst (A-) points in weighted space.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct IdealPoints {
    pub best: Vec<f64>,
    pub worst: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ClosenessResult {
    pub candidate_ids: Vec<String>,
    pub s_plus: Vec<f64>,
    pub s_minus: Vec<f64>,
    pub closeness: Vec<f64>,
    /// Candidate indices, best first.
    pub ranking: Vec<usize>,
}

impl ClosenessResult {
    /// Ids in rank order.
    pub fn ranked_ids(&self) -> Vec<&str> {
        self.ranking
            .iter()
            .map(|&i| self.candidate_ids[i].as_str())
            .collect()
    }

    /// 1-based rank of each candidate, in input order.
    pub fn positions(&self) -> Vec<usize> {
        let mut pos = vec![0; self.ranking.len()];
        for (rank, &i) in self.ranking.iter().enumerate() {
            pos[i] = rank + 1;
        }
        pos
    }
}

pub fn normalize_matrix(decision: &DecisionMatrix) -> Result<Array2<f64>> {
    let mut out = decision.values.clone();
    for (j, mut col) in out.columns_mut().into_iter().enumerate() {
        let norm = col.iter().map(|x| x * x).sum::<f64>().sqrt();
        if norm == 0.0 {
            return Err(Error::DegenerateColumn(decision.criteria[j].clone()));
        }
        col.mapv_inplace(|x| x / norm);
    }
    Ok(out)
}

pub fn apply_weights(normalized: &Array2<f64>, weights: &WeightVector) -> Result<Array2<f64>> {
    if weights.len() != normalized.ncols() {
        return Err(Error::Shape(format!(
            "{} weights for {} criteria",
            weights.len(),
            normalized.ncols()
        )));
    }
    let w = Array1::from(weights.normalized());
    Ok(normalized * &w)
}

pub fn ideal_points(weighted: &Array2<f64>, directions: &[Direction]) -> Result<IdealPoints> {
    if directions.len() != weighted.ncols() {
        return Err(Error::Shape(format!(
            "{} directions for {} criteria",
            directions.len(),
            weighted.ncols()
        )));
    }
    if weighted.nrows() == 0 {
        return Err(Error::Empty("no candidates".into()));
    }
    let mut best = Vec::with_capacity(directions.len());
    let mut worst = Vec::with_capacity(directions.len());
    for (col, dir) in weighted.columns().into_iter().zip(directions) {
        let max = col.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        let min = col.iter().copied().fold(f64::INFINITY, f64::min);
        let (b, w) = match dir {
            Direction::Benefit => (max, min),
            Direction::Cost => (min, max),
        };
        best.push(b);
        worst.push(w);
    }
    Ok(IdealPoints { best, worst })
}

pub fn separation_distances(weighted: &Array2<f64>, ideals: &IdealPoints) -> Result<(Vec<f64>, Vec<f64>)> {
    let n = weighted.ncols();
    if ideals.best.len() != n || ideals.worst.len() != n {
        return Err(Error::Shape(format!(
            "ideal points of length {}/{} for {n} criteria",
            ideals.best.len(),
            ideals.worst.len()
        )));
    }
    let distance = |row: ndarray::ArrayView1<'_, f64>, point: &[f64]| {
        row.iter()
            .zip(point)
            .map(|(v, p)| (v - p) * (v - p))
            .sum::<f64>()
            .sqrt()
    };
    Ok(weighted
        .rows()
        .into_iter()
        .map(|row| (distance(row, &ideals.best), distance(row, &ideals.worst)))
        .unzip())
}

/// Closeness scores and the descending ranking; ties keep input order.
pub fn closeness_and_rank(s_plus: &[f64], s_minus: &[f64], candidate_ids: &[String]) -> Result<ClosenessResult> {
    if s_plus.len() != s_minus.len() || s_plus.len() != candidate_ids.len() {
        return Err(Error::Shape(format!(
            "{} S+, {} S-, {} ids",
            s_plus.len(),
            s_minus.len(),
            candidate_ids.len()
        )));
    }
    let mut closeness = Vec::with_capacity(s_plus.len());
    for (i, (&p, &m)) in s_plus.iter().zip(s_minus).enumerate() {
        let total = p + m;
        if total == 0.0 {
            return Err(Error::DegenerateMatrix(format!(
                "candidate `{}` coincides with both ideal points; every criterion is constant",
                candidate_ids[i]
            )));
        }
        closeness.push(m / total);
    }
    let mut ranking: Vec<usize> = (0..closeness.len()).collect();
    ranking.sort_by(|&a, &b| closeness[b].total_cmp(&closeness[a]));
    Ok(ClosenessResult {
        candidate_ids: candidate_ids.to_vec(),
        s_plus: s_plus.to_vec(),
        s_minus: s_minus.to_vec(),
        closeness,
        ranking,
    })
}

pub fn topsis(decision: &DecisionMatrix, weights: &WeightVector, directions: &[Direction]) -> Result<ClosenessResult> {
    let normalized = normalize_matrix(decision)?;
    let weighted = apply_weights(&normalized, weights)?;
    let ideals = ideal_points(&weighted, directions)?;
    let (s_plus, s_minus) = separation_distances(&weighted, &ideals)?;
    closeness_and_rank(&s_plus, &s_minus, &decision.candidates)
}
