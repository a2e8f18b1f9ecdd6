use std::collections::HashSet;

use nalgebra::{DMatrix, DVector};

use super::EstimationError;

pub const INTERCEPT: &str = "Intercept";

/// Regressors, outcome and two parallel cluster labellings (origin, destination).
#[derive(Debug, Clone, PartialEq)]
pub struct DesignMatrix {
    names: Vec<String>,
    x: DMatrix<f64>,
    y: DVector<f64>,
    cluster_a: Vec<String>,
    cluster_b: Vec<String>,
}

impl DesignMatrix {
    pub fn new(
        names: Vec<String>,
        x: DMatrix<f64>,
        y: DVector<f64>,
        cluster_a: Vec<String>,
        cluster_b: Vec<String>,
    ) -> Result<Self, EstimationError> {
        let invalid = |m: String| Err(EstimationError::InvalidDesign(m));
        if names.len() != x.ncols() {
            return invalid(format!("{} names for {} columns", names.len(), x.ncols()));
        }
        let n = x.nrows();
        if y.len() != n || cluster_a.len() != n || cluster_b.len() != n {
            return invalid(format!(
                "length mismatch: {n} rows, {} outcomes, {}/{} cluster labels",
                y.len(),
                cluster_a.len(),
                cluster_b.len()
            ));
        }
        let mut seen = HashSet::new();
        for name in &names {
            if !seen.insert(name.as_str()) {
                return invalid(format!("duplicate column name `{name}`"));
            }
        }
        for (j, name) in names.iter().enumerate() {
            let col = x.column(j);
            if col.iter().any(|v| !v.is_finite()) {
                return invalid(format!("column `{name}` has non-finite values"));
            }
            if n > 0 && col.iter().all(|v| *v == 0.0) {
                return invalid(format!("column `{name}` is identically zero"));
            }
        }
        if let Some((i, v)) = y.iter().enumerate().find(|(_, v)| !v.is_finite()) {
            return invalid(format!("outcome row {i} is {v}"));
        }
        Ok(DesignMatrix { names, x, y, cluster_a, cluster_b })
    }

    /// Builds a design from row-major regressor values.
    pub fn from_rows(
        names: &[&str],
        rows: &[Vec<f64>],
        y: &[f64],
        cluster_a: &[String],
        cluster_b: &[String],
    ) -> Result<Self, EstimationError> {
        let p = names.len();
        if let Some(r) = rows.iter().find(|r| r.len() != p) {
            return Err(EstimationError::InvalidDesign(format!("row of width {} for {p} columns", r.len())));
        }
        let x = DMatrix::from_fn(rows.len(), p, |i, j| rows[i][j]);
        Self::new(
            names.iter().map(|s| s.to_string()).collect(),
            x,
            DVector::from_column_slice(y),
            cluster_a.to_vec(),
            cluster_b.to_vec(),
        )
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn x(&self) -> &DMatrix<f64> {
        &self.x
    }

    pub fn y(&self) -> &DVector<f64> {
        &self.y
    }

    pub fn cluster_a(&self) -> &[String] {
        &self.cluster_a
    }

    pub fn cluster_b(&self) -> &[String] {
        &self.cluster_b
    }

    pub fn nrows(&self) -> usize {
        self.x.nrows()
    }

    pub fn ncols(&self) -> usize {
        self.x.ncols()
    }

    pub fn column_index(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }

    pub fn intercept_index(&self) -> Option<usize> {
        self.column_index(INTERCEPT)
    }

    /// Same regressors and clusters with a different outcome.
    pub fn with_outcome(&self, y: DVector<f64>) -> Result<Self, EstimationError> {
        Self::new(self.names.clone(), self.x.clone(), y, self.cluster_a.clone(), self.cluster_b.clone())
    }

    /// Keeps the listed rows, in the given order.
    pub fn select_rows(&self, rows: &[usize]) -> Result<Self, EstimationError> {
        let x = DMatrix::from_fn(rows.len(), self.ncols(), |i, j| self.x[(rows[i], j)]);
        let y = DVector::from_iterator(rows.len(), rows.iter().map(|&i| self.y[i]));
        let pick = |v: &[String]| rows.iter().map(|&i| v[i].clone()).collect();
        Self::new(self.names.clone(), x, y, pick(&self.cluster_a), pick(&self.cluster_b))
    }

    /// Keeps the listed columns, in the given order.
    pub fn select_columns(&self, cols: &[usize]) -> Result<Self, EstimationError> {
        let x = self.x.select_columns(cols);
        let names = cols.iter().map(|&j| self.names[j].clone()).collect();
        Self::new(names, x, self.y.clone(), self.cluster_a.clone(), self.cluster_b.clone())
    }
}
