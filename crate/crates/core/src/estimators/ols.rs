use nalgebra::{DMatrix, DVector};

use super::cluster::{sandwich_cov_twoway, SmallSample};
use super::{DesignMatrix, EstimationError, Estimator, FitResult, FixedEffects};

const COLLINEARITY_TOL: f64 = 1e-10;

/// Names of columns lying (numerically) in the span of the columns before them.
pub(crate) fn collinear_columns(x: &DMatrix<f64>, names: &[String]) -> Vec<String> {
    let mut basis: Vec<DVector<f64>> = Vec::new();
    let mut out = Vec::new();
    for (j, name) in names.iter().enumerate() {
        let col = x.column(j).into_owned();
        let norm = col.norm();
        let mut v = col;
        // two passes of modified Gram-Schmidt
        for _ in 0..2 {
            for q in &basis {
                let c = q.dot(&v);
                v.axpy(-c, q, 1.0);
            }
        }
        let rest = v.norm();
        if norm == 0.0 || rest <= COLLINEARITY_TOL * norm {
            out.push(name.clone());
        } else {
            basis.push(v / rest);
        }
    }
    out
}

pub(crate) fn ensure_full_rank(design: &DesignMatrix) -> Result<(), EstimationError> {
    if design.nrows() < design.ncols() {
        return Err(EstimationError::InvalidDesign(format!(
            "{} observations for {} regressors",
            design.nrows(),
            design.ncols()
        )));
    }
    let columns = collinear_columns(design.x(), design.names());
    if columns.is_empty() {
        Ok(())
    } else {
        Err(EstimationError::RankDeficient { columns })
    }
}

/// Inverse of RᵀR for upper-triangular R.
pub(crate) fn inverse_gram_from_r(r: &DMatrix<f64>) -> DMatrix<f64> {
    let p = r.nrows();
    let r_inv = r
        .solve_upper_triangular(&DMatrix::identity(p, p))
        .expect("triangular factor of a full-rank design is invertible");
    let bread = &r_inv * r_inv.transpose();
    (&bread + bread.transpose()) * 0.5
}

/// Row-wise product xᵢ·uᵢ: one score row per observation.
pub(crate) fn score_rows(x: &DMatrix<f64>, u: &DVector<f64>) -> DMatrix<f64> {
    DMatrix::from_fn(x.nrows(), x.ncols(), |i, j| x[(i, j)] * u[i])
}

/// Least squares by Householder QR with two-way clustered covariance.
pub fn fit_ols(design: &DesignMatrix) -> Result<FitResult, EstimationError> {
    fit_ols_with(design, SmallSample::default())
}

pub fn fit_ols_with(design: &DesignMatrix, small_sample: SmallSample) -> Result<FitResult, EstimationError> {
    ensure_full_rank(design)?;
    let x = design.x();
    let y = design.y();
    let qr = x.clone().qr();
    let r = qr.r();
    let qty = qr.q().transpose() * y;
    let beta = r
        .solve_upper_triangular(&qty)
        .ok_or_else(|| EstimationError::RankDeficient { columns: design.names().to_vec() })?;

    let fitted = x * &beta;
    let residuals = y - &fitted;
    let bread = inverse_gram_from_r(&r);
    let scores = score_rows(x, &residuals);
    let cov = sandwich_cov_twoway(&bread, &scores, design.cluster_a(), design.cluster_b(), small_sample);
    let se = cov.matrix.diagonal().map(|v| v.max(0.0).sqrt());

    Ok(FitResult {
        names: design.names().to_vec(),
        coefficients: beta,
        covariance: cov.matrix,
        standard_errors: se,
        n_obs: design.nrows(),
        estimator: Estimator::Ols,
        fixed_effects: FixedEffects::None,
        iterations: 0,
        final_step_norm: 0.0,
        converged: true,
        fitted,
        residuals,
        log_likelihood: None,
        trace: Vec::new(),
        clusters: cov.clusters,
        covariance_repaired: cov.repaired,
        dropped_rows: 0,
    })
}
