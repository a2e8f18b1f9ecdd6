//! Linear and Poisson-family regression with explicit fixed-effect dummies
//! and two-way clustered sandwich covariance.

mod cluster;
mod design;
mod fixed_effects;
mod inference;
mod ols;
mod poisson;

use nalgebra::{DMatrix, DVector};
use serde::Serialize;
use thiserror::Error;

pub use cluster::{
    cluster_meat, group_ids, repair_psd, sandwich, sandwich_cov_oneway, sandwich_cov_twoway,
    SmallSample, TwoWayCovariance,
};
pub use design::{DesignMatrix, INTERCEPT};
pub use fixed_effects::{add_fixed_effects, FixedEffectsDesign};
pub use inference::{p_value, stars};
pub use ols::{fit_ols, fit_ols_with};
pub use poisson::{fit_glm_poisson, poisson_log_likelihood, IterationTrace, PoissonOptions};

#[derive(Debug, Error)]
pub enum EstimationError {
    #[error("invalid design: {0}")]
    InvalidDesign(String),

    #[error("rank-deficient design; collinear columns: {}", .columns.join(", "))]
    RankDeficient { columns: Vec<String> },

    #[error("outcome must be non-negative and finite (row {row}: {value})")]
    InvalidOutcome { row: usize, value: f64 },

    #[error("outcome has no positive values")]
    NoPositiveOutcome,

    #[error("perfect separation: fitted means underflow on column `{column}`")]
    Separation { column: String },

    #[error("no convergence after {iterations} iterations (last relative score {last_score:e})")]
    NonConvergence {
        iterations: usize,
        last_score: f64,
        trace: Vec<IterationTrace>,
    },

    #[error("every fixed-effect group has zero total outcome")]
    AllGroupsZero,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Estimator {
    Ols,
    Ppml,
    PoissonCount,
}

impl Estimator {
    pub fn label(self) -> &'static str {
        match self {
            Estimator::Ols => "OLS",
            Estimator::Ppml => "PPML",
            Estimator::PoissonCount => "Poisson",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum FixedEffects {
    None,
    Destination,
}

/// One estimated specification.
#[derive(Debug, Clone)]
pub struct FitResult {
    pub names: Vec<String>,
    pub coefficients: DVector<f64>,
    /// Two-way clustered covariance after PSD repair.
    pub covariance: DMatrix<f64>,
    pub standard_errors: DVector<f64>,
    pub n_obs: usize,
    pub estimator: Estimator,
    pub fixed_effects: FixedEffects,
    pub iterations: usize,
    pub final_step_norm: f64,
    pub converged: bool,
    pub fitted: DVector<f64>,
    /// Response residuals y − fitted.
    pub residuals: DVector<f64>,
    pub log_likelihood: Option<f64>,
    pub trace: Vec<IterationTrace>,
    pub clusters: (usize, usize, usize),
    pub covariance_repaired: bool,
    /// Rows removed before estimation (zero-outcome fixed-effect groups).
    pub dropped_rows: usize,
}

impl FitResult {
    pub fn index(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }

    pub fn coefficient(&self, name: &str) -> Option<f64> {
        self.index(name).map(|i| self.coefficients[i])
    }

    pub fn standard_error(&self, name: &str) -> Option<f64> {
        self.index(name).map(|i| self.standard_errors[i])
    }

    /// Two-sided normal p-value of `coef / se`.
    pub fn p_value(&self, name: &str) -> Option<f64> {
        let i = self.index(name)?;
        Some(p_value(self.coefficients[i] / self.standard_errors[i]))
    }

    pub fn diagnostics(&self) -> Diagnostics {
        Diagnostics {
            estimator: self.estimator,
            fixed_effects: self.fixed_effects,
            n_obs: self.n_obs,
            dropped_rows: self.dropped_rows,
            iterations: self.iterations,
            final_step_norm: self.final_step_norm,
            converged: self.converged,
            log_likelihood: self.log_likelihood,
            clusters_origin: self.clusters.0,
            clusters_destination: self.clusters.1,
            clusters_intersection: self.clusters.2,
            covariance_repaired: self.covariance_repaired,
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct Diagnostics {
    pub estimator: Estimator,
    pub fixed_effects: FixedEffects,
    pub n_obs: usize,
    pub dropped_rows: usize,
    pub iterations: usize,
    pub final_step_norm: f64,
    pub converged: bool,
    pub log_likelihood: Option<f64>,
    pub clusters_origin: usize,
    pub clusters_destination: usize,
    pub clusters_intersection: usize,
    pub covariance_repaired: bool,
}
