use nalgebra::{DMatrix, DVector};
use serde::Serialize;

use super::{GravityObservation, RegressionTable};
use crate::estimators::{
    add_fixed_effects, fit_glm_poisson, fit_ols_with, DesignMatrix, EstimationError, Estimator, FitResult,
    FixedEffects, PoissonOptions, INTERCEPT,
};

pub const LOG_POP_O: &str = "Log pop. (origin)";
pub const LOG_POP_D: &str = "Log pop. (destination)";
pub const LOG_GDPPC_O: &str = "Log GDP/cap (origin)";
pub const LOG_GDPPC_D: &str = "Log GDP/cap (destination)";
pub const COLONIAL: &str = "Colonial tie (origin to dest.)";

const FULL: [&str; 6] = [INTERCEPT, LOG_POP_O, LOG_POP_D, LOG_GDPPC_O, LOG_GDPPC_D, COLONIAL];
const ORIGIN_ONLY: [&str; 4] = [INTERCEPT, LOG_POP_O, LOG_GDPPC_O, COLONIAL];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Outcome {
    LogValue,
    Value,
    Count,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Specification {
    pub estimator: Estimator,
    pub outcome: Outcome,
    pub fixed_effects: FixedEffects,
}

pub const SPECIFICATIONS: [Specification; 4] = [
    Specification { estimator: Estimator::Ols, outcome: Outcome::LogValue, fixed_effects: FixedEffects::None },
    Specification { estimator: Estimator::Ppml, outcome: Outcome::Value, fixed_effects: FixedEffects::None },
    Specification { estimator: Estimator::Ppml, outcome: Outcome::Value, fixed_effects: FixedEffects::Destination },
    Specification { estimator: Estimator::PoissonCount, outcome: Outcome::Count, fixed_effects: FixedEffects::None },
];

fn regressor(o: &GravityObservation, name: &str) -> f64 {
    match name {
        INTERCEPT => 1.0,
        LOG_POP_O => o.log_pop_o,
        LOG_POP_D => o.log_pop_d,
        LOG_GDPPC_O => o.log_gdppc_o,
        LOG_GDPPC_D => o.log_gdppc_d,
        COLONIAL => f64::from(u8::from(o.colonial_tie)),
        _ => unreachable!("unknown gravity regressor {name}"),
    }
}

/// Design over `observations` with the named regressors, clustered by origin
/// and destination.
pub fn gravity_design(
    observations: &[GravityObservation],
    outcome: Outcome,
    regressors: &[&str],
) -> Result<DesignMatrix, EstimationError> {
    let x = DMatrix::from_fn(observations.len(), regressors.len(), |i, j| regressor(&observations[i], regressors[j]));
    let y = DVector::from_iterator(
        observations.len(),
        observations.iter().map(|o| match outcome {
            Outcome::LogValue => (o.value as f64).ln(),
            Outcome::Value => o.value as f64,
            Outcome::Count => o.count as f64,
        }),
    );
    DesignMatrix::new(
        regressors.iter().map(|s| s.to_string()).collect(),
        x,
        y,
        observations.iter().map(|o| o.origin_cluster().to_owned()).collect(),
        observations.iter().map(|o| o.destination_cluster().to_owned()).collect(),
    )
}

#[derive(Debug, Clone)]
pub struct GravityColumn {
    pub spec: Specification,
    pub fit: FitResult,
    /// Destination groups removed because their outcome sums to zero.
    pub dropped_groups: Vec<String>,
}

#[derive(Debug, Clone)]
pub struct GravityResults {
    pub columns: Vec<GravityColumn>,
    pub table: RegressionTable,
}

impl GravityResults {
    pub fn colonial(&self) -> Vec<f64> {
        self.columns.iter().map(|c| c.fit.coefficient(COLONIAL).unwrap_or(f64::NAN)).collect()
    }
}

fn run_one(
    spec: Specification,
    observations: &[GravityObservation],
    opts: &PoissonOptions,
) -> Result<GravityColumn, EstimationError> {
    let mut dropped_groups = Vec::new();
    let mut fit = match spec.estimator {
        Estimator::Ols => {
            let sample: Vec<_> = observations.iter().filter(|o| o.value > 0).cloned().collect();
            fit_ols_with(&gravity_design(&sample, spec.outcome, &FULL)?, opts.small_sample)?
        }
        _ if spec.fixed_effects == FixedEffects::Destination => {
            let design = gravity_design(observations, spec.outcome, &ORIGIN_ONLY)?;
            let fe = add_fixed_effects(&design, design.cluster_b())?;
            let mut fit = fit_glm_poisson(&fe.design, opts)?;
            fit.dropped_rows = fe.dropped_rows;
            dropped_groups = fe.dropped_groups;
            fit
        }
        _ => fit_glm_poisson(&gravity_design(observations, spec.outcome, &FULL)?, opts)?,
    };
    fit.estimator = spec.estimator;
    fit.fixed_effects = spec.fixed_effects;
    Ok(GravityColumn { spec, fit, dropped_groups })
}

/// Fits the four gravity columns concurrently and assembles the table.
pub fn run_specifications(
    observations: &[GravityObservation],
    opts: &PoissonOptions,
) -> Result<GravityResults, EstimationError> {
    let fits: Vec<Result<GravityColumn, EstimationError>> = std::thread::scope(|s| {
        let handles: Vec<_> =
            SPECIFICATIONS.iter().map(|&spec| s.spawn(move || run_one(spec, observations, opts))).collect();
        handles.into_iter().map(|h| h.join().expect("gravity fit panicked")).collect()
    });
    let columns = fits.into_iter().collect::<Result<Vec<_>, _>>()?;
    let table = RegressionTable::from_fits(&FULL, columns.iter().map(|c| &c.fit));
    Ok(GravityResults { columns, table })
}
