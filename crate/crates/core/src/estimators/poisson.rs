use nalgebra::{DMatrix, DVector};
use serde::Serialize;

use super::cluster::{sandwich_cov_twoway, SmallSample};
use super::ols::{ensure_full_rank, inverse_gram_from_r, score_rows};
use super::{DesignMatrix, EstimationError, Estimator, FitResult, FixedEffects};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PoissonOptions {
    /// Bound on both the relative score and the relative coefficient change.
    pub tol: f64,
    pub max_iter: usize,
    /// Step halvings allowed per iteration when the likelihood would fall.
    pub max_halvings: usize,
    pub small_sample: SmallSample,
}

impl Default for PoissonOptions {
    fn default() -> Self {
        PoissonOptions { tol: 1e-9, max_iter: 100, max_halvings: 20, small_sample: SmallSample::default() }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct IterationTrace {
    pub iteration: usize,
    /// Quasi log-likelihood after the accepted step.
    pub log_likelihood: f64,
    /// Largest relative score before the step.
    pub relative_score: f64,
    pub step_norm: f64,
    pub halvings: usize,
}

/// Σ yᵢηᵢ − exp(ηᵢ), the Poisson log-likelihood without the factorial term.
pub fn poisson_log_likelihood(y: &DVector<f64>, eta: &DVector<f64>) -> f64 {
    y.iter().zip(eta.iter()).map(|(y, e)| y * e - e.exp()).sum()
}

// Ratio under which a column's share of the IRLS weight is treated as underflow.
const SEPARATION_RATIO: f64 = 1e-14;
const LL_SLACK: f64 = 1e-12;

struct State {
    beta: DVector<f64>,
    mu: DVector<f64>,
    ll: f64,
}

impl State {
    fn at(x: &DMatrix<f64>, y: &DVector<f64>, beta: DVector<f64>) -> Self {
        let eta = x * &beta;
        let mu = eta.map(f64::exp);
        let ll = poisson_log_likelihood(y, &eta);
        State { beta, mu, ll }
    }
}

fn validate_outcome(y: &DVector<f64>) -> Result<(), EstimationError> {
    if let Some((row, &value)) = y.iter().enumerate().find(|(_, v)| !(v.is_finite() && **v >= 0.0)) {
        return Err(EstimationError::InvalidOutcome { row, value });
    }
    if !y.iter().any(|v| *v > 0.0) {
        return Err(EstimationError::NoPositiveOutcome);
    }
    Ok(())
}

/// A one-signed column whose support carries only zero outcomes has no finite MLE.
fn check_separation(design: &DesignMatrix) -> Result<(), EstimationError> {
    let x = design.x();
    let y = design.y();
    for (j, name) in design.names().iter().enumerate() {
        let col = x.column(j);
        let one_signed = col.iter().all(|v| *v >= 0.0) || col.iter().all(|v| *v <= 0.0);
        let support_mass: f64 = col.iter().zip(y.iter()).filter(|(v, _)| **v != 0.0).map(|(_, y)| *y).sum();
        if one_signed && support_mass == 0.0 {
            return Err(EstimationError::Separation { column: name.clone() });
        }
    }
    Ok(())
}

fn check_weight_underflow(design: &DesignMatrix, mu: &DVector<f64>) -> Result<(), EstimationError> {
    let x = design.x();
    let mean_mu = mu.mean();
    for (j, name) in design.names().iter().enumerate() {
        let col = x.column(j);
        let mass: f64 = col.iter().zip(mu.iter()).map(|(v, m)| m * v * v).sum();
        let reference: f64 = col.iter().map(|v| v * v).sum::<f64>() * mean_mu;
        if reference > 0.0 && mass / reference < SEPARATION_RATIO {
            return Err(EstimationError::Separation { column: name.clone() });
        }
    }
    Ok(())
}

/// Largest |scoreⱼ| relative to Σᵢ |xᵢⱼ|(yᵢ + μᵢ); invariant to rescaling y.
fn relative_score(x: &DMatrix<f64>, y: &DVector<f64>, mu: &DVector<f64>) -> f64 {
    let resid = y - mu;
    let score = x.transpose() * &resid;
    (0..x.ncols())
        .map(|j| {
            let scale: f64 = x.column(j).iter().zip(y.iter().zip(mu.iter())).map(|(v, (y, m))| v.abs() * (y + m)).sum();
            if scale > 0.0 { score[j].abs() / scale } else { 0.0 }
        })
        .fold(0.0, f64::max)
}

/// Newton direction δ solving (XᵀWX)δ = Xᵀ(y − μ), W = diag(μ), via QR of W^½X.
fn newton_direction(x: &DMatrix<f64>, y: &DVector<f64>, mu: &DVector<f64>) -> Option<DVector<f64>> {
    let sw = mu.map(f64::sqrt);
    let xw = DMatrix::from_fn(x.nrows(), x.ncols(), |i, j| x[(i, j)] * sw[i]);
    let rhs = DVector::from_fn(x.nrows(), |i, _| (y[i] - mu[i]) / sw[i]);
    let qr = xw.qr();
    qr.r().solve_upper_triangular(&(qr.q().transpose() * rhs))
}

/// Poisson (pseudo-)maximum likelihood by IRLS with step-halving, followed by
/// two-way clustered covariance on the design's cluster labels.
///
/// Starts from β = 0 with the intercept at log(mean y). Converged when both
/// the relative score and the relative coefficient change fall below `tol`.
pub fn fit_glm_poisson(design: &DesignMatrix, opts: &PoissonOptions) -> Result<FitResult, EstimationError> {
    let x = design.x();
    let y = design.y();
    validate_outcome(y)?;
    ensure_full_rank(design)?;
    check_separation(design)?;

    let mut beta0 = DVector::zeros(design.ncols());
    if let Some(i) = design.intercept_index() {
        beta0[i] = y.mean().ln();
    }
    let mut state = State::at(x, y, beta0);
    let mut trace = Vec::new();
    let mut last_change = f64::INFINITY;
    let mut last_step = 0.0;
    let mut iterations = 0;

    loop {
        let rel_score = relative_score(x, y, &state.mu);
        if rel_score < opts.tol && last_change < opts.tol {
            break;
        }
        if iterations == opts.max_iter {
            return Err(EstimationError::NonConvergence { iterations, last_score: rel_score, trace });
        }
        iterations += 1;
        check_weight_underflow(design, &state.mu)?;

        let delta = newton_direction(x, y, &state.mu).ok_or_else(|| EstimationError::RankDeficient {
            columns: design.names().to_vec(),
        })?;
        let mut t = 1.0;
        let mut accepted = None;
        for h in 0..=opts.max_halvings {
            let cand = State::at(x, y, &state.beta + &delta * t);
            if cand.ll.is_finite() && cand.ll >= state.ll - LL_SLACK * (1.0 + state.ll.abs()) {
                accepted = Some((cand, h));
                break;
            }
            t *= 0.5;
        }
        let Some((next, halvings)) = accepted else {
            return Err(EstimationError::NonConvergence { iterations, last_score: rel_score, trace });
        };
        let step = (&next.beta - &state.beta).map(f64::abs);
        last_change = step.max() / (1.0 + state.beta.amax());
        last_step = step.norm();
        trace.push(IterationTrace {
            iteration: iterations,
            log_likelihood: next.ll,
            relative_score: rel_score,
            step_norm: last_step,
            halvings,
        });
        state = next;
    }

    let mu = state.mu;
    let residuals = y - &mu;
    let sw = mu.map(f64::sqrt);
    let xw = DMatrix::from_fn(x.nrows(), x.ncols(), |i, j| x[(i, j)] * sw[i]);
    let bread = inverse_gram_from_r(&xw.qr().r());
    let scores = score_rows(x, &residuals);
    let cov = sandwich_cov_twoway(&bread, &scores, design.cluster_a(), design.cluster_b(), opts.small_sample);
    let se = cov.matrix.diagonal().map(|v| v.max(0.0).sqrt());

    Ok(FitResult {
        names: design.names().to_vec(),
        coefficients: state.beta,
        covariance: cov.matrix,
        standard_errors: se,
        n_obs: design.nrows(),
        estimator: Estimator::Ppml,
        fixed_effects: FixedEffects::None,
        iterations,
        final_step_norm: last_step,
        converged: true,
        fitted: mu,
        residuals,
        log_likelihood: Some(state.ll),
        trace,
        clusters: cov.clusters,
        covariance_repaired: cov.repaired,
        dropped_rows: 0,
    })
}
