//! Python bindings for `legdrain`.

use std::path::PathBuf;

use legdrain::counterfactual::{best_xi_value as core_best_xi_value, bestxi_table};
use legdrain::estimators::{fit_glm_poisson, fit_ols as core_fit_ols, DesignMatrix, FitResult, PoissonOptions};
use legdrain::flowledger::{aggregate_stats, build_flows, country_summaries, BilateralFlow};
use legdrain::gravity::synthetic::{generate, SyntheticConfig};
use legdrain::gravity::{build_gravity_dataset, run_specifications, ColonialCoding};
use legdrain::ingest::{self, load_indicators, CountryEntity, CountryResolver, IndicatorTable, PlayerRecord};
use pyo3::create_exception;
use pyo3::exceptions::{PyIOError, PyRuntimeError, PyValueError};
use pyo3::prelude::*;
use pyo3::types::PyDict;

create_exception!(legdrain_py, EstimationError, PyRuntimeError);

fn to_py(e: legdrain::Error) -> PyErr {
    match e {
        legdrain::Error::Io { .. } => PyIOError::new_err(e.to_string()),
        legdrain::Error::Estimation(inner) => EstimationError::new_err(inner.to_string()),
        other => PyValueError::new_err(other.to_string()),
    }
}

fn est_err(e: legdrain::estimators::EstimationError) -> PyErr {
    EstimationError::new_err(e.to_string())
}

#[pyclass(name = "Country", frozen, skip_from_py_object)]
#[derive(Clone)]
struct PyCountry {
    #[pyo3(get)]
    display_name: String,
    #[pyo3(get)]
    stats_code: String,
    #[pyo3(get)]
    wdi_code: Option<String>,
    #[pyo3(get)]
    matched: bool,
}

#[pymethods]
impl PyCountry {
    fn __repr__(&self) -> String {
        format!("Country({:?}, stats_code={:?}, wdi_code={:?})", self.display_name, self.stats_code, self.wdi_code)
    }
}

impl PyCountry {
    fn from_entity(c: &CountryEntity, matched: bool) -> Self {
        PyCountry {
            display_name: c.display_name.clone(),
            stats_code: c.stats_code.clone(),
            wdi_code: c.wdi_code.clone(),
            matched,
        }
    }
}

/// Estimated regression.
#[pyclass(name = "FitResult", frozen)]
struct PyFitResult(FitResult);

#[pymethods]
impl PyFitResult {
    #[getter]
    fn names(&self) -> Vec<String> {
        self.0.names.clone()
    }

    #[getter]
    fn coefficients(&self) -> Vec<f64> {
        self.0.coefficients.iter().copied().collect()
    }

    #[getter]
    fn standard_errors(&self) -> Vec<f64> {
        self.0.standard_errors.iter().copied().collect()
    }

    #[getter]
    fn covariance(&self) -> Vec<Vec<f64>> {
        let c = &self.0.covariance;
        (0..c.nrows()).map(|i| c.row(i).iter().copied().collect()).collect()
    }

    #[getter]
    fn n_obs(&self) -> usize {
        self.0.n_obs
    }

    #[getter]
    fn estimator(&self) -> &'static str {
        self.0.estimator.label()
    }

    #[getter]
    fn converged(&self) -> bool {
        self.0.converged
    }

    #[getter]
    fn iterations(&self) -> usize {
        self.0.iterations
    }

    #[getter]
    fn fitted(&self) -> Vec<f64> {
        self.0.fitted.iter().copied().collect()
    }

    fn coefficient(&self, name: &str) -> PyResult<f64> {
        self.0.coefficient(name).ok_or_else(|| PyValueError::new_err(format!("no coefficient `{name}`")))
    }

    fn standard_error(&self, name: &str) -> PyResult<f64> {
        self.0.standard_error(name).ok_or_else(|| PyValueError::new_err(format!("no coefficient `{name}`")))
    }

    fn p_value(&self, name: &str) -> PyResult<f64> {
        self.0.p_value(name).ok_or_else(|| PyValueError::new_err(format!("no coefficient `{name}`")))
    }

    fn diagnostics_json(&self) -> String {
        serde_json::to_string(&self.0.diagnostics()).expect("diagnostics serialise")
    }

    fn __repr__(&self) -> String {
        format!("FitResult({}, n_obs={}, {} coefficients)", self.0.estimator.label(), self.0.n_obs, self.0.names.len())
    }
}

/// Loaded players with the resolver and indicators used to read them.
#[pyclass(name = "Dataset")]
struct PyDataset {
    players: Vec<PlayerRecord>,
    flows: Vec<BilateralFlow>,
    indicators: IndicatorTable,
    coding: ColonialCoding,
}

fn flow_tuple(f: &BilateralFlow) -> (String, String, u64, u64) {
    (f.origin.display_name.clone(), f.destination.display_name.clone(), f.player_count, f.total_value)
}

#[pymethods]
impl PyDataset {
    fn __len__(&self) -> usize {
        self.players.len()
    }

    /// Player and dual-citizenship totals.
    fn stats<'py>(&self, py: Python<'py>) -> PyResult<Bound<'py, PyDict>> {
        let a = aggregate_stats(&self.players);
        let d = PyDict::new(py);
        d.set_item("total_players", a.total_players)?;
        d.set_item("dual_players", a.dual_players)?;
        d.set_item("dual_share", a.dual_share)?;
        d.set_item("total_value", a.total_value)?;
        d.set_item("dual_value", a.dual_value)?;
        d.set_item("dual_value_share", a.dual_value_share)?;
        d.set_item("country_count", a.country_count)?;
        Ok(d)
    }

    /// `(origin, destination, players, value_eur)` per corridor.
    fn flows(&self) -> Vec<(String, String, u64, u64)> {
        self.flows.iter().map(flow_tuple).collect()
    }

    /// `(country, gross_lost, gross_gained, net)` per country.
    fn summaries(&self) -> Vec<(String, u64, u64, i64)> {
        country_summaries(&self.flows, &self.indicators)
            .into_iter()
            .map(|s| (s.country.display_name, s.gross_lost, s.gross_gained, s.net))
            .collect()
    }

    /// `(country, actual, counterfactual, diff, pct_of_gdp)` per country.
    fn bestxi(&self) -> Vec<(String, u64, u64, i64, Option<f64>)> {
        bestxi_table(&self.players, &self.indicators)
            .into_iter()
            .map(|r| (r.country.display_name, r.actual_value, r.counterfactual_value, r.diff, r.pct_of_gdp))
            .collect()
    }

    /// The four gravity columns; needs indicators.
    fn gravity(&self) -> PyResult<Vec<PyFitResult>> {
        let ds = build_gravity_dataset(&self.flows, &self.indicators, &self.coding);
        let res = run_specifications(&ds.observations, &PoissonOptions::default()).map_err(est_err)?;
        Ok(res.columns.into_iter().map(|c| PyFitResult(c.fit)).collect())
    }
}

#[pyfunction]
fn parse_citizenship(raw: &str) -> PyResult<(String, Option<String>, bool)> {
    let c = ingest::parse_citizenship("<python>", raw).map_err(to_py)?;
    Ok((c.primary, c.secondary, c.truncated))
}

#[pyfunction]
fn resolve_country(name: &str) -> PyCountry {
    let r = CountryResolver::bundled().resolve(name);
    PyCountry::from_entity(&r.entity, r.matched)
}

#[pyfunction]
#[pyo3(signature = (players, wdi=None, overrides=None, colonial=None, wdi_year=2024))]
fn load_players(
    players: PathBuf,
    wdi: Option<PathBuf>,
    overrides: Option<PathBuf>,
    colonial: Option<PathBuf>,
    wdi_year: i32,
) -> PyResult<PyDataset> {
    let mut resolver = CountryResolver::bundled();
    if let Some(p) = overrides {
        resolver = resolver.with_override_file(&p).map_err(to_py)?;
    }
    let (players, _) = ingest::load_players(&players, &resolver).map_err(to_py)?;
    let indicators = match wdi {
        Some(p) => load_indicators(&p, wdi_year, wdi_year - 1).map_err(to_py)?.0,
        None => IndicatorTable::new(),
    };
    let coding = match colonial {
        Some(p) => ColonialCoding::load(&p, &resolver),
        None => ColonialCoding::bundled(&resolver),
    }
    .map_err(to_py)?;
    let flows = build_flows(&players);
    Ok(PyDataset { players, flows, indicators, coding })
}

#[pyfunction]
fn best_xi_value(values: Vec<u64>) -> u64 {
    core_best_xi_value(&values)
}

fn design(
    names: Vec<String>,
    rows: Vec<Vec<f64>>,
    y: Vec<f64>,
    cluster_a: Option<Vec<String>>,
    cluster_b: Option<Vec<String>>,
) -> PyResult<DesignMatrix> {
    let n = y.len();
    let singles = || (0..n).map(|i| i.to_string()).collect::<Vec<_>>();
    let names: Vec<&str> = names.iter().map(String::as_str).collect();
    DesignMatrix::from_rows(&names, &rows, &y, &cluster_a.unwrap_or_else(singles), &cluster_b.unwrap_or_else(singles))
        .map_err(est_err)
}

/// OLS with two-way clustered errors; clusters default to one per row.
#[pyfunction]
#[pyo3(signature = (names, rows, y, cluster_a=None, cluster_b=None))]
fn fit_ols(
    names: Vec<String>,
    rows: Vec<Vec<f64>>,
    y: Vec<f64>,
    cluster_a: Option<Vec<String>>,
    cluster_b: Option<Vec<String>>,
) -> PyResult<PyFitResult> {
    let d = design(names, rows, y, cluster_a, cluster_b)?;
    core_fit_ols(&d).map(PyFitResult).map_err(est_err)
}

/// Poisson pseudo-maximum likelihood by IRLS.
#[pyfunction]
#[pyo3(signature = (names, rows, y, cluster_a=None, cluster_b=None, tol=1e-9, max_iter=100))]
fn fit_poisson(
    names: Vec<String>,
    rows: Vec<Vec<f64>>,
    y: Vec<f64>,
    cluster_a: Option<Vec<String>>,
    cluster_b: Option<Vec<String>>,
    tol: f64,
    max_iter: usize,
) -> PyResult<PyFitResult> {
    let d = design(names, rows, y, cluster_a, cluster_b)?;
    let opts = PoissonOptions { tol, max_iter, ..PoissonOptions::default() };
    fit_glm_poisson(&d, &opts).map(PyFitResult).map_err(est_err)
}

/// The four gravity columns estimated on synthetic corridors.
#[pyfunction]
#[pyo3(signature = (seed=None))]
fn synthetic_gravity(seed: Option<u64>) -> PyResult<Vec<PyFitResult>> {
    let base = SyntheticConfig::default();
    let data = generate(&SyntheticConfig { seed: seed.unwrap_or(base.seed), ..base });
    let res = run_specifications(&data.observations, &PoissonOptions::default()).map_err(est_err)?;
    Ok(res.columns.into_iter().map(|c| PyFitResult(c.fit)).collect())
}

#[pymodule]
fn legdrain_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyCountry>()?;
    m.add_class::<PyFitResult>()?;
    m.add_class::<PyDataset>()?;
    m.add("EstimationError", m.py().get_type::<EstimationError>())?;
    m.add_function(wrap_pyfunction!(parse_citizenship, m)?)?;
    m.add_function(wrap_pyfunction!(resolve_country, m)?)?;
    m.add_function(wrap_pyfunction!(load_players, m)?)?;
    m.add_function(wrap_pyfunction!(best_xi_value, m)?)?;
    m.add_function(wrap_pyfunction!(fit_ols, m)?)?;
    m.add_function(wrap_pyfunction!(fit_poisson, m)?)?;
    m.add_function(wrap_pyfunction!(synthetic_gravity, m)?)?;
    Ok(())
}
