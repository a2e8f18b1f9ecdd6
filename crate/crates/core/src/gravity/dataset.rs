use serde::Serialize;

use super::ColonialCoding;
use crate::flowledger::BilateralFlow;
use crate::ingest::{CountryEntity, IndicatorTable};

/// One corridor with outcomes and log covariates.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GravityObservation {
    pub origin: CountryEntity,
    pub destination: CountryEntity,
    pub value: u64,
    pub count: u64,
    pub log_pop_o: f64,
    pub log_pop_d: f64,
    pub log_gdppc_o: f64,
    pub log_gdppc_d: f64,
    pub colonial_tie: bool,
}

impl GravityObservation {
    pub fn origin_cluster(&self) -> &str {
        &self.origin.stats_code
    }

    pub fn destination_cluster(&self) -> &str {
        &self.destination.stats_code
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ExcludedCorridor {
    pub origin: CountryEntity,
    pub destination: CountryEntity,
    pub value: u64,
    pub reason: String,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct GravityDataset {
    pub observations: Vec<GravityObservation>,
    pub excluded: Vec<ExcludedCorridor>,
}

impl GravityDataset {
    /// Corridors usable on a log-value outcome.
    pub fn ols_sample(&self) -> Vec<GravityObservation> {
        self.observations.iter().filter(|o| o.value > 0).cloned().collect()
    }

    pub fn ppml_sample(&self) -> &[GravityObservation] {
        &self.observations
    }

    pub fn zero_value_corridors(&self) -> usize {
        self.observations.iter().filter(|o| o.value == 0).count()
    }
}

fn covariates(ind: &IndicatorTable, c: &CountryEntity) -> Result<(f64, f64), String> {
    let pop = ind.population(c).ok_or_else(|| format!("{c}: no population"))?;
    let gdppc = ind.gdp_per_capita(c).ok_or_else(|| format!("{c}: no GDP per capita"))?;
    let (lp, lg) = (pop.ln(), gdppc.ln());
    if !lp.is_finite() || !lg.is_finite() {
        return Err(format!("{c}: non-positive indicator"));
    }
    Ok((lp, lg))
}

/// One row per corridor whose endpoints both have population and GDP per
/// capita. Other corridors are listed in `excluded`.
pub fn build_gravity_dataset(
    flows: &[BilateralFlow],
    indicators: &IndicatorTable,
    coding: &ColonialCoding,
) -> GravityDataset {
    let mut out = GravityDataset::default();
    for f in flows {
        let o = covariates(indicators, &f.origin);
        let d = covariates(indicators, &f.destination);
        match (o, d) {
            (Ok((log_pop_o, log_gdppc_o)), Ok((log_pop_d, log_gdppc_d))) => {
                out.observations.push(GravityObservation {
                    origin: f.origin.clone(),
                    destination: f.destination.clone(),
                    value: f.total_value,
                    count: f.player_count,
                    log_pop_o,
                    log_pop_d,
                    log_gdppc_o,
                    log_gdppc_d,
                    colonial_tie: coding.tie(&f.origin, &f.destination),
                })
            }
            (o, d) => {
                let reason = [o.err(), d.err()].into_iter().flatten().collect::<Vec<_>>().join("; ");
                log::debug!("gravity: dropping {} -> {}: {reason}", f.origin, f.destination);
                out.excluded.push(ExcludedCorridor {
                    origin: f.origin.clone(),
                    destination: f.destination.clone(),
                    value: f.total_value,
                    reason,
                });
            }
        }
    }
    out
}
