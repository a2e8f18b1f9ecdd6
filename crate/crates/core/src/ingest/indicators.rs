use std::collections::BTreeMap;
use std::io::Read;
use std::path::Path;

use log::warn;
use serde::Serialize;

use super::country::CountryEntity;
use crate::error::{Error, Result};

pub const POPULATION: &str = "SP.POP.TOTL";
pub const GDP: &str = "NY.GDP.MKTP.CD";
pub const GDP_PER_CAPITA: &str = "NY.GDP.PCAP.CD";

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct IndicatorValue {
    pub value: f64,
    pub year: i32,
}

/// Indicator values for one WDI code. Every stored value is strictly positive.
#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct IndicatorEntry {
    pub population: Option<IndicatorValue>,
    /// Current USD.
    pub gdp: Option<IndicatorValue>,
    /// Current USD.
    pub gdp_per_capita: Option<IndicatorValue>,
}

impl IndicatorEntry {
    fn slot(&mut self, indicator: &str) -> Option<&mut Option<IndicatorValue>> {
        match indicator {
            POPULATION => Some(&mut self.population),
            GDP => Some(&mut self.gdp),
            GDP_PER_CAPITA => Some(&mut self.gdp_per_capita),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct IndicatorTable {
    entries: BTreeMap<String, IndicatorEntry>,
}

impl IndicatorTable {
    pub fn new() -> Self {
        Self::default()
    }

    /// Inserts a complete entry dated `year`. Non-positive values are left missing.
    pub fn insert(&mut self, code: &str, population: f64, gdp: f64, gdp_per_capita: f64, year: i32) {
        let v = |value: f64| (value > 0.0 && value.is_finite()).then_some(IndicatorValue { value, year });
        self.entries.insert(
            code.to_owned(),
            IndicatorEntry { population: v(population), gdp: v(gdp), gdp_per_capita: v(gdp_per_capita) },
        );
    }

    pub fn get(&self, wdi_code: &str) -> Option<&IndicatorEntry> {
        self.entries.get(wdi_code)
    }

    pub fn codes(&self) -> impl Iterator<Item = &str> {
        self.entries.keys().map(String::as_str)
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    fn lookup(&self, country: &CountryEntity, pick: fn(&IndicatorEntry) -> Option<IndicatorValue>) -> Option<f64> {
        country.wdi_code.as_deref().and_then(|c| self.get(c)).and_then(pick).map(|v| v.value)
    }

    pub fn population(&self, country: &CountryEntity) -> Option<f64> {
        self.lookup(country, |e| e.population)
    }

    pub fn gdp(&self, country: &CountryEntity) -> Option<f64> {
        self.lookup(country, |e| e.gdp)
    }

    pub fn gdp_per_capita(&self, country: &CountryEntity) -> Option<f64> {
        self.lookup(country, |e| e.gdp_per_capita)
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct IndicatorReport {
    pub rows: usize,
    pub malformed_rows: usize,
    /// Rows for other years or other indicators.
    pub ignored_rows: usize,
    /// code×indicator cells filled from the fallback year.
    pub fallback_cells: usize,
    /// code×indicator cells present in the file with neither year usable.
    pub missing_cells: usize,
}

/// Reads long-format indicators (`country_code,indicator,year,value`),
/// preferring `year` and falling back to `fallback` when the preferred value
/// is absent or non-positive.
pub fn read_indicators<R: Read>(
    reader: R,
    year: i32,
    fallback: i32,
    origin: &Path,
) -> Result<(IndicatorTable, IndicatorReport)> {
    let mut rdr = csv::ReaderBuilder::new().flexible(true).trim(csv::Trim::All).from_reader(reader);
    let headers = rdr.headers().map_err(|e| Error::csv(origin, e))?.clone();
    let col = |name: &str| {
        headers.iter().position(|h| h.eq_ignore_ascii_case(name)).ok_or_else(|| Error::MissingColumn {
            path: origin.to_path_buf(),
            column: name.to_owned(),
        })
    };
    let (c_code, c_ind, c_year, c_val) = (col("country_code")?, col("indicator")?, col("year")?, col("value")?);

    // (code, indicator) -> (preferred, fallback)
    let mut cells: BTreeMap<(String, String), (Option<f64>, Option<f64>)> = BTreeMap::new();
    let mut report = IndicatorReport::default();
    for rec in rdr.records() {
        report.rows += 1;
        let rec = match rec {
            Ok(r) => r,
            Err(e) if e.is_io_error() => return Err(Error::csv(origin, e)),
            Err(e) => {
                warn!("skipping indicator row {}: {e}", report.rows);
                report.malformed_rows += 1;
                continue;
            }
        };
        let field = |i: usize| rec.get(i).unwrap_or("");
        let code = field(c_code);
        let indicator = field(c_ind);
        let Ok(row_year) = field(c_year).parse::<i32>() else {
            report.malformed_rows += 1;
            continue;
        };
        if code.is_empty() || ![POPULATION, GDP, GDP_PER_CAPITA].contains(&indicator) || (row_year != year && row_year != fallback) {
            report.ignored_rows += 1;
            continue;
        }
        // Blank or ".." cells are absent values, not malformed rows.
        let value = field(c_val).parse::<f64>().ok().filter(|v| v.is_finite() && *v > 0.0);
        let cell = cells.entry((code.to_owned(), indicator.to_owned())).or_default();
        if row_year == year {
            cell.0 = cell.0.or(value);
        } else {
            cell.1 = cell.1.or(value);
        }
    }

    let mut table = IndicatorTable::new();
    for ((code, indicator), (preferred, fb)) in cells {
        let chosen = match (preferred, fb) {
            (Some(v), _) => Some(IndicatorValue { value: v, year }),
            (None, Some(v)) => {
                report.fallback_cells += 1;
                Some(IndicatorValue { value: v, year: fallback })
            }
            (None, None) => {
                report.missing_cells += 1;
                None
            }
        };
        if let Some(v) = chosen {
            let entry = table.entries.entry(code).or_default();
            if let Some(slot) = entry.slot(&indicator) {
                *slot = Some(v);
            }
        }
    }
    Ok((table, report))
}

pub fn load_indicators(path: &Path, year: i32, fallback: i32) -> Result<(IndicatorTable, IndicatorReport)> {
    let file = std::fs::File::open(path).map_err(|e| Error::io(path, e))?;
    read_indicators(std::io::BufReader::new(file), year, fallback, path)
}
