use std::collections::HashMap;
use std::fmt;
use std::io::Read;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

const BUNDLED_TABLE: &str = include_str!("../../data/countries.csv");
const BUNDLED_OVERRIDES: &str = include_str!("../../data/overrides.csv");

/// A footballing country as it appears in the roster data.
///
/// `stats_code` identifies the entity in flow accounting (ISO 3166-1 alpha-3,
/// or a special token such as `ENG` for entities without one). `wdi_code` is
/// the code used for indicator lookups and is absent for territories the
/// World Bank does not report separately.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct CountryEntity {
    pub display_name: String,
    pub stats_code: String,
    pub wdi_code: Option<String>,
}

impl CountryEntity {
    pub fn new(display_name: &str, stats_code: &str, wdi_code: Option<&str>) -> Self {
        CountryEntity {
            display_name: display_name.to_owned(),
            stats_code: stats_code.to_owned(),
            wdi_code: wdi_code.map(str::to_owned),
        }
    }

    /// The sovereign state the entity belongs to for indicator purposes:
    /// England, Scotland and Wales all map to `GBR`.
    pub fn sovereign_code(&self) -> &str {
        self.wdi_code.as_deref().unwrap_or(&self.stats_code)
    }
}

impl fmt::Display for CountryEntity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.display_name)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Resolution {
    pub entity: CountryEntity,
    pub matched: bool,
}

/// Name → entity lookup through an override list, then the general table.
#[derive(Debug, Clone)]
pub struct CountryResolver {
    overrides: HashMap<String, CountryEntity>,
    table: HashMap<String, CountryEntity>,
}

#[derive(Deserialize)]
struct TableRow {
    display_name: String,
    stats_code: String,
    wdi_code: Option<String>,
    #[serde(default)]
    aliases: Option<String>,
}

fn fold(name: &str) -> String {
    name.split_whitespace().collect::<Vec<_>>().join(" ").to_lowercase()
}

fn read_rows<R: Read>(reader: R, origin: &Path) -> Result<Vec<TableRow>> {
    let mut rdr = csv::ReaderBuilder::new().trim(csv::Trim::All).from_reader(reader);
    rdr.deserialize()
        .map(|r| r.map_err(|e| Error::csv(origin, e)))
        .collect()
}

fn index_rows(rows: Vec<TableRow>, into: &mut HashMap<String, CountryEntity>) {
    for row in rows {
        let wdi = row.wdi_code.filter(|c| !c.is_empty());
        let entity = CountryEntity {
            display_name: row.display_name.clone(),
            stats_code: row.stats_code,
            wdi_code: wdi,
        };
        let aliases = row.aliases.unwrap_or_default();
        for alias in aliases.split('|').filter(|a| !a.trim().is_empty()) {
            into.insert(fold(alias), entity.clone());
        }
        into.insert(fold(&row.display_name), entity);
    }
}

impl CountryResolver {
    /// The bundled name table with the bundled home-nation overrides.
    pub fn bundled() -> Self {
        let mut table = HashMap::new();
        let mut overrides = HashMap::new();
        index_rows(
            read_rows(BUNDLED_TABLE.as_bytes(), Path::new("<bundled countries>"))
                .expect("bundled country table is valid"),
            &mut table,
        );
        index_rows(
            read_rows(BUNDLED_OVERRIDES.as_bytes(), Path::new("<bundled overrides>"))
                .expect("bundled override table is valid"),
            &mut overrides,
        );
        CountryResolver { overrides, table }
    }

    /// Adds overrides from a `display_name,stats_code,wdi_code` file. Later
    /// entries replace earlier ones with the same name.
    pub fn with_overrides<R: Read>(mut self, reader: R, origin: &Path) -> Result<Self> {
        index_rows(read_rows(reader, origin)?, &mut self.overrides);
        Ok(self)
    }

    pub fn with_override_file(self, path: &Path) -> Result<Self> {
        let file = std::fs::File::open(path).map_err(|e| Error::io(path, e))?;
        self.with_overrides(file, path)
    }

    pub fn resolve(&self, name: &str) -> Resolution {
        let key = fold(name);
        if let Some(e) = self.overrides.get(&key).or_else(|| self.table.get(&key)) {
            return Resolution { entity: e.clone(), matched: true };
        }
        let display = name.trim();
        Resolution {
            entity: CountryEntity::new(display, display, None),
            matched: false,
        }
    }

    pub fn resolve_country(&self, name: &str) -> CountryEntity {
        self.resolve(name).entity
    }
}

impl Default for CountryResolver {
    fn default() -> Self {
        Self::bundled()
    }
}
