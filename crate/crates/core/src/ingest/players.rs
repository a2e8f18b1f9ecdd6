use std::cmp::Ordering;
use std::collections::{BTreeMap, HashSet};
use std::fmt;
use std::io::Read;
use std::path::Path;

use log::warn;
use serde::{Deserialize, Serialize};

use super::citizenship::parse_citizenship;
use super::country::{CountryEntity, CountryResolver};
use crate::error::{Error, Result};

/// Opaque player identifier. Purely numeric ids order numerically and sort
/// before any non-numeric id.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct PlayerId(pub String);

impl PlayerId {
    fn numeric(&self) -> Option<u128> {
        self.0.parse().ok()
    }
}

impl Ord for PlayerId {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self.numeric(), other.numeric()) {
            (Some(a), Some(b)) => a.cmp(&b).then_with(|| self.0.cmp(&other.0)),
            (Some(_), None) => Ordering::Less,
            (None, Some(_)) => Ordering::Greater,
            (None, None) => self.0.cmp(&other.0),
        }
    }
}

impl PartialOrd for PlayerId {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for PlayerId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl From<&str> for PlayerId {
    fn from(s: &str) -> Self {
        PlayerId(s.to_owned())
    }
}

/// One roster row as read from the source file, before validation.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct RawPlayerRow {
    pub player_id: String,
    pub name: String,
    pub citizenship_raw: String,
    pub market_value: Option<f64>,
    pub position: Option<String>,
    pub age: Option<u32>,
    pub club: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PlayerRecord {
    pub player_id: PlayerId,
    pub name: String,
    pub primary_citizenship: CountryEntity,
    pub secondary_citizenship: Option<CountryEntity>,
    /// Whole euros. A blank source value is stored as zero.
    pub market_value: u64,
    pub position: Option<String>,
    pub age: Option<u32>,
    pub club: Option<String>,
}

impl PlayerRecord {
    pub fn is_dual(&self) -> bool {
        self.secondary_citizenship.is_some()
    }

    /// Country the player is assigned to when nobody switches allegiance.
    pub fn origin(&self) -> &CountryEntity {
        self.secondary_citizenship.as_ref().unwrap_or(&self.primary_citizenship)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SkippedRow {
    /// 1-based data row number (header excluded).
    pub row: usize,
    pub player_id: Option<String>,
    pub reason: String,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct IngestReport {
    pub total_rows: usize,
    pub valid_rows: usize,
    pub skipped: Vec<SkippedRow>,
    pub dual_citizens: usize,
    pub missing_market_values: usize,
    /// Rows listing three or more citizenships; only the first two were kept.
    pub truncated_citizenships: usize,
    /// Rows whose two citizenships resolved to the same entity; the secondary was dropped.
    pub collapsed_duplicates: usize,
    /// Unresolved country names with their number of occurrences.
    pub unmatched_countries: BTreeMap<String, usize>,
}

const REQUIRED: [&str; 4] = ["id", "name", "citizenship", "market_value_eur"];

struct Columns {
    id: usize,
    name: usize,
    citizenship: usize,
    value: usize,
    position: Option<usize>,
    age: Option<usize>,
    club: Option<usize>,
}

impl Columns {
    fn locate(headers: &csv::StringRecord, origin: &Path) -> Result<Self> {
        let find = |name: &str| headers.iter().position(|h| h.trim().eq_ignore_ascii_case(name));
        let mut req = Vec::with_capacity(REQUIRED.len());
        for name in REQUIRED {
            req.push(find(name).ok_or_else(|| Error::MissingColumn {
                path: origin.to_path_buf(),
                column: name.to_owned(),
            })?);
        }
        Ok(Columns {
            id: req[0],
            name: req[1],
            citizenship: req[2],
            value: req[3],
            position: find("position"),
            age: find("age"),
            club: find("club"),
        })
    }

    fn extract(&self, rec: &csv::StringRecord) -> std::result::Result<RawPlayerRow, String> {
        let get = |i: usize| rec.get(i).map(str::trim).unwrap_or("");
        let opt = |i: Option<usize>| i.map(get).filter(|s| !s.is_empty()).map(str::to_owned);
        let value_raw = get(self.value);
        let market_value = if value_raw.is_empty() {
            None
        } else {
            Some(value_raw.parse::<f64>().map_err(|_| format!("unparsable market value `{value_raw}`"))?)
        };
        Ok(RawPlayerRow {
            player_id: get(self.id).to_owned(),
            name: get(self.name).to_owned(),
            citizenship_raw: get(self.citizenship).to_owned(),
            market_value,
            position: opt(self.position),
            age: opt(self.age).and_then(|a| a.parse().ok()),
            club: opt(self.club),
        })
    }
}

/// Validates one raw row against the resolver, updating report counters.
fn validate(
    raw: RawPlayerRow,
    resolver: &CountryResolver,
    report: &mut IngestReport,
) -> std::result::Result<PlayerRecord, String> {
    if raw.player_id.is_empty() {
        return Err("empty player id".into());
    }
    let market_value = match raw.market_value {
        None => {
            report.missing_market_values += 1;
            0
        }
        Some(v) if v.is_finite() && v >= 0.0 => v.round() as u64,
        Some(v) => return Err(format!("invalid market value {v}")),
    };
    let cit = parse_citizenship(&raw.player_id, &raw.citizenship_raw).map_err(|e| e.to_string())?;
    if cit.truncated {
        report.truncated_citizenships += 1;
    }
    let mut resolve = |name: &str| {
        let res = resolver.resolve(name);
        if !res.matched {
            *report.unmatched_countries.entry(name.to_owned()).or_default() += 1;
        }
        res.entity
    };
    let primary = resolve(&cit.primary);
    let mut secondary = cit.secondary.as_deref().map(&mut resolve);
    if secondary.as_ref().is_some_and(|s| s.stats_code == primary.stats_code) {
        report.collapsed_duplicates += 1;
        secondary = None;
    }
    Ok(PlayerRecord {
        player_id: PlayerId(raw.player_id),
        name: raw.name,
        primary_citizenship: primary,
        secondary_citizenship: secondary,
        market_value,
        position: raw.position,
        age: raw.age,
        club: raw.club,
    })
}

/// Reads a comma-separated roster with columns
/// `id,name,citizenship,market_value_eur,position,age,club`.
///
/// Malformed rows are skipped and listed in the report; input order is preserved.
pub fn read_players<R: Read>(
    reader: R,
    resolver: &CountryResolver,
    origin: &Path,
) -> Result<(Vec<PlayerRecord>, IngestReport)> {
    let mut rdr = csv::ReaderBuilder::new().flexible(true).from_reader(reader);
    let headers = rdr.headers().map_err(|e| Error::csv(origin, e))?.clone();
    let cols = Columns::locate(&headers, origin)?;

    let mut report = IngestReport::default();
    let mut players = Vec::new();
    let mut seen = HashSet::new();
    let mut record = csv::StringRecord::new();
    loop {
        let more = match rdr.read_record(&mut record) {
            Ok(more) => more,
            Err(e) if e.is_io_error() => return Err(Error::csv(origin, e)),
            Err(e) => {
                report.total_rows += 1;
                skip(&mut report, None, format!("unreadable row: {e}"));
                continue;
            }
        };
        if !more {
            break;
        }
        report.total_rows += 1;
        let raw = match cols.extract(&record) {
            Ok(raw) => raw,
            Err(reason) => {
                let id = record.get(cols.id).map(str::to_owned);
                skip(&mut report, id, reason);
                continue;
            }
        };
        if !raw.player_id.is_empty() && !seen.insert(raw.player_id.clone()) {
            let id = raw.player_id.clone();
            skip(&mut report, Some(id), "duplicate player id".into());
            continue;
        }
        let id = raw.player_id.clone();
        match validate(raw, resolver, &mut report) {
            Ok(p) => {
                if p.is_dual() {
                    report.dual_citizens += 1;
                }
                report.valid_rows += 1;
                players.push(p);
            }
            Err(reason) => skip(&mut report, Some(id), reason),
        }
    }
    Ok((players, report))
}

fn skip(report: &mut IngestReport, player_id: Option<String>, reason: String) {
    let row = report.total_rows;
    warn!("skipping player row {row} ({}): {reason}", player_id.as_deref().unwrap_or("?"));
    report.skipped.push(SkippedRow { row, player_id, reason });
}

pub fn load_players(path: &Path, resolver: &CountryResolver) -> Result<(Vec<PlayerRecord>, IngestReport)> {
    let file = std::fs::File::open(path).map_err(|e| Error::io(path, e))?;
    read_players(std::io::BufReader::new(file), resolver, path)
}
