//! Best XI squad values under actual rosters and under the no-migration
//! counterfactual, where every dual citizen plays for his secondary
//! citizenship instead.

use std::collections::BTreeMap;

use serde::Serialize;

use crate::ingest::{CountryEntity, IndicatorTable, PlayerId, PlayerRecord};

pub const SQUAD_SIZE: usize = 11;

/// Sum of the eleven largest values, or of all values for smaller rosters.
pub fn best_xi_value(values: &[u64]) -> u64 {
    let mut v = values.to_vec();
    v.sort_unstable_by(|a, b| b.cmp(a));
    v.iter().take(SQUAD_SIZE).sum()
}

/// Ranking order within a roster: value descending, then player id ascending.
fn rank(a: &PlayerRecord, b: &PlayerRecord) -> std::cmp::Ordering {
    b.market_value.cmp(&a.market_value).then_with(|| a.player_id.cmp(&b.player_id))
}

#[derive(Debug, Clone)]
pub struct BestXi<'a> {
    pub value: u64,
    pub members: Vec<&'a PlayerRecord>,
}

pub fn best_xi<'a>(roster: &[&'a PlayerRecord]) -> BestXi<'a> {
    let mut sorted = roster.to_vec();
    sorted.sort_by(|a, b| rank(a, b));
    sorted.truncate(SQUAD_SIZE);
    BestXi { value: sorted.iter().map(|p| p.market_value).sum(), members: sorted }
}

#[derive(Debug, Clone)]
pub struct Roster<'a> {
    pub country: CountryEntity,
    pub players: Vec<&'a PlayerRecord>,
}

/// Players grouped by national team, keyed by stats code.
#[derive(Debug, Clone, Default)]
pub struct Rosters<'a> {
    map: BTreeMap<String, Roster<'a>>,
}

impl<'a> Rosters<'a> {
    fn assign(players: &'a [PlayerRecord], team: impl Fn(&'a PlayerRecord) -> &'a CountryEntity) -> Self {
        let mut map: BTreeMap<String, Roster<'a>> = BTreeMap::new();
        for p in players {
            let c = team(p);
            map.entry(c.stats_code.clone())
                .or_insert_with(|| Roster { country: c.clone(), players: Vec::new() })
                .players
                .push(p);
        }
        Rosters { map }
    }

    pub fn get(&self, stats_code: &str) -> Option<&Roster<'a>> {
        self.map.get(stats_code)
    }

    pub fn players(&self, stats_code: &str) -> &[&'a PlayerRecord] {
        self.get(stats_code).map(|r| r.players.as_slice()).unwrap_or(&[])
    }

    pub fn iter(&self) -> impl Iterator<Item = &Roster<'a>> {
        self.map.values()
    }

    pub fn total_players(&self) -> usize {
        self.map.values().map(|r| r.players.len()).sum()
    }
}

/// Rosters as observed: everybody plays for his primary citizenship.
pub fn actual_rosters(players: &[PlayerRecord]) -> Rosters<'_> {
    Rosters::assign(players, |p| &p.primary_citizenship)
}

/// Counterfactual rosters: dual citizens move to their secondary citizenship.
pub fn reassign(players: &[PlayerRecord]) -> Rosters<'_> {
    Rosters::assign(players, PlayerRecord::origin)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TopPlayer {
    pub name: String,
    pub player_id: PlayerId,
    pub value: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BestXIResult {
    pub country: CountryEntity,
    pub actual_value: u64,
    pub counterfactual_value: u64,
    pub diff: i64,
    /// Percent change relative to the counterfactual squad.
    pub pct_change: Option<f64>,
    /// Diff in euros as a percentage of current-USD GDP.
    pub pct_of_gdp: Option<f64>,
    /// Most valuable player of the actual roster for gainers, of the
    /// counterfactual roster for losers.
    pub top_player: Option<TopPlayer>,
}

pub fn bestxi_table(players: &[PlayerRecord], indicators: &IndicatorTable) -> Vec<BestXIResult> {
    let actual = actual_rosters(players);
    let cf = reassign(players);
    let mut countries: BTreeMap<&str, &CountryEntity> = BTreeMap::new();
    for r in actual.iter().chain(cf.iter()) {
        countries.entry(r.country.stats_code.as_str()).or_insert(&r.country);
    }

    countries
        .into_iter()
        .map(|(code, country)| {
            let a = best_xi(actual.players(code));
            let c = best_xi(cf.players(code));
            let diff = a.value as i64 - c.value as i64;
            let shown = if diff < 0 { &c } else { &a };
            BestXIResult {
                country: country.clone(),
                actual_value: a.value,
                counterfactual_value: c.value,
                diff,
                pct_change: (c.value > 0).then(|| 100.0 * diff as f64 / c.value as f64),
                pct_of_gdp: indicators.gdp(country).map(|g| 100.0 * diff as f64 / g),
                top_player: shown.members.first().map(|p| TopPlayer {
                    name: p.name.clone(),
                    player_id: p.player_id.clone(),
                    value: p.market_value,
                }),
            }
        })
        .collect()
}

/// Countries whose squad gains, largest gain first.
pub fn gain_panel(results: &[BestXIResult], k: usize) -> Vec<&BestXIResult> {
    let mut v: Vec<_> = results.iter().filter(|r| r.diff > 0).collect();
    v.sort_by(|a, b| b.diff.cmp(&a.diff).then_with(|| a.country.stats_code.cmp(&b.country.stats_code)));
    v.truncate(k);
    v
}

/// Countries whose squad loses, largest loss first.
pub fn loss_panel(results: &[BestXIResult], k: usize) -> Vec<&BestXIResult> {
    let mut v: Vec<_> = results.iter().filter(|r| r.diff < 0).collect();
    v.sort_by(|a, b| a.diff.cmp(&b.diff).then_with(|| a.country.stats_code.cmp(&b.country.stats_code)));
    v.truncate(k);
    v
}
