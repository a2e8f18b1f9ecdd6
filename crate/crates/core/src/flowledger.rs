//! Corridor flows and per-country gross/net accounting.
//!
//! A dual citizen's market value moves from the secondary citizenship
//! (origin) to the primary citizenship (destination). All amounts are whole
//! euros held in integers, so conservation identities hold exactly.

use std::collections::{BTreeMap, BTreeSet};

use serde::Serialize;

use crate::ingest::{CountryEntity, IndicatorTable, PlayerRecord};

/// Directed origin → destination corridor.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BilateralFlow {
    pub origin: CountryEntity,
    pub destination: CountryEntity,
    pub player_count: u64,
    pub total_value: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CountrySummary {
    pub country: CountryEntity,
    pub gross_lost: u64,
    pub gross_gained: u64,
    pub net: i64,
    pub players_lost: u64,
    pub players_gained: u64,
    /// Net euros over current-USD GDP, no currency conversion.
    pub net_over_gdp: Option<f64>,
    /// Net euros per inhabitant.
    pub net_per_capita: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AggregateStats {
    pub total_players: u64,
    pub dual_players: u64,
    pub dual_share: Option<f64>,
    pub total_value: u64,
    pub dual_value: u64,
    pub dual_value_share: Option<f64>,
    pub country_count: usize,
}

/// Aggregates dual citizens into corridors sorted by (origin, destination) code.
pub fn build_flows(players: &[PlayerRecord]) -> Vec<BilateralFlow> {
    let mut corridors: BTreeMap<(&str, &str), BilateralFlow> = BTreeMap::new();
    for p in players {
        let Some(origin) = &p.secondary_citizenship else { continue };
        let dest = &p.primary_citizenship;
        if origin.stats_code == dest.stats_code {
            continue;
        }
        let flow = corridors
            .entry((origin.stats_code.as_str(), dest.stats_code.as_str()))
            .or_insert_with(|| BilateralFlow {
                origin: origin.clone(),
                destination: dest.clone(),
                player_count: 0,
                total_value: 0,
            });
        flow.player_count += 1;
        flow.total_value += p.market_value;
    }
    corridors.into_values().collect()
}

/// Summaries for every country that appears in at least one corridor.
pub fn country_summaries(flows: &[BilateralFlow], indicators: &IndicatorTable) -> Vec<CountrySummary> {
    country_summaries_with(flows, indicators, std::iter::empty())
}

/// As [`country_summaries`], additionally emitting zero rows for any country
/// in `universe` that no corridor touches. Sorted by stats code.
pub fn country_summaries_with<'a>(
    flows: &[BilateralFlow],
    indicators: &IndicatorTable,
    universe: impl IntoIterator<Item = &'a CountryEntity>,
) -> Vec<CountrySummary> {
    fn slot<'m>(acc: &'m mut BTreeMap<String, CountrySummary>, c: &CountryEntity) -> &'m mut CountrySummary {
        acc.entry(c.stats_code.clone()).or_insert_with(|| CountrySummary {
            country: c.clone(),
            gross_lost: 0,
            gross_gained: 0,
            net: 0,
            players_lost: 0,
            players_gained: 0,
            net_over_gdp: None,
            net_per_capita: None,
        })
    }
    let mut acc: BTreeMap<String, CountrySummary> = BTreeMap::new();
    for c in universe {
        slot(&mut acc, c);
    }
    for f in flows {
        let o = slot(&mut acc, &f.origin);
        o.gross_lost += f.total_value;
        o.players_lost += f.player_count;
        let d = slot(&mut acc, &f.destination);
        d.gross_gained += f.total_value;
        d.players_gained += f.player_count;
    }
    acc.into_values()
        .map(|mut s| {
            s.net = s.gross_gained as i64 - s.gross_lost as i64;
            s.net_over_gdp = indicators.gdp(&s.country).map(|g| s.net as f64 / g);
            s.net_per_capita = indicators.population(&s.country).map(|p| s.net as f64 / p);
            s
        })
        .collect()
}

pub fn aggregate_stats(players: &[PlayerRecord]) -> AggregateStats {
    let mut countries = BTreeSet::new();
    let (mut total_value, mut dual_value, mut dual_players) = (0u64, 0u64, 0u64);
    for p in players {
        total_value += p.market_value;
        countries.insert(p.primary_citizenship.stats_code.as_str());
        if let Some(s) = &p.secondary_citizenship {
            countries.insert(s.stats_code.as_str());
            dual_players += 1;
            dual_value += p.market_value;
        }
    }
    let total_players = players.len() as u64;
    let ratio = |num: u64, den: u64| (den > 0).then(|| num as f64 / den as f64);
    AggregateStats {
        total_players,
        dual_players,
        dual_share: ratio(dual_players, total_players),
        total_value,
        dual_value,
        dual_value_share: ratio(dual_value, total_value),
        country_count: countries.len(),
    }
}

/// Sum of net over countries; zero on any input.
pub fn net_balance(summaries: &[CountrySummary]) -> i64 {
    summaries.iter().map(|s| s.net).sum()
}
