use std::collections::{BTreeMap, BTreeSet, HashSet};
use std::io::Read;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::flowledger::BilateralFlow;
use crate::ingest::{CountryEntity, CountryResolver};

const BUNDLED_CODING: &str = include_str!("../../data/colonial.csv");

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ColonialPair {
    pub colony: CountryEntity,
    pub coloniser: CountryEntity,
}

/// Former colony → coloniser relationships.
///
/// A corridor carries a tie when its origin is the colony and its destination
/// belongs to the coloniser's sovereign state, so ties to the United Kingdom
/// apply to England, Scotland, Wales and Northern Ireland alike.
#[derive(Debug, Clone, PartialEq)]
pub struct ColonialCoding {
    pairs: Vec<ColonialPair>,
    keys: HashSet<(String, String)>,
}

#[derive(Deserialize)]
struct Row {
    colony: String,
    coloniser: String,
}

fn key(colony: &CountryEntity, coloniser: &CountryEntity) -> (String, String) {
    (colony.stats_code.clone(), coloniser.sovereign_code().to_owned())
}

impl ColonialCoding {
    pub fn from_pairs(pairs: Vec<ColonialPair>) -> Result<Self> {
        let mut keys = HashSet::new();
        for p in &pairs {
            if p.colony.stats_code == p.coloniser.stats_code {
                return Err(Error::Config(format!("{} coded as its own colony", p.colony)));
            }
            if !keys.insert(key(&p.colony, &p.coloniser)) {
                return Err(Error::DuplicateColonialPair {
                    colony: p.colony.display_name.clone(),
                    coloniser: p.coloniser.display_name.clone(),
                });
            }
        }
        for p in &pairs {
            if keys.contains(&(p.coloniser.stats_code.clone(), p.colony.sovereign_code().to_owned())) {
                return Err(Error::Config(format!("{} and {} coded as colonies of each other", p.colony, p.coloniser)));
            }
        }
        Ok(ColonialCoding { pairs, keys })
    }

    /// Reads `colony,coloniser` rows, resolving both names.
    pub fn from_reader<R: Read>(reader: R, resolver: &CountryResolver, origin: &Path) -> Result<Self> {
        let mut rdr = csv::ReaderBuilder::new().trim(csv::Trim::All).from_reader(reader);
        let mut pairs = Vec::new();
        let mut unresolved = BTreeSet::new();
        for row in rdr.deserialize::<Row>() {
            let row = row.map_err(|e| Error::csv(origin, e))?;
            let colony = resolver.resolve(&row.colony);
            let coloniser = resolver.resolve(&row.coloniser);
            for r in [&colony, &coloniser] {
                if !r.matched {
                    unresolved.insert(r.entity.display_name.clone());
                }
            }
            pairs.push(ColonialPair { colony: colony.entity, coloniser: coloniser.entity });
        }
        if !unresolved.is_empty() {
            return Err(Error::UnresolvedColonialNames { names: unresolved.into_iter().collect() });
        }
        Self::from_pairs(pairs)
    }

    pub fn load(path: &Path, resolver: &CountryResolver) -> Result<Self> {
        let file = std::fs::File::open(path).map_err(|e| Error::io(path, e))?;
        Self::from_reader(file, resolver, path)
    }

    /// The coding shipped with the crate: eight European colonisers.
    pub fn bundled(resolver: &CountryResolver) -> Result<Self> {
        Self::from_reader(BUNDLED_CODING.as_bytes(), resolver, Path::new("<bundled colonial coding>"))
    }

    pub fn pairs(&self) -> &[ColonialPair] {
        &self.pairs
    }

    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }

    pub fn tie(&self, origin: &CountryEntity, destination: &CountryEntity) -> bool {
        self.keys.contains(&(origin.stats_code.clone(), destination.sovereign_code().to_owned()))
    }

    /// Colonisers in order of first appearance.
    pub fn colonisers(&self) -> Vec<&CountryEntity> {
        let mut seen = HashSet::new();
        self.pairs.iter().map(|p| &p.coloniser).filter(|c| seen.insert(c.sovereign_code())).collect()
    }

    pub fn counts_by_coloniser(&self) -> BTreeMap<String, usize> {
        let mut out = BTreeMap::new();
        for p in &self.pairs {
            *out.entry(p.coloniser.display_name.clone()).or_default() += 1;
        }
        out
    }

    /// Territories listed under more than one coloniser.
    pub fn dual_coded(&self) -> Vec<&CountryEntity> {
        let mut counts: BTreeMap<&str, (usize, &CountryEntity)> = BTreeMap::new();
        for p in &self.pairs {
            counts.entry(p.colony.stats_code.as_str()).or_insert((0, &p.colony)).0 += 1;
        }
        counts.into_values().filter(|(n, _)| *n > 1).map(|(_, c)| c).collect()
    }

    pub fn is_dual_coded(&self, colony: &CountryEntity) -> bool {
        self.pairs.iter().filter(|p| p.colony.stats_code == colony.stats_code).count() > 1
    }

    /// The coding with every pair of one coloniser removed.
    pub fn without_coloniser(&self, coloniser: &CountryEntity) -> Self {
        let pairs: Vec<_> = self
            .pairs
            .iter()
            .filter(|p| p.coloniser.sovereign_code() != coloniser.sovereign_code())
            .cloned()
            .collect();
        Self::from_pairs(pairs).expect("a subset of a valid coding is valid")
    }
}

/// One row of the coloniser table.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ColoniserRow {
    pub coloniser: CountryEntity,
    /// Colonies with at least one player flowing to this coloniser.
    pub colonies: usize,
    pub players: u64,
    /// All dual-citizen inflows into the coloniser.
    pub total_gained: u64,
    /// Inflows from its own former colonies.
    pub colonial_value: u64,
    pub share: f64,
}

/// Per-coloniser inflows, sorted by colonial value descending. Colonisers
/// without any colonial inflow are still listed.
pub fn coloniser_summary(flows: &[BilateralFlow], coding: &ColonialCoding) -> Vec<ColoniserRow> {
    let mut rows: Vec<ColoniserRow> = coding
        .colonisers()
        .into_iter()
        .map(|c| {
            let sovereign = c.sovereign_code();
            let mut colonies = BTreeSet::new();
            let (mut players, mut total, mut colonial) = (0, 0, 0);
            for f in flows.iter().filter(|f| f.destination.sovereign_code() == sovereign) {
                total += f.total_value;
                if coding.tie(&f.origin, &f.destination) {
                    colonies.insert(f.origin.stats_code.as_str());
                    players += f.player_count;
                    colonial += f.total_value;
                }
            }
            ColoniserRow {
                coloniser: c.clone(),
                colonies: colonies.len(),
                players,
                total_gained: total,
                colonial_value: colonial,
                share: if total > 0 { colonial as f64 / total as f64 } else { 0.0 },
            }
        })
        .collect();
    rows.sort_by(|a, b| {
        b.colonial_value
            .cmp(&a.colonial_value)
            .then_with(|| a.coloniser.display_name.cmp(&b.coloniser.display_name))
    });
    rows
}

/// Value each coded colony lost to its own coloniser. Dual-coded colonies
/// produce one row per coloniser.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ColonyLoss {
    pub colony: CountryEntity,
    pub coloniser: CountryEntity,
    pub players: u64,
    pub value_lost: u64,
}

pub fn colony_losses(flows: &[BilateralFlow], coding: &ColonialCoding) -> Vec<ColonyLoss> {
    coding
        .pairs()
        .iter()
        .map(|p| {
            let (players, value_lost) = flows
                .iter()
                .filter(|f| {
                    f.origin.stats_code == p.colony.stats_code
                        && f.destination.sovereign_code() == p.coloniser.sovereign_code()
                })
                .fold((0, 0), |(n, v), f| (n + f.player_count, v + f.total_value));
            ColonyLoss { colony: p.colony.clone(), coloniser: p.coloniser.clone(), players, value_lost }
        })
        .collect()
}
