//! Player roster and country-indicator ingestion.

mod citizenship;
mod country;
mod indicators;
mod players;

pub use citizenship::{parse_citizenship, Citizenship};
pub use country::{CountryEntity, CountryResolver, Resolution};
pub use indicators::{
    load_indicators, read_indicators, IndicatorEntry, IndicatorReport, IndicatorTable,
    IndicatorValue, GDP, GDP_PER_CAPITA, POPULATION,
};
pub use players::{
    load_players, read_players, IngestReport, PlayerId, PlayerRecord, RawPlayerRow, SkippedRow,
};
