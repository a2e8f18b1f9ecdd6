//! Bilateral accounting of football talent that moves between national teams
//! through dual citizenship.
//!
//! The pipeline runs from raw player rosters to corridor flows, country
//! summaries, a Best XI counterfactual, and gravity regressions with a
//! colonial-tie covariate:
//!
//! ```text
//! ingest ──> flowledger ──> counterfactual
//!                │
//!                └──> gravity ──> estimators
//! ```
//!
//! [`report`] ties the stages together behind the `legdrain` command-line tool.

pub mod counterfactual;
pub mod error;
pub mod estimators;
pub mod flowledger;
pub mod gravity;
pub mod ingest;
pub mod report;

pub use error::{Error, Result};
