//! Gravity estimation of bilateral corridors with a colonial-tie covariate.

mod colonial;
mod dataset;
mod specs;
pub mod synthetic;
mod table;

pub use colonial::{coloniser_summary, colony_losses, ColonialCoding, ColonialPair, ColoniserRow, ColonyLoss};
pub use dataset::{build_gravity_dataset, ExcludedCorridor, GravityDataset, GravityObservation};
pub use specs::{
    gravity_design, run_specifications, GravityColumn, GravityResults, Outcome, Specification, COLONIAL,
    LOG_GDPPC_D, LOG_GDPPC_O, LOG_POP_D, LOG_POP_O, SPECIFICATIONS,
};
pub use table::{RegressionCell, RegressionTable, TableColumn};
