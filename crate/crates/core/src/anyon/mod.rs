//! Colored bosons as anyons: statistics derived from the spin model, loop
//! construction and geometric braid phases.

mod braid;
mod config;
mod loops;
mod oracle;
mod statistics;

pub use braid::{accumulate_phase, check_loops_microscopically, BraidOutcome, LoopCheck, PairWinding};
pub use config::{AnyonConfig, BraidSchedule, Move, ScheduleDocument, BRAID_SCHEMA};
pub use loops::{
    encloses, face_boundary, find_loop, plaquettes_around, shortest_path, winding_number,
    MAX_TRACKED,
};
pub use oracle::{
    commutation_sign, derive_exchange_phase, derive_monodromy_phase, derive_statistics,
    exchange_phase_on, micro_loop_phase, monodromy_cluster, monodromy_phase_on,
    monodromy_regions, path_string, star_cluster, transport_string, ExchangeDerivation,
    MicroTracker, MonodromyDerivation, StatisticsDerivation,
};
pub use statistics::StatisticsTable;

#[cfg(test)]
mod tests;
