//! Minimum monochromatic path partitions of finite coloured complete graphs.

pub mod exact;
pub mod heuristic;
pub mod sweep;

pub use exact::{exists_within, min_partition, ExactSolver, PathTables, SolveError, SolveResult, DEFAULT_CAP, HARD_CAP};
pub use heuristic::heuristic_partition;
pub use sweep::{
    colouring_digits, colouring_from_index, histogram_csv, sweep_colourings, CanonicalClass, SweepConfig, SweepError,
    SweepSummary,
};
