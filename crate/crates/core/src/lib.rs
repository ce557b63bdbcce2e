//! Partitions of edge-coloured complete graphs into monochromatic paths.
//!
//! Finite graphs are handled exactly ([`solver`]); countable ones through
//! depth-bounded constructions ([`construct`]) that emit prefix
//! certificates checked by [`verify`].

pub mod colourings;
pub mod construct;
pub mod graph;
pub mod htype;
pub mod oracle;
pub mod path;
pub mod solver;
pub mod verify;

pub use colourings::ColouringSpec;
pub use graph::{ColouredGraph, Colour, FiniteColouredGraph, LazyColouredGraph, Periodicity, Vertex};
pub use htype::{HKind, HTypeGraph};
pub use oracle::{LargeSetOracle, OracleKind, SetDescriptor};
pub use path::{OmegaPathStream, PathSeq};
pub use solver::{heuristic_partition, min_partition, SolveResult};
pub use verify::{
    verify_certificate, verify_partition, verify_path, Mode, PathPartition, PrefixCertificate, Report, Status,
};
