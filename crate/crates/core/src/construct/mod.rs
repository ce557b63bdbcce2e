//! Depth-bounded runs of the ω-constructions.
//!
//! Every "infinite set" hypothesis is checked as "at least `witness`
//! elements below `horizon`"; a check that cannot be completed inside the
//! horizon is recorded as unverified instead of being assumed.

mod config;
mod cover;
mod rado;
mod split;
mod stitch;
mod uftrick;
mod zigzag;

use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

pub use config::{find_configuration, verify_configuration, ConfigParams, Configuration};
pub use cover::{cover_from, CoverParams};
pub use rado::{rado_cover, RadoParams, RadoRun};
pub use split::{ultrafilter_split, SplitParams, SplitResult};
pub use stitch::{stitch, StitchError};
pub use uftrick::{uftrick_partition, UftrickParams, UftrickResult};
pub use zigzag::{zigzag_certificate, zigzag_htype, ZigZag};

use crate::graph::{ColouredGraph, Vertex};
use crate::oracle::OracleError;
use crate::path::PathSeq;

/// Default number of elements an "infinite" set must show below the horizon.
pub const DEFAULT_WITNESS: usize = 8;

#[derive(Debug, thiserror::Error)]
pub enum ConstructError {
    #[error(transparent)]
    Oracle(#[from] OracleError),
    #[error("precondition failed: {0}")]
    Precondition(String),
    #[error("no colour-{colour} path from {from} to {to} avoiding {avoid:?} below horizon {horizon}")]
    Linkage { from: Vertex, to: Vertex, colour: usize, avoid: Vec<Vertex>, horizon: usize },
    #[error("bad set descriptor: {0}")]
    Descriptor(String),
}

/// One sampled "this set is infinite" check.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct WitnessCheck {
    /// The finite set whose common neighbourhood was counted.
    pub set: Vec<Vertex>,
    /// `None` when any colour counts.
    pub colour: Option<usize>,
    /// Elements found below the horizon (counting stops at the requirement).
    pub found: usize,
    pub required: usize,
}

impl WitnessCheck {
    pub fn passed(&self) -> bool {
        self.found >= self.required
    }
}

/// Smallest vertex below `horizon`, not rejected by `used`, joined to `last`
/// in the stream's colour (any colour when `None`).
pub(crate) fn extension_witness<G: ColouredGraph + ?Sized>(
    g: &G,
    last: Vertex,
    colour: Option<usize>,
    horizon: usize,
    used: impl Fn(Vertex) -> bool,
) -> Option<Vertex> {
    (0..horizon).find(|&w| {
        !used(w)
            && match colour {
                Some(c) => g.edge_colour(last, w) == Some(c),
                None => g.is_edge(last, w),
            }
    })
}

/// Witnesses for every stream, in stream order.
pub(crate) fn stream_witnesses<G: ColouredGraph + ?Sized>(
    g: &G,
    streams: &[PathSeq],
    horizon: usize,
    used: &dyn Fn(Vertex) -> bool,
) -> Vec<Option<Vertex>> {
    streams
        .iter()
        .map(|s| s.last().and_then(|last| extension_witness(g, last, s.colour, horizon, used)))
        .collect()
}

/// A random subset of `pool` with between 1 and `max` elements, sorted.
pub(crate) fn sample_subset(rng: &mut ChaCha8Rng, pool: &[Vertex], max: usize) -> Vec<Vertex> {
    if pool.is_empty() {
        return Vec::new();
    }
    let size = rng.gen_range(1..=max.min(pool.len()).max(1));
    let mut set: Vec<Vertex> = pool.choose_multiple(rng, size).copied().collect();
    set.sort_unstable();
    set
}
