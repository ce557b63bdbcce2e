//! Graphs of half-graph type over ω.
//!
//! Such a graph is given by two injective enumerations `a_ξ` (the main
//! class) and `b_ζ` with `a_ξ ~ b_ζ` exactly when `ξ <= ζ` and the two
//! vertices differ. In the disjoint kind the classes are the evens and odds;
//! in the identified kind the main class is the whole vertex set and `B ⊆ A`.

use std::fmt;
use std::sync::Arc;

use thiserror::Error;

use crate::graph::{ColourFn, ColouredGraph, Colour, GraphError, LazyColouredGraph, Periodicity, Vertex};

#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum HKind {
    Disjoint,
    Identified,
}

/// Injective affine enumeration `ξ ↦ stride·ξ + offset`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Enumeration {
    pub stride: usize,
    pub offset: usize,
}

impl Enumeration {
    pub const IDENTITY: Enumeration = Enumeration { stride: 1, offset: 0 };

    pub fn vertex(&self, index: usize) -> Vertex {
        self.stride * index + self.offset
    }

    pub fn index_of(&self, v: Vertex) -> Option<usize> {
        if v < self.offset || (v - self.offset) % self.stride != 0 {
            return None;
        }
        Some((v - self.offset) / self.stride)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum HTypeError {
    #[error("enumeration stride must be at least 1")]
    ZeroStride,
    #[error("identified kind needs the second class inside the main class")]
    NotIdentified,
    #[error("disjoint kind needs disjoint class ranges")]
    NotDisjoint,
    #[error("half-graph colouring needs a complete host without missing edges")]
    HostNotComplete,
    #[error(transparent)]
    Graph(#[from] GraphError),
}

/// Half-graph-type graph with a colouring of its cross edges given by index pairs.
#[derive(Clone)]
pub struct HTypeGraph {
    kind: HKind,
    a: Enumeration,
    b: Enumeration,
    r: usize,
    /// Colour of `a_ξ b_ζ`, called with `ξ <= ζ`.
    colour: ColourFn,
    /// Periodicity of the colouring in index space.
    periodicity: Option<Periodicity>,
}

impl fmt::Debug for HTypeGraph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("HTypeGraph")
            .field("kind", &self.kind)
            .field("a", &self.a)
            .field("b", &self.b)
            .field("r", &self.r)
            .finish()
    }
}

impl HTypeGraph {
    pub fn new(
        kind: HKind,
        a: Enumeration,
        b: Enumeration,
        r: usize,
        colour: ColourFn,
    ) -> Result<Self, HTypeError> {
        if a.stride == 0 || b.stride == 0 {
            return Err(HTypeError::ZeroStride);
        }
        if r == 0 {
            return Err(GraphError::NoColours.into());
        }
        match kind {
            HKind::Identified => {
                // every b_ζ must be some a_ξ
                if b.stride % a.stride != 0 || a.index_of(b.offset).is_none() {
                    return Err(HTypeError::NotIdentified);
                }
            }
            HKind::Disjoint => {
                // affine ranges are disjoint iff no common residue is reachable; check a window
                let span = a.stride * b.stride + a.offset + b.offset + 1;
                if (0..span).any(|x| b.index_of(a.vertex(x)).is_some()) {
                    return Err(HTypeError::NotDisjoint);
                }
            }
        }
        Ok(Self { kind, a, b, r, colour, periodicity: None })
    }

    /// The canonical disjoint `H_{ω,ω}`: `a_ξ = 2ξ`, `b_ζ = 2ζ + 1`.
    pub fn disjoint(r: usize, colour: ColourFn) -> Result<Self, HTypeError> {
        Self::new(
            HKind::Disjoint,
            Enumeration { stride: 2, offset: 0 },
            Enumeration { stride: 2, offset: 1 },
            r,
            colour,
        )
    }

    /// Disjoint `H_{ω,ω}` coloured by a lazy colouring applied to index pairs.
    pub fn disjoint_from(lazy: &LazyColouredGraph) -> Result<Self, HTypeError> {
        let mut h = Self::disjoint(lazy.colours(), lazy.colour_fn())?;
        h.periodicity = lazy.periodicity();
        Ok(h)
    }

    /// A complete colouring viewed as a graph of half-graph type with main
    /// class `V` and `a_n = b_n = n`.
    pub fn from_complete(lazy: &LazyColouredGraph) -> Result<Self, HTypeError> {
        if !lazy.missing(0).is_empty() || lazy.edge_colour(0, 1).is_none() {
            return Err(HTypeError::HostNotComplete);
        }
        let mut h = Self::new(
            HKind::Identified,
            Enumeration::IDENTITY,
            Enumeration::IDENTITY,
            lazy.colours(),
            lazy.colour_fn(),
        )?;
        h.periodicity = lazy.periodicity();
        Ok(h)
    }

    pub fn with_periodicity(mut self, periodicity: Periodicity) -> Self {
        self.periodicity = Some(periodicity);
        self
    }

    pub fn kind(&self) -> HKind {
        self.kind
    }

    pub fn a(&self, index: usize) -> Vertex {
        self.a.vertex(index)
    }

    pub fn b(&self, index: usize) -> Vertex {
        self.b.vertex(index)
    }

    pub fn a_index(&self, v: Vertex) -> Option<usize> {
        self.a.index_of(v)
    }

    pub fn b_index(&self, v: Vertex) -> Option<usize> {
        self.b.index_of(v)
    }

    pub fn periodicity(&self) -> Option<Periodicity> {
        self.periodicity
    }

    /// Colour of `a_ξ b_ζ` if that pair is an edge.
    pub fn cross_colour(&self, xi: usize, zeta: usize) -> Option<Colour> {
        if xi > zeta || self.a(xi) == self.b(zeta) {
            return None;
        }
        Some((self.colour)(xi, zeta))
    }

    /// Whether `b_ζ ∈ N(a_ξ, i)`.
    pub fn in_cross_neighbourhood(&self, xi: usize, colour: Colour, zeta: usize) -> bool {
        self.cross_colour(xi, zeta) == Some(colour)
    }
}

impl ColouredGraph for HTypeGraph {
    fn colours(&self) -> usize {
        self.r
    }

    fn order(&self) -> Option<usize> {
        None
    }

    fn edge_colour(&self, u: Vertex, v: Vertex) -> Option<Colour> {
        if u == v {
            return None;
        }
        let forward = self.a.index_of(u).zip(self.b.index_of(v)).and_then(|(x, z)| self.cross_colour(x, z));
        forward.or_else(|| self.a.index_of(v).zip(self.b.index_of(u)).and_then(|(x, z)| self.cross_colour(x, z)))
    }
}

/// Convenience constructor for index-space colourings.
pub fn index_colouring(f: impl Fn(usize, usize) -> Colour + Send + Sync + 'static) -> ColourFn {
    Arc::new(f)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn disjoint_edge_rule() {
        let h = HTypeGraph::disjoint(1, index_colouring(|_, _| 0)).unwrap();
        // a_1 = 2, b_1 = 3, b_0 = 1
        assert!(h.is_edge(2, 3));
        assert!(!h.is_edge(2, 1));
        assert!(!h.is_edge(0, 2));
        assert!(h.is_edge(1, 0));
    }

    #[test]
    fn identified_edge_rule_is_complete() {
        let h = HTypeGraph::new(
            HKind::Identified,
            Enumeration::IDENTITY,
            Enumeration::IDENTITY,
            1,
            index_colouring(|_, _| 0),
        )
        .unwrap();
        for u in 0..10 {
            for v in 0..10 {
                assert_eq!(h.is_edge(u, v), u != v);
            }
        }
    }

    #[test]
    fn rejects_bad_enumerations() {
        let c = index_colouring(|_, _| 0);
        let evens = Enumeration { stride: 2, offset: 0 };
        assert_eq!(
            HTypeGraph::new(HKind::Identified, evens, Enumeration::IDENTITY, 1, c.clone()).unwrap_err(),
            HTypeError::NotIdentified
        );
        assert_eq!(
            HTypeGraph::new(HKind::Disjoint, evens, Enumeration { stride: 3, offset: 0 }, 1, c).unwrap_err(),
            HTypeError::NotDisjoint
        );
    }
}
