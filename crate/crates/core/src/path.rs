//! Finite paths and on-demand ω-streams of vertices.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::graph::{Colour, Vertex};

/// A finite injective vertex sequence, read in positional order.
///
/// `colour` is the monochromatic label. Paths with at least two vertices
/// carry one; a singleton or empty path is vacuously monochromatic and may
/// carry a label only to reserve it (distinct-colour partitions).
/// A `None` label on a longer path means "an uncoloured path of the host
/// graph" and is only checked for adjacency.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct PathSeq {
    pub colour: Option<Colour>,
    pub vertices: Vec<Vertex>,
}

impl PathSeq {
    pub fn new(colour: Colour, vertices: Vec<Vertex>) -> Self {
        Self { colour: Some(colour), vertices }
    }

    pub fn uncoloured(vertices: Vec<Vertex>) -> Self {
        Self { colour: None, vertices }
    }

    pub fn singleton(v: Vertex) -> Self {
        Self { colour: None, vertices: vec![v] }
    }

    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    pub fn is_degenerate(&self) -> bool {
        self.vertices.len() <= 1
    }

    pub fn first(&self) -> Option<Vertex> {
        self.vertices.first().copied()
    }

    pub fn last(&self) -> Option<Vertex> {
        self.vertices.last().copied()
    }
}

impl fmt::Display for PathSeq {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for (k, v) in self.vertices.iter().enumerate() {
            if k > 0 {
                write!(f, ",")?;
            }
            write!(f, "{v}")?;
        }
        write!(f, "]")?;
        match self.colour {
            Some(c) => write!(f, "@{c}"),
            None => Ok(()),
        }
    }
}

/// Deterministic source of the next vertices of an ω-path.
///
/// Each call may append any number of vertices to `out` (a construction step
/// can absorb several at once). Returning `false` means the generator cannot
/// continue within its search bounds.
pub trait StreamGenerator: Send {
    fn advance(&mut self, out: &mut Vec<Vertex>) -> bool;
}

/// An ω-path produced on demand, with the produced prefix cached.
pub struct OmegaPathStream {
    colour: Option<Colour>,
    prefix: Vec<Vertex>,
    generator: Box<dyn StreamGenerator>,
    exhausted: bool,
}

impl fmt::Debug for OmegaPathStream {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("OmegaPathStream")
            .field("colour", &self.colour)
            .field("produced", &self.prefix.len())
            .field("exhausted", &self.exhausted)
            .finish()
    }
}

impl OmegaPathStream {
    pub fn new(colour: Option<Colour>, generator: Box<dyn StreamGenerator>) -> Self {
        Self { colour, prefix: Vec::new(), generator, exhausted: false }
    }

    pub fn colour(&self) -> Option<Colour> {
        self.colour
    }

    /// Produce until at least `len` vertices exist; returns how many do.
    pub fn fill(&mut self, len: usize) -> usize {
        while self.prefix.len() < len && !self.exhausted {
            if !self.generator.advance(&mut self.prefix) {
                self.exhausted = true;
            }
        }
        self.prefix.len()
    }

    /// The `k`-th vertex, producing it if needed.
    pub fn get(&mut self, k: usize) -> Option<Vertex> {
        self.fill(k + 1);
        self.prefix.get(k).copied()
    }

    /// Run one generator step (which may add several vertices).
    pub fn step(&mut self) -> bool {
        if self.exhausted {
            return false;
        }
        if !self.generator.advance(&mut self.prefix) {
            self.exhausted = true;
        }
        !self.exhausted
    }

    pub fn produced(&self) -> &[Vertex] {
        &self.prefix
    }

    pub fn is_exhausted(&self) -> bool {
        self.exhausted
    }

    /// The produced prefix as a finite path.
    pub fn to_path(&self) -> PathSeq {
        PathSeq { colour: self.colour, vertices: self.prefix.clone() }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    struct Counter(Vertex);

    impl StreamGenerator for Counter {
        fn advance(&mut self, out: &mut Vec<Vertex>) -> bool {
            if self.0 >= 5 {
                return false;
            }
            out.push(self.0);
            out.push(self.0 + 100);
            self.0 += 1;
            true
        }
    }

    #[test]
    fn stream_caches_and_exhausts() {
        let mut s = OmegaPathStream::new(Some(0), Box::new(Counter(0)));
        assert_eq!(s.get(2), Some(1));
        assert_eq!(s.produced(), &[0, 100, 1, 101]);
        assert_eq!(s.fill(100), 10);
        assert!(s.is_exhausted());
        assert_eq!(s.get(10), None);
        assert_eq!(s.to_path().to_string(), "[0,100,1,101,2,102,3,103,4,104]@0");
    }
}
