//! Edge-coloured graphs on natural-number vertex sets.
//!
//! Two regimes share one query surface: [`FiniteColouredGraph`] stores a
//! complete graph on `0..n` (optionally with a few missing edges) as a
//! triangular array, and [`LazyColouredGraph`] answers colour queries for
//! every pair of naturals through a pure function. Both implement
//! [`ColouredGraph`], which is all the neighbourhood queries need.

use std::collections::BTreeSet;
use std::fmt;
use std::sync::Arc;

use thiserror::Error;

pub type Vertex = usize;
pub type Colour = usize;

/// Largest colour count a finite graph can store.
pub const MAX_COLOURS: usize = 254;

const MISSING: u8 = u8::MAX;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GraphError {
    #[error("colour {colour} out of range (graph has {colours} colours)")]
    ColourOutOfRange { colour: Colour, colours: usize },
    #[error("vertex {vertex} out of range (graph has {order} vertices)")]
    VertexOutOfRange { vertex: Vertex, order: usize },
    #[error("a graph needs at least one colour")]
    NoColours,
    #[error("at most {MAX_COLOURS} colours are supported, got {0}")]
    TooManyColours(usize),
    #[error("{0} is not a pair of distinct vertices")]
    Loop(Vertex),
    #[error("vertex {vertex} misses {missing} of the other vertices")]
    TooManyMissing { vertex: Vertex, missing: usize },
}

/// Query surface shared by finite, lazy and half-graph-type graphs.
pub trait ColouredGraph: Send + Sync {
    fn colours(&self) -> usize;

    /// `Some(n)` when the vertex set is `0..n`, `None` for all naturals.
    fn order(&self) -> Option<usize>;

    /// Colour of the edge `{u, v}`, or `None` when `{u, v}` is not an edge.
    fn edge_colour(&self, u: Vertex, v: Vertex) -> Option<Colour>;

    fn is_edge(&self, u: Vertex, v: Vertex) -> bool {
        self.edge_colour(u, v).is_some()
    }
}

impl<G: ColouredGraph + ?Sized> ColouredGraph for &G {
    fn colours(&self) -> usize {
        (**self).colours()
    }
    fn order(&self) -> Option<usize> {
        (**self).order()
    }
    fn edge_colour(&self, u: Vertex, v: Vertex) -> Option<Colour> {
        (**self).edge_colour(u, v)
    }
}

fn check_colour(g: &(impl ColouredGraph + ?Sized), colour: Colour) -> Result<(), GraphError> {
    if colour >= g.colours() {
        return Err(GraphError::ColourOutOfRange { colour, colours: g.colours() });
    }
    Ok(())
}

fn check_vertex(g: &(impl ColouredGraph + ?Sized), v: Vertex) -> Result<(), GraphError> {
    match g.order() {
        Some(n) if v >= n => Err(GraphError::VertexOutOfRange { vertex: v, order: n }),
        _ => Ok(()),
    }
}

fn effective_horizon(g: &(impl ColouredGraph + ?Sized), horizon: usize) -> usize {
    g.order().map_or(horizon, |n| n.min(horizon))
}

/// `N(v, i)` cut at `horizon`: every `w < horizon` joined to `v` by an edge of colour `i`.
pub fn neighbours<G: ColouredGraph + ?Sized>(
    g: &G,
    v: Vertex,
    colour: Colour,
    horizon: usize,
) -> Result<Vec<Vertex>, GraphError> {
    check_colour(g, colour)?;
    check_vertex(g, v)?;
    let h = effective_horizon(g, horizon);
    Ok((0..h).filter(|&w| w != v && g.edge_colour(v, w) == Some(colour)).collect())
}

/// `N[F, i]` cut at `horizon`. The empty intersection is the whole vertex range.
pub fn common_neighbours<G: ColouredGraph + ?Sized>(
    g: &G,
    set: &[Vertex],
    colour: Colour,
    horizon: usize,
) -> Result<Vec<Vertex>, GraphError> {
    check_colour(g, colour)?;
    for &v in set {
        check_vertex(g, v)?;
    }
    let h = effective_horizon(g, horizon);
    Ok((0..h)
        .filter(|&w| set.iter().all(|&v| v != w && g.edge_colour(v, w) == Some(colour)))
        .collect())
}

/// Vertices below `horizon` adjacent (in any colour) to every member of `set`.
pub fn common_neighbours_any<G: ColouredGraph + ?Sized>(
    g: &G,
    set: &[Vertex],
    horizon: usize,
) -> Vec<Vertex> {
    let h = effective_horizon(g, horizon);
    (0..h).filter(|&w| set.iter().all(|&v| v != w && g.is_edge(v, w))).collect()
}

#[inline]
fn tri_index(u: Vertex, v: Vertex) -> usize {
    debug_assert!(u < v);
    v * (v - 1) / 2 + u
}

/// Complete graph on `0..n` with a total colouring of its (non-missing) edges.
#[derive(Clone, PartialEq, Eq)]
pub struct FiniteColouredGraph {
    n: usize,
    r: usize,
    cells: Vec<u8>,
}

impl fmt::Debug for FiniteColouredGraph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("FiniteColouredGraph")
            .field("n", &self.n)
            .field("r", &self.r)
            .field("edges", &self.edges().collect::<Vec<_>>())
            .finish()
    }
}

impl FiniteColouredGraph {
    /// All edges coloured `0`.
    pub fn new(n: usize, r: usize) -> Result<Self, GraphError> {
        if r == 0 {
            return Err(GraphError::NoColours);
        }
        if r > MAX_COLOURS {
            return Err(GraphError::TooManyColours(r));
        }
        Ok(Self { n, r, cells: vec![0; n * n.saturating_sub(1) / 2] })
    }

    pub fn from_fn(
        n: usize,
        r: usize,
        mut colour: impl FnMut(Vertex, Vertex) -> Colour,
    ) -> Result<Self, GraphError> {
        let mut g = Self::new(n, r)?;
        for v in 0..n {
            for u in 0..v {
                g.set_colour(u, v, colour(u, v))?;
            }
        }
        Ok(g)
    }

    /// Restriction of a lazy colouring to `0..n`, including its missing edges.
    pub fn restrict(lazy: &LazyColouredGraph, n: usize) -> Result<Self, GraphError> {
        let mut g = Self::new(n, lazy.colours())?;
        for v in 0..n {
            for u in 0..v {
                match lazy.edge_colour(u, v) {
                    Some(c) => g.set_colour(u, v, c)?,
                    None => g.set_missing(u, v)?,
                }
            }
        }
        g.check_missing()?;
        Ok(g)
    }

    pub fn order(&self) -> usize {
        self.n
    }

    pub fn colours(&self) -> usize {
        self.r
    }

    fn index(&self, u: Vertex, v: Vertex) -> Result<usize, GraphError> {
        if u == v {
            return Err(GraphError::Loop(u));
        }
        for w in [u, v] {
            if w >= self.n {
                return Err(GraphError::VertexOutOfRange { vertex: w, order: self.n });
            }
        }
        Ok(tri_index(u.min(v), u.max(v)))
    }

    pub fn set_colour(&mut self, u: Vertex, v: Vertex, colour: Colour) -> Result<(), GraphError> {
        if colour >= self.r {
            return Err(GraphError::ColourOutOfRange { colour, colours: self.r });
        }
        let i = self.index(u, v)?;
        self.cells[i] = colour as u8;
        Ok(())
    }

    pub fn set_missing(&mut self, u: Vertex, v: Vertex) -> Result<(), GraphError> {
        let i = self.index(u, v)?;
        self.cells[i] = MISSING;
        Ok(())
    }

    /// Non-neighbours of `v`.
    pub fn missing(&self, v: Vertex) -> Vec<Vertex> {
        (0..self.n).filter(|&w| w != v && !self.is_edge(v, w)).collect()
    }

    pub fn has_missing_edges(&self) -> bool {
        self.cells.contains(&MISSING)
    }

    /// Every vertex must keep at least one neighbour-slot: `|missing(v)| < n`.
    pub fn check_missing(&self) -> Result<(), GraphError> {
        for v in 0..self.n {
            let m = self.missing(v).len();
            if m >= self.n {
                return Err(GraphError::TooManyMissing { vertex: v, missing: m });
            }
        }
        Ok(())
    }

    /// Present edges as `(u, v, colour)` with `u < v`, in lexicographic order.
    pub fn edges(&self) -> impl Iterator<Item = (Vertex, Vertex, Colour)> + '_ {
        (0..self.n).flat_map(move |u| {
            (u + 1..self.n).filter_map(move |v| self.edge_colour(u, v).map(|c| (u, v, c)))
        })
    }

    /// Missing pairs `(u, v)` with `u < v`.
    pub fn missing_pairs(&self) -> impl Iterator<Item = (Vertex, Vertex)> + '_ {
        (0..self.n)
            .flat_map(move |u| (u + 1..self.n).map(move |v| (u, v)))
            .filter(move |&(u, v)| self.cells[tri_index(u, v)] == MISSING)
    }
}

impl ColouredGraph for FiniteColouredGraph {
    fn colours(&self) -> usize {
        self.r
    }

    fn order(&self) -> Option<usize> {
        Some(self.n)
    }

    fn edge_colour(&self, u: Vertex, v: Vertex) -> Option<Colour> {
        if u == v || u >= self.n || v >= self.n {
            return None;
        }
        match self.cells[tri_index(u.min(v), u.max(v))] {
            MISSING => None,
            c => Some(c as Colour),
        }
    }
}

/// Eventual periodicity of a colouring.
///
/// Promises that for `start <= u < v` the colour of `{u, v}` depends only on
/// `(u mod period, v mod period)`, and that for any fixed `u` the colour of
/// `{u, w}` depends only on `w mod period` once `w >= max(start, u + 1)`.
/// Missing edges are excluded from the promise; they are finite per vertex.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Periodicity {
    pub start: usize,
    pub period: usize,
}

pub type ColourFn = Arc<dyn Fn(Vertex, Vertex) -> Colour + Send + Sync>;
pub type MissingFn = Arc<dyn Fn(Vertex) -> Vec<Vertex> + Send + Sync>;

/// Countable complete graph (up to finitely many non-neighbours per vertex)
/// whose colouring is an oracle on pairs.
#[derive(Clone)]
pub struct LazyColouredGraph {
    r: usize,
    colour_fn: ColourFn,
    missing_fn: Option<MissingFn>,
    periodicity: Option<Periodicity>,
}

impl fmt::Debug for LazyColouredGraph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("LazyColouredGraph")
            .field("r", &self.r)
            .field("periodicity", &self.periodicity)
            .field("has_missing", &self.missing_fn.is_some())
            .finish()
    }
}

impl LazyColouredGraph {
    /// `colour_fn` is always called with `u <= v`; it must be pure and return colours `< r`.
    pub fn new(r: usize, colour_fn: ColourFn) -> Result<Self, GraphError> {
        if r == 0 {
            return Err(GraphError::NoColours);
        }
        Ok(Self { r, colour_fn, missing_fn: None, periodicity: None })
    }

    pub fn with_missing(mut self, missing_fn: MissingFn) -> Self {
        self.missing_fn = Some(missing_fn);
        self
    }

    pub fn with_periodicity(mut self, periodicity: Periodicity) -> Self {
        self.periodicity = Some(periodicity);
        self
    }

    pub fn periodicity(&self) -> Option<Periodicity> {
        self.periodicity
    }

    /// Finite set of non-neighbours of `v`.
    pub fn missing(&self, v: Vertex) -> BTreeSet<Vertex> {
        self.missing_fn.as_ref().map(|f| f(v).into_iter().filter(|&w| w != v).collect()).unwrap_or_default()
    }

    /// The raw colouring, defined on every ordered pair `u <= v` including `u == v`.
    pub fn raw_colour(&self, u: Vertex, v: Vertex) -> Colour {
        (self.colour_fn)(u.min(v), u.max(v))
    }

    pub fn colour_fn(&self) -> ColourFn {
        Arc::clone(&self.colour_fn)
    }

    fn is_missing(&self, u: Vertex, v: Vertex) -> bool {
        match &self.missing_fn {
            None => false,
            Some(f) => f(u).contains(&v) || f(v).contains(&u),
        }
    }

    /// First `w` beyond which `w ↦ colour(v, w)` is periodic and `w` is never missing for `v`.
    pub fn tail_start(&self, v: Vertex, p: Periodicity) -> usize {
        let beyond_missing = self.missing(v).iter().next_back().map_or(0, |&m| m + 1);
        p.start.max(v + 1).max(beyond_missing)
    }
}

impl ColouredGraph for LazyColouredGraph {
    fn colours(&self) -> usize {
        self.r
    }

    fn order(&self) -> Option<usize> {
        None
    }

    fn edge_colour(&self, u: Vertex, v: Vertex) -> Option<Colour> {
        if u == v || self.is_missing(u, v) {
            return None;
        }
        Some((self.colour_fn)(u.min(v), u.max(v)))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn lazy(r: usize, f: impl Fn(Vertex, Vertex) -> Colour + Send + Sync + 'static) -> LazyColouredGraph {
        LazyColouredGraph::new(r, Arc::new(f)).unwrap()
    }

    #[test]
    fn constant_neighbourhoods() {
        let g = lazy(2, |_, _| 0);
        assert_eq!(neighbours(&g, 3, 0, 6).unwrap(), vec![0, 1, 2, 4, 5]);
        assert!(neighbours(&g, 3, 1, 6).unwrap().is_empty());
    }

    #[test]
    fn parity_neighbourhoods() {
        let g = lazy(2, |u, v| (u + v) % 2);
        assert_eq!(neighbours(&g, 4, 0, 8).unwrap(), vec![0, 2, 6]);
        assert_eq!(common_neighbours(&g, &[0, 2], 0, 8).unwrap(), vec![4, 6]);
    }

    #[test]
    fn empty_intersection_is_everything() {
        let g = lazy(3, |u, v| (u * v) % 3);
        assert_eq!(common_neighbours(&g, &[], 2, 4).unwrap(), vec![0, 1, 2, 3]);
    }

    #[test]
    fn star_common_neighbours() {
        let g = lazy(2, |u, v| usize::from(u == 0 || v == 0));
        assert_eq!(common_neighbours(&g, &[1, 2], 0, 6).unwrap(), vec![3, 4, 5]);
    }

    #[test]
    fn query_errors() {
        let g = FiniteColouredGraph::new(4, 2).unwrap();
        assert_eq!(
            neighbours(&g, 0, 2, 4),
            Err(GraphError::ColourOutOfRange { colour: 2, colours: 2 })
        );
        assert_eq!(neighbours(&g, 4, 0, 4), Err(GraphError::VertexOutOfRange { vertex: 4, order: 4 }));
        // horizon beyond n is clipped
        assert_eq!(neighbours(&g, 0, 0, 100).unwrap(), vec![1, 2, 3]);
    }

    #[test]
    fn finite_storage_is_symmetric() {
        let mut g = FiniteColouredGraph::new(5, 3).unwrap();
        g.set_colour(3, 1, 2).unwrap();
        g.set_missing(0, 4).unwrap();
        assert_eq!(g.edge_colour(1, 3), Some(2));
        assert_eq!(g.edge_colour(3, 1), Some(2));
        assert_eq!(g.edge_colour(4, 0), None);
        assert_eq!(g.missing(0), vec![4]);
        assert_eq!(g.missing_pairs().collect::<Vec<_>>(), vec![(0, 4)]);
        assert!(g.set_colour(0, 1, 3).is_err());
        assert!(g.set_colour(2, 2, 0).is_err());
        assert_eq!(g.edges().count(), 9);
    }

    #[test]
    fn lazy_missing_edges() {
        let g = lazy(1, |_, _| 0).with_missing(Arc::new(|v| if v == 2 { vec![7] } else { vec![] }));
        assert!(!g.is_edge(2, 7));
        assert!(!g.is_edge(7, 2));
        assert!(g.is_edge(2, 8));
        assert_eq!(g.tail_start(2, Periodicity { start: 0, period: 1 }), 8);
        let f = FiniteColouredGraph::restrict(&g, 9).unwrap();
        assert_eq!(f.missing(7), vec![2]);
    }
}
