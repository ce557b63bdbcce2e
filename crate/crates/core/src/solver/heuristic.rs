//! Greedy path extraction with rotation-based extension.
//!
//! Repeatedly takes the longest monochromatic path it can grow among the
//! uncovered vertices and removes it. Growth extends either end by the
//! smallest usable neighbour; when both ends are stuck it tries Pósa
//! rotations to expose a new extendable end.

use crate::graph::{ColouredGraph, Colour, FiniteColouredGraph, Vertex};
use crate::path::PathSeq;
use crate::verify::{Mode, PathPartition};

/// Starting vertices tried per colour and round.
const MAX_STARTS: usize = 24;

struct Grower<'a> {
    g: &'a FiniteColouredGraph,
    free: &'a [bool],
    colour: Colour,
}

impl Grower<'_> {
    fn extension(&self, end: Vertex, on_path: &[bool]) -> Option<Vertex> {
        (0..self.g.order()).find(|&w| self.free[w] && !on_path[w] && self.g.edge_colour(end, w) == Some(self.colour))
    }

    fn grow(&self, start: Vertex) -> Vec<Vertex> {
        let n = self.g.order();
        let mut on_path = vec![false; n];
        let mut path = vec![start];
        on_path[start] = true;
        let mut rotations = 4 * n;
        loop {
            let tail = *path.last().unwrap();
            if let Some(w) = self.extension(tail, &on_path) {
                path.push(w);
                on_path[w] = true;
                continue;
            }
            if let Some(w) = self.extension(path[0], &on_path) {
                path.reverse();
                path.push(w);
                on_path[w] = true;
                continue;
            }
            // rotate: tail ~ path[j] turns path[j+1] into the new tail
            let mut rotated = false;
            while rotations > 0 && !rotated {
                rotations -= 1;
                let tail = *path.last().unwrap();
                let pivot = (0..path.len().saturating_sub(2)).rev().find(|&j| {
                    self.g.edge_colour(path[j], tail) == Some(self.colour)
                        && self.extension(path[j + 1], &on_path).is_some()
                });
                match pivot {
                    Some(j) => {
                        path[j + 1..].reverse();
                        rotated = true;
                    }
                    None => break,
                }
            }
            if !rotated {
                return path;
            }
        }
    }
}

/// A verifier-valid partition of a finite coloured graph in `Any` mode,
/// with no optimality claim.
pub fn heuristic_partition(g: &FiniteColouredGraph) -> PathPartition {
    let n = g.order();
    let mut free = vec![true; n];
    let mut remaining = n;
    let mut paths = Vec::new();
    while remaining > 0 {
        let starts: Vec<Vertex> = (0..n).filter(|&v| free[v]).take(MAX_STARTS).collect();
        let mut best: Option<(Colour, Vec<Vertex>)> = None;
        'search: for colour in 0..g.colours() {
            let grower = Grower { g, free: &free, colour };
            for &s in &starts {
                let p = grower.grow(s);
                if best.as_ref().is_none_or(|(_, b)| p.len() > b.len()) {
                    let done = p.len() == remaining;
                    best = Some((colour, p));
                    if done {
                        break 'search;
                    }
                }
            }
        }
        let (colour, vertices) = best.expect("at least one free vertex");
        for &v in &vertices {
            free[v] = false;
        }
        remaining -= vertices.len();
        paths.push(if vertices.len() >= 2 { PathSeq::new(colour, vertices) } else { PathSeq::uncoloured(vertices) });
    }
    PathPartition::new(Mode::Any, paths)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::solver::exact::min_partition;
    use crate::verify::verify_vertex_partition;

    #[test]
    fn constant_k20_is_one_path() {
        let g = FiniteColouredGraph::new(20, 1).unwrap();
        let p = heuristic_partition(&g);
        assert_eq!(p.len(), 1);
        assert!(verify_vertex_partition(&g, &p).is_ok());
    }

    #[test]
    fn parity_k10_at_most_two() {
        let g = FiniteColouredGraph::from_fn(10, 2, |u, v| (u + v) % 2).unwrap();
        let p = heuristic_partition(&g);
        assert!(p.len() <= 2);
        assert!(p.len() >= min_partition(&g, Mode::Any).unwrap().optimum);
        assert!(verify_vertex_partition(&g, &p).is_ok());
    }

    #[test]
    fn grows_both_ends_from_the_middle() {
        // colour-0 edges form the path 0-1-2-3-4
        let g = FiniteColouredGraph::from_fn(5, 2, |u, v| usize::from(v - u != 1)).unwrap();
        let grower = Grower { g: &g, free: &[true; 5], colour: 0 };
        assert_eq!(grower.grow(2).len(), 5);
    }

    #[test]
    fn empty_graph() {
        let g = FiniteColouredGraph::new(0, 1).unwrap();
        assert!(heuristic_partition(&g).is_empty());
    }
}
