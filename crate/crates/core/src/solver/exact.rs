//! Exact minimum monochromatic path partition by subset dynamic programming.
//!
//! For every colour `c` the table `ends[c][S]` holds the endpoints of the
//! colour-`c` Hamiltonian paths of the vertex set `S` (bitmask). A set is a
//! *block* in colour `c` when it is a singleton or `ends[c][S] != 0`.
//! Minimum partitions are then set-partition DPs over blocks: unrestricted in
//! `Any` mode, one block per colour in `Distinct` mode.

use thiserror::Error;

use crate::graph::{Colour, FiniteColouredGraph, Vertex};
use crate::path::PathSeq;
use crate::verify::{Mode, PathPartition};

pub const DEFAULT_CAP: usize = 12;
/// Bitmask tables are `u32`-indexed; beyond this the tables do not fit anyway.
pub const HARD_CAP: usize = 20;

const INF: u8 = u8::MAX;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SolveError {
    #[error("{n} vertices exceed the exact-solver cap of {cap}; use heuristic_partition instead")]
    TooLarge { n: usize, cap: usize },
    #[error("no partition into paths of distinct colours exists")]
    Infeasible,
}

#[derive(Debug, Clone, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub struct SolveResult {
    pub optimum: usize,
    pub witness: PathPartition,
    pub nodes: u64,
    pub mode: Mode,
}

/// Iterate the non-empty subsets of `mask` that contain `low`, in increasing numeric order.
fn blocks_with(mask: u32, low: u32) -> impl Iterator<Item = u32> {
    let rest = mask & !low;
    let mut sub: Option<u32> = Some(0);
    std::iter::from_fn(move || {
        let s = sub?;
        sub = if s == rest { None } else { Some(((s | !rest).wrapping_add(1)) & rest) };
        Some(s | low)
    })
}

/// Non-empty subsets of `mask` in increasing numeric order.
fn nonempty_subsets(mask: u32) -> impl Iterator<Item = u32> {
    let mut sub: Option<u32> = if mask == 0 { None } else { Some((!mask).wrapping_add(1) & mask) };
    std::iter::from_fn(move || {
        let s = sub?;
        sub = if s == mask { None } else { Some(((s | !mask).wrapping_add(1)) & mask) };
        Some(s)
    })
}

/// Per-colour Hamiltonian-path endpoint tables of a finite graph.
pub struct PathTables {
    n: usize,
    r: usize,
    adj: Vec<Vec<u32>>,
    ends: Vec<Vec<u32>>,
    /// Bitmask of colours in which `S` is a block.
    block_colours: Vec<u32>,
    nodes: u64,
}

impl PathTables {
    pub fn new(g: &FiniteColouredGraph) -> Self {
        let n = g.order();
        let r = g.colours();
        assert!(n <= HARD_CAP, "path tables limited to {HARD_CAP} vertices");
        assert!(r <= 32, "block colour masks limited to 32 colours");
        let size = 1usize << n;
        let mut adj = vec![vec![0u32; n]; r];
        for (u, v, c) in g.edges() {
            adj[c][u] |= 1 << v;
            adj[c][v] |= 1 << u;
        }
        let mut nodes = 0u64;
        let mut ends = vec![vec![0u32; size]; r];
        for (c, table) in ends.iter_mut().enumerate() {
            for v in 0..n {
                table[1 << v] = 1 << v;
            }
            for s in 1..size {
                let mut e = table[s];
                while e != 0 {
                    let v = e.trailing_zeros() as usize;
                    e &= e - 1;
                    let mut ext = adj[c][v] & !(s as u32);
                    while ext != 0 {
                        let w = ext.trailing_zeros();
                        ext &= ext - 1;
                        table[s | (1 << w)] |= 1 << w;
                        nodes += 1;
                    }
                }
            }
        }
        let all_colours = if r == 32 { u32::MAX } else { (1u32 << r) - 1 };
        let mut block_colours = vec![0u32; size];
        for s in 1..size {
            block_colours[s] = if (s as u32).count_ones() == 1 {
                all_colours
            } else {
                (0..r).filter(|&c| ends[c][s] != 0).fold(0, |m, c| m | (1 << c))
            };
        }
        Self { n, r, adj, ends, block_colours, nodes }
    }

    pub fn is_block(&self, s: u32) -> bool {
        self.block_colours[s as usize] != 0
    }

    pub fn is_block_in(&self, s: u32, c: Colour) -> bool {
        self.block_colours[s as usize] & (1 << c) != 0
    }

    /// Lexicographically smallest colour-`c` Hamiltonian path of block `s`.
    fn smallest_path(&self, s: u32, c: Colour) -> Vec<Vertex> {
        debug_assert!(self.is_block_in(s, c));
        let mut first = self.ends[c][s as usize];
        if s.count_ones() == 1 {
            first = s;
        }
        let mut v = first.trailing_zeros() as usize;
        let mut path = vec![v];
        let mut rest = s & !(1 << v);
        while rest != 0 {
            let options = self.ends[c][rest as usize] & self.adj[c][v];
            debug_assert!(options != 0);
            v = options.trailing_zeros() as usize;
            path.push(v);
            rest &= !(1 << v);
        }
        path
    }

    fn full(&self) -> u32 {
        if self.n == 32 {
            u32::MAX
        } else {
            (1u32 << self.n) - 1
        }
    }
}

fn any_mode(t: &PathTables, nodes: &mut u64) -> (usize, Vec<PathSeq>) {
    let size = 1usize << t.n;
    let mut best = vec![INF; size];
    best[0] = 0;
    for s in 1..size as u32 {
        let low = s & s.wrapping_neg();
        let mut b = INF;
        for block in blocks_with(s, low) {
            *nodes += 1;
            if t.is_block(block) {
                b = b.min(best[(s & !block) as usize].saturating_add(1));
            }
        }
        best[s as usize] = b;
    }
    let mut s = t.full();
    let mut paths = Vec::new();
    while s != 0 {
        let low = s & s.wrapping_neg();
        let block = blocks_with(s, low)
            .find(|&b| t.is_block(b) && best[(s & !b) as usize].saturating_add(1) == best[s as usize])
            .expect("optimal block exists");
        let colour = t.block_colours[block as usize].trailing_zeros() as usize;
        let vertices = t.smallest_path(block, colour);
        paths.push(if vertices.len() >= 2 { PathSeq::new(colour, vertices) } else { PathSeq::uncoloured(vertices) });
        s &= !block;
    }
    (best[t.full() as usize] as usize, paths)
}

fn distinct_mode(t: &PathTables, nodes: &mut u64) -> Option<(usize, Vec<PathSeq>)> {
    let size = 1usize << t.n;
    // layers[j][S]: fewest paths covering S using each colour < j at most once
    let mut layers = vec![vec![INF; size]; t.r + 1];
    layers[0][0] = 0;
    for j in 0..t.r {
        let (done, next) = layers.split_at_mut(j + 1);
        let prev = &done[j];
        let cur = &mut next[0];
        for s in 0..size as u32 {
            let mut b = prev[s as usize];
            for block in nonempty_subsets(s) {
                *nodes += 1;
                if t.is_block_in(block, j) {
                    b = b.min(prev[(s & !block) as usize].saturating_add(1));
                }
            }
            cur[s as usize] = b;
        }
    }
    let full = t.full();
    let optimum = layers[t.r][full as usize];
    if optimum == INF {
        return None;
    }
    let mut s = full;
    let mut paths = Vec::new();
    for j in (0..t.r).rev() {
        if s == 0 {
            break;
        }
        let target = layers[j + 1][s as usize];
        if layers[j][s as usize] == target {
            continue;
        }
        let block = nonempty_subsets(s)
            .find(|&b| t.is_block_in(b, j) && layers[j][(s & !b) as usize].saturating_add(1) == target)
            .expect("optimal block exists");
        paths.push(PathSeq::new(j, t.smallest_path(block, j)));
        s &= !block;
    }
    relabel_degenerate(&mut paths, t.r);
    Some((optimum as usize, paths))
}

/// Singletons take the smallest colour labels left over by the real paths.
fn relabel_degenerate(paths: &mut [PathSeq], r: usize) {
    let used: Vec<Colour> = paths.iter().filter(|p| !p.is_degenerate()).filter_map(|p| p.colour).collect();
    let mut free = (0..r).filter(|c| !used.contains(c));
    let mut singles: Vec<usize> = (0..paths.len()).filter(|&k| paths[k].is_degenerate()).collect();
    singles.sort_by_key(|&k| paths[k].vertices.clone());
    for k in singles {
        paths[k].colour = free.next();
    }
}

/// Exact solver with a configurable size cap.
#[derive(Debug, Clone, Copy)]
pub struct ExactSolver {
    pub cap: usize,
}

impl Default for ExactSolver {
    fn default() -> Self {
        Self { cap: DEFAULT_CAP }
    }
}

impl ExactSolver {
    pub fn with_cap(cap: usize) -> Self {
        Self { cap: cap.min(HARD_CAP) }
    }

    pub fn min_partition(&self, g: &FiniteColouredGraph, mode: Mode) -> Result<SolveResult, SolveError> {
        let n = g.order();
        if n > self.cap {
            return Err(SolveError::TooLarge { n, cap: self.cap });
        }
        let tables = PathTables::new(g);
        let mut nodes = tables.nodes;
        let (optimum, mut paths) = match mode {
            Mode::Any => any_mode(&tables, &mut nodes),
            Mode::Distinct => distinct_mode(&tables, &mut nodes).ok_or(SolveError::Infeasible)?,
        };
        paths.sort_by(|a, b| a.vertices.cmp(&b.vertices));
        Ok(SolveResult { optimum, witness: PathPartition::new(mode, paths), nodes, mode })
    }

    /// A partition into at most `k` paths, if one exists.
    pub fn exists_within(
        &self,
        g: &FiniteColouredGraph,
        k: usize,
        mode: Mode,
    ) -> Result<Option<PathPartition>, SolveError> {
        match self.min_partition(g, mode) {
            Ok(res) if res.optimum <= k => Ok(Some(res.witness)),
            Ok(_) | Err(SolveError::Infeasible) => Ok(None),
            Err(e) => Err(e),
        }
    }
}

/// [`ExactSolver::min_partition`] with the default cap.
pub fn min_partition(g: &FiniteColouredGraph, mode: Mode) -> Result<SolveResult, SolveError> {
    ExactSolver::default().min_partition(g, mode)
}

/// [`ExactSolver::exists_within`] with the default cap.
pub fn exists_within(g: &FiniteColouredGraph, k: usize, mode: Mode) -> Result<Option<PathPartition>, SolveError> {
    ExactSolver::default().exists_within(g, k, mode)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::verify::verify_vertex_partition;

    fn star_k4() -> FiniteColouredGraph {
        FiniteColouredGraph::from_fn(5, 2, |u, _| if u == 0 { 0 } else { 1 }).unwrap()
    }

    #[test]
    fn subset_iteration_orders() {
        assert_eq!(blocks_with(0b1011, 0b1).collect::<Vec<_>>(), vec![0b1, 0b11, 0b1001, 0b1011]);
        assert_eq!(nonempty_subsets(0b101).collect::<Vec<_>>(), vec![0b1, 0b100, 0b101]);
        assert_eq!(nonempty_subsets(0).count(), 0);
    }

    #[test]
    fn constant_triangle() {
        let g = FiniteColouredGraph::new(3, 1).unwrap();
        let res = min_partition(&g, Mode::Any).unwrap();
        assert_eq!(res.optimum, 1);
        assert_eq!(res.witness.paths, vec![PathSeq::new(0, vec![0, 1, 2])]);
    }

    #[test]
    fn star_plus_k4_needs_two() {
        let g = star_k4();
        for mode in [Mode::Any, Mode::Distinct] {
            let res = min_partition(&g, mode).unwrap();
            assert_eq!(res.optimum, 2);
            assert!(verify_vertex_partition(&g, &res.witness).is_ok());
            assert_eq!(res.witness.len(), 2);
        }
        assert_eq!(exists_within(&g, 1, Mode::Any).unwrap(), None);
    }

    #[test]
    fn rainbow_triangle() {
        let g = FiniteColouredGraph::from_fn(3, 3, |u, v| match (u, v) {
            (0, 1) => 0,
            (1, 2) => 1,
            _ => 2,
        })
        .unwrap();
        let res = min_partition(&g, Mode::Any).unwrap();
        assert_eq!(res.optimum, 2);
        assert_eq!(res.witness.paths, vec![PathSeq::uncoloured(vec![0]), PathSeq::new(1, vec![1, 2])]);
        let res = min_partition(&g, Mode::Distinct).unwrap();
        assert_eq!(res.optimum, 2);
        assert!(verify_vertex_partition(&g, &res.witness).is_ok());
    }

    #[test]
    fn single_vertex_and_empty() {
        let k1 = FiniteColouredGraph::new(1, 2).unwrap();
        let w = exists_within(&k1, 1, Mode::Distinct).unwrap().unwrap();
        assert_eq!(w.paths, vec![PathSeq::new(0, vec![0])]);
        let k0 = FiniteColouredGraph::new(0, 1).unwrap();
        assert_eq!(min_partition(&k0, Mode::Any).unwrap().optimum, 0);
    }

    #[test]
    fn degenerate_paths_take_smallest_free_labels() {
        let g = FiniteColouredGraph::from_fn(3, 3, |u, v| match (u, v) {
            (0, 1) => 0,
            (1, 2) => 1,
            _ => 2,
        })
        .unwrap();
        let res = min_partition(&g, Mode::Distinct).unwrap();
        assert_eq!(res.witness.paths, vec![PathSeq::new(0, vec![0, 1]), PathSeq::new(1, vec![2])]);
    }

    #[test]
    fn distinct_mode_can_be_infeasible() {
        // four isolated vertices, two colours
        let mut g = FiniteColouredGraph::new(4, 2).unwrap();
        for u in 0..4 {
            for v in u + 1..4 {
                g.set_missing(u, v).unwrap();
            }
        }
        assert_eq!(min_partition(&g, Mode::Distinct), Err(SolveError::Infeasible));
        assert_eq!(min_partition(&g, Mode::Any).unwrap().optimum, 4);
        assert_eq!(exists_within(&g, 4, Mode::Distinct).unwrap(), None);
    }

    #[test]
    fn cap_is_enforced() {
        let g = FiniteColouredGraph::new(13, 1).unwrap();
        assert_eq!(min_partition(&g, Mode::Any), Err(SolveError::TooLarge { n: 13, cap: 12 }));
        assert_eq!(ExactSolver::with_cap(13).min_partition(&g, Mode::Any).unwrap().optimum, 1);
    }
}
