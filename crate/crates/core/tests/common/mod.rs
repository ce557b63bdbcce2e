//! Naive reference implementations shared by the integration tests.

#![allow(dead_code)]

use std::collections::HashMap;

use monopath_core::graph::{ColouredGraph, FiniteColouredGraph};
use monopath_core::Mode;

fn permutations(items: &[usize]) -> Vec<Vec<usize>> {
    if items.len() <= 1 {
        return vec![items.to_vec()];
    }
    let mut out = Vec::new();
    for k in 0..items.len() {
        let mut rest = items.to_vec();
        let first = rest.remove(k);
        for mut p in permutations(&rest) {
            p.insert(0, first);
            out.push(p);
        }
    }
    out
}

/// Colours in which `block` can be ordered into a monochromatic path
/// (every colour for a singleton).
fn path_colours(g: &FiniteColouredGraph, block: &[usize]) -> Vec<usize> {
    if block.len() == 1 {
        return (0..g.colours()).collect();
    }
    (0..g.colours())
        .filter(|&c| {
            permutations(block).iter().any(|p| p.windows(2).all(|w| g.edge_colour(w[0], w[1]) == Some(c)))
        })
        .collect()
}

/// Every set partition of `0..n` as a list of blocks.
fn set_partitions(n: usize) -> Vec<Vec<Vec<usize>>> {
    let mut out = vec![Vec::<Vec<usize>>::new()];
    for v in 0..n {
        let mut next = Vec::new();
        for p in out {
            for k in 0..p.len() {
                let mut q = p.clone();
                q[k].push(v);
                next.push(q);
            }
            let mut q = p;
            q.push(vec![v]);
            next.push(q);
        }
        out = next;
    }
    out
}

fn distinct_assignment(options: &[Vec<usize>], taken: &mut Vec<bool>, k: usize) -> bool {
    if k == options.len() {
        return true;
    }
    for &c in &options[k] {
        if !taken[c] {
            taken[c] = true;
            if distinct_assignment(options, taken, k + 1) {
                return true;
            }
            taken[c] = false;
        }
    }
    false
}

/// Minimum number of monochromatic paths by enumerating every set partition
/// and every ordering of every block. `None` if no partition qualifies.
pub fn brute_force_optimum(g: &FiniteColouredGraph, mode: Mode) -> Option<usize> {
    let n = g.order();
    let mut memo: HashMap<Vec<usize>, Vec<usize>> = HashMap::new();
    let mut best: Option<usize> = None;
    for p in set_partitions(n) {
        if best.is_some_and(|b| p.len() >= b) {
            continue;
        }
        let options: Vec<Vec<usize>> =
            p.iter().map(|b| memo.entry(b.clone()).or_insert_with(|| path_colours(g, b)).clone()).collect();
        let ok = match mode {
            Mode::Any => options.iter().all(|o| !o.is_empty()),
            Mode::Distinct => distinct_assignment(&options, &mut vec![false; g.colours()], 0),
        };
        if ok {
            best = Some(p.len());
        }
    }
    best
}

pub fn random_graph(n: usize, r: usize, seed: u64) -> FiniteColouredGraph {
    use rand::{Rng, SeedableRng};
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    FiniteColouredGraph::from_fn(n, r, |_, _| rng.gen_range(0..r)).unwrap()
}
