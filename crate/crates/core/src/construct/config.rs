//! Greedy search for configurations in a half-graph-type graph.
//!
//! A configuration of length `k` in colours `I` is a sequence of pairwise
//! disjoint finite sets `a_ξ` of main-class indices and distinct
//! second-class indices `y_ξ` such that `y_ζ` lies in the `I`-coloured
//! neighbourhood of some member of `a_ξ` whenever `ξ <= ζ`.
//! All indices below are positions in the two enumerations.

use std::collections::BTreeSet;

use serde::Serialize;

use crate::graph::Colour;
use crate::htype::HTypeGraph;

#[derive(Debug, Clone)]
pub struct ConfigParams {
    pub colours: BTreeSet<Colour>,
    pub length: usize,
    pub horizon: usize,
    /// Misses allowed in `[max a, horizon)` for a union to count as cofinite.
    pub slack: usize,
    /// Largest candidate set.
    pub max_set: usize,
    /// Candidates are drawn from this many least unused main-class indices.
    pub pool: usize,
}

impl ConfigParams {
    pub fn new(colours: impl IntoIterator<Item = Colour>, length: usize, horizon: usize) -> Self {
        Self { colours: colours.into_iter().collect(), length, horizon, slack: 2, max_set: 2, pool: 16 }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Configuration {
    pub a: Vec<Vec<usize>>,
    pub y: Vec<usize>,
    /// Misses of each `a_ξ`'s union inside the horizon.
    pub misses: Vec<usize>,
}

fn in_union(h: &HTypeGraph, set: &[usize], colours: &BTreeSet<Colour>, zeta: usize) -> bool {
    set.iter().any(|&x| h.cross_colour(x, zeta).is_some_and(|c| colours.contains(&c)))
}

fn misses(h: &HTypeGraph, set: &[usize], colours: &BTreeSet<Colour>, horizon: usize) -> usize {
    let from = set.iter().copied().max().unwrap_or(0);
    (from..horizon).filter(|&z| !in_union(h, set, colours, z)).count()
}

/// All subsets of `pool` of the given size, in lexicographic order.
fn combinations(pool: &[usize], size: usize) -> Vec<Vec<usize>> {
    if size == 0 {
        return vec![Vec::new()];
    }
    if pool.len() < size {
        return Vec::new();
    }
    let mut out = Vec::new();
    for (k, &first) in pool.iter().enumerate() {
        for mut rest in combinations(&pool[k + 1..], size - 1) {
            rest.insert(0, first);
            out.push(rest);
        }
    }
    out
}

/// `None` when some `a_ξ` or `y_ξ` cannot be found inside the horizon.
pub fn find_configuration(h: &HTypeGraph, params: &ConfigParams) -> Option<Configuration> {
    let mut config = Configuration { a: Vec::new(), y: Vec::new(), misses: Vec::new() };
    let mut used_vertices = BTreeSet::new();
    for _ in 0..params.length {
        let pool: Vec<usize> =
            (0..params.horizon).filter(|&x| !used_vertices.contains(&h.a(x))).take(params.pool).collect();
        let (set, miss) = (1..=params.max_set)
            .flat_map(|size| combinations(&pool, size))
            .map(|set| {
                let m = misses(h, &set, &params.colours, params.horizon);
                (set, m)
            })
            .find(|&(_, m)| m <= params.slack)?;
        for &x in &set {
            used_vertices.insert(h.a(x));
        }
        config.a.push(set);
        config.misses.push(miss);

        let top = config.a.iter().flatten().copied().max().unwrap_or(0);
        let y = (top..params.horizon).find(|&z| {
            let bz = h.b(z);
            !used_vertices.contains(&bz)
                && !config.y.contains(&z)
                && config.a.iter().flatten().all(|&x| h.cross_colour(x, z).is_some())
                && config.a.iter().all(|set| in_union(h, set, &params.colours, z))
        })?;
        used_vertices.insert(h.b(y));
        config.y.push(y);
    }
    Some(config)
}

/// Pointwise re-check of every configuration clause; returns the first failure.
pub fn verify_configuration(h: &HTypeGraph, colours: &BTreeSet<Colour>, c: &Configuration) -> Result<(), String> {
    if c.a.len() != c.y.len() {
        return Err(format!("{} sets but {} points", c.a.len(), c.y.len()));
    }
    let mut seen = BTreeSet::new();
    for (xi, set) in c.a.iter().enumerate() {
        if set.is_empty() {
            return Err(format!("a_{xi} is empty"));
        }
        for &x in set {
            if !seen.insert(h.a(x)) {
                return Err(format!("vertex {} reused in a_{xi}", h.a(x)));
            }
        }
    }
    for (zeta, &y) in c.y.iter().enumerate() {
        if !seen.insert(h.b(y)) {
            return Err(format!("y_{zeta} = {} is not a fresh vertex", h.b(y)));
        }
        for (xi, set) in c.a.iter().enumerate().take(zeta + 1) {
            if !in_union(h, set, colours, y) {
                return Err(format!("y_{zeta} misses the neighbourhood of a_{xi}"));
            }
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::htype::index_colouring;

    fn alternating() -> HTypeGraph {
        HTypeGraph::disjoint(2, index_colouring(|_, z| z % 2)).unwrap()
    }

    #[test]
    fn constant_gives_diagonal() {
        let h = HTypeGraph::disjoint(1, index_colouring(|_, _| 0)).unwrap();
        let c = find_configuration(&h, &ConfigParams::new([0], 3, 100)).unwrap();
        assert_eq!(c.a, vec![vec![0], vec![1], vec![2]]);
        assert_eq!(c.y, vec![0, 1, 2]);
        assert!(verify_configuration(&h, &BTreeSet::from([0]), &c).is_ok());
    }

    #[test]
    fn no_colours_never_found() {
        let h = alternating();
        assert_eq!(find_configuration(&h, &ConfigParams::new([], 3, 100)), None);
    }

    #[test]
    fn alternating_needs_both_colours() {
        let h = alternating();
        assert_eq!(find_configuration(&h, &ConfigParams::new([0], 3, 100)), None);
        let c = find_configuration(&h, &ConfigParams::new([0, 1], 3, 100)).unwrap();
        assert!(c.a.iter().all(|s| s.len() == 1));
        assert!(verify_configuration(&h, &BTreeSet::from([0, 1]), &c).is_ok());
    }

    #[test]
    fn identified_kind_keeps_points_fresh() {
        let h = HTypeGraph::new(
            crate::htype::HKind::Identified,
            crate::htype::Enumeration::IDENTITY,
            crate::htype::Enumeration::IDENTITY,
            1,
            index_colouring(|_, _| 0),
        )
        .unwrap();
        let c = find_configuration(&h, &ConfigParams::new([0], 4, 100)).unwrap();
        assert!(verify_configuration(&h, &BTreeSet::from([0]), &c).is_ok());
    }

    #[test]
    fn verifier_catches_bad_point() {
        let h = alternating();
        let bad = Configuration { a: vec![vec![0], vec![1]], y: vec![0, 1], misses: vec![0, 0] };
        assert!(verify_configuration(&h, &BTreeSet::from([0]), &bad).is_err());
    }
}
