//! Splitting main-class indices by their large neighbourhood colour.
//!
//! Works in index space: `N(ξ, j)` is the set of second-class indices `ζ`
//! with `a_ξ b_ζ` an edge of colour `j`.

use std::collections::{BTreeMap, BTreeSet};

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::{sample_subset, ConstructError, WitnessCheck, DEFAULT_WITNESS};
use crate::graph::Colour;
use crate::htype::HTypeGraph;
use crate::oracle::{CrossNeighbourhoods, LargeSetOracle, SetDescriptor};
use crate::verify::UnverifiedStep;

#[derive(Debug, Clone)]
pub struct SplitParams {
    /// Colours whose neighbourhoods are avoided.
    pub avoid: BTreeSet<Colour>,
    pub depth: usize,
    /// Defaults to `10 * depth`.
    pub horizon: Option<usize>,
    pub witness: usize,
    pub samples: usize,
    pub seed: u64,
}

impl SplitParams {
    pub fn new(avoid: impl IntoIterator<Item = Colour>, depth: usize) -> Self {
        Self { avoid: avoid.into_iter().collect(), depth, horizon: None, witness: DEFAULT_WITNESS, samples: 8, seed: 0 }
    }

    pub fn horizon(&self) -> usize {
        self.horizon.unwrap_or(10 * self.depth)
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct SplitResult {
    /// `X_j` for every colour `j` outside the avoided set.
    pub classes: BTreeMap<Colour, Vec<usize>>,
    pub checks: Vec<WitnessCheck>,
    pub unverified: Vec<UnverifiedStep>,
}

/// Partition `X ∩ [0, depth)` (main-class indices) into the classes
/// `X_j = {ξ : N(ξ, j) large}`, `j` outside the avoided colours.
///
/// Fails when the avoided neighbourhoods of a sampled finite subset of `X`
/// already cover a large set.
pub fn ultrafilter_split(
    h: &HTypeGraph,
    x: &SetDescriptor,
    oracle: &mut LargeSetOracle,
    params: &SplitParams,
) -> Result<SplitResult, ConstructError> {
    let src = CrossNeighbourhoods(h);
    let r = crate::graph::ColouredGraph::colours(h);
    let horizon = params.horizon();
    let mut members = Vec::new();
    for xi in 0..params.depth {
        if x.contains(xi, &src).map_err(|e| ConstructError::Descriptor(e.to_string()))? {
            members.push(xi);
        }
    }

    let mut rng = ChaCha8Rng::seed_from_u64(params.seed);
    let mut probes: Vec<Vec<usize>> = members.iter().take(4).map(|&m| vec![m]).collect();
    probes.extend((0..params.samples).map(|_| sample_subset(&mut rng, &members, 3)));
    for a in probes.into_iter().filter(|a| !a.is_empty()) {
        let covered = a
            .iter()
            .flat_map(|&xi| params.avoid.iter().map(move |&i| SetDescriptor::nbhd(xi, i)))
            .collect();
        let rest = SetDescriptor::or(covered).complement();
        if !oracle.decide(&rest, &src)? {
            return Err(ConstructError::Precondition(format!(
                "{rest} is small; look for a configuration instead"
            )));
        }
    }

    let mut classes: BTreeMap<Colour, Vec<usize>> =
        (0..r).filter(|j| !params.avoid.contains(j)).map(|j| (j, Vec::new())).collect();
    for &xi in &members {
        let j = oracle.label(xi, &src)?;
        classes
            .get_mut(&j)
            .ok_or_else(|| ConstructError::Precondition(format!("N({xi},{j}) is large but colour {j} is avoided")))?
            .push(xi);
    }

    let mut checks = Vec::new();
    let mut unverified = Vec::new();
    for (&j, class) in &classes {
        if class.len() < 2 {
            continue;
        }
        for _ in 0..params.samples {
            let mut pair: Vec<usize> = class.choose_multiple(&mut rng, 2).copied().collect();
            pair.sort_unstable();
            let found = (0..horizon)
                .filter(|&z| pair.iter().all(|&xi| h.in_cross_neighbourhood(xi, j, z)))
                .take(params.witness)
                .count();
            let check = WitnessCheck { set: pair, colour: Some(j), found, required: params.witness };
            if !check.passed() {
                unverified.push(UnverifiedStep {
                    step: checks.len(),
                    reason: format!("N({0},{j}) ∩ N({1},{j}): {found} below horizon {horizon}", check.set[0], check.set[1]),
                });
            }
            checks.push(check);
        }
    }
    Ok(SplitResult { classes, checks, unverified })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::Periodicity;
    use crate::htype::index_colouring;

    fn periodic(h: HTypeGraph, period: usize) -> HTypeGraph {
        h.with_periodicity(Periodicity { start: 0, period })
    }

    #[test]
    fn alternating_lands_in_colour_zero() {
        let h = periodic(HTypeGraph::disjoint(2, index_colouring(|_, z| z % 2)).unwrap(), 2);
        let mut oracle = LargeSetOracle::make_congruence_oracle(vec![0]).unwrap();
        let res = ultrafilter_split(&h, &SetDescriptor::all(), &mut oracle, &SplitParams::new([], 20)).unwrap();
        assert_eq!(res.classes[&0], (0..20).collect::<Vec<_>>());
        assert!(res.classes[&1].is_empty());
        assert!(res.unverified.is_empty());
        assert!(oracle.check_coherence().is_empty());
    }

    #[test]
    fn avoiding_the_only_colour_fails() {
        let h = periodic(HTypeGraph::disjoint(1, index_colouring(|_, _| 0)).unwrap(), 1);
        let mut oracle = LargeSetOracle::make_congruence_oracle(vec![0]).unwrap();
        let err = ultrafilter_split(&h, &SetDescriptor::all(), &mut oracle, &SplitParams::new([0], 10));
        assert!(matches!(err, Err(ConstructError::Precondition(_))));
    }

    #[test]
    fn constant_without_avoidance_is_one_class() {
        let h = periodic(HTypeGraph::disjoint(1, index_colouring(|_, _| 0)).unwrap(), 1);
        let mut oracle = LargeSetOracle::make_congruence_oracle(vec![0]).unwrap();
        let res = ultrafilter_split(&h, &SetDescriptor::all(), &mut oracle, &SplitParams::new([], 10)).unwrap();
        assert_eq!(res.classes[&0].len(), 10);
    }
}
