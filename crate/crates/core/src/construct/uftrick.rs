//! Vertex labelling by the unique large colour neighbourhood.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::{sample_subset, ConstructError, WitnessCheck, DEFAULT_WITNESS};
use crate::graph::{ColouredGraph, Colour, LazyColouredGraph, Vertex};
use crate::oracle::{LargeSetOracle, SetDescriptor};
use crate::verify::UnverifiedStep;

#[derive(Debug, Clone)]
pub struct UftrickParams {
    /// Vertices `0..depth` are labelled.
    pub depth: usize,
    /// Defaults to `10 * depth`.
    pub horizon: Option<usize>,
    pub witness: usize,
    /// Sampled sets per colour.
    pub samples: usize,
    pub max_set: usize,
    pub seed: u64,
    /// Large answers paired up by the final audit.
    pub audit: usize,
}

impl Default for UftrickParams {
    fn default() -> Self {
        Self { depth: 64, horizon: None, witness: DEFAULT_WITNESS, samples: 8, max_set: 4, seed: 0, audit: 32 }
    }
}

impl UftrickParams {
    pub fn horizon(&self) -> usize {
        self.horizon.unwrap_or(10 * self.depth)
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct UftrickResult {
    /// `d(v)` for `v < depth`.
    pub labels: Vec<Colour>,
    /// The colour `i` whose class `V_i` is large.
    pub distinguished: Colour,
    /// `|V_i ∩ [0, depth)|` per colour.
    pub class_sizes: Vec<usize>,
    pub checks: Vec<WitnessCheck>,
    pub unverified: Vec<UnverifiedStep>,
    /// Transcript length after the audit.
    pub transcript: usize,
}

/// The unique colour `i` with `{v : d(v) = i}` large.
pub(crate) fn distinguished_colour(g: &LazyColouredGraph, oracle: &mut LargeSetOracle) -> Result<Colour, ConstructError> {
    let mut large = Vec::new();
    for i in 0..g.colours() {
        if oracle.decide(&SetDescriptor::Labelled { colour: i }, g)? {
            large.push(i);
        }
    }
    match large[..] {
        [i] => Ok(i),
        _ => Err(ConstructError::Precondition(format!(
            "{} label classes answered large, expected exactly one",
            large.len()
        ))),
    }
}

/// Label `0..depth`, find the distinguished colour, and spot-check that
/// `N[F, i] ∩ V_{i_c}` is infinite for sampled finite `F ⊆ A ∩ V_i`.
///
/// Finishes with an oracle audit; incoherence is an error.
pub fn uftrick_partition(
    g: &LazyColouredGraph,
    a: &SetDescriptor,
    oracle: &mut LargeSetOracle,
    params: &UftrickParams,
) -> Result<UftrickResult, ConstructError> {
    let r = g.colours();
    let horizon = params.horizon();
    let mut labels = Vec::with_capacity(params.depth);
    for v in 0..params.depth {
        labels.push(oracle.label(v, g)?);
    }
    let mut class_sizes = vec![0; r];
    for &c in &labels {
        class_sizes[c] += 1;
    }

    let distinguished = distinguished_colour(g, oracle)?;

    let mut members = Vec::new();
    for v in 0..params.depth {
        let inside = a
            .contains_with(v, g, &mut |y| oracle.label(y, g))
            .map_err(|e| ConstructError::Descriptor(e.to_string()))?;
        if inside {
            members.push(v);
        }
    }

    let mut rng = ChaCha8Rng::seed_from_u64(params.seed);
    let mut checks = Vec::new();
    let mut unverified = Vec::new();
    let mut fail = |checks: &Vec<WitnessCheck>, what: &str| {
        let c = checks.last().expect("just pushed");
        if !c.passed() {
            unverified.push(UnverifiedStep {
                step: checks.len() - 1,
                reason: format!(
                    "{what} of {:?}: {} of {} below horizon {horizon}",
                    c.set, c.found, c.required
                ),
            });
        }
    };

    // N[F] is infinite for finite F ⊆ A
    for _ in 0..params.samples {
        let set = sample_subset(&mut rng, &members, params.max_set);
        let found = (0..horizon)
            .filter(|&x| set.iter().all(|&f| g.is_edge(f, x)))
            .take(params.witness)
            .count();
        checks.push(WitnessCheck { set, colour: None, found, required: params.witness });
        fail(&checks, "common neighbourhood");
    }

    for i in 0..r {
        let pool: Vec<Vertex> = members.iter().copied().filter(|&v| labels[v] == i).collect();
        if pool.is_empty() {
            continue;
        }
        for _ in 0..params.samples {
            let set = sample_subset(&mut rng, &pool, params.max_set);
            let mut found = 0;
            for x in 0..horizon {
                if found >= params.witness {
                    break;
                }
                if set.iter().all(|&f| g.edge_colour(f, x) == Some(i)) && oracle.label(x, g)? == distinguished {
                    found += 1;
                }
            }
            checks.push(WitnessCheck { set, colour: Some(i), found, required: params.witness });
            fail(&checks, "N[F,i] ∩ V_ic");
        }
    }

    oracle.ensure_coherent(g, params.audit)?;
    Ok(UftrickResult { labels, distinguished, class_sizes, checks, unverified, transcript: oracle.transcript_len() })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::colourings::ColouringSpec;

    fn run(spec: &str) -> UftrickResult {
        let g = spec.parse::<ColouringSpec>().unwrap().build_lazy().unwrap();
        let mut oracle = LargeSetOracle::make_congruence_oracle(vec![0]).unwrap();
        let params = UftrickParams { depth: 30, ..Default::default() };
        uftrick_partition(&g, &SetDescriptor::all(), &mut oracle, &params).unwrap()
    }

    #[test]
    fn constant_labels_everything_zero() {
        let res = run("constant:0");
        assert!(res.labels.iter().all(|&c| c == 0));
        assert_eq!(res.distinguished, 0);
        assert!(res.unverified.is_empty());
    }

    #[test]
    fn parity_labels_by_parity() {
        let res = run("parity");
        assert!(res.labels.iter().enumerate().all(|(v, &c)| c == v % 2));
        assert_eq!(res.distinguished, 0);
        assert!(res.unverified.is_empty());
    }

    #[test]
    fn star_centre_is_alone() {
        let res = run("star");
        assert_eq!(res.labels[0], 1);
        assert!(res.labels[1..].iter().all(|&c| c == 0));
        assert_eq!(res.distinguished, 0);
        assert_eq!(res.class_sizes, vec![29, 1]);
        assert!(res.unverified.is_empty());
    }

    #[test]
    fn short_horizon_is_reported_not_accepted() {
        let g = "parity".parse::<ColouringSpec>().unwrap().build_lazy().unwrap();
        let mut oracle = LargeSetOracle::make_congruence_oracle(vec![0]).unwrap();
        let params = UftrickParams { depth: 10, horizon: Some(12), witness: 8, ..Default::default() };
        let res = uftrick_partition(&g, &SetDescriptor::all(), &mut oracle, &params).unwrap();
        assert!(!res.unverified.is_empty());
    }
}
