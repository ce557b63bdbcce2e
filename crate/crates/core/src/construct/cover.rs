//! A single colour-`i` stream from a given start that absorbs a target set.

use std::collections::VecDeque;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{stream_witnesses, ConstructError};
use crate::graph::{ColouredGraph, Colour, LazyColouredGraph, Vertex};
use crate::oracle::SetDescriptor;
use crate::path::PathSeq;
use crate::verify::{CertificateParams, Mode, PathPartition, PrefixCertificate, UnverifiedStep};

#[derive(Debug, Clone)]
pub struct CoverParams {
    pub colour: Colour,
    /// Least member of the target set when absent.
    pub start: Option<Vertex>,
    pub steps: usize,
    /// Defaults to `10 * steps`.
    pub horizon: Option<usize>,
    pub seed: u64,
    /// Sampled linkage checks before the run.
    pub samples: usize,
    /// Largest forbidden set in a linkage check.
    pub forbid: usize,
}

impl CoverParams {
    pub fn new(colour: Colour, steps: usize) -> Self {
        Self { colour, start: None, steps, horizon: None, seed: 0, samples: 8, forbid: 2 }
    }

    pub fn horizon(&self) -> usize {
        self.horizon.unwrap_or(10 * self.steps).max(2)
    }
}

/// Interior vertices of a shortest colour-`i` path from `from` to `to`
/// below `horizon` that avoids `blocked`; smaller vertices are tried first.
pub(crate) fn link<G: ColouredGraph + ?Sized>(
    g: &G,
    from: Vertex,
    to: Vertex,
    colour: Colour,
    horizon: usize,
    blocked: &dyn Fn(Vertex) -> bool,
) -> Option<Vec<Vertex>> {
    let joined = |u, v| g.edge_colour(u, v) == Some(colour);
    if joined(from, to) {
        return Some(Vec::new());
    }
    let free = |w: Vertex| w != from && w != to && !blocked(w);
    if let Some(w) = (0..horizon).find(|&w| free(w) && joined(from, w) && joined(w, to)) {
        return Some(vec![w]);
    }
    let mut parent = vec![usize::MAX; horizon];
    let mut queue = VecDeque::from([from]);
    while let Some(u) = queue.pop_front() {
        if u != from && joined(u, to) {
            let mut path = vec![u];
            let mut x = u;
            while parent[x] != from {
                x = parent[x];
                path.push(x);
            }
            path.reverse();
            return Some(path);
        }
        for w in 0..horizon {
            if free(w) && parent[w] == usize::MAX && joined(u, w) {
                parent[w] = u;
                queue.push_back(w);
            }
        }
    }
    None
}

/// Grow a colour-`i` stream from `start` that absorbs the least uncovered
/// member of `target` at every step.
///
/// Before running, linkage between sampled target pairs is spot-checked
/// (always including `start` to early members); a failed check is an error.
pub fn cover_from(
    g: &LazyColouredGraph,
    target: &SetDescriptor,
    params: &CoverParams,
) -> Result<PrefixCertificate, ConstructError> {
    let horizon = params.horizon();
    let i = params.colour;
    if i >= g.colours() {
        return Err(ConstructError::Precondition(format!("colour {i} out of range")));
    }
    let mut members = Vec::with_capacity(horizon);
    for x in 0..horizon {
        members.push(target.contains(x, g).map_err(|e| ConstructError::Descriptor(e.to_string()))?);
    }
    let pool: Vec<Vertex> = (0..horizon).filter(|&x| members[x]).collect();
    let start = match params.start {
        Some(s) if s < horizon && members[s] => s,
        Some(s) => return Err(ConstructError::Precondition(format!("start {s} is not a target vertex below the horizon"))),
        None => *pool.first().ok_or_else(|| ConstructError::Precondition("target is empty below the horizon".into()))?,
    };

    let mut rng = ChaCha8Rng::seed_from_u64(params.seed);
    let early = pool.iter().copied().filter(|&x| x != start).take(params.samples);
    let mut pairs: Vec<(Vertex, Vertex, Vec<Vertex>)> = early.map(|x| (start, x, Vec::new())).collect();
    let window = pool.len().min(64);
    if window >= 2 {
        for _ in 0..params.samples {
            let u = pool[rng.gen_range(0..window)];
            let v = pool[rng.gen_range(0..window)];
            if u == v {
                continue;
            }
            let size = rng.gen_range(0..=params.forbid);
            let avoid: Vec<Vertex> = (0..size).map(|_| rng.gen_range(0..2 * window)).filter(|&f| f != u && f != v).collect();
            pairs.push((u, v, avoid));
        }
    }
    for (u, v, avoid) in pairs {
        if link(g, u, v, i, horizon, &|w| avoid.contains(&w)).is_none() {
            return Err(ConstructError::Linkage { from: u, to: v, colour: i, avoid, horizon });
        }
    }

    let mut used = vec![false; horizon];
    let mut stream = vec![start];
    used[start] = true;
    let mut unverified = Vec::new();
    let mut cursor = 0;
    let mut done = 0;
    while done < params.steps {
        while cursor < pool.len() && used[pool[cursor]] {
            cursor += 1;
        }
        let Some(&a) = pool.get(cursor) else {
            unverified.push(UnverifiedStep { step: done, reason: format!("no uncovered target below horizon {horizon}") });
            break;
        };
        let last = *stream.last().expect("non-empty");
        match link(g, last, a, i, horizon, &|w| used[w]) {
            Some(interior) => {
                for w in interior.into_iter().chain([a]) {
                    used[w] = true;
                    stream.push(w);
                }
            }
            None => {
                unverified.push(UnverifiedStep {
                    step: done,
                    reason: format!("no colour-{i} link from {last} to {a} below horizon {horizon}"),
                });
                break;
            }
        }
        done += 1;
    }
    while cursor < pool.len() && used[pool[cursor]] {
        cursor += 1;
    }
    let coverage_bound = pool.get(cursor).copied().unwrap_or(horizon);

    let paths = vec![PathSeq::new(i, stream)];
    let witnesses = stream_witnesses(g, &paths, horizon, &|w| used.get(w).copied().unwrap_or(false));
    Ok(PrefixCertificate {
        partition: PathPartition::new(Mode::Distinct, paths),
        step: done,
        coverage_bound,
        witnesses,
        params: CertificateParams {
            construction: "cover".into(),
            colouring: String::new(),
            oracle: None,
            seed: params.seed,
            horizon,
            steps: params.steps,
            target: Some(target.to_string()),
            htype: None,
        },
        unverified,
    })
}
