//! Cover by at most `r` monochromatic paths of distinct colours.
//!
//! Stream `i` collects the vertices labelled `i`. The least uncovered vertex
//! `v` joins stream `d(v)` directly when its last vertex is a colour-`d(v)`
//! neighbour, and otherwise through one connector taken from the
//! distinguished label class.

use serde::Serialize;

use super::uftrick::distinguished_colour;
use super::{stream_witnesses, ConstructError};
use crate::graph::{ColouredGraph, Colour, LazyColouredGraph, Vertex};
use crate::oracle::LargeSetOracle;
use crate::path::PathSeq;
use crate::verify::{CertificateParams, Mode, PathPartition, PrefixCertificate, UnverifiedStep};

#[derive(Debug, Clone)]
pub struct RadoParams {
    pub steps: usize,
    /// Defaults to `10 * steps`.
    pub horizon: Option<usize>,
    pub seed: u64,
}

impl RadoParams {
    pub fn new(steps: usize) -> Self {
        Self { steps, horizon: None, seed: 0 }
    }

    pub fn horizon(&self) -> usize {
        self.horizon.unwrap_or(10 * self.steps).max(1)
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct RadoRun {
    pub certificate: PrefixCertificate,
    pub distinguished: Colour,
    pub connectors: usize,
}

struct Labels<'a> {
    g: &'a LazyColouredGraph,
    oracle: &'a mut LargeSetOracle,
    cache: Vec<Option<Colour>>,
}

impl Labels<'_> {
    fn get(&mut self, v: Vertex) -> Result<Colour, ConstructError> {
        if let Some(Some(c)) = self.cache.get(v) {
            return Ok(*c);
        }
        let c = self.oracle.label(v, self.g)?;
        if v >= self.cache.len() {
            self.cache.resize(v + 1, None);
        }
        self.cache[v] = Some(c);
        Ok(c)
    }
}

/// Run `steps` absorption steps and certify the result.
///
/// Colouring and oracle names in the certificate parameters are left for
/// the caller to fill in.
pub fn rado_cover(
    g: &LazyColouredGraph,
    oracle: &mut LargeSetOracle,
    params: &RadoParams,
) -> Result<RadoRun, ConstructError> {
    let r = g.colours();
    let horizon = params.horizon();
    let distinguished = distinguished_colour(g, oracle)?;
    let oracle_id = oracle.id();
    let mut labels = Labels { g, oracle, cache: Vec::new() };

    let mut streams: Vec<Vec<Vertex>> = vec![Vec::new(); r];
    let mut used = vec![false; horizon];
    let mut next = 0;
    let mut unverified = Vec::new();
    let mut connectors = 0;
    let mut done = 0;

    while done < params.steps {
        while next < horizon && used[next] {
            next += 1;
        }
        if next >= horizon {
            unverified.push(UnverifiedStep { step: done, reason: format!("nothing uncovered below horizon {horizon}") });
            break;
        }
        let v = next;
        let i = labels.get(v)?;
        let stream = &streams[i];
        match stream.last() {
            None => {}
            Some(&last) if g.edge_colour(last, v) == Some(i) => {}
            Some(&last) => {
                let mut found = None;
                for w in v + 1..horizon {
                    if !used[w]
                        && g.edge_colour(last, w) == Some(i)
                        && g.edge_colour(w, v) == Some(i)
                        && labels.get(w)? == distinguished
                    {
                        found = Some(w);
                        break;
                    }
                }
                let Some(w) = found else {
                    unverified.push(UnverifiedStep {
                        step: done,
                        reason: format!("no colour-{i} connector from {last} to {v} below horizon {horizon}"),
                    });
                    break;
                };
                streams[i].push(w);
                used[w] = true;
                connectors += 1;
            }
        }
        streams[i].push(v);
        used[v] = true;
        done += 1;
    }
    while next < horizon && used[next] {
        next += 1;
    }

    let paths: Vec<PathSeq> =
        streams.into_iter().enumerate().filter(|(_, s)| !s.is_empty()).map(|(c, s)| PathSeq::new(c, s)).collect();
    let witnesses = stream_witnesses(g, &paths, horizon, &|w| used.get(w).copied().unwrap_or(false));
    let certificate = PrefixCertificate {
        partition: PathPartition::new(Mode::Distinct, paths),
        step: done,
        coverage_bound: next,
        witnesses,
        params: CertificateParams {
            construction: "rado".into(),
            colouring: String::new(),
            oracle: Some(oracle_id),
            seed: params.seed,
            horizon,
            steps: params.steps,
            target: None,
            htype: None,
        },
        unverified,
    };
    Ok(RadoRun { certificate, distinguished, connectors })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::colourings::ColouringSpec;
    use crate::verify::{verify_certificate, Status};

    fn run(spec: &str, steps: usize) -> RadoRun {
        let g = spec.parse::<ColouringSpec>().unwrap().build_lazy().unwrap();
        let mut oracle = LargeSetOracle::make_congruence_oracle(vec![0]).unwrap();
        let run = rado_cover(&g, &mut oracle, &RadoParams::new(steps)).unwrap();
        assert_eq!(verify_certificate(&g, &run.certificate).status(), Status::Ok, "{spec}");
        run
    }

    #[test]
    fn constant_is_one_stream_in_order() {
        let run = run("constant:0", 10);
        assert_eq!(run.certificate.streams(), &[PathSeq::new(0, (0..10).collect())]);
        assert_eq!(run.certificate.coverage_bound, 10);
    }

    #[test]
    fn parity_uses_even_connectors_for_odd_stream() {
        let run = run("parity", 200);
        let s = run.certificate.streams();
        assert_eq!(s.len(), 2);
        assert!(s[0].vertices.iter().all(|v| v % 2 == 0));
        assert!(s[1].vertices.iter().step_by(2).all(|v| v % 2 == 1));
        assert!(run.connectors > 0);
        assert!(run.certificate.coverage_bound >= 200);
    }

    #[test]
    fn star_centre_gets_its_own_stream() {
        let run = run("star", 100);
        let s = run.certificate.streams();
        assert_eq!(s[1].vertices, vec![0]);
        assert_eq!(s[0].vertices, (1..100).collect::<Vec<_>>());
        assert_eq!(run.certificate.witnesses[1], Some(100));
    }

    #[test]
    fn coverage_grows() {
        for spec in ["constant:0", "parity", "mod:3", "star", "layer:table=0/1/1"] {
            let b = |s| run(spec, s).certificate.coverage_bound;
            assert!(b(200) > b(100), "{spec}");
        }
    }
}
