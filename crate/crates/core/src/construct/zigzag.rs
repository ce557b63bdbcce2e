//! The alternating a/b path through a half-graph-type graph.
//!
//! Starts at `a_0`. After emitting `a_l` it emits the least unused `b_k`
//! with `k >= l` for which some unused `a_j` with `j <= k` and
//! `a_j != b_k` remains, then the least such `a_j`. In the disjoint kind
//! this is `a_0, b_1, a_1, b_2, a_2, ...`.

use std::collections::HashSet;

use super::stream_witnesses;
use crate::graph::Vertex;
use crate::htype::HTypeGraph;
use crate::path::{OmegaPathStream, StreamGenerator};
use crate::verify::{CertificateParams, Mode, PathPartition, PrefixCertificate};

pub struct ZigZag {
    h: HTypeGraph,
    used: HashSet<Vertex>,
    started: bool,
    last_a: usize,
    /// Least a-index whose vertex is unused.
    next_a: usize,
}

impl ZigZag {
    pub fn new(h: HTypeGraph) -> Self {
        Self { h, used: HashSet::new(), started: false, last_a: 0, next_a: 0 }
    }

    fn mark(&mut self, v: Vertex, out: &mut Vec<Vertex>) {
        self.used.insert(v);
        out.push(v);
    }

    /// Least a-index `j <= k` with an unused vertex different from `b_k`.
    fn partner(&self, k: usize) -> Option<usize> {
        let bk = self.h.b(k);
        (self.next_a..=k).find(|&j| {
            let aj = self.h.a(j);
            aj != bk && !self.used.contains(&aj)
        })
    }

    /// Least a-index not yet covered.
    pub fn frontier(&self) -> usize {
        self.next_a
    }
}

impl StreamGenerator for ZigZag {
    fn advance(&mut self, out: &mut Vec<Vertex>) -> bool {
        if !self.started {
            self.started = true;
            let a0 = self.h.a(0);
            self.mark(a0, out);
        } else {
            let mut k = self.last_a;
            let j = loop {
                if !self.used.contains(&self.h.b(k)) {
                    if let Some(j) = self.partner(k) {
                        break j;
                    }
                }
                k += 1;
            };
            let (bk, aj) = (self.h.b(k), self.h.a(j));
            self.mark(bk, out);
            self.mark(aj, out);
            self.last_a = j;
        }
        while self.used.contains(&self.h.a(self.next_a)) {
            self.next_a += 1;
        }
        true
    }
}

/// The zig-zag as an uncoloured ω-stream of host vertices.
pub fn zigzag_htype(h: &HTypeGraph) -> OmegaPathStream {
    OmegaPathStream::new(None, Box::new(ZigZag::new(h.clone())))
}

/// Certificate for the first `steps` emitted vertices. Coverage is claimed
/// for the main class only; the horizon defaults to `10 * steps + 16`.
pub fn zigzag_certificate(h: &HTypeGraph, steps: usize, horizon: Option<usize>) -> PrefixCertificate {
    let horizon = horizon.unwrap_or(10 * steps + 16);
    let mut z = ZigZag::new(h.clone());
    let mut prefix = Vec::new();
    while prefix.len() < steps {
        z.advance(&mut prefix);
    }
    prefix.truncate(steps);
    let used: HashSet<Vertex> = prefix.iter().copied().collect();
    // the a-vertices below the least uncovered one are all covered
    let bound_index = (0..).find(|&j| !used.contains(&h.a(j))).expect("prefix is finite");
    let coverage_bound = h.a(bound_index);

    let paths = vec![crate::path::PathSeq::uncoloured(prefix)];
    let witnesses = stream_witnesses(h, &paths, horizon, &|w| used.contains(&w));
    PrefixCertificate {
        partition: PathPartition::new(Mode::Any, paths),
        step: steps,
        coverage_bound,
        witnesses,
        params: CertificateParams {
            construction: "zigzag".into(),
            colouring: String::new(),
            oracle: None,
            seed: 0,
            horizon,
            steps,
            target: Some(main_class_descriptor(h)),
            htype: Some(h.kind()),
        },
        unverified: Vec::new(),
    }
}

/// `{a_ξ}` in descriptor syntax.
fn main_class_descriptor(h: &HTypeGraph) -> String {
    let (a0, a1) = (h.a(0), h.a(1));
    let stride = a1 - a0;
    match (stride, a0) {
        (1, 0) => "all".into(),
        (s, o) if o < s => format!("mod({o},{s})"),
        (s, o) => format!("mod({},{s})&range({o},)", o % s),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::colourings::ColouringSpec;
    use crate::verify::{verify_certificate, Status};

    fn host() -> crate::graph::LazyColouredGraph {
        "constant:0".parse::<ColouringSpec>().unwrap().build_lazy().unwrap()
    }

    #[test]
    fn disjoint_prefix() {
        let h = HTypeGraph::disjoint_from(&host()).unwrap();
        let mut s = zigzag_htype(&h);
        s.fill(7);
        let expect: Vec<Vertex> = vec![h.a(0), h.b(1), h.a(1), h.b(2), h.a(2), h.b(3), h.a(3)];
        assert_eq!(&s.produced()[..7], &expect[..]);
    }

    #[test]
    fn identified_prefix_skips_collisions() {
        let h = HTypeGraph::from_complete(&host()).unwrap();
        let mut s = zigzag_htype(&h);
        s.fill(7);
        assert_eq!(&s.produced()[..7], &[0, 2, 1, 4, 3, 6, 5]);
    }

    #[test]
    fn six_steps_cover_three() {
        let h = HTypeGraph::disjoint_from(&host()).unwrap();
        let cert = zigzag_certificate(&h, 6, None);
        assert_eq!(cert.coverage_bound, h.a(3));
        assert_eq!(cert.params.target.as_deref(), Some("mod(0,2)"));
        let rep = verify_certificate(&h, &cert);
        assert_eq!(rep.status(), Status::Ok, "{rep}");
    }

    #[test]
    fn identified_certificate_verifies() {
        let h = HTypeGraph::from_complete(&host()).unwrap();
        let cert = zigzag_certificate(&h, 101, None);
        let rep = verify_certificate(&h, &cert);
        assert_eq!(rep.status(), Status::Ok, "{rep}");
        assert!(cert.coverage_bound >= 50);
    }
}
