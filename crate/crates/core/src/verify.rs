//! Independent checks for paths, path partitions and prefix certificates.
//!
//! Nothing here trusts the producer: every clause is recomputed against the
//! graph's colour oracle.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::graph::{ColouredGraph, Colour, Vertex};
use crate::oracle::{GraphNeighbourhoods, SetDescriptor};
use crate::path::PathSeq;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    /// Paths must carry pairwise distinct colour labels.
    Distinct,
    /// Any number of paths of any colours.
    Any,
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Mode::Distinct => "distinct",
            Mode::Any => "any",
        })
    }
}

impl std::str::FromStr for Mode {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "distinct" => Ok(Mode::Distinct),
            "any" => Ok(Mode::Any),
            other => Err(format!("unknown mode '{other}' (expected distinct or any)")),
        }
    }
}

/// Vertex-disjoint monochromatic paths together with the set they claim to cover.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PathPartition {
    pub mode: Mode,
    pub paths: Vec<PathSeq>,
    pub cover: Vec<Vertex>,
}

impl PathPartition {
    /// Builds the partition with `cover` set to the union of the paths.
    pub fn new(mode: Mode, paths: Vec<PathSeq>) -> Self {
        let mut cover: Vec<Vertex> = paths.iter().flat_map(|p| p.vertices.iter().copied()).collect();
        cover.sort_unstable();
        cover.dedup();
        Self { mode, paths, cover }
    }

    pub fn len(&self) -> usize {
        self.paths.len()
    }

    pub fn is_empty(&self) -> bool {
        self.paths.is_empty()
    }
}

/// First defect found along a single path.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "defect", rename_all = "snake_case")]
pub enum PathViolation {
    RepeatedVertex { index: usize, vertex: Vertex },
    NotAnEdge { index: usize, u: Vertex, v: Vertex },
    WrongColour { index: usize, u: Vertex, v: Vertex, expected: Colour, found: Colour },
    VertexOutOfRange { index: usize, vertex: Vertex },
}

impl PathViolation {
    /// Position of the violation (an edge is indexed by its first endpoint).
    pub fn index(&self) -> usize {
        match self {
            PathViolation::RepeatedVertex { index, .. }
            | PathViolation::NotAnEdge { index, .. }
            | PathViolation::WrongColour { index, .. }
            | PathViolation::VertexOutOfRange { index, .. } => *index,
        }
    }
}

impl fmt::Display for PathViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PathViolation::RepeatedVertex { index, vertex } => write!(f, "vertex {vertex} repeated at index {index}"),
            PathViolation::NotAnEdge { index, u, v } => write!(f, "{{{u},{v}}} at index {index} is not an edge"),
            PathViolation::WrongColour { index, u, v, expected, found } => {
                write!(f, "edge {{{u},{v}}} at index {index} has colour {found}, expected {expected}")
            }
            PathViolation::VertexOutOfRange { index, vertex } => {
                write!(f, "vertex {vertex} at index {index} is outside the graph")
            }
        }
    }
}

/// Injective, and every consecutive pair an edge of the path's colour.
/// Paths of length at most one always pass.
pub fn verify_path<G: ColouredGraph + ?Sized>(g: &G, path: &PathSeq) -> Result<(), PathViolation> {
    let mut seen = HashMap::with_capacity(path.len());
    for (k, &v) in path.vertices.iter().enumerate() {
        if g.order().is_some_and(|n| v >= n) {
            return Err(PathViolation::VertexOutOfRange { index: k, vertex: v });
        }
        if k > 0 {
            let u = path.vertices[k - 1];
            match (g.edge_colour(u, v), path.colour) {
                (None, _) if u != v => return Err(PathViolation::NotAnEdge { index: k - 1, u, v }),
                (Some(found), Some(expected)) if found != expected => {
                    return Err(PathViolation::WrongColour { index: k - 1, u, v, expected, found });
                }
                _ => {}
            }
        }
        if seen.insert(v, k).is_some() {
            return Err(PathViolation::RepeatedVertex { index: k, vertex: v });
        }
    }
    Ok(())
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "clause", rename_all = "snake_case")]
pub enum Violation {
    InvalidPath { path: usize, violation: PathViolation },
    MissingColour { path: usize },
    ColourOutOfRange { path: usize, colour: Colour },
    ColourReused { colour: Colour, first: usize, second: usize },
    SharedVertex { vertex: Vertex, first: usize, second: usize },
    /// Claimed as covered but on no path.
    Uncovered { vertex: Vertex },
    /// On a path but not claimed as covered.
    NotInCover { vertex: Vertex },
    /// Below the coverage bound, in the target, and on no stream.
    BelowBoundUncovered { vertex: Vertex },
    WitnessCount { streams: usize, witnesses: usize },
    WitnessUsed { stream: usize, vertex: Vertex },
    WitnessNotAdjacent { stream: usize, vertex: Vertex },
    BadTarget { reason: String },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::InvalidPath { path, violation } => write!(f, "path {path}: {violation}"),
            Violation::MissingColour { path } => write!(f, "path {path} has no colour label"),
            Violation::ColourOutOfRange { path, colour } => write!(f, "path {path} uses colour {colour} out of range"),
            Violation::ColourReused { colour, first, second } => {
                write!(f, "colour {colour} used by paths {first} and {second}")
            }
            Violation::SharedVertex { vertex, first, second } => {
                write!(f, "vertex {vertex} duplicated in paths {first} and {second}")
            }
            Violation::Uncovered { vertex } => write!(f, "vertex {vertex} is claimed but on no path"),
            Violation::NotInCover { vertex } => write!(f, "vertex {vertex} is on a path but not claimed"),
            Violation::BelowBoundUncovered { vertex } => {
                write!(f, "vertex {vertex} lies below the coverage bound but on no stream")
            }
            Violation::WitnessCount { streams, witnesses } => {
                write!(f, "{streams} streams but {witnesses} witnesses")
            }
            Violation::WitnessUsed { stream, vertex } => write!(f, "witness {vertex} of stream {stream} is already used"),
            Violation::WitnessNotAdjacent { stream, vertex } => {
                write!(f, "witness {vertex} is not adjacent to the end of stream {stream} in its colour")
            }
            Violation::BadTarget { reason } => write!(f, "cannot evaluate target set: {reason}"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Ok,
    Violation,
    Unverifiable,
}

impl Status {
    /// Exit code convention: 0 ok, 1 violation, 3 unverifiable.
    pub fn exit_code(self) -> i32 {
        match self {
            Status::Ok => 0,
            Status::Violation => 1,
            Status::Unverifiable => 3,
        }
    }
}

/// Every failed clause, plus the reasons a check could not be completed.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Report {
    pub violations: Vec<Violation>,
    pub unverifiable: Vec<String>,
}

impl Report {
    pub fn status(&self) -> Status {
        if !self.violations.is_empty() {
            Status::Violation
        } else if !self.unverifiable.is_empty() {
            Status::Unverifiable
        } else {
            Status::Ok
        }
    }

    pub fn is_ok(&self) -> bool {
        self.status() == Status::Ok
    }
}

impl fmt::Display for Report {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.status() {
            Status::Ok => write!(f, "ok"),
            _ => {
                for v in &self.violations {
                    writeln!(f, "violation: {v}")?;
                }
                for u in &self.unverifiable {
                    writeln!(f, "unverifiable: {u}")?;
                }
                Ok(())
            }
        }
    }
}

/// Checks that go for partitions and certificates alike: path validity,
/// labels, disjointness and the claimed cover. Unlabelled paths are only
/// accepted where `uncoloured` allows host-graph paths.
fn check_paths<G: ColouredGraph + ?Sized>(
    g: &G,
    part: &PathPartition,
    uncoloured: bool,
    report: &mut Report,
) -> HashMap<Vertex, usize> {
    let mut owner: HashMap<Vertex, usize> = HashMap::new();
    let mut colour_owner: BTreeMap<Colour, usize> = BTreeMap::new();
    for (k, path) in part.paths.iter().enumerate() {
        if let Err(violation) = verify_path(g, path) {
            report.violations.push(Violation::InvalidPath { path: k, violation });
        }
        match path.colour {
            Some(c) if c >= g.colours() => report.violations.push(Violation::ColourOutOfRange { path: k, colour: c }),
            None if (!path.is_degenerate() && !uncoloured) || part.mode == Mode::Distinct => {
                report.violations.push(Violation::MissingColour { path: k });
            }
            _ => {}
        }
        if part.mode == Mode::Distinct {
            if let Some(c) = path.colour {
                if let Some(&first) = colour_owner.get(&c) {
                    report.violations.push(Violation::ColourReused { colour: c, first, second: k });
                } else {
                    colour_owner.insert(c, k);
                }
            }
        }
        for &v in &path.vertices {
            match owner.get(&v) {
                Some(&first) if first != k => {
                    report.violations.push(Violation::SharedVertex { vertex: v, first, second: k });
                }
                Some(_) => {}
                None => {
                    owner.insert(v, k);
                }
            }
        }
    }
    let claimed: BTreeSet<Vertex> = part.cover.iter().copied().collect();
    for &v in &claimed {
        if !owner.contains_key(&v) {
            report.violations.push(Violation::Uncovered { vertex: v });
        }
    }
    let mut on_paths: Vec<Vertex> = owner.keys().copied().filter(|v| !claimed.contains(v)).collect();
    on_paths.sort_unstable();
    for v in on_paths {
        report.violations.push(Violation::NotInCover { vertex: v });
    }
    owner
}

/// All partition invariants against `g`; every failed clause is reported.
pub fn verify_partition<G: ColouredGraph + ?Sized>(g: &G, part: &PathPartition) -> Report {
    let mut report = Report::default();
    check_paths(g, part, false, &mut report);
    report
}

/// [`verify_partition`] plus the requirement that the cover is the whole
/// vertex set of a finite graph.
pub fn verify_vertex_partition<G: ColouredGraph + ?Sized>(g: &G, part: &PathPartition) -> Report {
    let mut report = verify_partition(g, part);
    if let Some(n) = g.order() {
        let claimed: BTreeSet<Vertex> = part.cover.iter().copied().collect();
        for v in (0..n).filter(|v| !claimed.contains(v)) {
            report.violations.push(Violation::BelowBoundUncovered { vertex: v });
        }
    }
    report
}

/// How a certificate was produced; enough to rebuild the graph it speaks about.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct CertificateParams {
    pub construction: String,
    pub colouring: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub oracle: Option<String>,
    pub seed: u64,
    pub horizon: usize,
    pub steps: usize,
    /// Set whose members below the coverage bound must be covered; all vertices when absent.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub target: Option<String>,
    /// Half-graph kind when the streams live in a half-graph-type graph.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub htype: Option<crate::htype::HKind>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct UnverifiedStep {
    pub step: usize,
    pub reason: String,
}

/// Finitary evidence that an ω-construction ran correctly for `step` steps.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PrefixCertificate {
    #[serde(flatten)]
    pub partition: PathPartition,
    pub step: usize,
    pub coverage_bound: usize,
    /// One per stream: an unused vertex adjacent to the stream's last vertex in its colour.
    pub witnesses: Vec<Option<Vertex>>,
    pub params: CertificateParams,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub unverified: Vec<UnverifiedStep>,
}

impl PrefixCertificate {
    pub fn streams(&self) -> &[PathSeq] {
        &self.partition.paths
    }
}

/// Recompute every certificate invariant against `g`.
///
/// Anything at or beyond the recorded horizon, a missing witness, or a
/// construction step the producer itself marked unverified makes the
/// result unverifiable rather than a failure.
pub fn verify_certificate<G: ColouredGraph + ?Sized>(g: &G, cert: &PrefixCertificate) -> Report {
    let mut report = Report::default();
    // streams in a half-graph-type host are paths of the host, not monochromatic
    let owner = check_paths(g, &cert.partition, cert.params.htype.is_some(), &mut report);
    let horizon = cert.params.horizon;

    if let Some(&beyond) = owner.keys().filter(|&&v| v >= horizon).min() {
        report.unverifiable.push(format!("vertex {beyond} lies beyond horizon {horizon}"));
    }

    let target = match cert.params.target.as_deref().map(str::parse::<SetDescriptor>) {
        None => Some(SetDescriptor::all()),
        Some(Ok(d)) => Some(d),
        Some(Err(e)) => {
            report.violations.push(Violation::BadTarget { reason: e.to_string() });
            None
        }
    };
    if let Some(target) = target {
        let src = GraphNeighbourhoods(g);
        for v in 0..cert.coverage_bound {
            match target.contains(v, &src) {
                Ok(true) if !owner.contains_key(&v) => report.violations.push(Violation::BelowBoundUncovered { vertex: v }),
                Ok(_) => {}
                Err(e) => {
                    report.violations.push(Violation::BadTarget { reason: e.to_string() });
                    break;
                }
            }
        }
    }

    let streams = cert.streams();
    if streams.len() != cert.witnesses.len() {
        report.violations.push(Violation::WitnessCount { streams: streams.len(), witnesses: cert.witnesses.len() });
    }
    for (k, (stream, witness)) in streams.iter().zip(&cert.witnesses).enumerate() {
        let Some(last) = stream.last() else { continue };
        let Some(w) = *witness else {
            report.unverifiable.push(format!("stream {k} has no extendability witness"));
            continue;
        };
        if owner.contains_key(&w) {
            report.violations.push(Violation::WitnessUsed { stream: k, vertex: w });
            continue;
        }
        if w >= horizon {
            report.unverifiable.push(format!("witness {w} of stream {k} lies beyond horizon {horizon}"));
            continue;
        }
        let adjacent = match stream.colour {
            Some(c) => g.edge_colour(last, w) == Some(c),
            None => g.is_edge(last, w),
        };
        if !adjacent {
            report.violations.push(Violation::WitnessNotAdjacent { stream: k, vertex: w });
        }
    }
    for u in &cert.unverified {
        report.unverifiable.push(format!("step {}: {}", u.step, u.reason));
    }
    report
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{FiniteColouredGraph, LazyColouredGraph};
    use std::sync::Arc;

    fn parity() -> LazyColouredGraph {
        LazyColouredGraph::new(2, Arc::new(|u, v| (u + v) % 2)).unwrap()
    }

    fn constant(r: usize) -> LazyColouredGraph {
        LazyColouredGraph::new(r, Arc::new(|_, _| 0)).unwrap()
    }

    #[test]
    fn path_examples() {
        let k5 = FiniteColouredGraph::new(5, 1).unwrap();
        assert_eq!(verify_path(&k5, &PathSeq::new(0, vec![0, 1, 2])), Ok(()));
        assert_eq!(verify_path(&parity(), &PathSeq::new(0, vec![0, 2, 4])), Ok(()));
        let err = verify_path(&parity(), &PathSeq::new(0, vec![0, 1])).unwrap_err();
        assert_eq!(err.index(), 0);
        assert!(matches!(err, PathViolation::WrongColour { found: 1, .. }));
    }

    #[test]
    fn degenerate_paths_pass() {
        let g = parity();
        assert!(verify_path(&g, &PathSeq::uncoloured(vec![])).is_ok());
        assert!(verify_path(&g, &PathSeq::singleton(9)).is_ok());
        assert!(verify_path(&g, &PathSeq::new(1, vec![3])).is_ok());
    }

    #[test]
    fn repeated_vertex_reported_at_second_occurrence() {
        let g = constant(1);
        let err = verify_path(&g, &PathSeq::new(0, vec![4, 5, 6, 5])).unwrap_err();
        assert_eq!(err, PathViolation::RepeatedVertex { index: 3, vertex: 5 });
    }

    #[test]
    fn partition_examples() {
        let k3 = FiniteColouredGraph::new(3, 1).unwrap();
        let ok = PathPartition::new(Mode::Any, vec![PathSeq::new(0, vec![0, 1, 2])]);
        assert!(verify_vertex_partition(&k3, &ok).is_ok());

        let dup = PathPartition::new(Mode::Any, vec![PathSeq::new(0, vec![0, 1]), PathSeq::new(0, vec![1, 2])]);
        let report = verify_partition(&k3, &dup);
        assert_eq!(report.violations, vec![Violation::SharedVertex { vertex: 1, first: 0, second: 1 }]);

        let k4 = FiniteColouredGraph::from_fn(4, 2, |u, v| if (u, v) == (0, 1) { 0 } else { 1 }).unwrap();
        let p = PathPartition::new(Mode::Distinct, vec![PathSeq::new(1, vec![1, 2, 0, 3])]);
        assert!(verify_vertex_partition(&k4, &p).is_ok());
    }

    #[test]
    fn partition_reports_every_clause() {
        let k4 = FiniteColouredGraph::new(4, 2).unwrap();
        let mut p = PathPartition::new(
            Mode::Distinct,
            vec![PathSeq::new(0, vec![0, 1]), PathSeq::new(0, vec![2]), PathSeq::uncoloured(vec![3])],
        );
        p.cover.push(7);
        let report = verify_partition(&k4, &p);
        assert!(report.violations.contains(&Violation::ColourReused { colour: 0, first: 0, second: 1 }));
        assert!(report.violations.contains(&Violation::MissingColour { path: 2 }));
        assert!(report.violations.contains(&Violation::Uncovered { vertex: 7 }));
        assert_eq!(report.status(), Status::Violation);
    }

    fn cert(paths: Vec<PathSeq>, bound: usize, witnesses: Vec<Option<Vertex>>) -> PrefixCertificate {
        PrefixCertificate {
            partition: PathPartition::new(Mode::Distinct, paths),
            step: bound,
            coverage_bound: bound,
            witnesses,
            params: CertificateParams { construction: "test".into(), horizon: 100, ..Default::default() },
            unverified: vec![],
        }
    }

    #[test]
    fn certificate_examples() {
        let g = constant(1);
        let good = cert(vec![PathSeq::new(0, (0..10).collect())], 10, vec![Some(10)]);
        assert!(verify_certificate(&g, &good).is_ok());

        let g2 = constant(2);
        let shared = cert(vec![PathSeq::new(0, vec![5, 7]), PathSeq::new(1, vec![7])], 0, vec![Some(9), Some(8)]);
        let r = verify_certificate(&g2, &shared);
        assert!(r.violations.iter().any(|v| matches!(v, Violation::SharedVertex { vertex: 7, .. })));

        let used = cert(vec![PathSeq::new(0, (0..10).collect())], 10, vec![Some(3)]);
        let r = verify_certificate(&g, &used);
        assert_eq!(r.violations, vec![Violation::WitnessUsed { stream: 0, vertex: 3 }]);
    }

    #[test]
    fn certificate_unverifiable_beyond_horizon() {
        let g = constant(1);
        let mut c = cert(vec![PathSeq::new(0, (0..10).collect())], 10, vec![Some(150)]);
        assert_eq!(verify_certificate(&g, &c).status(), Status::Unverifiable);
        c.witnesses = vec![None];
        assert_eq!(verify_certificate(&g, &c).status(), Status::Unverifiable);
        c.witnesses = vec![Some(10)];
        c.coverage_bound = 11;
        assert_eq!(verify_certificate(&g, &c).violations, vec![Violation::BelowBoundUncovered { vertex: 10 }]);
    }

    #[test]
    fn certificate_target_restricts_coverage() {
        let g = parity();
        let mut c = cert(vec![PathSeq::new(0, vec![0, 2, 4])], 6, vec![Some(6)]);
        c.params.target = Some("mod(0,2)".into());
        assert!(verify_certificate(&g, &c).is_ok());
        c.params.target = None;
        assert_eq!(verify_certificate(&g, &c).status(), Status::Violation);
    }

    #[test]
    fn json_shape() {
        let p = PathPartition::new(Mode::Distinct, vec![PathSeq::new(0, vec![0, 1])]);
        let s = serde_json::to_string(&p).unwrap();
        assert_eq!(s, r#"{"mode":"distinct","paths":[{"colour":0,"vertices":[0,1]}],"cover":[0,1]}"#);
        let c = cert(vec![PathSeq::new(0, vec![0])], 1, vec![Some(1)]);
        let v: serde_json::Value = serde_json::to_value(&c).unwrap();
        assert_eq!(v["coverage_bound"], 1);
        assert_eq!(v["mode"], "distinct");
        let back: PrefixCertificate = serde_json::from_value(v).unwrap();
        assert_eq!(back, c);
    }
}
