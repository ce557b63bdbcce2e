//! Large-set oracles: computable stand-ins for a non-principal ultrafilter.
//!
//! A [`LargeSetOracle`] answers "large" or "small" for [`SetDescriptor`]s and
//! keeps a transcript of everything it answered. Coherence (complements,
//! monotonicity, finite intersections, non-principality) is never assumed:
//! [`LargeSetOracle::check_coherence`] re-derives it from the transcript and
//! [`LargeSetOracle::audit`] adds probe queries first.
//!
//! The congruence oracle fixes a coherent residue chain `r_m mod lcm(1..m)`
//! and calls an eventually periodic set large iff it contains a tail of the
//! progression `{x ≡ r_m}` at a level whose modulus the set's period
//! divides. Because the indicator is periodic past its threshold, deciding
//! that reduces to evaluating one point.

mod descriptor;

use std::collections::HashMap;
use std::fmt;
use std::sync::Arc;

use serde::Serialize;
use thiserror::Error;

pub use descriptor::{
    EvalError, GraphNeighbourhoods, NeighbourhoodSource, ParseDescriptorError, SetDescriptor, SyntacticSize,
};

use crate::graph::{Colour, LazyColouredGraph, Periodicity, Vertex};
use crate::htype::HTypeGraph;
use descriptor::lcm;

/// Highest chain level; `lcm(1..=40)` still fits in 64 bits.
pub const MAX_LEVEL: usize = 40;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OracleError {
    #[error("residue {residue} at level {level} is not below lcm(1..{level}) = {modulus}")]
    ResidueOutOfRange { level: usize, residue: u64, modulus: u64 },
    #[error("residue chain not nested at level {level}: {next} ≢ {prev} (mod {modulus})")]
    NotNested { level: usize, prev: u64, next: u64, modulus: u64 },
    #[error("residue chains are limited to {MAX_LEVEL} levels")]
    ChainTooLong,
    #[error("cannot decide {descriptor}: {reason}")]
    Undecidable { descriptor: String, reason: String },
    #[error("oracle incoherent: {0}")]
    Incoherent(String),
    #[error("vertex {vertex} has {large} large colour classes, expected exactly one")]
    LabelUndetermined { vertex: Vertex, large: usize },
    #[error("unknown oracle '{0}' (expected congruence[:r1,r2,...] or density[:horizon])")]
    UnknownKind(String),
}

pub fn level_modulus(level: usize) -> u64 {
    (1..=level as u64).fold(1u64, |acc, k| acc / gcd64(acc, k) * k)
}

fn gcd64(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd64(b, a % b)
    }
}

/// Nested residues `r_1, r_2, …` with `r_m < lcm(1..m)` and
/// `r_{m+1} ≡ r_m (mod lcm(1..m))`. Levels past the given ones repeat the
/// last residue, which keeps the chain nested.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ResidueChain {
    residues: Vec<u64>,
}

impl ResidueChain {
    pub fn new(residues: Vec<u64>) -> Result<Self, OracleError> {
        if residues.len() > MAX_LEVEL {
            return Err(OracleError::ChainTooLong);
        }
        for (k, &r) in residues.iter().enumerate() {
            let level = k + 1;
            let modulus = level_modulus(level);
            if r >= modulus {
                return Err(OracleError::ResidueOutOfRange { level, residue: r, modulus });
            }
            if k > 0 {
                let prev = residues[k - 1];
                let m = level_modulus(k);
                if r % m != prev {
                    return Err(OracleError::NotNested { level, prev, next: r, modulus: m });
                }
            }
        }
        Ok(Self { residues })
    }

    /// The chain concentrating on multiples of every modulus.
    pub fn zero() -> Self {
        Self { residues: Vec::new() }
    }

    pub fn residues(&self) -> &[u64] {
        &self.residues
    }

    /// `r_m` for any level `1..=MAX_LEVEL`.
    pub fn residue(&self, level: usize) -> u64 {
        let last = self.residues.last().copied().unwrap_or(0);
        self.residues.get(level.wrapping_sub(1)).copied().unwrap_or(last) % level_modulus(level)
    }

    /// Smallest level whose modulus is a multiple of `period`.
    pub fn deciding_level(&self, period: usize) -> Option<usize> {
        (1..=MAX_LEVEL).find(|&m| level_modulus(m) % period as u64 == 0)
    }
}

impl fmt::Display for ResidueChain {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "congruence")?;
        for (k, r) in self.residues.iter().enumerate() {
            write!(f, "{}{r}", if k == 0 { ':' } else { ',' })?;
        }
        Ok(())
    }
}

pub type UserDecider = Arc<dyn Fn(&SetDescriptor) -> Option<bool> + Send + Sync>;

#[derive(Clone)]
pub enum OracleKind {
    Congruence(ResidueChain),
    /// Heuristic: large iff density over `[0, horizon)` is at least 1/2,
    /// complements answered as the negation of their body.
    Density { horizon: usize },
    User { id: String, decide: UserDecider },
}

impl fmt::Debug for OracleKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.id())
    }
}

impl OracleKind {
    pub fn id(&self) -> String {
        match self {
            OracleKind::Congruence(chain) => chain.to_string(),
            OracleKind::Density { horizon } => format!("density:{horizon}"),
            OracleKind::User { id, .. } => format!("user:{id}"),
        }
    }
}

/// Default sample horizon of the density oracle.
pub const DEFAULT_DENSITY_HORIZON: usize = 1024;

impl std::str::FromStr for OracleKind {
    type Err = OracleError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let (name, params) = s.split_once(':').unwrap_or((s, ""));
        let nums = || -> Result<Vec<u64>, OracleError> {
            params
                .split(',')
                .filter(|p| !p.trim().is_empty())
                .map(|p| p.trim().parse::<u64>().map_err(|_| OracleError::UnknownKind(s.to_string())))
                .collect()
        };
        match name {
            "congruence" => Ok(OracleKind::Congruence(ResidueChain::new(nums()?)?)),
            "density" => {
                let n = nums()?;
                let horizon = match n.as_slice() {
                    [] => DEFAULT_DENSITY_HORIZON,
                    [h] if *h > 0 => *h as usize,
                    _ => return Err(OracleError::UnknownKind(s.to_string())),
                };
                Ok(OracleKind::Density { horizon })
            }
            _ => Err(OracleError::UnknownKind(s.to_string())),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TranscriptEntry {
    pub descriptor: String,
    pub large: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "clause", rename_all = "snake_case")]
pub enum CoherenceViolation {
    Complementarity { set: String, complement: String, answer: bool },
    Monotonicity { subset: String, superset: String },
    Intersection { intersection: String },
    NonPrincipality { set: String, large: bool },
}

impl fmt::Display for CoherenceViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CoherenceViolation::Complementarity { set, complement, answer } => {
                let word = if *answer { "large" } else { "small" };
                write!(f, "{set} and its complement {complement} both answered {word}")
            }
            CoherenceViolation::Monotonicity { subset, superset } => {
                write!(f, "{subset} large but its superset {superset} small")
            }
            CoherenceViolation::Intersection { intersection } => {
                write!(f, "{intersection} small although every part is large")
            }
            CoherenceViolation::NonPrincipality { set, large } => {
                let word = if *large { "finite set answered large" } else { "cofinite set answered small" };
                write!(f, "{word}: {set}")
            }
        }
    }
}

/// Decision procedure over set descriptors with a coherence transcript.
#[derive(Debug, Clone)]
pub struct LargeSetOracle {
    kind: OracleKind,
    answers: HashMap<SetDescriptor, bool>,
    order: Vec<SetDescriptor>,
    labels: HashMap<Vertex, Colour>,
    queries: usize,
}

impl LargeSetOracle {
    pub fn new(kind: OracleKind) -> Self {
        Self { kind, answers: HashMap::new(), order: Vec::new(), labels: HashMap::new(), queries: 0 }
    }

    pub fn congruence(chain: ResidueChain) -> Self {
        Self::new(OracleKind::Congruence(chain))
    }

    /// Congruence oracle built from explicit residues.
    pub fn make_congruence_oracle(residues: Vec<u64>) -> Result<Self, OracleError> {
        Ok(Self::congruence(ResidueChain::new(residues)?))
    }

    pub fn density(horizon: usize) -> Self {
        Self::new(OracleKind::Density { horizon: horizon.max(1) })
    }

    pub fn kind(&self) -> &OracleKind {
        &self.kind
    }

    pub fn id(&self) -> String {
        self.kind.id()
    }

    pub fn queries(&self) -> usize {
        self.queries
    }

    pub fn transcript_len(&self) -> usize {
        self.order.len()
    }

    pub fn transcript(&self) -> Vec<TranscriptEntry> {
        self.order
            .iter()
            .map(|d| TranscriptEntry { descriptor: d.to_string(), large: self.answers[d] })
            .collect()
    }

    /// Decide whether `d` is large. Answers are memoized and logged.
    pub fn decide(&mut self, d: &SetDescriptor, src: &dyn NeighbourhoodSource) -> Result<bool, OracleError> {
        self.queries += 1;
        if let Some(&a) = self.answers.get(d) {
            return Ok(a);
        }
        let answer = match self.kind.clone() {
            OracleKind::Congruence(chain) => self.decide_congruence(&chain, d, src)?,
            OracleKind::Density { horizon } => self.decide_density(horizon, d, src)?,
            OracleKind::User { decide, .. } => decide(d).ok_or_else(|| OracleError::Undecidable {
                descriptor: d.to_string(),
                reason: "user oracle declined".into(),
            })?,
        };
        self.answers.insert(d.clone(), answer);
        self.order.push(d.clone());
        Ok(answer)
    }

    fn decide_congruence(
        &mut self,
        chain: &ResidueChain,
        d: &SetDescriptor,
        src: &dyn NeighbourhoodSource,
    ) -> Result<bool, OracleError> {
        let undecidable = |reason: &str| OracleError::Undecidable { descriptor: d.to_string(), reason: reason.into() };
        let p = d.eventual_period(src).ok_or_else(|| undecidable("not known to be eventually periodic"))?;
        let level = chain
            .deciding_level(p.period)
            .ok_or_else(|| undecidable(&format!("period {} divides no modulus up to level {MAX_LEVEL}", p.period)))?;
        let rho = (chain.residue(level) % p.period as u64) as usize;
        let x = p.start + (rho + p.period - p.start % p.period) % p.period;
        d.contains_with(x, src, &mut |y| self.label(y, src))
    }

    fn decide_density(
        &mut self,
        horizon: usize,
        d: &SetDescriptor,
        src: &dyn NeighbourhoodSource,
    ) -> Result<bool, OracleError> {
        if let SetDescriptor::Not(inner) = d {
            return Ok(!self.decide(inner, src)?);
        }
        let mut hits = 0usize;
        for x in 0..horizon {
            if d.contains_with(x, src, &mut |y| self.label(y, src))? {
                hits += 1;
            }
        }
        Ok(2 * hits >= horizon)
    }

    /// The unique colour `i` with `N(v, i)` large.
    pub fn label(&mut self, v: Vertex, src: &dyn NeighbourhoodSource) -> Result<Colour, OracleError> {
        if let Some(&c) = self.labels.get(&v) {
            return Ok(c);
        }
        let mut large = Vec::new();
        for i in 0..src.colours() {
            if self.decide(&SetDescriptor::nbhd(v, i), src)? {
                large.push(i);
            }
        }
        if large.len() != 1 {
            return Err(OracleError::LabelUndetermined { vertex: v, large: large.len() });
        }
        self.labels.insert(v, large[0]);
        Ok(large[0])
    }

    /// Re-derive the four coherence clauses from the transcript alone.
    pub fn check_coherence(&self) -> Vec<CoherenceViolation> {
        let mut out = Vec::new();
        for d in &self.order {
            let large = self.answers[d];
            match (d.syntactic_size(), large) {
                (SyntacticSize::Finite, true) | (SyntacticSize::Cofinite, false) => {
                    out.push(CoherenceViolation::NonPrincipality { set: d.to_string(), large });
                }
                _ => {}
            }
            if let SetDescriptor::Not(inner) = d {
                if let Some(&a) = self.answers.get(inner.as_ref()) {
                    if a == large {
                        out.push(CoherenceViolation::Complementarity {
                            set: inner.to_string(),
                            complement: d.to_string(),
                            answer: a,
                        });
                    }
                }
            }
            match d {
                SetDescriptor::Or(parts) if !large => {
                    for p in parts {
                        if self.answers.get(p) == Some(&true) {
                            out.push(CoherenceViolation::Monotonicity {
                                subset: p.to_string(),
                                superset: d.to_string(),
                            });
                        }
                    }
                }
                SetDescriptor::And(parts) => {
                    if large {
                        for p in parts {
                            if self.answers.get(p) == Some(&false) {
                                out.push(CoherenceViolation::Monotonicity {
                                    subset: d.to_string(),
                                    superset: p.to_string(),
                                });
                            }
                        }
                    } else if parts.iter().all(|p| self.answers.get(p) == Some(&true)) {
                        out.push(CoherenceViolation::Intersection { intersection: d.to_string() });
                    }
                }
                _ => {}
            }
        }
        out
    }

    /// Add probe queries (complements of everything answered, pairwise
    /// intersections and unions of up to `max_large` large answers, and a few
    /// finite/cofinite sets), then check the transcript.
    pub fn audit(
        &mut self,
        src: &dyn NeighbourhoodSource,
        max_large: usize,
    ) -> Result<Vec<CoherenceViolation>, OracleError> {
        let snapshot = self.order.clone();
        for d in &snapshot {
            self.decide(&d.clone().complement(), src)?;
        }
        let large: Vec<SetDescriptor> =
            snapshot.iter().filter(|d| self.answers[*d]).take(max_large).cloned().collect();
        for (k, a) in large.iter().enumerate() {
            for b in &large[k + 1..] {
                self.decide(&SetDescriptor::and(vec![a.clone(), b.clone()]), src)?;
                self.decide(&SetDescriptor::or(vec![a.clone(), b.clone().complement()]), src)?;
            }
        }
        let first: Vec<Vertex> = (0..8).collect();
        for d in [
            SetDescriptor::finite(first.clone()),
            SetDescriptor::finite(first).complement(),
            SetDescriptor::all(),
            SetDescriptor::empty(),
        ] {
            self.decide(&d, src)?;
        }
        Ok(self.check_coherence())
    }

    /// [`Self::audit`] turned into an error when anything is violated.
    pub fn ensure_coherent(&mut self, src: &dyn NeighbourhoodSource, max_large: usize) -> Result<(), OracleError> {
        let v = self.audit(src, max_large)?;
        match v.first() {
            None => Ok(()),
            Some(first) => Err(OracleError::Incoherent(format!("{first} ({} violations)", v.len()))),
        }
    }
}

impl NeighbourhoodSource for LazyColouredGraph {
    fn colours(&self) -> usize {
        crate::graph::ColouredGraph::colours(self)
    }

    fn in_neighbourhood(&self, v: Vertex, colour: Colour, x: Vertex) -> bool {
        crate::graph::ColouredGraph::edge_colour(self, v, x) == Some(colour)
    }

    fn neighbourhood_tail(&self, v: Vertex) -> Option<Periodicity> {
        let p = self.periodicity()?;
        Some(Periodicity { start: self.tail_start(v, p), period: p.period })
    }

    fn label_periodicity(&self) -> Option<Periodicity> {
        self.periodicity()
    }
}

/// Index-space view of a half-graph-type graph: points are second-class
/// indices, `N(ξ, i) = {ζ : a_ξ b_ζ is an edge of colour i}`.
pub struct CrossNeighbourhoods<'a>(pub &'a HTypeGraph);

impl NeighbourhoodSource for CrossNeighbourhoods<'_> {
    fn colours(&self) -> usize {
        crate::graph::ColouredGraph::colours(self.0)
    }

    fn in_neighbourhood(&self, xi: Vertex, colour: Colour, zeta: Vertex) -> bool {
        self.0.in_cross_neighbourhood(xi, colour, zeta)
    }

    fn neighbourhood_tail(&self, xi: Vertex) -> Option<Periodicity> {
        let p = self.0.periodicity()?;
        Some(Periodicity { start: p.start.max(xi + 1), period: p.period })
    }

    fn label_periodicity(&self) -> Option<Periodicity> {
        self.0.periodicity()
    }
}

/// Period of a combination of periodic pieces, if it fits.
pub fn combined_period(parts: &[Periodicity]) -> Option<Periodicity> {
    parts.iter().try_fold(Periodicity { start: 0, period: 1 }, |acc, p| {
        Some(Periodicity { start: acc.start.max(p.start), period: lcm(acc.period, p.period)? })
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::ColourFn;

    fn lazy(r: usize, period: usize, f: impl Fn(Vertex, Vertex) -> Colour + Send + Sync + 'static) -> LazyColouredGraph {
        let c: ColourFn = Arc::new(f);
        LazyColouredGraph::new(r, c).unwrap().with_periodicity(Periodicity { start: 0, period })
    }

    #[test]
    fn chain_validation() {
        assert!(ResidueChain::new(vec![0, 1, 5]).is_ok());
        assert!(matches!(ResidueChain::new(vec![0, 2]), Err(OracleError::ResidueOutOfRange { .. })));
        assert!(matches!(ResidueChain::new(vec![0, 1, 4]), Err(OracleError::NotNested { level: 3, .. })));
        assert_eq!(level_modulus(6), 60);
        let c = ResidueChain::new(vec![0, 1, 5]).unwrap();
        assert_eq!(c.residue(5), 5);
        assert_eq!(c.deciding_level(4), Some(4));
    }

    #[test]
    fn congruence_examples() {
        let g = lazy(1, 1, |_, _| 0);
        let mut o = LargeSetOracle::make_congruence_oracle(vec![0, 0]).unwrap();
        let evens = SetDescriptor::congruence(0, 2);
        assert!(o.decide(&evens, &g).unwrap());
        assert!(!o.decide(&SetDescriptor::finite(vec![1, 2, 3]), &g).unwrap());
        assert!(!o.decide(&SetDescriptor::congruence(1, 2), &g).unwrap());
        assert!(!o.decide(&evens.clone().complement(), &g).unwrap());
        assert!(o.audit(&g, 16).unwrap().is_empty());
    }

    #[test]
    fn odd_chain_prefers_odds() {
        let g = lazy(2, 2, |u, v| (u + v) % 2);
        let mut o = LargeSetOracle::make_congruence_oracle(vec![0, 1]).unwrap();
        assert!(o.decide(&SetDescriptor::congruence(1, 2), &g).unwrap());
        // odd point: N(v,i) large iff v + odd ≡ i
        assert_eq!(o.label(4, &g).unwrap(), 1);
        assert_eq!(o.label(7, &g).unwrap(), 0);
        assert!(o.decide(&SetDescriptor::Labelled { colour: 0 }, &g).unwrap());
    }

    #[test]
    fn undecidable_without_periodicity() {
        let c: ColourFn = Arc::new(|u, v| (u * 31 + v * 17) % 2);
        let g = LazyColouredGraph::new(2, c).unwrap();
        let mut o = LargeSetOracle::congruence(ResidueChain::zero());
        assert!(matches!(o.decide(&SetDescriptor::nbhd(0, 0), &g), Err(OracleError::Undecidable { .. })));
        // explicit atoms stay decidable
        assert!(o.decide(&SetDescriptor::congruence(0, 7), &g).unwrap());
    }

    #[test]
    fn transcript_checks_catch_incoherent_user_oracle() {
        let g = lazy(1, 1, |_, _| 0);
        let mut o = LargeSetOracle::new(OracleKind::User { id: "yes".into(), decide: Arc::new(|_| Some(true)) });
        o.decide(&SetDescriptor::finite(vec![1]), &g).unwrap();
        o.decide(&SetDescriptor::congruence(0, 2), &g).unwrap();
        o.decide(&SetDescriptor::congruence(0, 2).complement(), &g).unwrap();
        let v = o.check_coherence();
        assert!(v.iter().any(|x| matches!(x, CoherenceViolation::NonPrincipality { .. })));
        assert!(v.iter().any(|x| matches!(x, CoherenceViolation::Complementarity { .. })));
    }

    #[test]
    fn density_oracle_flags_failed_intersections() {
        let g = lazy(2, 2, |u, v| (u + v) % 2);
        let mut o = LargeSetOracle::density(64);
        assert!(o.decide(&SetDescriptor::congruence(0, 2), &g).unwrap());
        assert!(o.decide(&SetDescriptor::congruence(1, 2), &g).unwrap());
        let v = o.audit(&g, 8).unwrap();
        assert!(v.iter().any(|x| matches!(x, CoherenceViolation::Intersection { .. })));
    }

    #[test]
    fn parses_kinds() {
        assert_eq!("congruence".parse::<OracleKind>().unwrap().id(), "congruence");
        assert_eq!("congruence:0,1".parse::<OracleKind>().unwrap().id(), "congruence:0,1");
        assert_eq!("density:100".parse::<OracleKind>().unwrap().id(), "density:100");
        assert!("congruence:0,3".parse::<OracleKind>().is_err());
        assert!("ultra".parse::<OracleKind>().is_err());
    }
}
