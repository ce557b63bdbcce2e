//! Finite Boolean combinations of set atoms over the naturals.
//!
//! Text syntax (used on the command line and in certificate parameters):
//!
//! ```text
//! expr  := term ('|' term)*
//! term  := unary ('&' unary)*
//! unary := '!' unary | atom | '(' expr ')'
//! atom  := all | none | nbhd(v,i) | mod(a,m) | range(lo,hi) | range(lo,)
//!        | set(x,...) | label(i)
//! ```

use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use crate::graph::{Colour, Periodicity, Vertex};

/// Pointwise access to the neighbourhood atoms a descriptor mentions.
///
/// For ordinary graphs the points are vertices. For half-graph-type graphs
/// the source may instead work in index space (`v` a main-class index and
/// `x` a second-class index).
pub trait NeighbourhoodSource {
    fn colours(&self) -> usize;

    /// Whether `x ∈ N(v, colour)`.
    fn in_neighbourhood(&self, v: Vertex, colour: Colour, x: Vertex) -> bool;

    /// Eventual periodicity of `x ↦ [x ∈ N(v, i)]` (the same for every colour).
    fn neighbourhood_tail(&self, v: Vertex) -> Option<Periodicity>;

    /// Eventual periodicity of the induced labelling `v ↦ d(v)`, when the
    /// labels come from a point-deciding oracle.
    fn label_periodicity(&self) -> Option<Periodicity>;
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum SetDescriptor {
    /// `N(vertex, colour)`.
    Neighbourhood { vertex: Vertex, colour: Colour },
    /// `{x : x ≡ residue (mod modulus)}`.
    Congruence { residue: usize, modulus: usize },
    /// `[lo, hi)`, unbounded when `hi` is `None`.
    Interval { lo: usize, hi: Option<usize> },
    /// Explicit finite set, kept sorted and deduplicated.
    Finite(Vec<Vertex>),
    /// `{v : d(v) = colour}` for the labelling the oracle itself induces.
    Labelled { colour: Colour },
    Not(Box<SetDescriptor>),
    And(Vec<SetDescriptor>),
    Or(Vec<SetDescriptor>),
}

/// Size class derivable from syntax alone.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SyntacticSize {
    Finite,
    Cofinite,
    Unknown,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EvalError {
    #[error("label atoms need an oracle to evaluate")]
    LabelUnavailable,
}

impl SetDescriptor {
    pub fn all() -> Self {
        SetDescriptor::Interval { lo: 0, hi: None }
    }

    pub fn empty() -> Self {
        SetDescriptor::Finite(Vec::new())
    }

    pub fn nbhd(vertex: Vertex, colour: Colour) -> Self {
        SetDescriptor::Neighbourhood { vertex, colour }
    }

    pub fn congruence(residue: usize, modulus: usize) -> Self {
        let modulus = modulus.max(1);
        SetDescriptor::Congruence { residue: residue % modulus, modulus }
    }

    pub fn finite(mut xs: Vec<Vertex>) -> Self {
        xs.sort_unstable();
        xs.dedup();
        SetDescriptor::Finite(xs)
    }

    pub fn complement(self) -> Self {
        SetDescriptor::Not(Box::new(self))
    }

    pub fn and(parts: Vec<SetDescriptor>) -> Self {
        SetDescriptor::And(parts)
    }

    pub fn or(parts: Vec<SetDescriptor>) -> Self {
        SetDescriptor::Or(parts)
    }

    /// `N[F, i]` as an intersection of neighbourhood atoms.
    pub fn common_nbhd(set: &[Vertex], colour: Colour) -> Self {
        if set.is_empty() {
            return Self::all();
        }
        SetDescriptor::And(set.iter().map(|&v| Self::nbhd(v, colour)).collect())
    }

    /// Pointwise membership; label atoms are resolved through `label`.
    pub fn contains_with<E>(
        &self,
        x: Vertex,
        src: &dyn NeighbourhoodSource,
        label: &mut dyn FnMut(Vertex) -> Result<Colour, E>,
    ) -> Result<bool, E> {
        Ok(match self {
            SetDescriptor::Neighbourhood { vertex, colour } => src.in_neighbourhood(*vertex, *colour, x),
            SetDescriptor::Congruence { residue, modulus } => x % modulus == *residue,
            SetDescriptor::Interval { lo, hi } => x >= *lo && hi.is_none_or(|h| x < h),
            SetDescriptor::Finite(xs) => xs.binary_search(&x).is_ok(),
            SetDescriptor::Labelled { colour } => label(x)? == *colour,
            SetDescriptor::Not(inner) => !inner.contains_with(x, src, label)?,
            SetDescriptor::And(parts) => {
                for p in parts {
                    if !p.contains_with(x, src, label)? {
                        return Ok(false);
                    }
                }
                true
            }
            SetDescriptor::Or(parts) => {
                for p in parts {
                    if p.contains_with(x, src, label)? {
                        return Ok(true);
                    }
                }
                false
            }
        })
    }

    /// Pointwise membership for descriptors without label atoms.
    pub fn contains(&self, x: Vertex, src: &dyn NeighbourhoodSource) -> Result<bool, EvalError> {
        self.contains_with(x, src, &mut |_| Err(EvalError::LabelUnavailable))
    }

    /// A threshold and period beyond which the indicator is periodic, when
    /// every atom is known to be eventually periodic.
    pub fn eventual_period(&self, src: &dyn NeighbourhoodSource) -> Option<Periodicity> {
        match self {
            SetDescriptor::Neighbourhood { vertex, .. } => src.neighbourhood_tail(*vertex),
            SetDescriptor::Congruence { modulus, .. } => Some(Periodicity { start: 0, period: *modulus }),
            SetDescriptor::Interval { lo, hi } => Some(Periodicity { start: hi.unwrap_or(*lo), period: 1 }),
            SetDescriptor::Finite(xs) => Some(Periodicity { start: xs.last().map_or(0, |m| m + 1), period: 1 }),
            SetDescriptor::Labelled { .. } => src.label_periodicity(),
            SetDescriptor::Not(inner) => inner.eventual_period(src),
            SetDescriptor::And(parts) | SetDescriptor::Or(parts) => {
                let mut acc = Periodicity { start: 0, period: 1 };
                for p in parts {
                    let q = p.eventual_period(src)?;
                    acc = Periodicity { start: acc.start.max(q.start), period: lcm(acc.period, q.period)? };
                }
                Some(acc)
            }
        }
    }

    pub fn syntactic_size(&self) -> SyntacticSize {
        use SyntacticSize::*;
        match self {
            SetDescriptor::Finite(_) => Finite,
            SetDescriptor::Interval { hi: Some(_), .. } => Finite,
            SetDescriptor::Interval { hi: None, .. } => Cofinite,
            SetDescriptor::Congruence { modulus: 1, .. } => Cofinite,
            SetDescriptor::Congruence { .. } | SetDescriptor::Neighbourhood { .. } | SetDescriptor::Labelled { .. } => {
                Unknown
            }
            SetDescriptor::Not(inner) => match inner.syntactic_size() {
                Finite => Cofinite,
                Cofinite => Finite,
                Unknown => Unknown,
            },
            SetDescriptor::And(parts) => {
                let sizes: Vec<_> = parts.iter().map(|p| p.syntactic_size()).collect();
                if sizes.contains(&Finite) {
                    Finite
                } else if sizes.iter().all(|s| *s == Cofinite) {
                    Cofinite
                } else {
                    Unknown
                }
            }
            SetDescriptor::Or(parts) => {
                let sizes: Vec<_> = parts.iter().map(|p| p.syntactic_size()).collect();
                if sizes.contains(&Cofinite) {
                    Cofinite
                } else if sizes.iter().all(|s| *s == Finite) {
                    Finite
                } else {
                    Unknown
                }
            }
        }
    }

    /// Whether `self` and `other` are syntactic complements of each other.
    pub fn is_complement_of(&self, other: &SetDescriptor) -> bool {
        matches!(self, SetDescriptor::Not(inner) if **inner == *other)
            || matches!(other, SetDescriptor::Not(inner) if **inner == *self)
    }

    /// One-step syntactic inclusion: `S ⊆ S ∪ …` and `S ∩ … ⊆ S`.
    pub fn syntactic_subset(&self, other: &SetDescriptor) -> bool {
        self == other
            || matches!(other, SetDescriptor::Or(parts) if parts.contains(self))
            || matches!(self, SetDescriptor::And(parts) if parts.contains(other))
    }

    pub fn mentions_labels(&self) -> bool {
        match self {
            SetDescriptor::Labelled { .. } => true,
            SetDescriptor::Not(inner) => inner.mentions_labels(),
            SetDescriptor::And(parts) | SetDescriptor::Or(parts) => parts.iter().any(|p| p.mentions_labels()),
            _ => false,
        }
    }
}

pub(crate) fn gcd(a: usize, b: usize) -> usize {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

pub(crate) fn lcm(a: usize, b: usize) -> Option<usize> {
    (a / gcd(a, b)).checked_mul(b)
}

impl fmt::Display for SetDescriptor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let join = |f: &mut fmt::Formatter<'_>, parts: &[SetDescriptor], sep: &str| -> fmt::Result {
            write!(f, "(")?;
            for (k, p) in parts.iter().enumerate() {
                if k > 0 {
                    write!(f, " {sep} ")?;
                }
                write!(f, "{p}")?;
            }
            write!(f, ")")
        };
        match self {
            SetDescriptor::Neighbourhood { vertex, colour } => write!(f, "nbhd({vertex},{colour})"),
            SetDescriptor::Congruence { residue, modulus } => write!(f, "mod({residue},{modulus})"),
            SetDescriptor::Interval { lo, hi: Some(h) } => write!(f, "range({lo},{h})"),
            SetDescriptor::Interval { lo, hi: None } => write!(f, "range({lo},)"),
            SetDescriptor::Finite(xs) => {
                write!(f, "set(")?;
                for (k, x) in xs.iter().enumerate() {
                    if k > 0 {
                        write!(f, ",")?;
                    }
                    write!(f, "{x}")?;
                }
                write!(f, ")")
            }
            SetDescriptor::Labelled { colour } => write!(f, "label({colour})"),
            SetDescriptor::Not(inner) => write!(f, "!{inner}"),
            SetDescriptor::And(parts) => join(f, parts, "&"),
            SetDescriptor::Or(parts) => join(f, parts, "|"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("bad set descriptor at byte {pos}: {msg}")]
pub struct ParseDescriptorError {
    pub pos: usize,
    pub msg: String,
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
}

impl<'a> Parser<'a> {
    fn err<T>(&self, msg: impl Into<String>) -> Result<T, ParseDescriptorError> {
        Err(ParseDescriptorError { pos: self.pos, msg: msg.into() })
    }

    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn eat(&mut self, c: u8) -> bool {
        if self.peek() == Some(c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, c: u8) -> Result<(), ParseDescriptorError> {
        if self.eat(c) {
            Ok(())
        } else {
            self.err(format!("expected '{}'", c as char))
        }
    }

    fn expr(&mut self) -> Result<SetDescriptor, ParseDescriptorError> {
        let mut parts = vec![self.term()?];
        while self.eat(b'|') {
            parts.push(self.term()?);
        }
        Ok(if parts.len() == 1 { parts.pop().unwrap() } else { SetDescriptor::Or(parts) })
    }

    fn term(&mut self) -> Result<SetDescriptor, ParseDescriptorError> {
        let mut parts = vec![self.unary()?];
        while self.eat(b'&') {
            parts.push(self.unary()?);
        }
        Ok(if parts.len() == 1 { parts.pop().unwrap() } else { SetDescriptor::And(parts) })
    }

    fn unary(&mut self) -> Result<SetDescriptor, ParseDescriptorError> {
        if self.eat(b'!') {
            return Ok(self.unary()?.complement());
        }
        if self.eat(b'(') {
            let e = self.expr()?;
            self.expect(b')')?;
            return Ok(e);
        }
        self.atom()
    }

    fn ident(&mut self) -> String {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_alphabetic() {
            self.pos += 1;
        }
        String::from_utf8_lossy(&self.src[start..self.pos]).into_owned()
    }

    fn number(&mut self) -> Result<usize, ParseDescriptorError> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return self.err("expected a number");
        }
        std::str::from_utf8(&self.src[start..self.pos]).unwrap().parse().or_else(|_| self.err("number too large"))
    }

    /// Comma-separated numbers up to ')'; an empty slot is `None`.
    fn args(&mut self) -> Result<Vec<Option<usize>>, ParseDescriptorError> {
        self.expect(b'(')?;
        let mut out = Vec::new();
        if self.eat(b')') {
            return Ok(out);
        }
        loop {
            match self.peek() {
                Some(b',') | Some(b')') => out.push(None),
                _ => out.push(Some(self.number()?)),
            }
            if self.eat(b')') {
                return Ok(out);
            }
            self.expect(b',')?;
        }
    }

    fn atom(&mut self) -> Result<SetDescriptor, ParseDescriptorError> {
        let name = self.ident();
        let fixed = |p: &Self, args: &[Option<usize>], n: usize| -> Result<Vec<usize>, ParseDescriptorError> {
            if args.len() != n || args.iter().any(|a| a.is_none()) {
                return p.err(format!("{name} takes {n} numbers"));
            }
            Ok(args.iter().map(|a| a.unwrap()).collect())
        };
        match name.as_str() {
            "all" => Ok(SetDescriptor::all()),
            "none" => Ok(SetDescriptor::empty()),
            "nbhd" => {
                let a = self.args()?;
                let a = fixed(self, &a, 2)?;
                Ok(SetDescriptor::nbhd(a[0], a[1]))
            }
            "mod" => {
                let a = self.args()?;
                let a = fixed(self, &a, 2)?;
                if a[1] == 0 {
                    return self.err("modulus must be positive");
                }
                Ok(SetDescriptor::congruence(a[0], a[1]))
            }
            "label" => {
                let a = self.args()?;
                let a = fixed(self, &a, 1)?;
                Ok(SetDescriptor::Labelled { colour: a[0] })
            }
            "range" => {
                let a = self.args()?;
                match a.as_slice() {
                    [Some(lo), hi] => Ok(SetDescriptor::Interval { lo: *lo, hi: *hi }),
                    [Some(lo)] => Ok(SetDescriptor::Interval { lo: *lo, hi: None }),
                    _ => self.err("range takes (lo,hi) or (lo,)"),
                }
            }
            "set" => {
                let a = self.args()?;
                if a.iter().any(|x| x.is_none()) {
                    return self.err("empty slot in set");
                }
                Ok(SetDescriptor::finite(a.into_iter().flatten().collect()))
            }
            "" => self.err("expected an atom"),
            other => self.err(format!("unknown atom '{other}'")),
        }
    }
}

impl FromStr for SetDescriptor {
    type Err = ParseDescriptorError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let mut p = Parser { src: s.as_bytes(), pos: 0 };
        let e = p.expr()?;
        if p.peek().is_some() {
            return p.err("trailing input");
        }
        Ok(e)
    }
}

/// A plain vertex-space view of any coloured graph, without periodicity data.
pub struct GraphNeighbourhoods<'a, G: ?Sized>(pub &'a G);

impl<G: crate::graph::ColouredGraph + ?Sized> NeighbourhoodSource for GraphNeighbourhoods<'_, G> {
    fn colours(&self) -> usize {
        self.0.colours()
    }
    fn in_neighbourhood(&self, v: Vertex, colour: Colour, x: Vertex) -> bool {
        self.0.edge_colour(v, x) == Some(colour)
    }
    fn neighbourhood_tail(&self, _v: Vertex) -> Option<Periodicity> {
        None
    }
    fn label_periodicity(&self) -> Option<Periodicity> {
        None
    }
}
