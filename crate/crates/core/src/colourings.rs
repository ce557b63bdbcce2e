//! Named colourings and the plain-text graph format.
//!
//! A spec is `NAME` or `NAME:params`, where params are comma separated and
//! either positional (`mod:3,2`) or keyed (`mod:m=3,r=2`).
//!
//! Text format:
//!
//! ```text
//! n r
//! u v c          one line per edge, u < v
//! ! missing u v  the pair is not an edge
//! ```
//!
//! Blank lines and lines starting with `#` are ignored.

use std::collections::BTreeMap;
use std::fmt;
use std::io;
use std::path::Path;
use std::str::FromStr;
use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::graph::{
    ColouredGraph, Colour, FiniteColouredGraph, GraphError, LazyColouredGraph, Periodicity, Vertex, MAX_COLOURS,
};

#[derive(Debug, thiserror::Error)]
pub enum ColouringError {
    #[error("unknown colouring `{0}` (see `colourings list`)")]
    UnknownName(String),
    #[error("{name}: {msg}")]
    BadParameter { name: String, msg: String },
    #[error(transparent)]
    Graph(#[from] GraphError),
}

#[derive(Debug, thiserror::Error)]
pub enum FormatError {
    #[error("line {line}: {msg}")]
    Malformed { line: usize, msg: String },
    #[error("pair ({u},{v}) has no colour and is not declared missing")]
    AbsentPair { u: Vertex, v: Vertex },
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error(transparent)]
    Io(#[from] io::Error),
}

/// Registry entry: name, positional parameter order, description.
pub struct Builtin {
    pub name: &'static str,
    pub params: &'static [&'static str],
    pub about: &'static str,
}

pub const BUILTINS: &[Builtin] = &[
    Builtin { name: "constant", params: &["c", "r"], about: "every edge colour c (default 0); r defaults to c+1" },
    Builtin { name: "parity", params: &[], about: "c(u,v) = (u+v) mod 2" },
    Builtin { name: "mod", params: &["m", "r"], about: "c(u,v) = ((u+v) mod m) mod r; r defaults to m" },
    Builtin {
        name: "star",
        params: &["center", "c"],
        about: "edges at center (default 0) colour c (default 1), all others the other of {0,1}",
    },
    Builtin {
        name: "layer",
        params: &["table", "r"],
        about: "c(u,v) = table[max(u,v) mod len], table written as 0/1/1 (default 0/1)",
    },
    Builtin {
        name: "random",
        params: &["seed", "r"],
        about: "independent uniform colour per pair from (seed, u, v); r defaults to 2; not eventually periodic",
    },
];

/// A parsed colouring name with its parameters.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ColouringSpec {
    pub name: String,
    pub params: BTreeMap<String, String>,
}

impl FromStr for ColouringSpec {
    type Err = ColouringError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        let (name, rest) = s.split_once(':').unwrap_or((s, ""));
        let builtin = BUILTINS
            .iter()
            .find(|b| b.name == name)
            .ok_or_else(|| ColouringError::UnknownName(name.to_string()))?;
        let bad = |msg: String| ColouringError::BadParameter { name: name.to_string(), msg };
        let mut params = BTreeMap::new();
        let mut keyed = false;
        for (k, item) in rest.split(',').filter(|p| !p.is_empty()).enumerate() {
            let (key, value) = match item.split_once('=') {
                Some((key, value)) => {
                    keyed = true;
                    (key.trim().to_string(), value.trim().to_string())
                }
                None if keyed => return Err(bad(format!("positional `{item}` after keyed parameters"))),
                None => {
                    let key = builtin.params.get(k).ok_or_else(|| bad(format!("too many parameters at `{item}`")))?;
                    (key.to_string(), item.trim().to_string())
                }
            };
            if !builtin.params.contains(&key.as_str()) {
                return Err(bad(format!("unknown parameter `{key}`")));
            }
            if params.insert(key.clone(), value).is_some() {
                return Err(bad(format!("parameter `{key}` given twice")));
            }
        }
        Ok(Self { name: name.to_string(), params })
    }
}

impl fmt::Display for ColouringSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.name)?;
        for (k, (key, value)) in self.params.iter().enumerate() {
            write!(f, "{}{key}={value}", if k == 0 { ':' } else { ',' })?;
        }
        Ok(())
    }
}

impl ColouringSpec {
    fn bad(&self, msg: impl Into<String>) -> ColouringError {
        ColouringError::BadParameter { name: self.name.clone(), msg: msg.into() }
    }

    fn num<T: FromStr>(&self, key: &str, default: Option<T>) -> Result<T, ColouringError> {
        match self.params.get(key) {
            Some(v) => v.parse().map_err(|_| self.bad(format!("`{key}` must be a non-negative integer, got `{v}`"))),
            None => default.ok_or_else(|| self.bad(format!("missing parameter `{key}`"))),
        }
    }

    fn colours(&self, default: usize) -> Result<usize, ColouringError> {
        let r = self.num("r", Some(default))?;
        if r == 0 || r > MAX_COLOURS {
            return Err(self.bad(format!("r must lie in 1..={MAX_COLOURS}")));
        }
        Ok(r)
    }

    /// The colouring of the countable complete graph on ℕ.
    pub fn build_lazy(&self) -> Result<LazyColouredGraph, ColouringError> {
        let periodic = |start, period| Periodicity { start, period };
        let (r, f, p): (usize, crate::graph::ColourFn, Option<Periodicity>) = match self.name.as_str() {
            "constant" => {
                let c: Colour = self.num("c", Some(0))?;
                let r = self.colours(c + 1)?;
                if c >= r {
                    return Err(self.bad(format!("colour {c} needs r > {c}")));
                }
                (r, Arc::new(move |_, _| c), Some(periodic(0, 1)))
            }
            "parity" => (2, Arc::new(|u, v| (u + v) % 2), Some(periodic(0, 2))),
            "mod" => {
                let m: usize = self.num("m", None)?;
                if m == 0 {
                    return Err(self.bad("m must be positive"));
                }
                let r = self.colours(m)?;
                (r, Arc::new(move |u, v| ((u + v) % m) % r), Some(periodic(0, m)))
            }
            "star" => {
                let center: Vertex = self.num("center", Some(0))?;
                let c: Colour = self.num("c", Some(1))?;
                if c > 1 {
                    return Err(self.bad("c must be 0 or 1"));
                }
                let other = 1 - c;
                (2, Arc::new(move |u, v| if u == center || v == center { c } else { other }), Some(periodic(center + 1, 1)))
            }
            "layer" => {
                let text = self.params.get("table").map_or("0/1", String::as_str);
                let table: Vec<Colour> = text
                    .split('/')
                    .map(|t| t.trim().parse())
                    .collect::<Result<_, _>>()
                    .map_err(|_| self.bad(format!("table `{text}` must be colours separated by `/`")))?;
                let top = table.iter().copied().max().unwrap_or(0);
                let r = self.colours(top + 1)?;
                if top >= r {
                    return Err(self.bad(format!("table colour {top} needs r > {top}")));
                }
                let len = table.len();
                (r, Arc::new(move |u, v| table[u.max(v) % len]), Some(periodic(0, len)))
            }
            "random" => {
                let seed: u64 = self.num("seed", Some(0))?;
                let r = self.colours(2)?;
                (r, Arc::new(move |u, v| random_colour(seed, r, u, v)), None)
            }
            other => return Err(ColouringError::UnknownName(other.to_string())),
        };
        let g = LazyColouredGraph::new(r, f)?;
        Ok(match p {
            Some(p) => g.with_periodicity(p),
            None => g,
        })
    }

    /// The restriction to `0..n`.
    pub fn build_finite(&self, n: usize) -> Result<FiniteColouredGraph, ColouringError> {
        Ok(FiniteColouredGraph::restrict(&self.build_lazy()?, n)?)
    }
}

/// Colour of `{u, v}` under `random:seed,r`: each pair owns its own ChaCha stream.
pub fn random_colour(seed: u64, r: usize, u: Vertex, v: Vertex) -> Colour {
    let (u, v) = (u.min(v) as u64, u.max(v) as u64);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(v * (v + 1) / 2 + u);
    rng.gen_range(0..r)
}

/// Registry listing as printed by `colourings list`.
pub fn registry_text() -> String {
    let mut out = String::new();
    for b in BUILTINS {
        let params = if b.params.is_empty() { String::new() } else { format!(":{}", b.params.join(",")) };
        out.push_str(&format!("{:<22} {}\n", format!("{}{}", b.name, params), b.about));
    }
    out
}

/// Parse the text format.
pub fn parse_graph(text: &str) -> Result<FiniteColouredGraph, FormatError> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(k, l)| (k + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));
    let malformed = |line, msg: String| FormatError::Malformed { line, msg };
    let nums = |line: usize, fields: &[&str]| -> Result<Vec<usize>, FormatError> {
        fields.iter().map(|f| f.parse().map_err(|_| malformed(line, format!("`{f}` is not a number")))).collect()
    };

    let (line, header) = lines.next().ok_or_else(|| malformed(1, "missing `n r` header".into()))?;
    let fields: Vec<&str> = header.split_whitespace().collect();
    if fields.len() != 2 {
        return Err(malformed(line, "header must be `n r`".into()));
    }
    let h = nums(line, &fields)?;
    let (n, r) = (h[0], h[1]);
    let mut g = FiniteColouredGraph::new(n, r).map_err(|e| malformed(line, e.to_string()))?;
    let mut seen = vec![false; n * n.saturating_sub(1) / 2];

    for (line, text) in lines {
        let (missing, body) = match text.strip_prefix('!') {
            Some(rest) => {
                let rest = rest.trim_start();
                let body = rest
                    .strip_prefix("missing")
                    .ok_or_else(|| malformed(line, format!("unknown directive `!{rest}`")))?;
                (true, body)
            }
            None => (false, text),
        };
        let fields: Vec<&str> = body.split_whitespace().collect();
        let want = if missing { 2 } else { 3 };
        if fields.len() != want {
            return Err(malformed(line, format!("expected {want} numbers")));
        }
        let x = nums(line, &fields)?;
        let (u, v) = (x[0], x[1]);
        if u >= v || v >= n {
            return Err(malformed(line, format!("pair ({u},{v}) must satisfy u < v < {n}")));
        }
        let slot = v * (v - 1) / 2 + u;
        if std::mem::replace(&mut seen[slot], true) {
            return Err(malformed(line, format!("duplicate pair ({u},{v})")));
        }
        let set = if missing { g.set_missing(u, v) } else { g.set_colour(u, v, x[2]) };
        set.map_err(|e| malformed(line, e.to_string()))?;
    }
    for v in 0..n {
        for u in 0..v {
            if !seen[v * (v - 1) / 2 + u] {
                return Err(FormatError::AbsentPair { u, v });
            }
        }
    }
    g.check_missing()?;
    Ok(g)
}

/// Render in the text format; `parse_graph` inverts it.
pub fn format_graph(g: &FiniteColouredGraph) -> String {
    let mut out = format!("{} {}\n", g.order(), g.colours());
    for u in 0..g.order() {
        for v in u + 1..g.order() {
            match g.edge_colour(u, v) {
                Some(c) => out.push_str(&format!("{u} {v} {c}\n")),
                None => out.push_str(&format!("! missing {u} {v}\n")),
            }
        }
    }
    out
}

pub fn load(path: &Path) -> Result<FiniteColouredGraph, FormatError> {
    parse_graph(&std::fs::read_to_string(path)?)
}

pub fn save(g: &FiniteColouredGraph, path: &Path) -> Result<(), FormatError> {
    std::fs::write(path, format_graph(g))?;
    Ok(())
}
