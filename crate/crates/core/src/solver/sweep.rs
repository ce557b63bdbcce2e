//! Exhaustive sweeps over every r-colouring of K_n.
//!
//! Colouring index `i` has base-`r` digits (least significant first) giving
//! the colours of the edges in lexicographic order (0,1), (0,2), ...

use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};
use std::sync::Mutex;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::exact::{ExactSolver, SolveError};
use crate::graph::{Colour, FiniteColouredGraph};
use crate::verify::Mode;

pub const DEFAULT_BUDGET: u64 = 1 << 24;
pub const DEFAULT_CHUNK: u64 = 4096;

#[derive(Debug, thiserror::Error)]
pub enum SweepError {
    #[error("sweep needs {required} colourings but the budget is {budget}")]
    BudgetExceeded { required: u128, budget: u64 },
    #[error(transparent)]
    Solve(#[from] SolveError),
    #[error("state file {path}: {reason}")]
    State { path: PathBuf, reason: String },
    #[error("invalid sweep parameters: {0}")]
    Invalid(String),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SweepConfig {
    pub n: usize,
    pub r: usize,
    pub mode: Mode,
    /// Worker threads; 0 means the rayon default.
    pub jobs: usize,
    /// Only solve orbit representatives under vertex permutation.
    pub canonical: bool,
    pub budget: u64,
    pub chunk: u64,
    /// Count colourings whose optimum exceeds this.
    pub bound: Option<usize>,
    pub cap: usize,
}

impl SweepConfig {
    pub fn new(n: usize, r: usize, mode: Mode) -> Self {
        Self {
            n,
            r,
            mode,
            jobs: 1,
            canonical: false,
            budget: DEFAULT_BUDGET,
            chunk: DEFAULT_CHUNK,
            bound: None,
            cap: super::exact::DEFAULT_CAP,
        }
    }

    pub fn edges(&self) -> usize {
        self.n * self.n.saturating_sub(1) / 2
    }

    /// r^(n choose 2), saturating at u128::MAX.
    pub fn required(&self) -> u128 {
        (self.r as u128).checked_pow(self.edges() as u32).unwrap_or(u128::MAX)
    }

    fn total(&self) -> Result<u64, SweepError> {
        if self.r == 0 || self.r > crate::graph::MAX_COLOURS {
            return Err(SweepError::Invalid(format!("r = {} out of range", self.r)));
        }
        let required = self.required();
        if required > self.budget as u128 {
            return Err(SweepError::BudgetExceeded { required, budget: self.budget });
        }
        Ok(required as u64)
    }
}

/// One orbit representative found by a canonical sweep.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CanonicalClass {
    pub index: u64,
    pub orbit: u64,
    pub optimum: Option<usize>,
}

/// Result of a sweep, or of one chunk of it.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct SweepSummary {
    /// Colourings accounted for (orbit sizes included).
    pub colourings: u64,
    /// Instances actually solved.
    pub solved: u64,
    /// optimum -> number of colourings.
    pub histogram: BTreeMap<usize, u64>,
    pub max_optimum: Option<usize>,
    /// Smallest colouring index attaining `max_optimum`.
    pub argmax: Option<u64>,
    /// Colourings with no partition at all (distinct mode only).
    pub infeasible: u64,
    /// Colourings whose optimum exceeds the configured bound.
    pub exceeding: u64,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub classes: Vec<CanonicalClass>,
}

impl SweepSummary {
    fn record(&mut self, index: u64, weight: u64, optimum: Option<usize>, bound: Option<usize>) {
        self.colourings += weight;
        self.solved += 1;
        match optimum {
            None => self.infeasible += weight,
            Some(k) => {
                *self.histogram.entry(k).or_default() += weight;
                if bound.is_some_and(|b| k > b) {
                    self.exceeding += weight;
                }
                self.bump_max(k, index);
            }
        }
    }

    fn bump_max(&mut self, k: usize, index: u64) {
        let better = match (self.max_optimum, self.argmax) {
            (Some(m), Some(a)) => k > m || (k == m && index < a),
            _ => true,
        };
        if better {
            self.max_optimum = Some(k);
            self.argmax = Some(index);
        }
    }

    /// Commutative, associative combination of two partial summaries.
    pub fn merge(mut self, other: SweepSummary) -> SweepSummary {
        self.colourings += other.colourings;
        self.solved += other.solved;
        self.infeasible += other.infeasible;
        self.exceeding += other.exceeding;
        for (k, c) in other.histogram {
            *self.histogram.entry(k).or_default() += c;
        }
        if let (Some(k), Some(i)) = (other.max_optimum, other.argmax) {
            self.bump_max(k, i);
        }
        self.classes.extend(other.classes);
        self.classes.sort_by_key(|c| c.index);
        self
    }
}

/// Colour of every edge, in lexicographic edge order, for colouring `index`.
pub fn colouring_digits(n: usize, r: usize, mut index: u64) -> Vec<Colour> {
    let m = n * n.saturating_sub(1) / 2;
    let mut digits = Vec::with_capacity(m);
    for _ in 0..m {
        digits.push((index % r as u64) as Colour);
        index /= r as u64;
    }
    digits
}

pub fn colouring_from_index(n: usize, r: usize, index: u64) -> FiniteColouredGraph {
    let digits = colouring_digits(n, r, index);
    let mut g = FiniteColouredGraph::new(n, r).expect("sweep parameters checked");
    let mut k = 0;
    for u in 0..n {
        for v in u + 1..n {
            g.set_colour(u, v, digits[k]).expect("in range");
            k += 1;
        }
    }
    g
}

/// Maps each edge slot to its slot under a vertex permutation.
struct Permuter {
    n: usize,
    r: u64,
    perms: Vec<Vec<usize>>,
}

impl Permuter {
    fn new(n: usize, r: usize) -> Self {
        let mut slot = vec![vec![0usize; n]; n];
        let mut k = 0;
        for u in 0..n {
            for v in u + 1..n {
                slot[u][v] = k;
                slot[v][u] = k;
                k += 1;
            }
        }
        let mut perms = Vec::new();
        let mut p: Vec<usize> = (0..n).collect();
        loop {
            let mut map = Vec::with_capacity(k);
            for u in 0..n {
                for v in u + 1..n {
                    map.push(slot[p[u]][p[v]]);
                }
            }
            perms.push(map);
            if !next_permutation(&mut p) {
                break;
            }
        }
        Self { n, r: r as u64, perms }
    }

    /// `Some(orbit size)` when `index` is the smallest index in its orbit.
    fn orbit_if_minimal(&self, index: u64) -> Option<u64> {
        let digits = colouring_digits(self.n, self.r as usize, index);
        let mut seen = Vec::with_capacity(self.perms.len());
        for map in &self.perms {
            let mut image = vec![0; digits.len()];
            for (k, &d) in digits.iter().enumerate() {
                image[map[k]] = d;
            }
            let j = image.iter().rev().fold(0u64, |acc, &d| acc * self.r + d as u64);
            if j < index {
                return None;
            }
            seen.push(j);
        }
        seen.sort_unstable();
        seen.dedup();
        Some(seen.len() as u64)
    }
}

fn next_permutation(p: &mut [usize]) -> bool {
    let Some(i) = (1..p.len()).rev().find(|&i| p[i - 1] < p[i]) else {
        return false;
    };
    let j = (i..p.len()).rev().find(|&j| p[j] > p[i - 1]).unwrap();
    p.swap(i - 1, j);
    p[i..].reverse();
    true
}

fn sweep_range(cfg: &SweepConfig, permuter: Option<&Permuter>, lo: u64, hi: u64) -> Result<SweepSummary, SweepError> {
    let solver = ExactSolver::with_cap(cfg.cap);
    let mut out = SweepSummary::default();
    for index in lo..hi {
        let weight = match permuter {
            None => 1,
            Some(p) => match p.orbit_if_minimal(index) {
                Some(w) => w,
                None => continue,
            },
        };
        let g = colouring_from_index(cfg.n, cfg.r, index);
        let optimum = match solver.min_partition(&g, cfg.mode) {
            Ok(res) => Some(res.optimum),
            Err(SolveError::Infeasible) => None,
            Err(e) => return Err(e.into()),
        };
        out.record(index, weight, optimum, cfg.bound);
        if permuter.is_some() {
            out.classes.push(CanonicalClass { index, orbit: weight, optimum });
        }
    }
    Ok(out)
}

#[derive(Debug, Serialize, Deserialize)]
struct SweepState {
    config: SweepConfig,
    /// chunk start -> partial summary.
    chunks: BTreeMap<u64, SweepSummary>,
}

fn state_error(path: &Path, reason: impl ToString) -> SweepError {
    SweepError::State { path: path.to_path_buf(), reason: reason.to_string() }
}

fn load_state(path: &Path, cfg: &SweepConfig) -> Result<BTreeMap<u64, SweepSummary>, SweepError> {
    let text = match fs::read_to_string(path) {
        Ok(t) => t,
        Err(e) if e.kind() == std::io::ErrorKind::NotFound => return Ok(BTreeMap::new()),
        Err(e) => return Err(state_error(path, e)),
    };
    let state: SweepState = serde_json::from_str(&text).map_err(|e| state_error(path, e))?;
    // worker count does not affect results
    let same = SweepConfig { jobs: cfg.jobs, ..state.config.clone() } == *cfg;
    if !same {
        return Err(state_error(path, "written for different sweep parameters"));
    }
    Ok(state.chunks)
}

fn save_state(path: &Path, cfg: &SweepConfig, chunks: &BTreeMap<u64, SweepSummary>) -> Result<(), SweepError> {
    let state = SweepState { config: cfg.clone(), chunks: chunks.clone() };
    let text = serde_json::to_string(&state).map_err(|e| state_error(path, e))?;
    let tmp = path.with_extension("tmp");
    fs::write(&tmp, text).map_err(|e| state_error(path, e))?;
    fs::rename(&tmp, path).map_err(|e| state_error(path, e))
}

/// Solve every colouring of K_n with `r` colours and summarise.
///
/// With a state path, finished chunks are persisted as they complete and
/// skipped on a later run with the same parameters.
pub fn sweep_colourings(cfg: &SweepConfig, state: Option<&Path>) -> Result<SweepSummary, SweepError> {
    let total = cfg.total()?;
    if cfg.n > cfg.cap {
        return Err(SolveError::TooLarge { n: cfg.n, cap: cfg.cap }.into());
    }
    let chunk = cfg.chunk.max(1);
    let done = match state {
        Some(p) => load_state(p, cfg)?,
        None => BTreeMap::new(),
    };
    let starts: Vec<u64> = (0..total).step_by(chunk as usize).filter(|s| !done.contains_key(s)).collect();
    let permuter = cfg.canonical.then(|| Permuter::new(cfg.n, cfg.r));
    let progress = Mutex::new(done);

    let run = || -> Result<(), SweepError> {
        starts.par_iter().try_for_each(|&lo| {
            let part = sweep_range(cfg, permuter.as_ref(), lo, (lo + chunk).min(total))?;
            let mut chunks = progress.lock().expect("poisoned");
            chunks.insert(lo, part);
            match state {
                Some(p) => save_state(p, cfg, &chunks),
                None => Ok(()),
            }
        })
    };
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(cfg.jobs)
        .build()
        .map_err(|e| SweepError::Invalid(e.to_string()))?;
    pool.install(run)?;

    let chunks = progress.into_inner().expect("poisoned");
    Ok(chunks.into_values().fold(SweepSummary::default(), SweepSummary::merge))
}

/// `n,r,mode,optimum,count,max` rows, one per histogram entry.
pub fn histogram_csv(cfg: &SweepConfig, s: &SweepSummary) -> String {
    let max = s.max_optimum.map(|m| m.to_string()).unwrap_or_default();
    let mut out = String::from("n,r,mode,optimum,count,max\n");
    for (k, c) in &s.histogram {
        out.push_str(&format!("{},{},{},{},{},{}\n", cfg.n, cfg.r, cfg.mode, k, c, max));
    }
    if s.infeasible > 0 {
        out.push_str(&format!("{},{},{},infeasible,{},{}\n", cfg.n, cfg.r, cfg.mode, s.infeasible, max));
    }
    out
}
