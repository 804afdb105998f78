//! Exact maximum F-tiling solver: branch-and-bound over vertex-disjoint
//! pattern copies, with certified optimality and quasiperfect gap reports.

use std::time::{Duration, Instant};

use crate::bits::VertexSet;
use crate::graph::Graph;
use crate::pattern::{enumerate_copy_sets, Pattern, PatternCopy, PatternKind};
use crate::Frac;
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum TilingError {
    #[error("pattern on {k} vertices does not fit host on {n}")]
    PatternTooLarge { k: usize, n: usize },
    #[error("eta must be positive, got {0}")]
    BadEta(String),
    #[error("tiling uses vertex {0} twice")]
    Overlap(usize),
    #[error("claimed copy {0:?} is not a copy of the pattern")]
    BadCopy(Vec<usize>),
}

/// Vertex-disjoint collection of pattern copies in a host graph.
#[derive(Debug, Clone, Default)]
pub struct Tiling {
    pub copies: Vec<PatternCopy>,
}

impl Tiling {
    pub fn covered(&self, n: usize) -> VertexSet {
        let mut set = VertexSet::empty(n);
        for c in &self.copies {
            for &v in &c.vertices {
                set.insert(v);
            }
        }
        set
    }

    pub fn size(&self) -> usize {
        self.copies.len()
    }
}

/// Solver result; `optimal` is false only when the node budget ran out, in
/// which case `tiling` is still a valid (possibly suboptimal) tiling.
#[derive(Debug, Clone)]
pub struct SolveOutcome {
    pub tiling: Tiling,
    pub optimal: bool,
    pub nodes: u64,
    pub wall_time: Duration,
}

/// Quasiperfect judgement: uncovered count against the eta allowance.
#[derive(Debug, Clone)]
pub struct QuasiperfectReport {
    pub uncovered: usize,
    pub allowance: usize,
    pub eta: Frac,
    pub quasiperfect: bool,
}

const DEFAULT_BUDGET: u64 = 10_000_000;

/// Independent validity check: every copy spans the pattern in `g` and the
/// copies are pairwise vertex-disjoint.
pub fn verify_tiling(g: &Graph, f: &Pattern, tiling: &Tiling) -> Result<(), TilingError> {
    let mut seen = VertexSet::empty(g.n());
    for copy in &tiling.copies {
        if !copy.is_valid(g, f) {
            return Err(TilingError::BadCopy(copy.vertices.clone()));
        }
        for &v in &copy.vertices {
            if seen.contains(v) {
                return Err(TilingError::Overlap(v));
            }
            seen.insert(v);
        }
    }
    Ok(())
}

/// Maximum F-tiling via branch-and-bound with a certified optimality flag.
pub fn max_tiling(g: &Graph, f: &Pattern) -> Result<SolveOutcome, TilingError> {
    max_tiling_with_budget(g, f, DEFAULT_BUDGET)
}

pub fn max_tiling_with_budget(
    g: &Graph,
    f: &Pattern,
    budget: u64,
) -> Result<SolveOutcome, TilingError> {
    solve(g, f, budget, None, false)
}

/// Three-valued answer for factor existence: `Unknown` means the budget ran
/// out before either a factor or a completed refutation.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verdict {
    Yes,
    No,
    Unknown,
}

/// Whether `g` has a perfect F-tiling (an F-factor). True only when a
/// factor was found within budget.
pub fn has_factor(g: &Graph, f: &Pattern, budget: u64) -> Result<bool, TilingError> {
    Ok(factor_verdict(g, f, budget)? == Verdict::Yes)
}

pub fn factor_verdict(g: &Graph, f: &Pattern, budget: u64) -> Result<Verdict, TilingError> {
    if !g.n().is_multiple_of(f.k()) {
        return Ok(Verdict::No);
    }
    if g.n() == 0 {
        return Ok(Verdict::Yes);
    }
    let target = g.n() / f.k();
    let outcome = solve(g, f, budget, Some(target), true)?;
    if outcome.tiling.size() == target {
        Ok(Verdict::Yes)
    } else if outcome.optimal {
        Ok(Verdict::No)
    } else {
        Ok(Verdict::Unknown)
    }
}

/// Judges an optimal tiling against the eta-quasiperfect allowance
/// floor(1/eta) * (k - 1).
pub fn quasiperfect_gap(
    g: &Graph,
    f: &Pattern,
    tiling: &Tiling,
    eta: Frac,
) -> Result<QuasiperfectReport, TilingError> {
    if eta <= Frac::new(0, 1) {
        return Err(TilingError::BadEta(eta.to_string()));
    }
    let uncovered = g.n() - tiling.covered(g.n()).len();
    let allowance = (eta.recip().floor().to_integer() as usize) * (f.k() - 1);
    Ok(QuasiperfectReport {
        uncovered,
        allowance,
        eta,
        quasiperfect: uncovered <= allowance,
    })
}

struct Search<'a> {
    g: &'a Graph,
    f: &'a Pattern,
    best: Vec<PatternCopy>,
    nodes: u64,
    budget: u64,
    exhausted: bool,
    /// Stop as soon as a tiling of this size is found.
    target: Option<usize>,
    /// In factor mode no vertex may be skipped, so the skip branch is cut.
    factor_mode: bool,
}

fn solve(
    g: &Graph,
    f: &Pattern,
    budget: u64,
    target: Option<usize>,
    factor_mode: bool,
) -> Result<SolveOutcome, TilingError> {
    if f.k() > g.n() {
        return Err(TilingError::PatternTooLarge { k: f.k(), n: g.n() });
    }
    let start = Instant::now();
    let mut search = Search {
        g,
        f,
        best: Vec::new(),
        nodes: 0,
        budget,
        exhausted: true,
        target,
        factor_mode,
    };
    let mut stack = Vec::new();
    search.dfs(&g.vertex_set(), &mut stack);
    let tiling = Tiling {
        copies: search.best,
    };
    verify_tiling(g, f, &tiling)?;
    let optimal = search.exhausted || target.is_some_and(|t| tiling.size() >= t);
    Ok(SolveOutcome {
        tiling,
        optimal,
        nodes: search.nodes,
        wall_time: start.elapsed(),
    })
}

impl Search<'_> {
    fn done(&self) -> bool {
        !self.exhausted || self.target.is_some_and(|t| self.best.len() >= t)
    }

    fn dfs(&mut self, free: &VertexSet, chosen: &mut Vec<PatternCopy>) {
        self.nodes += 1;
        if self.nodes > self.budget {
            self.exhausted = false;
            return;
        }
        if chosen.len() > self.best.len() {
            self.best = chosen.clone();
        }
        if self.done() {
            return;
        }
        let Some(v) = free.first() else { return };
        let cheap = free.len() / self.f.k();
        if chosen.len() + cheap <= self.best.len() {
            return;
        }
        if self.f.k() == 3
            && self.f.kind() == PatternKind::Clique
            && chosen.len() + self.hitting_bound(free, cheap) <= self.best.len()
        {
            return;
        }
        let copies = enumerate_copy_sets(self.g, self.f, free, Some(v));
        for copy in copies {
            let mut next = free.clone();
            next.remove_all(&copy.vertex_set(self.g.n()));
            chosen.push(copy);
            self.dfs(&next, chosen);
            chosen.pop();
            if self.done() {
                return;
            }
        }
        if !self.factor_mode {
            // leave v uncovered
            let mut next = free.clone();
            next.remove(v);
            self.dfs(&next, chosen);
        }
    }

    /// Greedy triangle hitting set: while a triangle survives, delete its
    /// highest-degree vertex. Every triangle in `free` meets the deleted
    /// set, and disjoint triangles meet it in distinct vertices, so the
    /// number of deletions bounds the packing from above. Capped at `cap`.
    fn hitting_bound(&self, free: &VertexSet, cap: usize) -> usize {
        let mut remaining = free.clone();
        let mut hitters = 0usize;
        while let Some(tri) = first_triangle(self.g, &remaining) {
            let hit = tri
                .into_iter()
                .max_by_key(|&v| remaining.intersection_len(self.g.neighbors(v)))
                .unwrap();
            remaining.remove(hit);
            hitters += 1;
            if hitters >= cap {
                return cap;
            }
        }
        hitters
    }
}

fn first_triangle(g: &Graph, within: &VertexSet) -> Option<[usize; 3]> {
    for u in within.iter() {
        let nu = within.intersection(g.neighbors(u));
        for v in nu.iter() {
            if v <= u {
                continue;
            }
            let common = nu.intersection(g.neighbors(v));
            let w = common.iter().find(|&w| w > v);
            if let Some(w) = w {
                return Some([u, v, w]);
            }
        }
    }
    None
}
