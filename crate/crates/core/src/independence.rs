//! Exact r-independence number α_r and r-partite hole number α*_r,
//! with witnesses re-verified on output and honest budget flags.

use crate::bits::VertexSet;
use crate::graph::Graph;
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum IndependenceError {
    #[error("r must be at least 2, got {0}")]
    BadR(usize),
}

/// Exact optimum (or certified lower bound when `exact` is false) together
/// with its witness.
#[derive(Debug, Clone)]
pub struct IndependenceReport {
    pub r: usize,
    pub value: usize,
    /// K_r-free witness set for alpha_r; first hole side list for alpha_star_r.
    pub witness: Vec<VertexSet>,
    pub exact: bool,
    pub nodes: u64,
}

const DEFAULT_BUDGET: u64 = 10_000_000;

/// Largest K_r-free vertex subset.
pub fn alpha_r(g: &Graph, r: usize) -> Result<IndependenceReport, IndependenceError> {
    alpha_r_with_budget(g, r, DEFAULT_BUDGET)
}

pub fn alpha_r_with_budget(
    g: &Graph,
    r: usize,
    budget: u64,
) -> Result<IndependenceReport, IndependenceError> {
    if r < 2 {
        return Err(IndependenceError::BadR(r));
    }
    let mut search = AlphaSearch {
        g,
        r,
        best: VertexSet::empty(g.n()),
        nodes: 0,
        budget,
        exhausted: true,
    };
    let full = g.vertex_set();
    search.dfs(&VertexSet::empty(g.n()), &full);
    debug_assert!(kr_free(g, &search.best, r));
    Ok(IndependenceReport {
        r,
        value: search.best.len(),
        witness: vec![search.best],
        exact: search.exhausted,
        nodes: search.nodes,
    })
}

/// True iff the induced subgraph on `set` contains no K_r.
pub fn kr_free(g: &Graph, set: &VertexSet, r: usize) -> bool {
    find_kr_within(g, set, r).is_none()
}

/// Any K_r inside `set`, if one exists. Exhaustive for desk-scale r.
pub fn find_kr_within(g: &Graph, set: &VertexSet, r: usize) -> Option<Vec<usize>> {
    let mut clique = Vec::new();
    find_kr_rec(g, set, r, &mut clique)
}

fn find_kr_rec(g: &Graph, cand: &VertexSet, need: usize, clique: &mut Vec<usize>) -> Option<Vec<usize>> {
    if need == 0 {
        return Some(clique.clone());
    }
    if cand.len() < need {
        return None;
    }
    let mut cand = cand.clone();
    while let Some(v) = cand.first() {
        cand.remove(v);
        clique.push(v);
        let next = cand.intersection(g.neighbors(v));
        if let Some(found) = find_kr_rec(g, &next, need - 1, clique) {
            clique.pop();
            return Some(found);
        }
        clique.pop();
    }
    None
}

struct AlphaSearch<'a> {
    g: &'a Graph,
    r: usize,
    best: VertexSet,
    nodes: u64,
    budget: u64,
    exhausted: bool,
}

impl AlphaSearch<'_> {
    fn dfs(&mut self, included: &VertexSet, open: &VertexSet) {
        self.nodes += 1;
        if self.nodes > self.budget {
            self.exhausted = false;
            return;
        }
        if included.len() + open.len() <= self.best.len() {
            return;
        }
        let candidate = included.union(open);
        match find_kr_within(self.g, &candidate, self.r) {
            None => {
                // the whole candidate set is K_r-free; take it
                if candidate.len() > self.best.len() {
                    self.best = candidate;
                }
            }
            Some(clique) => {
                // some clique vertex still in `open` must be excluded;
                // branch i excludes clique vertex i and commits 0..i
                let mut inc = included.clone();
                let mut op = open.clone();
                for &v in &clique {
                    if !op.contains(v) {
                        continue;
                    }
                    op.remove(v);
                    self.dfs(&inc, &op);
                    if !self.exhausted {
                        return;
                    }
                    inc.insert(v);
                }
                // all clique vertices committed: branch infeasible, stop
            }
        }
    }
}

/// Report for alpha_star_r: the largest s with r pairwise-disjoint s-sets
/// admitting no transversal K_r.
pub fn alpha_star_r(g: &Graph, r: usize) -> Result<IndependenceReport, IndependenceError> {
    alpha_star_r_with_budget(g, r, DEFAULT_BUDGET)
}

pub fn alpha_star_r_with_budget(
    g: &Graph,
    r: usize,
    budget: u64,
) -> Result<IndependenceReport, IndependenceError> {
    if r < 2 {
        return Err(IndependenceError::BadR(r));
    }
    let n = g.n();
    let mut nodes: u64 = 0;
    let mut best_hole: Vec<VertexSet> = vec![VertexSet::empty(n); r];
    let mut exact = true;
    // binary search on s: holes truncate downward, so feasibility is monotone
    let mut lo = 0usize; // size 0 hole always exists
    let mut hi = n / r;
    while lo < hi {
        let s = lo + (hi - lo).div_ceil(2);
        let mut search = HoleSearch {
            g,
            r,
            s,
            nodes: &mut nodes,
            budget,
            exhausted: true,
            found: None,
        };
        let mut sides = vec![VertexSet::empty(n); r];
        search.dfs(0, &mut sides);
        let exhausted = search.exhausted;
        match search.found {
            Some(hole) => {
                best_hole = hole;
                lo = s;
            }
            None => {
                if !exhausted {
                    // cannot certify absence at this size
                    exact = false;
                    hi = s - 1;
                } else {
                    hi = s - 1;
                }
            }
        }
    }
    debug_assert!(is_hole(g, &best_hole));
    Ok(IndependenceReport {
        r,
        value: lo,
        witness: best_hole,
        exact,
        nodes,
    })
}

/// Verifies the hole property: sides pairwise disjoint, equal size, and no
/// K_r with one vertex in each side.
pub fn is_hole(g: &Graph, sides: &[VertexSet]) -> bool {
    for (i, a) in sides.iter().enumerate() {
        for b in &sides[i + 1..] {
            if !a.is_disjoint(b) {
                return false;
            }
        }
        if a.len() != sides[0].len() {
            return false;
        }
    }
    !has_transversal_kr(g, sides)
}

fn has_transversal_kr(g: &Graph, sides: &[VertexSet]) -> bool {
    transversal_rec(g, sides, 0, &mut Vec::new())
}

fn transversal_rec(g: &Graph, sides: &[VertexSet], level: usize, chosen: &mut Vec<usize>) -> bool {
    if level == sides.len() {
        return true;
    }
    for v in sides[level].iter() {
        if chosen.iter().all(|&u| g.has_edge(u, v)) {
            chosen.push(v);
            if transversal_rec(g, sides, level + 1, chosen) {
                chosen.pop();
                return true;
            }
            chosen.pop();
        }
    }
    false
}

struct HoleSearch<'a> {
    g: &'a Graph,
    r: usize,
    s: usize,
    nodes: &'a mut u64,
    budget: u64,
    exhausted: bool,
    found: Option<Vec<VertexSet>>,
}

impl HoleSearch<'_> {
    /// Assigns vertices in index order to one of the r sides or to neither,
    /// with a transversal-K_r early cut and a counting bound.
    fn dfs(&mut self, v: usize, sides: &mut Vec<VertexSet>) {
        if self.found.is_some() || !self.exhausted {
            return;
        }
        *self.nodes += 1;
        if *self.nodes > self.budget {
            self.exhausted = false;
            return;
        }
        if sides.iter().all(|side| side.len() == self.s) {
            self.found = Some(sides.clone());
            return;
        }
        let n = self.g.n();
        if v == n {
            return;
        }
        // counting bound: remaining vertices must be able to fill all sides
        let deficit: usize = sides.iter().map(|side| self.s - side.len()).sum();
        if deficit > n - v {
            return;
        }
        // symmetry: sides are interchangeable, so only extend the first
        // empty side (all later empty sides are equivalent)
        let mut tried_empty = false;
        for i in 0..self.r {
            if sides[i].len() == self.s {
                continue;
            }
            if sides[i].is_empty() {
                if tried_empty {
                    continue;
                }
                tried_empty = true;
            }
            if self.extends_to_transversal(v, i, sides) {
                continue;
            }
            sides[i].insert(v);
            self.dfs(v + 1, sides);
            sides[i].remove(v);
            if self.found.is_some() || !self.exhausted {
                return;
            }
        }
        // leave v unassigned
        self.dfs(v + 1, sides);
    }

    /// Would placing `v` in side `i` complete a transversal K_r?
    fn extends_to_transversal(&self, v: usize, i: usize, sides: &[VertexSet]) -> bool {
        let others: Vec<VertexSet> = sides
            .iter()
            .enumerate()
            .filter(|&(j, _)| j != i)
            .map(|(_, side)| side.intersection(self.g.neighbors(v)))
            .collect();
        transversal_rec(self.g, &others, 0, &mut vec![v])
    }
}
