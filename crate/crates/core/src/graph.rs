//! Host-graph data model and the elementary statistics everything else
//! consumes: minimum degree, girth, clique number, pair edge counts.

use crate::bits::VertexSet;
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum GraphError {
    #[error("vertex {v} out of range for n={n}")]
    VertexOutOfRange { v: usize, n: usize },
    #[error("self-loop at vertex {0}")]
    SelfLoop(usize),
    #[error("operation undefined on the empty graph")]
    EmptyGraph,
    #[error("vertex set host size {found} does not match graph order {expected}")]
    HostMismatch { expected: usize, found: usize },
    #[error("search budget of {budget} nodes exceeded; best clique found has {best} vertices")]
    CliqueBudget { budget: u64, best: usize },
}

/// Girth of a graph: length of a shortest cycle, or the acyclic marker.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Girth {
    Acyclic,
    Length(usize),
}

/// Undirected simple graph on vertices `0..n` with bitset adjacency rows.
/// Immutable after construction; deletions produce a new graph plus a
/// remapping table.
#[derive(Clone, PartialEq, Eq)]
pub struct Graph {
    n: usize,
    adj: Vec<VertexSet>,
    label: Option<String>,
}

impl Graph {
    pub fn from_edges(n: usize, edges: &[(usize, usize)]) -> Result<Self, GraphError> {
        let mut adj = vec![VertexSet::empty(n); n];
        for &(u, v) in edges {
            if u >= n {
                return Err(GraphError::VertexOutOfRange { v: u, n });
            }
            if v >= n {
                return Err(GraphError::VertexOutOfRange { v, n });
            }
            if u == v {
                return Err(GraphError::SelfLoop(u));
            }
            adj[u].insert(v);
            adj[v].insert(u);
        }
        Ok(Graph {
            n,
            adj,
            label: None,
        })
    }

    pub fn empty(n: usize) -> Self {
        Graph::from_edges(n, &[]).unwrap()
    }

    pub fn complete(n: usize) -> Self {
        let mut edges = Vec::new();
        for u in 0..n {
            for v in u + 1..n {
                edges.push((u, v));
            }
        }
        Graph::from_edges(n, &edges).unwrap()
    }

    pub fn cycle(n: usize) -> Self {
        assert!(n >= 3);
        let edges: Vec<_> = (0..n).map(|i| (i, (i + 1) % n)).collect();
        Graph::from_edges(n, &edges).unwrap()
    }

    pub fn path(n: usize) -> Self {
        let edges: Vec<_> = (1..n).map(|i| (i - 1, i)).collect();
        Graph::from_edges(n, &edges).unwrap()
    }

    pub fn with_label(mut self, label: impl Into<String>) -> Self {
        self.label = Some(label.into());
        self
    }

    pub fn label(&self) -> Option<&str> {
        self.label.as_deref()
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn neighbors(&self, v: usize) -> &VertexSet {
        &self.adj[v]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adj[v].len()
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.adj[u].contains(v)
    }

    pub fn edge_count(&self) -> usize {
        self.adj.iter().map(|s| s.len()).sum::<usize>() / 2
    }

    pub fn edges(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::with_capacity(self.edge_count());
        for u in 0..self.n {
            for v in self.adj[u].iter() {
                if v > u {
                    out.push((u, v));
                }
            }
        }
        out
    }

    pub fn vertex_set(&self) -> VertexSet {
        VertexSet::full(self.n)
    }

    fn check_host(&self, s: &VertexSet) -> Result<(), GraphError> {
        if s.host_len() != self.n {
            return Err(GraphError::HostMismatch {
                expected: self.n,
                found: s.host_len(),
            });
        }
        Ok(())
    }

    /// New graph on the kept vertices only. Returns the graph and the table
    /// mapping new indices back to old ones.
    pub fn induced(&self, keep: &VertexSet) -> Result<(Graph, Vec<usize>), GraphError> {
        self.check_host(keep)?;
        let old: Vec<usize> = keep.iter().collect();
        let mut pos = vec![usize::MAX; self.n];
        for (i, &v) in old.iter().enumerate() {
            pos[v] = i;
        }
        let mut edges = Vec::new();
        for (i, &v) in old.iter().enumerate() {
            for w in self.adj[v].intersection(keep).iter() {
                if pos[w] > i {
                    edges.push((i, pos[w]));
                }
            }
        }
        let g = Graph::from_edges(old.len(), &edges)?;
        Ok((g, old))
    }

    /// Edge-wise union with another graph on the same vertex set.
    pub fn union_with(&self, other: &Graph) -> Result<Graph, GraphError> {
        if other.n != self.n {
            return Err(GraphError::HostMismatch {
                expected: self.n,
                found: other.n,
            });
        }
        let adj = self
            .adj
            .iter()
            .zip(&other.adj)
            .map(|(a, b)| a.union(b))
            .collect();
        Ok(Graph {
            n: self.n,
            adj,
            label: self.label.clone(),
        })
    }

    pub fn min_degree(&self) -> Result<usize, GraphError> {
        if self.n == 0 {
            return Err(GraphError::EmptyGraph);
        }
        Ok((0..self.n).map(|v| self.degree(v)).min().unwrap())
    }

    /// Shortest cycle length by BFS from every vertex.
    pub fn girth(&self) -> Girth {
        match self.shortest_cycle() {
            Some(c) => Girth::Length(c.len()),
            None => Girth::Acyclic,
        }
    }

    /// An actual shortest cycle, if any. Used by generators that delete one
    /// vertex per short cycle.
    pub fn shortest_cycle(&self) -> Option<Vec<usize>> {
        let mut best: Option<Vec<usize>> = None;
        let mut dist = vec![usize::MAX; self.n];
        let mut parent = vec![usize::MAX; self.n];
        for root in 0..self.n {
            for d in dist.iter_mut() {
                *d = usize::MAX;
            }
            dist[root] = 0;
            parent[root] = usize::MAX;
            let mut queue = std::collections::VecDeque::from([root]);
            while let Some(u) = queue.pop_front() {
                for v in self.adj[u].iter() {
                    if dist[v] == usize::MAX {
                        dist[v] = dist[u] + 1;
                        parent[v] = u;
                        queue.push_back(v);
                    } else if parent[u] != v && parent[v] != u {
                        // closing edge: walk both branches up to the root
                        let len = dist[u] + dist[v] + 1;
                        if best.as_ref().is_none_or(|b| len < b.len()) {
                            if let Some(cycle) = self.extract_cycle(&dist, &parent, u, v) {
                                if best.as_ref().is_none_or(|b| cycle.len() < b.len()) {
                                    best = Some(cycle);
                                }
                            }
                        }
                    }
                }
            }
            if best.as_ref().is_some_and(|b| b.len() == 3) {
                break;
            }
        }
        best
    }

    fn extract_cycle(
        &self,
        dist: &[usize],
        parent: &[usize],
        u: usize,
        v: usize,
    ) -> Option<Vec<usize>> {
        let walk = |mut x: usize| {
            let mut path = vec![x];
            while parent[x] != usize::MAX {
                x = parent[x];
                path.push(x);
            }
            path
        };
        let pu = walk(u);
        let pv = walk(v);
        // BFS-tree paths may share a suffix; cut at the lowest common vertex
        let setv: std::collections::HashSet<usize> = pv.iter().copied().collect();
        let meet_idx = pu.iter().position(|x| setv.contains(x))?;
        let meet = pu[meet_idx];
        let mut cycle: Vec<usize> = pu[..=meet_idx].to_vec();
        let tail: Vec<usize> = pv
            .iter()
            .copied()
            .take_while(|&x| x != meet)
            .collect();
        cycle.extend(tail.into_iter().rev());
        // closing edge u-v assumed; verify this really is a cycle
        if cycle.len() >= 3 && dist[u] + dist[v] + 1 >= cycle.len() {
            Some(cycle)
        } else {
            None
        }
    }

    /// Exact clique number by branch and bound with a greedy-coloring bound.
    pub fn clique_number(&self, budget: u64) -> Result<usize, GraphError> {
        Ok(self.max_clique(budget)?.len())
    }

    /// Largest clique witness (lexicographically earliest found in the
    /// deterministic search order).
    pub fn max_clique(&self, budget: u64) -> Result<Vec<usize>, GraphError> {
        let mut best: Vec<usize> = Vec::new();
        let mut nodes: u64 = 0;
        let cand = self.vertex_set();
        let exhausted = self.clique_dfs(&cand, &mut Vec::new(), &mut best, budget, &mut nodes);
        if exhausted {
            Ok(best)
        } else {
            Err(GraphError::CliqueBudget {
                budget,
                best: best.len(),
            })
        }
    }

    /// Like `max_clique` but restricted to a vertex subset.
    pub fn max_clique_within(
        &self,
        within: &VertexSet,
        budget: u64,
    ) -> Result<Vec<usize>, GraphError> {
        self.check_host(within)?;
        let mut best = Vec::new();
        let mut nodes = 0;
        let exhausted = self.clique_dfs(within, &mut Vec::new(), &mut best, budget, &mut nodes);
        if exhausted {
            Ok(best)
        } else {
            Err(GraphError::CliqueBudget {
                budget,
                best: best.len(),
            })
        }
    }

    fn clique_dfs(
        &self,
        cand: &VertexSet,
        current: &mut Vec<usize>,
        best: &mut Vec<usize>,
        budget: u64,
        nodes: &mut u64,
    ) -> bool {
        *nodes += 1;
        if *nodes > budget {
            return false;
        }
        if cand.is_empty() {
            if current.len() > best.len() {
                *best = current.clone();
            }
            return true;
        }
        // greedy coloring of the candidates; color count bounds the extension
        let verts: Vec<usize> = cand.to_vec();
        let mut color = vec![0usize; verts.len()];
        let mut classes: Vec<VertexSet> = Vec::new();
        for (i, &v) in verts.iter().enumerate() {
            let mut c = 0;
            loop {
                if c == classes.len() {
                    classes.push(VertexSet::empty(self.n));
                }
                if self.adj[v].is_disjoint(&classes[c]) {
                    classes[c].insert(v);
                    color[i] = c + 1;
                    break;
                }
                c += 1;
            }
        }
        // branch in decreasing color order
        let mut order: Vec<usize> = (0..verts.len()).collect();
        order.sort_by_key(|&i| (color[i], verts[i]));
        let mut cand = cand.clone();
        for &i in order.iter().rev() {
            let v = verts[i];
            if current.len() + color[i] <= best.len() {
                break;
            }
            if !cand.contains(v) {
                continue;
            }
            current.push(v);
            let next = cand.intersection(&self.adj[v]);
            if !self.clique_dfs(&next, current, best, budget, nodes) {
                return false;
            }
            current.pop();
            cand.remove(v);
        }
        if current.len() > best.len() {
            // all candidates pruned; current itself is maximal here
            *best = current.clone();
        }
        true
    }

    /// Number of edges with one endpoint in `a` and one in `b`; edges inside
    /// the intersection are counted twice.
    pub fn edges_between(&self, a: &VertexSet, b: &VertexSet) -> Result<usize, GraphError> {
        self.check_host(a)?;
        self.check_host(b)?;
        let mut count = 0;
        for u in a.iter() {
            count += self.adj[u].intersection_len(b);
        }
        Ok(count)
    }
}

impl std::fmt::Debug for Graph {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "Graph(n={}, m={}", self.n, self.edge_count())?;
        if let Some(l) = &self.label {
            write!(f, ", {l}")?;
        }
        write!(f, ")")
    }
}

/// Petersen graph; shared by tests and spectral checks.
pub fn petersen() -> Graph {
    let mut edges = Vec::new();
    for i in 0..5 {
        edges.push((i, (i + 1) % 5)); // outer cycle
        edges.push((i, i + 5)); // spokes
        edges.push((i + 5, (i + 2) % 5 + 5)); // inner pentagram
    }
    Graph::from_edges(10, &edges).unwrap()
}
