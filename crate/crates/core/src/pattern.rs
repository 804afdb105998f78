//! The tile F: a small labeled graph with precomputed automorphisms, plus
//! copy enumeration in a host and the constructive embedding routines.

use crate::bits::VertexSet;
use crate::graph::Graph;
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum PatternError {
    #[error("malformed pattern literal: {0}")]
    Parse(String),
    #[error("pattern order {k} exceeds the exhaustive-mode limit of {limit}")]
    TooLarge { k: usize, limit: usize },
    #[error("embed_pattern_at requires a tree, cycle, or clique pattern")]
    KindUnsupported,
}

/// Structural class of a pattern, used for solver specialization.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PatternKind {
    Clique,
    Cycle,
    Tree,
    General,
}

/// The tile F on vertices `0..k` with automorphism data computed once.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Pattern {
    k: usize,
    edges: Vec<(usize, usize)>,
    adj: Vec<VertexSet>,
    kind: PatternKind,
    automorphisms: Vec<Vec<usize>>,
    literal: String,
}

/// One unordered copy of a pattern in a host, stored as the canonical
/// (lexicographically least under Aut(F)) vertex tuple.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PatternCopy {
    pub vertices: Vec<usize>,
}

impl PatternCopy {
    pub fn vertex_set(&self, n: usize) -> VertexSet {
        VertexSet::from_iter(n, self.vertices.iter().copied())
    }

    pub fn contains(&self, v: usize) -> bool {
        self.vertices.contains(&v)
    }

    /// Checks that the tuple realizes every pattern edge in the host.
    pub fn is_valid(&self, g: &Graph, f: &Pattern) -> bool {
        if self.vertices.len() != f.k {
            return false;
        }
        let mut seen = std::collections::HashSet::new();
        for &v in &self.vertices {
            if v >= g.n() || !seen.insert(v) {
                return false;
            }
        }
        f.edges
            .iter()
            .all(|&(a, b)| g.has_edge(self.vertices[a], self.vertices[b]))
    }
}

impl Pattern {
    pub fn new(k: usize, edges: Vec<(usize, usize)>) -> Result<Self, PatternError> {
        Self::build(k, edges, None)
    }

    fn build(
        k: usize,
        mut edges: Vec<(usize, usize)>,
        literal: Option<String>,
    ) -> Result<Self, PatternError> {
        const LIMIT: usize = 8;
        if k == 0 || k > LIMIT {
            return Err(PatternError::TooLarge { k, limit: LIMIT });
        }
        for e in edges.iter_mut() {
            if e.0 > e.1 {
                *e = (e.1, e.0);
            }
            if e.0 == e.1 || e.1 >= k {
                return Err(PatternError::Parse(format!("bad edge {:?}", e)));
            }
        }
        edges.sort();
        edges.dedup();
        let mut adj = vec![VertexSet::empty(k); k];
        for &(a, b) in &edges {
            adj[a].insert(b);
            adj[b].insert(a);
        }
        let kind = classify(k, &edges, &adj);
        let automorphisms = automorphisms(k, &adj);
        let literal = literal.unwrap_or_else(|| {
            let es: Vec<String> = edges.iter().map(|(a, b)| format!("{a}-{b}")).collect();
            format!("G:k={};edges={}", k, es.join(","))
        });
        Ok(Pattern {
            k,
            edges,
            adj,
            kind,
            automorphisms,
            literal,
        })
    }

    pub fn clique(k: usize) -> Self {
        let mut edges = Vec::new();
        for a in 0..k {
            for b in a + 1..k {
                edges.push((a, b));
            }
        }
        Self::build(k, edges, Some(format!("K{k}"))).unwrap()
    }

    pub fn cycle(k: usize) -> Self {
        assert!(k >= 3);
        let edges = (0..k).map(|i| (i, (i + 1) % k)).collect();
        Self::build(k, edges, Some(format!("C{k}"))).unwrap()
    }

    pub fn path(k: usize) -> Self {
        let edges = (1..k).map(|i| (i - 1, i)).collect();
        Self::build(k, edges, Some(format!("P{k}"))).unwrap()
    }

    /// Parses the pattern literal grammar: `K3`, `C5`, `P4`,
    /// `T:k=5;edges=0-1,1-2,1-3,3-4`, `G:k=4;edges=...`.
    pub fn parse(s: &str) -> Result<Self, PatternError> {
        let s = s.trim();
        let head = s.chars().next().ok_or_else(|| PatternError::Parse("empty".into()))?;
        if (head == 'K' || head == 'C' || head == 'P') && !s.contains(':') {
            let k: usize = s[1..]
                .parse()
                .map_err(|_| PatternError::Parse(s.to_string()))?;
            if k == 0 || k > 8 {
                return Err(PatternError::TooLarge { k, limit: 8 });
            }
            return match head {
                'K' => Ok(Self::clique(k)),
                'C' if k >= 3 => Ok(Self::cycle(k)),
                'P' => Ok(Self::path(k)),
                _ => Err(PatternError::Parse(s.to_string())),
            };
        }
        let (tag, rest) = s
            .split_once(':')
            .ok_or_else(|| PatternError::Parse(s.to_string()))?;
        if tag != "T" && tag != "G" {
            return Err(PatternError::Parse(s.to_string()));
        }
        let mut k = None;
        let mut edges = Vec::new();
        for field in rest.split(';') {
            let (key, val) = field
                .split_once('=')
                .ok_or_else(|| PatternError::Parse(s.to_string()))?;
            match key {
                "k" => k = Some(val.parse().map_err(|_| PatternError::Parse(s.to_string()))?),
                "edges" => {
                    for e in val.split(',').filter(|e| !e.is_empty()) {
                        let (a, b) = e
                            .split_once('-')
                            .ok_or_else(|| PatternError::Parse(s.to_string()))?;
                        edges.push((
                            a.parse().map_err(|_| PatternError::Parse(s.to_string()))?,
                            b.parse().map_err(|_| PatternError::Parse(s.to_string()))?,
                        ));
                    }
                }
                _ => return Err(PatternError::Parse(s.to_string())),
            }
        }
        let k = k.ok_or_else(|| PatternError::Parse("missing k".into()))?;
        let p = Self::build(k, edges, Some(s.to_string()))?;
        if tag == "T" && p.kind != PatternKind::Tree {
            return Err(PatternError::Parse(format!("{s} is not a tree")));
        }
        Ok(p)
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn kind(&self) -> PatternKind {
        self.kind
    }

    pub fn automorphism_count(&self) -> usize {
        self.automorphisms.len()
    }

    pub fn literal(&self) -> &str {
        &self.literal
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adj[v].len()
    }

    fn is_acyclic_without(&self, removed: u32) -> bool {
        // union-find over the kept vertices
        let mut parent: Vec<usize> = (0..self.k).collect();
        fn find(parent: &mut Vec<usize>, x: usize) -> usize {
            if parent[x] != x {
                parent[x] = find(parent, parent[x]);
            }
            parent[x]
        }
        for &(a, b) in &self.edges {
            if removed >> a & 1 == 1 || removed >> b & 1 == 1 {
                continue;
            }
            let (ra, rb) = (find(&mut parent, a), find(&mut parent, b));
            if ra == rb {
                return false;
            }
            parent[ra] = rb;
        }
        true
    }

    /// Minimum number of vertices whose deletion leaves the pattern acyclic,
    /// by subset search in increasing size.
    pub fn gamma(&self) -> usize {
        for size in 0..=self.k {
            let mut found = false;
            subsets_of_size(self.k, size, &mut |mask| {
                if !found && self.is_acyclic_without(mask) {
                    found = true;
                }
            });
            if found {
                return size;
            }
        }
        unreachable!("removing all vertices is always acyclic")
    }

    fn canonical_tuple(&self, tuple: &[usize]) -> Vec<usize> {
        let mut best: Option<Vec<usize>> = None;
        for sigma in &self.automorphisms {
            // image of the copy under relabeling by sigma
            let relabeled: Vec<usize> = (0..self.k).map(|i| tuple[sigma[i]]).collect();
            if best.as_ref().is_none_or(|b| relabeled < *b) {
                best = Some(relabeled);
            }
        }
        best.unwrap()
    }
}

fn classify(k: usize, edges: &[(usize, usize)], adj: &[VertexSet]) -> PatternKind {
    let m = edges.len();
    if m == k * (k - 1) / 2 {
        // complete; K1 and K2 count as cliques, K3 doubles as C3
        return PatternKind::Clique;
    }
    let connected = {
        let mut seen = VertexSet::empty(k);
        let mut stack = vec![0usize];
        seen.insert(0);
        while let Some(u) = stack.pop() {
            for v in adj[u].iter() {
                if !seen.contains(v) {
                    seen.insert(v);
                    stack.push(v);
                }
            }
        }
        seen.len() == k
    };
    if connected && m == k && adj.iter().all(|a| a.len() == 2) {
        return PatternKind::Cycle;
    }
    if connected && m == k - 1 {
        return PatternKind::Tree;
    }
    PatternKind::General
}

fn automorphisms(k: usize, adj: &[VertexSet]) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut perm = vec![usize::MAX; k];
    let mut used = vec![false; k];
    fn extend(
        pos: usize,
        k: usize,
        adj: &[VertexSet],
        perm: &mut Vec<usize>,
        used: &mut Vec<bool>,
        out: &mut Vec<Vec<usize>>,
    ) {
        if pos == k {
            out.push(perm.clone());
            return;
        }
        for img in 0..k {
            if used[img] || adj[pos].len() != adj[img].len() {
                continue;
            }
            // adjacency to already-placed vertices must be preserved
            if (0..pos).all(|p| adj[pos].contains(p) == adj[img].contains(perm[p])) {
                perm[pos] = img;
                used[img] = true;
                extend(pos + 1, k, adj, perm, used, out);
                used[img] = false;
            }
        }
        perm[pos] = usize::MAX;
    }
    extend(0, k, adj, &mut perm, &mut used, &mut out);
    out
}

fn subsets_of_size(n: usize, size: usize, f: &mut impl FnMut(u32)) {
    fn rec(n: usize, size: usize, start: usize, mask: u32, f: &mut impl FnMut(u32)) {
        if size == 0 {
            f(mask);
            return;
        }
        for v in start..=n.saturating_sub(size) {
            rec(n, size - 1, v + 1, mask | 1 << v, f);
        }
    }
    rec(n, size, 0, 0, f)
}

/// Result of a (possibly capped) copy enumeration.
#[derive(Debug, Clone)]
pub struct CopyStream {
    pub copies: Vec<PatternCopy>,
    pub truncated: bool,
}

/// Enumerates every unordered copy of `f` in `g` with all vertices in
/// `within`, subgraph semantics, each copy exactly once. `containing`
/// restricts to copies through a given vertex; `cap` bounds the output.
pub fn enumerate_copies(
    g: &Graph,
    f: &Pattern,
    within: &VertexSet,
    containing: Option<usize>,
    cap: Option<usize>,
) -> CopyStream {
    let mut seen = std::collections::HashSet::new();
    let mut copies = Vec::new();
    let mut truncated = false;
    for_each_copy(g, f, within, containing, &mut |tuple| {
        let canon = f.canonical_tuple(tuple);
        if seen.insert(canon.clone()) {
            copies.push(PatternCopy { vertices: canon });
            if let Some(c) = cap {
                if copies.len() >= c {
                    truncated = true;
                    return false;
                }
            }
        }
        true
    });
    copies.sort();
    CopyStream { copies, truncated }
}

/// Copies deduplicated by vertex set (one canonical tuple per covered set);
/// this is what the packing solver branches over.
pub fn enumerate_copy_sets(
    g: &Graph,
    f: &Pattern,
    within: &VertexSet,
    containing: Option<usize>,
) -> Vec<PatternCopy> {
    let mut seen = std::collections::HashSet::new();
    let mut copies = Vec::new();
    for_each_copy(g, f, within, containing, &mut |tuple| {
        let mut key = tuple.to_vec();
        key.sort_unstable();
        if seen.insert(key) {
            copies.push(PatternCopy {
                vertices: f.canonical_tuple(tuple),
            });
        }
        true
    });
    copies.sort();
    copies
}

/// Low-level ordered-embedding backtracking. Calls `visit` with each injective
/// edge-preserving map (as the image tuple); returning false stops the walk.
fn for_each_copy(
    g: &Graph,
    f: &Pattern,
    within: &VertexSet,
    containing: Option<usize>,
    visit: &mut impl FnMut(&[usize]) -> bool,
) {
    if f.k > within.len() {
        return;
    }
    if let Some(v) = containing {
        if !within.contains(v) {
            return;
        }
    }
    // map pattern vertices in a connectivity-friendly order
    let order = embedding_order(f);
    let mut image = vec![usize::MAX; f.k];
    let mut used = VertexSet::empty(g.n());
    embed(g, f, within, containing, &order, 0, &mut image, &mut used, visit);
}

fn embedding_order(f: &Pattern) -> Vec<usize> {
    let mut order: Vec<usize> = Vec::with_capacity(f.k);
    let mut placed = vec![false; f.k];
    while order.len() < f.k {
        // prefer vertices with the most already-placed neighbors, then degree
        let next = (0..f.k)
            .filter(|&v| !placed[v])
            .max_by_key(|&v| {
                let back = f.adj[v].iter().filter(|&u| placed[u]).count();
                (back, f.adj[v].len(), std::cmp::Reverse(v))
            })
            .unwrap();
        placed[next] = true;
        order.push(next);
    }
    order
}

#[allow(clippy::too_many_arguments)]
fn embed(
    g: &Graph,
    f: &Pattern,
    within: &VertexSet,
    containing: Option<usize>,
    order: &[usize],
    pos: usize,
    image: &mut Vec<usize>,
    used: &mut VertexSet,
    visit: &mut impl FnMut(&[usize]) -> bool,
) -> bool {
    if pos == order.len() {
        if let Some(v) = containing {
            if !image.contains(&v) {
                return true;
            }
        }
        return visit(image);
    }
    let p = order[pos];
    // candidates: within, unused, adjacent to all already-placed neighbors
    let mut cand = within.difference(used);
    for u in f.adj[p].iter() {
        if image[u] != usize::MAX {
            cand = cand.intersection(g.neighbors(image[u]));
        }
    }
    // anchor pruning: the required vertex must fit in one of the remaining slots
    if let Some(v) = containing {
        if !image.contains(&v) && order.len() - pos == 1 && !cand.contains(v) {
            return true;
        }
    }
    for w in cand.iter() {
        image[order[pos]] = w;
        used.insert(w);
        let keep_going = embed(g, f, within, containing, order, pos + 1, image, used, visit);
        used.remove(w);
        image[order[pos]] = usize::MAX;
        if !keep_going {
            return false;
        }
    }
    true
}

/// Constructive embedding of `f` at `v` with the remaining vertices drawn
/// from `u`. Tries the kind-specific route first, then falls back to a
/// bounded exhaustive search; may honestly report "not found".
pub fn embed_pattern_at(
    g: &Graph,
    f: &Pattern,
    v: usize,
    u: &VertexSet,
    alpha_bound: usize,
) -> Result<Option<PatternCopy>, PatternError> {
    if !matches!(
        f.kind,
        PatternKind::Tree | PatternKind::Cycle | PatternKind::Clique
    ) {
        return Err(PatternError::KindUnsupported);
    }
    let mut u = u.clone();
    u.remove(v);
    let _ = alpha_bound; // threshold is the caller's guarantee, not a gate
    if let Some(copy) = constructive_embed(g, f, v, &u) {
        debug_assert!(copy.is_valid(g, f));
        return Ok(Some(copy));
    }
    // exhaustive fallback over u ∪ {v}
    let mut scope = u.clone();
    scope.insert(v);
    let stream = enumerate_copies(g, f, &scope, Some(v), Some(1));
    Ok(stream.copies.into_iter().next())
}

fn constructive_embed(g: &Graph, f: &Pattern, v: usize, u: &VertexSet) -> Option<PatternCopy> {
    let nbhd = g.neighbors(v).intersection(u);
    match f.kind {
        PatternKind::Tree => embed_tree(g, f, v, &nbhd, u),
        PatternKind::Cycle => embed_cycle(g, f, v, &nbhd),
        PatternKind::Clique => embed_clique(g, f, v, &nbhd),
        PatternKind::General => None,
    }
}

/// Trees: peel low-degree vertices from G[N(v) ∩ u] until every remaining
/// vertex has degree ≥ k−2 inside the peeled set, then greedily extend
/// leaves; v is glued at a leaf of the tree.
fn embed_tree(g: &Graph, f: &Pattern, v: usize, nbhd: &VertexSet, u: &VertexSet) -> Option<PatternCopy> {
    let k = f.k;
    if k == 1 {
        return Some(PatternCopy { vertices: vec![v] });
    }
    // peel to minimum degree k-2 within the neighborhood
    let mut core = nbhd.clone();
    loop {
        let mut removed = false;
        for w in core.to_vec() {
            if g.neighbors(w).intersection_len(&core) < k.saturating_sub(2) {
                core.remove(w);
                removed = true;
            }
        }
        if !removed {
            break;
        }
    }
    if core.is_empty() {
        return None;
    }
    // root f at a leaf; map that leaf to v, grow the rest greedily in core
    let leaf = (0..k).find(|&x| f.adj[x].len() == 1)?;
    let mut image = vec![usize::MAX; k];
    image[leaf] = v;
    let mut used = VertexSet::empty(g.n());
    used.insert(v);
    // BFS order of pattern vertices from the leaf
    let mut order = vec![leaf];
    let mut seen = vec![false; k];
    seen[leaf] = true;
    let mut i = 0;
    while i < order.len() {
        for w in f.adj[order[i]].iter() {
            if !seen[w] {
                seen[w] = true;
                order.push(w);
            }
        }
        i += 1;
    }
    for &p in order.iter().skip(1) {
        let parent = f.adj[p].iter().find(|&q| image[q] != usize::MAX).unwrap();
        let host_parent = image[parent];
        let cand = if host_parent == v {
            core.difference(&used)
        } else {
            g.neighbors(host_parent).intersection(&core).difference(&used)
        };
        let w = cand.first()?;
        image[p] = w;
        used.insert(w);
    }
    let copy = PatternCopy {
        vertices: f.canonical_tuple(&image),
    };
    let _ = u;
    if copy.is_valid(g, f) {
        Some(copy)
    } else {
        None
    }
}

/// Cycles: find an edge {x,y} in N(v)∩u whose common neighborhood supports a
/// path of the right length, then extend.
fn embed_cycle(g: &Graph, f: &Pattern, v: usize, nbhd: &VertexSet) -> Option<PatternCopy> {
    let k = f.k;
    // v plus a path x..y of k-1 vertices inside the neighborhood
    for x in nbhd.iter() {
        let mut path = vec![x];
        let mut used = VertexSet::empty(g.n());
        used.insert(v);
        used.insert(x);
        if grow_path(g, nbhd, &mut path, &mut used, k - 1) {
            let last = *path.last().unwrap();
            if g.has_edge(last, v) {
                let mut cyc = vec![v];
                cyc.extend(&path);
                let copy = PatternCopy {
                    vertices: f.canonical_tuple(&cyc),
                };
                if copy.is_valid(g, f) {
                    return Some(copy);
                }
            }
        }
    }
    None
}

fn grow_path(
    g: &Graph,
    scope: &VertexSet,
    path: &mut Vec<usize>,
    used: &mut VertexSet,
    target: usize,
) -> bool {
    if path.len() == target {
        return true;
    }
    let last = *path.last().unwrap();
    for w in g.neighbors(last).intersection(scope).difference(used).iter() {
        path.push(w);
        used.insert(w);
        if grow_path(g, scope, path, used, target) {
            return true;
        }
        used.remove(w);
        path.pop();
    }
    false
}

/// Cliques: branch-and-bound K_{k-1} search inside N(v)∩u.
fn embed_clique(g: &Graph, f: &Pattern, v: usize, nbhd: &VertexSet) -> Option<PatternCopy> {
    let k = f.k;
    match g.max_clique_within(nbhd, 1 << 20) {
        Ok(clique) if clique.len() >= k - 1 => {
            let mut verts = vec![v];
            verts.extend(&clique[..k - 1]);
            verts.sort_unstable();
            let copy = PatternCopy { vertices: verts };
            copy.is_valid(g, f).then_some(copy)
        }
        _ => None,
    }
}
