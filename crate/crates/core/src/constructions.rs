//! Extremal constructions with built-in verification: every generator
//! checks its structural target (girth, clique number, independence of the
//! sparse side, cross-triangle-freeness) on the produced graph rather than
//! trusting the construction.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::bits::VertexSet;
use crate::graph::{Girth, Graph, GraphError};
use crate::independence::{alpha_r_with_budget, alpha_star_r_with_budget, IndependenceError};
use crate::spectral::{second_eigenvalue, SpectralReport};
use crate::Frac;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum ConstructionError {
    #[error("cannot parse construction spec `{0}`: {1}")]
    Parse(String, String),
    #[error("invalid parameter: {0}")]
    Param(String),
    #[error("{name} generation failed after {retries} retries: {detail}")]
    GenerationFailure {
        name: &'static str,
        retries: usize,
        detail: String,
    },
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error(transparent)]
    Independence(#[from] IndependenceError),
}

/// Parsed construction request; identical specs (including seeds) generate
/// identical graphs.
#[derive(Debug, Clone, PartialEq)]
pub enum ConstructionSpec {
    G0 { n: usize, eta: Frac },
    DisjointCliques { sizes: Vec<usize> },
    HighGirthBiholeFree { n: usize, k: usize, alpha: Frac, seed: u64 },
    CliqueFreeLowAlpha { n: usize, r: usize, alpha: Frac, seed: u64 },
    TriangleFactorBlocker { n: usize, d: usize, seed: u64 },
    PerturbedUnion { base: Box<ConstructionSpec>, p: Frac, seed: u64 },
}

/// Per-construction verification evidence.
#[derive(Debug, Clone)]
pub enum ConstructionRecord {
    None,
    HighGirth {
        girth_ok: bool,
        alpha_star: usize,
        alpha_star_exact: bool,
        bound: usize,
        attempts: usize,
    },
    CliqueFree {
        omega: usize,
        alpha: usize,
        alpha_exact: bool,
        bound: usize,
        attempts: usize,
    },
    Blocker {
        cross_triangle_free: bool,
        part_sizes: (usize, usize),
        sizes_mod_3: (usize, usize),
        min_degree: usize,
        min_degree_bound: isize,
        deleted: usize,
        n0_adjusted: bool,
        spectral: SpectralReport,
    },
}

impl ConstructionRecord {
    pub fn render(&self) -> String {
        match self {
            ConstructionRecord::None => String::new(),
            ConstructionRecord::HighGirth {
                girth_ok,
                alpha_star,
                alpha_star_exact,
                bound,
                attempts,
            } => format!(
                "girth_ok={girth_ok} alpha_star={alpha_star} exact={alpha_star_exact} bound={bound} attempts={attempts}"
            ),
            ConstructionRecord::CliqueFree {
                omega,
                alpha,
                alpha_exact,
                bound,
                attempts,
            } => format!(
                "omega={omega} alpha={alpha} exact={alpha_exact} bound={bound} attempts={attempts}"
            ),
            ConstructionRecord::Blocker {
                cross_triangle_free,
                part_sizes,
                sizes_mod_3,
                min_degree,
                min_degree_bound,
                deleted,
                n0_adjusted,
                spectral,
            } => format!(
                "cross_triangle_free={cross_triangle_free} parts={part_sizes:?} mod3={sizes_mod_3:?} \
                 min_degree={min_degree} bound={min_degree_bound} deleted={deleted} \
                 n0_adjusted={n0_adjusted} lambda_g0={:.6}",
                spectral.lambda
            ),
        }
    }
}

impl ConstructionSpec {
    /// Grammar: `name:key=value,key=value`. Rationals as `3/10` or `1`;
    /// clique sizes as `8+8`; perturbed bases parenthesized:
    /// `perturbed_union:base=(g0:n=10,eta=1/2),p=1/10,seed=3`.
    pub fn parse(s: &str) -> Result<Self, ConstructionError> {
        let err = |d: &str| ConstructionError::Parse(s.to_string(), d.to_string());
        let (name, rest) = s.split_once(':').ok_or_else(|| err("missing `:`"))?;
        let fields = split_fields(rest);
        let get = |key: &str| -> Result<&str, ConstructionError> {
            fields
                .iter()
                .find_map(|f| f.strip_prefix(key).and_then(|t| t.strip_prefix('=')))
                .ok_or_else(|| err(&format!("missing field `{key}`")))
        };
        let int = |key: &str| -> Result<usize, ConstructionError> {
            get(key)?.parse().map_err(|_| err(&format!("bad integer `{key}`")))
        };
        let seed = |key: &str| -> Result<u64, ConstructionError> {
            get(key)?.parse().map_err(|_| err(&format!("bad seed `{key}`")))
        };
        let frac = |key: &str| -> Result<Frac, ConstructionError> {
            parse_frac(get(key)?).ok_or_else(|| err(&format!("bad rational `{key}`")))
        };
        match name {
            "g0" => Ok(Self::G0 { n: int("n")?, eta: frac("eta")? }),
            "disjoint_cliques" => {
                let sizes = get("sizes")?
                    .split('+')
                    .map(|t| t.parse().map_err(|_| err("bad clique size")))
                    .collect::<Result<Vec<usize>, _>>()?;
                Ok(Self::DisjointCliques { sizes })
            }
            "high_girth_bihole_free" => Ok(Self::HighGirthBiholeFree {
                n: int("n")?,
                k: int("k")?,
                alpha: frac("alpha")?,
                seed: seed("seed")?,
            }),
            "clique_free_low_alpha" => Ok(Self::CliqueFreeLowAlpha {
                n: int("n")?,
                r: int("r")?,
                alpha: frac("alpha")?,
                seed: seed("seed")?,
            }),
            "blocker" | "triangle_factor_blocker" => Ok(Self::TriangleFactorBlocker {
                n: int("n")?,
                d: int("d")?,
                seed: seed("seed")?,
            }),
            "perturbed_union" => {
                let base_text = get("base")?;
                let inner = base_text
                    .strip_prefix('(')
                    .and_then(|t| t.strip_suffix(')'))
                    .ok_or_else(|| err("base must be parenthesized"))?;
                Ok(Self::PerturbedUnion {
                    base: Box::new(Self::parse(inner)?),
                    p: frac("p")?,
                    seed: seed("seed")?,
                })
            }
            other => Err(err(&format!("unknown construction `{other}`"))),
        }
    }

    pub fn generate(&self) -> Result<(Graph, ConstructionRecord), ConstructionError> {
        match self {
            Self::G0 { n, eta } => Ok((g0(*n, *eta)?, ConstructionRecord::None)),
            Self::DisjointCliques { sizes } => {
                Ok((disjoint_cliques(sizes)?, ConstructionRecord::None))
            }
            Self::HighGirthBiholeFree { n, k, alpha, seed } => {
                high_girth_bihole_free(*n, *k, *alpha, *seed)
            }
            Self::CliqueFreeLowAlpha { n, r, alpha, seed } => {
                clique_free_low_alpha(*n, *r, *alpha, *seed)
            }
            Self::TriangleFactorBlocker { n, d, seed } => triangle_factor_blocker(*n, *d, *seed),
            Self::PerturbedUnion { base, p, seed } => {
                let (g, _) = base.generate()?;
                Ok((perturb(&g, *p, *seed)?, ConstructionRecord::None))
            }
        }
    }
}

/// Splits on commas at parenthesis depth zero.
fn split_fields(s: &str) -> Vec<&str> {
    let mut out = Vec::new();
    let mut depth = 0usize;
    let mut start = 0usize;
    for (i, c) in s.char_indices() {
        match c {
            '(' => depth += 1,
            ')' => depth = depth.saturating_sub(1),
            ',' if depth == 0 => {
                out.push(&s[start..i]);
                start = i + 1;
            }
            _ => {}
        }
    }
    out.push(&s[start..]);
    out
}

fn parse_frac(s: &str) -> Option<Frac> {
    if let Some((num, den)) = s.split_once('/') {
        let num: i64 = num.trim().parse().ok()?;
        let den: i64 = den.trim().parse().ok()?;
        if den == 0 {
            return None;
        }
        Some(Frac::new(num, den))
    } else {
        Some(Frac::new(s.trim().parse().ok()?, 1))
    }
}

fn frac_mul_ceil(frac: Frac, n: usize) -> usize {
    (frac * Frac::new(n as i64, 1)).ceil().to_integer() as usize
}

fn frac_to_f64(frac: Frac) -> f64 {
    *frac.numer() as f64 / *frac.denom() as f64
}

/// Clique X₁ on the first ⌈ηn⌉ vertices, complete bipartite to an
/// independent X₂ on the rest.
pub fn g0(n: usize, eta: Frac) -> Result<Graph, ConstructionError> {
    if eta <= Frac::new(0, 1) || eta > Frac::new(1, 1) {
        return Err(ConstructionError::Param(format!("eta must be in (0,1], got {eta}")));
    }
    if n == 0 {
        return Err(ConstructionError::Param("n must be positive".into()));
    }
    let a = frac_mul_ceil(eta, n).min(n);
    let mut edges = Vec::new();
    for i in 0..a {
        for j in i + 1..a {
            edges.push((i, j));
        }
        for j in a..n {
            edges.push((i, j));
        }
    }
    Ok(Graph::from_edges(n, &edges)?.with_label(format!("g0(n={n},eta={eta})")))
}

pub fn disjoint_cliques(sizes: &[usize]) -> Result<Graph, ConstructionError> {
    if sizes.is_empty() {
        return Err(ConstructionError::Param("clique size list is empty".into()));
    }
    if sizes.contains(&0) {
        return Err(ConstructionError::Param("clique sizes must be positive".into()));
    }
    let n = sizes.iter().sum();
    let mut edges = Vec::new();
    let mut base = 0;
    for &s in sizes {
        for i in 0..s {
            for j in i + 1..s {
                edges.push((base + i, base + j));
            }
        }
        base += s;
    }
    Ok(Graph::from_edges(n, &edges)?.with_label(format!("disjoint_cliques{sizes:?}")))
}

fn gnp(n: usize, p: f64, rng: &mut ChaCha8Rng) -> Vec<(usize, usize)> {
    let mut edges = Vec::new();
    for u in 0..n {
        for v in u + 1..n {
            if rng.gen_bool(p.clamp(0.0, 1.0)) {
                edges.push((u, v));
            }
        }
    }
    edges
}

const GENERATION_RETRIES: usize = 50;
const VERIFY_BUDGET: u64 = 2_000_000;

/// Samples G(2n, C/n), kills every cycle of length ≤ k by vertex deletion,
/// trims to n vertices, and verifies girth > k and α*₂ < αn on the output.
pub fn high_girth_bihole_free(
    n: usize,
    k: usize,
    alpha: Frac,
    seed: u64,
) -> Result<(Graph, ConstructionRecord), ConstructionError> {
    if n < 10 {
        return Err(ConstructionError::Param("n must be at least 10".into()));
    }
    if k < 3 {
        return Err(ConstructionError::Param("k must be at least 3".into()));
    }
    if alpha <= Frac::new(0, 1) {
        return Err(ConstructionError::Param("alpha must be positive".into()));
    }
    let alpha_f = frac_to_f64(alpha);
    let c = ((8.0 / (alpha_f * alpha_f)).ceil() as usize).max(3 * k);
    let p = (c as f64 / n as f64).min(1.0);
    let bound = frac_mul_ceil(alpha, n);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut best_detail = String::from("no attempt");
    for attempt in 1..=GENERATION_RETRIES {
        let mut g = Graph::from_edges(2 * n, &gnp(2 * n, p, &mut rng))?;
        let mut alive = g.vertex_set();
        // delete one vertex per surviving short cycle
        loop {
            let (sub, remap) = g.induced(&alive)?;
            match sub.shortest_cycle() {
                Some(cycle) if cycle.len() <= k => {
                    alive.remove(remap[cycle[0]]);
                }
                _ => break,
            }
            if alive.len() < n {
                break;
            }
        }
        if alive.len() < n {
            best_detail = format!("only {} vertices survived cycle removal", alive.len());
            continue;
        }
        let keep = VertexSet::from_iter(2 * n, alive.iter().take(n));
        let (trimmed, _) = g.induced(&keep)?;
        g = trimmed.with_label(format!("high_girth_bihole_free(n={n},k={k},alpha={alpha},seed={seed})"));
        let girth_ok = match g.girth() {
            Girth::Acyclic => true,
            Girth::Length(l) => l > k,
        };
        if !girth_ok {
            best_detail = "short cycle survived trimming".into();
            continue;
        }
        // α*₂ < αn; the trivial cap α*₂ ≤ n/2 settles generous bounds
        let (value, exact) = if bound > n / 2 {
            (n / 2, true)
        } else {
            let rep = alpha_star_r_with_budget(&g, 2, VERIFY_BUDGET)?;
            (rep.value, rep.exact)
        };
        if exact && value < bound {
            return Ok((
                g,
                ConstructionRecord::HighGirth {
                    girth_ok,
                    alpha_star: value,
                    alpha_star_exact: exact,
                    bound,
                    attempts: attempt,
                },
            ));
        }
        best_detail = format!("alpha_star={value} (exact={exact}) vs bound {bound}");
    }
    Err(ConstructionError::GenerationFailure {
        name: "high_girth_bihole_free",
        retries: GENERATION_RETRIES,
        detail: best_detail,
    })
}

/// Samples G(2n, n^{-x}) with x midway between 2/(r+1) and 2/r, deletes a
/// vertex per K_{r+1}, trims to n, and verifies ω ≤ r and α_r < αn.
pub fn clique_free_low_alpha(
    n: usize,
    r: usize,
    alpha: Frac,
    seed: u64,
) -> Result<(Graph, ConstructionRecord), ConstructionError> {
    if r < 2 {
        return Err(ConstructionError::Param("r must be at least 2".into()));
    }
    if n == 0 {
        return Err(ConstructionError::Param("n must be positive".into()));
    }
    if alpha <= Frac::new(0, 1) {
        return Err(ConstructionError::Param("alpha must be positive".into()));
    }
    let x = 0.5 * (2.0 / (r as f64 + 1.0) + 2.0 / r as f64);
    let p = (n as f64).powf(-x).min(1.0);
    let bound = frac_mul_ceil(alpha, n);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut best_detail = String::from("no attempt");
    for attempt in 1..=GENERATION_RETRIES {
        let g = Graph::from_edges(2 * n, &gnp(2 * n, p, &mut rng))?;
        let mut alive = g.vertex_set();
        loop {
            let (sub, remap) = g.induced(&alive)?;
            if sub.clique_number(VERIFY_BUDGET).unwrap_or(0) <= r {
                break;
            }
            let clique = sub.max_clique(VERIFY_BUDGET)?;
            alive.remove(remap[clique[0]]);
            if alive.len() < n {
                break;
            }
        }
        if alive.len() < n {
            best_detail = format!("only {} vertices survived clique removal", alive.len());
            continue;
        }
        let keep = VertexSet::from_iter(2 * n, alive.iter().take(n));
        let (trimmed, _) = g.induced(&keep)?;
        let out = trimmed
            .with_label(format!("clique_free_low_alpha(n={n},r={r},alpha={alpha},seed={seed})"));
        let omega = out.clique_number(VERIFY_BUDGET)?;
        if omega > r {
            best_detail = format!("omega={omega} after trimming");
            continue;
        }
        let rep = alpha_r_with_budget(&out, r, VERIFY_BUDGET)?;
        if rep.exact && rep.value < bound {
            return Ok((
                out,
                ConstructionRecord::CliqueFree {
                    omega,
                    alpha: rep.value,
                    alpha_exact: rep.exact,
                    bound,
                    attempts: attempt,
                },
            ));
        }
        best_detail = format!("alpha_{r}={} (exact={}) vs bound {bound}", rep.value, rep.exact);
    }
    Err(ConstructionError::GenerationFailure {
        name: "clique_free_low_alpha",
        retries: GENERATION_RETRIES,
        detail: best_detail,
    })
}

const PAIRING_RETRIES: usize = 500;

/// Random d-regular graph on n0 vertices via the pairing model, resampling
/// on loops or multi-edges.
fn random_regular(n0: usize, d: usize, rng: &mut ChaCha8Rng) -> Option<Graph> {
    'attempt: for _ in 0..PAIRING_RETRIES {
        let mut points: Vec<usize> = (0..n0 * d).collect();
        // Fisher-Yates pairing
        for i in (1..points.len()).rev() {
            let j = rng.gen_range(0..=i);
            points.swap(i, j);
        }
        let mut seen = std::collections::HashSet::new();
        let mut edges = Vec::with_capacity(n0 * d / 2);
        for pair in points.chunks(2) {
            let (u, v) = (pair[0] / d, pair[1] / d);
            if u == v {
                continue 'attempt;
            }
            let key = (u.min(v), u.max(v));
            if !seen.insert(key) {
                continue 'attempt;
            }
            edges.push(key);
        }
        return Graph::from_edges(n0, &edges).ok();
    }
    None
}

/// Two near-halves with no triangle crossing them and part sizes differing
/// mod 3: bipartite double cover of a random d-regular graph, each side
/// completed except for pairs inside a cross-neighborhood, with 2n0 - n
/// vertices deleted from the first part.
pub fn triangle_factor_blocker(
    n: usize,
    d: usize,
    seed: u64,
) -> Result<(Graph, ConstructionRecord), ConstructionError> {
    if !n.is_multiple_of(3) {
        return Err(ConstructionError::Param("n must be a multiple of 3".into()));
    }
    if d < 4 || !d.is_multiple_of(2) {
        return Err(ConstructionError::Param("d must be an even integer >= 4".into()));
    }
    let mut n0 = n.div_ceil(2) + 1;
    let mut n0_adjusted = false;
    if !(n0 * d).is_multiple_of(2) {
        n0 += 1; // regularity parity; recorded, d even makes this rare
        n0_adjusted = true;
    }
    if d >= n0 {
        return Err(ConstructionError::Param(format!("d={d} too large for n0={n0}")));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let Some(g0_reg) = random_regular(n0, d, &mut rng) else {
        return Err(ConstructionError::GenerationFailure {
            name: "triangle_factor_blocker",
            retries: PAIRING_RETRIES,
            detail: "pairing model kept producing loops or multi-edges".into(),
        });
    };
    let spectral = second_eigenvalue(&g0_reg);
    // bipartite double cover on V1 = 0..n0, V2 = n0..2n0
    let mut cross = vec![VertexSet::empty(2 * n0); 2 * n0];
    for (u, v) in g0_reg.edges() {
        cross[u].insert(n0 + v);
        cross[n0 + v].insert(u);
        cross[v].insert(n0 + u);
        cross[n0 + u].insert(v);
    }
    let mut edges: Vec<(usize, usize)> = Vec::new();
    for (u, row) in cross.iter().enumerate() {
        for v in row.iter() {
            if u < v {
                edges.push((u, v));
            }
        }
    }
    // complete each side except pairs sharing a cross-neighbor, keeping
    // every cross-neighborhood independent
    for side in [0..n0, n0..2 * n0] {
        for u in side.clone() {
            for v in u + 1..side.end {
                let forbidden = (0..2 * n0)
                    .any(|w| cross[w].contains(u) && cross[w].contains(v));
                if !forbidden {
                    edges.push((u, v));
                }
            }
        }
    }
    let full = Graph::from_edges(2 * n0, &edges)?;
    // delete from V1 down to n vertices total
    let delete = 2 * n0 - n;
    if delete > n0 {
        return Err(ConstructionError::Param(format!(
            "cannot delete {delete} vertices from a part of size {n0}"
        )));
    }
    let keep = VertexSet::from_iter(2 * n0, delete..2 * n0);
    let (g, _) = full.induced(&keep)?;
    let g = g.with_label(format!("blocker(n={n},d={d},seed={seed})"));
    let part1 = n0 - delete;
    let part2 = n0;
    // verify exhaustively: no triangle touches both parts
    let mut cross_triangle_free = true;
    'check: for a in 0..g.n() {
        for b in a + 1..g.n() {
            if !g.has_edge(a, b) {
                continue;
            }
            for c in b + 1..g.n() {
                if g.has_edge(a, c) && g.has_edge(b, c) {
                    let in1 = [a, b, c].iter().filter(|&&v| v < part1).count();
                    if in1 != 0 && in1 != 3 {
                        cross_triangle_free = false;
                        break 'check;
                    }
                }
            }
        }
    }
    let min_degree = g.min_degree()?;
    let min_degree_bound = n0 as isize - 1 - (d * d) as isize - 4;
    Ok((
        g,
        ConstructionRecord::Blocker {
            cross_triangle_free,
            part_sizes: (part1, part2),
            sizes_mod_3: (part1 % 3, part2 % 3),
            min_degree,
            min_degree_bound,
            deleted: delete,
            n0_adjusted,
            spectral,
        },
    ))
}

/// Union with an independently sampled G(n, p) on the same vertex set.
pub fn perturb(g: &Graph, p: Frac, seed: u64) -> Result<Graph, ConstructionError> {
    if p < Frac::new(0, 1) || p > Frac::new(1, 1) {
        return Err(ConstructionError::Param(format!("p must be in [0,1], got {p}")));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let random = Graph::from_edges(g.n(), &gnp(g.n(), frac_to_f64(p), &mut rng))?;
    Ok(g.union_with(&random)?)
}
