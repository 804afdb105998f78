//! Second-eigenvalue computation and expander-mixing verification.
//!
//! For a d-regular graph, λ(G) = max(|λ₂|, |λ_n|) is read off a dense
//! symmetric eigensolve at small n and otherwise by power iteration on the
//! adjacency matrix with the all-ones eigenvector deflated.

use nalgebra::DMatrix;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::bits::VertexSet;
use crate::graph::Graph;
use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
pub enum SpectralError {
    #[error("graph is not regular (degrees {min}..{max}); mixing check requires regularity")]
    NotRegular { min: usize, max: usize },
    #[error("mixing inequality violated for |A|={a}, |B|={b}: e={e}, expected within {bound}")]
    MixingViolation { a: usize, b: usize, e: usize, bound: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SpectralMethod {
    Dense,
    PowerIteration,
}

/// λ(G) with convergence metadata. For irregular inputs `degree` is None
/// and `lambda` is the adjacency spectral radius instead.
#[derive(Debug, Clone)]
pub struct SpectralReport {
    pub degree: Option<usize>,
    pub lambda: f64,
    pub iterations: usize,
    pub residual: f64,
    pub method: SpectralMethod,
}

const DENSE_LIMIT: usize = 64;
const ITERATION_CAP: usize = 100_000;
const TOLERANCE: f64 = 1e-9;

pub fn second_eigenvalue(g: &Graph) -> SpectralReport {
    let method = if g.n() <= DENSE_LIMIT {
        SpectralMethod::Dense
    } else {
        SpectralMethod::PowerIteration
    };
    second_eigenvalue_with(g, method)
}

/// Same computation with the method forced, mainly so the two paths can be
/// cross-checked on graphs small enough for both.
pub fn second_eigenvalue_with(g: &Graph, method: SpectralMethod) -> SpectralReport {
    let n = g.n();
    let degrees: Vec<usize> = (0..n).map(|v| g.degree(v)).collect();
    let d = degrees[0];
    let regular = degrees.iter().all(|&x| x == d);
    if method == SpectralMethod::Dense {
        let mut eig = dense_eigenvalues(g);
        eig.sort_by(|a, b| b.partial_cmp(a).unwrap());
        let lambda = if regular {
            // drop one copy of the top eigenvalue d, take max magnitude of
            // the rest
            eig[1..]
                .iter()
                .fold(0.0f64, |acc, &x| acc.max(x.abs()))
        } else {
            eig[0].abs()
        };
        return SpectralReport {
            degree: regular.then_some(d),
            lambda,
            iterations: 0,
            residual: 0.0,
            method: SpectralMethod::Dense,
        };
    }
    // power iteration on A - (d/n)J for regular graphs (the all-ones
    // eigenvector collapses to 0 there); plain A otherwise
    let deflate = if regular { d as f64 / n as f64 } else { 0.0 };
    let (lambda, iterations, residual) = power_iterate(g, deflate);
    SpectralReport {
        degree: regular.then_some(d),
        lambda,
        iterations,
        residual,
    method: SpectralMethod::PowerIteration,
    }
}

fn dense_eigenvalues(g: &Graph) -> Vec<f64> {
    let n = g.n();
    let mut a = DMatrix::<f64>::zeros(n, n);
    for (u, v) in g.edges() {
        a[(u, v)] = 1.0;
        a[(v, u)] = 1.0;
    }
    a.symmetric_eigen().eigenvalues.iter().copied().collect()
}

fn power_iterate(g: &Graph, deflate: f64) -> (f64, usize, f64) {
    let n = g.n();
    let mut rng = ChaCha8Rng::seed_from_u64(0x57ec);
    let mut v: Vec<f64> = (0..n).map(|_| rng.gen_range(-1.0..1.0)).collect();
    normalize(&mut v);
    let mut theta = 0.0;
    let mut residual = f64::INFINITY;
    let mut iterations = 0;
    while iterations < ITERATION_CAP {
        iterations += 1;
        let w = apply(g, &v, deflate);
        let norm = w.iter().map(|x| x * x).sum::<f64>().sqrt();
        if norm < 1e-300 {
            return (0.0, iterations, 0.0);
        }
        theta = v.iter().zip(&w).map(|(a, b)| a * b).sum::<f64>();
        residual = w
            .iter()
            .zip(&v)
            .map(|(wi, vi)| (wi - theta * vi).powi(2))
            .sum::<f64>()
            .sqrt();
        v = w;
        normalize(&mut v);
        if residual < TOLERANCE {
            break;
        }
    }
    (theta.abs(), iterations, residual)
}

fn apply(g: &Graph, v: &[f64], deflate: f64) -> Vec<f64> {
    let n = g.n();
    let sum: f64 = v.iter().sum();
    (0..n)
        .map(|u| g.neighbors(u).iter().map(|w| v[w]).sum::<f64>() - deflate * sum)
        .collect()
}

fn normalize(v: &mut [f64]) {
    let norm = v.iter().map(|x| x * x).sum::<f64>().sqrt();
    if norm > 0.0 {
        for x in v.iter_mut() {
            *x /= norm;
        }
    }
}

/// Worst-case mixing slack over checked pairs; `Ok` carries the minimum of
/// λ√(|A||B|) − |e(A,B) − (d/n)|A||B|| observed.
#[derive(Debug, Clone)]
pub struct MixingReport {
    pub pairs_checked: u64,
    pub min_slack: f64,
    pub exhaustive: bool,
}

const MIXING_EXHAUSTIVE_LIMIT: usize = 14;
const FLOAT_SLACK: f64 = 1e-6;

/// Checks |e(A,B) − (d/n)|A||B|| ≤ λ√(|A||B|) over all pairs of vertex
/// subsets for n ≤ 14, otherwise over `trials` sampled pairs. Edges with
/// both ends in A ∩ B count twice (ordered-pair convention).
pub fn expander_mixing_check(
    g: &Graph,
    lambda: f64,
    trials: u64,
    seed: u64,
) -> Result<MixingReport, SpectralError> {
    let n = g.n();
    let degrees: Vec<usize> = (0..n).map(|v| g.degree(v)).collect();
    let d = degrees[0];
    if degrees.iter().any(|&x| x != d) {
        return Err(SpectralError::NotRegular {
            min: *degrees.iter().min().unwrap(),
            max: *degrees.iter().max().unwrap(),
        });
    }
    let density = d as f64 / n as f64;
    let mut min_slack = f64::INFINITY;
    let mut pairs_checked = 0u64;
    let mut check = |a_len: usize, b_len: usize, e: usize| -> Result<(), SpectralError> {
        pairs_checked += 1;
        let expected = density * a_len as f64 * b_len as f64;
        let bound = lambda * ((a_len * b_len) as f64).sqrt();
        let deviation = (e as f64 - expected).abs();
        if deviation > bound + FLOAT_SLACK {
            return Err(SpectralError::MixingViolation {
                a: a_len,
                b: b_len,
                e,
                bound,
            });
        }
        min_slack = min_slack.min(bound - deviation);
        Ok(())
    };
    let exhaustive = n <= MIXING_EXHAUSTIVE_LIMIT;
    if exhaustive {
        // e(A,B) = Σ_{w∈B} |N(w) ∩ A|, built incrementally over B masks
        let adj_masks: Vec<u32> = (0..n)
            .map(|u| {
                g.neighbors(u)
                    .iter()
                    .fold(0u32, |m, w| m | (1 << w))
            })
            .collect();
        for a_mask in 1u32..1 << n {
            let a_len = a_mask.count_ones() as usize;
            let cnt: Vec<u32> = (0..n)
                .map(|w| (adj_masks[w] & a_mask).count_ones())
                .collect();
            let mut e_of = vec![0u32; 1 << n];
            for b_mask in 1u32..1 << n {
                let low = b_mask.trailing_zeros() as usize;
                e_of[b_mask as usize] = e_of[(b_mask & (b_mask - 1)) as usize] + cnt[low];
                check(
                    a_len,
                    b_mask.count_ones() as usize,
                    e_of[b_mask as usize] as usize,
                )?;
            }
        }
    } else {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        for _ in 0..trials {
            let a = random_subset(n, &mut rng);
            let b = random_subset(n, &mut rng);
            if a.is_empty() || b.is_empty() {
                continue;
            }
            let e: usize = b.iter().map(|w| a.intersection_len(g.neighbors(w))).sum();
            check(a.len(), b.len(), e)?;
        }
    }
    Ok(MixingReport {
        pairs_checked,
        min_slack,
        exhaustive,
    })
}

fn random_subset(n: usize, rng: &mut ChaCha8Rng) -> VertexSet {
    VertexSet::from_iter(n, (0..n).filter(|_| rng.gen_bool(0.5)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::petersen;

    #[test]
    fn spectra_of_known_graphs() {
        // K6: spectrum {5, -1^5}
        let r = second_eigenvalue(&Graph::complete(6));
        assert_eq!(r.degree, Some(5));
        assert!((r.lambda - 1.0).abs() < 1e-9, "{}", r.lambda);
        // C8: bipartite, so λ_n = -2 dominates λ₂ = √2
        let r = second_eigenvalue(&Graph::cycle(8));
        assert!((r.lambda - 2.0).abs() < 1e-9, "{}", r.lambda);
        // C5: λ_n = 2cos(4π/5) dominates, λ = 2cos(π/5)
        let r = second_eigenvalue(&Graph::cycle(5));
        assert!((r.lambda - 2.0 * (std::f64::consts::PI / 5.0).cos()).abs() < 1e-9);
        // Petersen: spectrum {3, 1^5, (-2)^4}
        let r = second_eigenvalue(&petersen());
        assert!((r.lambda - 2.0).abs() < 1e-9, "{}", r.lambda);
        assert_eq!(r.method, SpectralMethod::Dense);
    }

    #[test]
    fn power_iteration_agrees_with_dense() {
        // C70 is above the dense limit; even cycles are bipartite, so
        // λ_n = -2 dominates and λ = 2
        let g = Graph::cycle(70);
        let r = second_eigenvalue(&g);
        assert_eq!(r.method, SpectralMethod::PowerIteration);
        assert!((r.lambda - 2.0).abs() < 1e-6, "{}", r.lambda);
        assert!(r.residual < 1e-6);
        // C71 is not bipartite: λ = 2cos(π/71) via λ_n
        let r = second_eigenvalue(&Graph::cycle(71));
        let expect = 2.0 * (std::f64::consts::PI / 71.0).cos();
        assert!((r.lambda - expect).abs() < 1e-6, "{} vs {expect}", r.lambda);
    }

    #[test]
    fn irregular_inputs_are_flagged() {
        let g = Graph::path(4);
        let r = second_eigenvalue(&g);
        assert_eq!(r.degree, None);
        // P4 spectral radius = golden ratio
        assert!((r.lambda - (1.0 + 5.0f64.sqrt()) / 2.0).abs() < 1e-9);
    }

    #[test]
    fn mixing_on_complete_graph() {
        let g = Graph::complete(8);
        let rep = expander_mixing_check(&g, 1.0, 0, 0).unwrap();
        assert!(rep.exhaustive);
        assert!(rep.min_slack >= 0.0);
        // A = B = V: e = dn exactly, deviation 0
        let n = 8.0;
        let d = 7.0;
        assert_eq!((d * n) as usize, 2 * g.edge_count());
    }

    #[test]
    fn mixing_detects_underestimated_lambda() {
        let g = Graph::cycle(8); // λ = 2
        let err = expander_mixing_check(&g, 0.05, 0, 0).unwrap_err();
        assert!(matches!(err, SpectralError::MixingViolation { .. }));
    }

    #[test]
    fn mixing_on_petersen_with_true_lambda() {
        let rep = expander_mixing_check(&petersen(), 2.0, 0, 0).unwrap();
        assert!(rep.exhaustive);
        assert!(rep.min_slack >= 0.0);
    }

    #[test]
    fn mixing_sampled_path_for_larger_graphs() {
        let g = Graph::cycle(20);
        let rep = expander_mixing_check(&g, 2.0, 500, 11).unwrap();
        assert!(!rep.exhaustive);
        assert!(rep.pairs_checked > 0);
        assert!(expander_mixing_check(&Graph::path(5), 2.0, 10, 0).is_err());
    }
}
