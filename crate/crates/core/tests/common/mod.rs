//! Brute-force oracles shared by the integration suites. None of these reuse
//! the library's traversal or centrality code.

#![allow(dead_code, clippy::needless_range_loop)]

use curveflat::Graph;
use nalgebra::{DMatrix, DVector};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub const INF: u32 = u32::MAX;

pub fn random_graph(seed: u64, max_n: usize) -> Graph {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = rng.random_range(1..=max_n);
    let p: f64 = rng.random_range(0.1..0.9);
    let mut g = Graph::new(n).unwrap();
    for u in 0..n {
        for v in u + 1..n {
            if rng.random::<f64>() < p {
                g.add_edge(u, v).unwrap();
            }
        }
    }
    g
}

/// All-pairs hop distances by repeated edge relaxation.
pub fn all_pairs_relaxation(g: &Graph) -> Vec<Vec<u32>> {
    let n = g.node_count();
    let mut d = vec![vec![INF; n]; n];
    for (u, row) in d.iter_mut().enumerate() {
        row[u] = 0;
    }
    let edges: Vec<(usize, usize)> = g.edges().collect();
    loop {
        let mut changed = false;
        for s in 0..n {
            for &(u, v) in &edges {
                for (a, b) in [(u, v), (v, u)] {
                    if d[s][a] != INF && d[s][a] + 1 < d[s][b] {
                        d[s][b] = d[s][a] + 1;
                        changed = true;
                    }
                }
            }
        }
        if !changed {
            return d;
        }
    }
}

/// Closed over all triplets by direct enumeration of node triples.
pub fn clustering_by_triples(g: &Graph) -> f64 {
    let n = g.node_count();
    let (mut closed, mut total) = (0u64, 0u64);
    for centre in 0..n {
        for a in 0..n {
            for b in a + 1..n {
                if a == centre || b == centre {
                    continue;
                }
                if g.has_edge(centre, a) && g.has_edge(centre, b) {
                    total += 1;
                    if g.has_edge(a, b) {
                        closed += 1;
                    }
                }
            }
        }
    }
    if total == 0 {
        0.0
    } else {
        closed as f64 / total as f64
    }
}

/// Enumerates every shortest path explicitly by expanding the layered
/// distance DAG, and counts how often each node is an interior vertex.
pub fn betweenness_by_enumeration(g: &Graph) -> Vec<f64> {
    let n = g.node_count();
    let d = all_pairs_relaxation(g);
    let mut score = vec![0.0; n];
    for s in 0..n {
        for t in s + 1..n {
            if d[s][t] == INF {
                continue;
            }
            let mut paths: Vec<Vec<usize>> = vec![vec![s]];
            for _ in 0..d[s][t] {
                let mut next = Vec::new();
                for p in &paths {
                    let last = *p.last().unwrap();
                    for v in 0..n {
                        if g.has_edge(last, v)
                            && d[s][v] == d[s][last] + 1
                            && d[v][t] + d[s][v] == d[s][t]
                        {
                            let mut q = p.clone();
                            q.push(v);
                            next.push(q);
                        }
                    }
                }
                paths = next;
            }
            let total = paths.len() as f64;
            for p in &paths {
                for &w in &p[1..p.len() - 1] {
                    score[w] += 1.0 / total;
                }
            }
        }
    }
    score
}

pub fn closeness_by_distance_matrix(g: &Graph) -> Vec<f64> {
    all_pairs_relaxation(g)
        .iter()
        .map(|row| {
            let sum: u64 = row.iter().filter(|&&x| x != INF).map(|&x| x as u64).sum();
            if sum == 0 {
                0.0
            } else {
                1.0 / sum as f64
            }
        })
        .collect()
}

pub fn adjacency_matrix(g: &Graph) -> DMatrix<f64> {
    let n = g.node_count();
    DMatrix::from_fn(n, n, |i, j| if g.has_edge(i, j) { 1.0 } else { 0.0 })
}

pub fn eigen_max(g: &Graph) -> f64 {
    adjacency_matrix(g).symmetric_eigen().eigenvalues.max()
}

/// `Σ_{j ≤ terms} α^j A^j β₀ 1`.
pub fn katz_series(g: &Graph, alpha: f64, offset: f64, terms: usize) -> Vec<f64> {
    let a = adjacency_matrix(g);
    let n = g.node_count();
    let mut term = DVector::from_element(n, offset);
    let mut sum = term.clone();
    for _ in 0..terms {
        term = &a * term * alpha;
        sum += &term;
    }
    sum.iter().copied().collect()
}

/// Solves `(I − αA) x = β₀ 1` directly.
pub fn katz_solve(g: &Graph, alpha: f64, offset: f64) -> Vec<f64> {
    let n = g.node_count();
    let m = DMatrix::identity(n, n) - adjacency_matrix(g) * alpha;
    let rhs = DVector::from_element(n, offset);
    m.lu().solve(&rhs).unwrap().iter().copied().collect()
}

/// Solves `(I − d P) x = (1 − d)/n · 1` where `P` is the column-stochastic
/// walk matrix, with isolated nodes spreading uniformly.
pub fn pagerank_solve(g: &Graph, damping: f64) -> Vec<f64> {
    let n = g.node_count();
    let p = DMatrix::from_fn(n, n, |i, j| {
        let dj = g.degree(j);
        if dj == 0 {
            1.0 / n as f64
        } else if g.has_edge(i, j) {
            1.0 / dj as f64
        } else {
            0.0
        }
    });
    let m = DMatrix::identity(n, n) - p * damping;
    let rhs = DVector::from_element(n, (1.0 - damping) / n as f64);
    m.lu().solve(&rhs).unwrap().iter().copied().collect()
}

/// Leading eigenpair from a dense symmetric eigendecomposition plus the gap
/// to the second eigenvalue.
pub fn dense_leading_eigenvector(g: &Graph) -> (f64, Vec<f64>, f64) {
    let eig = adjacency_matrix(g).symmetric_eigen();
    let mut idx: Vec<usize> = (0..g.node_count()).collect();
    idx.sort_by(|&a, &b| eig.eigenvalues[b].partial_cmp(&eig.eigenvalues[a]).unwrap());
    let top = idx[0];
    let gap = if idx.len() > 1 {
        eig.eigenvalues[top] - eig.eigenvalues[idx[1]]
    } else {
        f64::INFINITY
    };
    let mut v: Vec<f64> = eig.eigenvectors.column(top).iter().copied().collect();
    if v.iter().sum::<f64>() < 0.0 {
        v.iter_mut().for_each(|x| *x = -*x);
    }
    (eig.eigenvalues[top], v, gap)
}

pub fn max_abs_diff(a: &[f64], b: &[f64]) -> f64 {
    assert_eq!(a.len(), b.len());
    a.iter()
        .zip(b)
        .map(|(x, y)| (x - y).abs())
        .fold(0.0, f64::max)
}

/// Composite Simpson rule on `[lo, hi]` with `intervals` (even) panels.
pub fn simpson<F: Fn(f64) -> f64>(f: F, lo: f64, hi: f64, intervals: usize) -> f64 {
    let h = (hi - lo) / intervals as f64;
    let mut s = f(lo) + f(hi);
    for i in 1..intervals {
        let w = if i % 2 == 1 { 4.0 } else { 2.0 };
        s += w * f(lo + i as f64 * h);
    }
    s * h / 3.0
}
