//! Node-influence scores and the top-fraction ranking used to choose which
//! nodes to isolate.
//!
//! All measures treat the graph as undirected and unweighted. Iterative
//! measures (Katz, PageRank, eigenvector) stop once their residual falls
//! below [`CentralityParams::tolerance`] and report an error if the
//! iteration cap is reached first.

use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{Graph, NodeId};
use crate::scalar::Scalar;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Measure {
    Degree,
    Betweenness,
    Closeness,
    Katz,
    #[serde(rename = "pagerank")]
    PageRank,
    #[serde(rename = "exf")]
    ExpectedForce,
    Eigenvector,
}

impl Measure {
    pub const ALL: [Measure; 7] = [
        Measure::Degree,
        Measure::Betweenness,
        Measure::Closeness,
        Measure::Katz,
        Measure::PageRank,
        Measure::ExpectedForce,
        Measure::Eigenvector,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Measure::Degree => "degree",
            Measure::Betweenness => "betweenness",
            Measure::Closeness => "closeness",
            Measure::Katz => "katz",
            Measure::PageRank => "pagerank",
            Measure::ExpectedForce => "exf",
            Measure::Eigenvector => "eigenvector",
        }
    }

    /// Stable small integer identifying the measure; `None` maps to 0.
    pub fn code(measure: Option<Measure>) -> u64 {
        match measure {
            None => 0,
            Some(m) => 1 + Measure::ALL.iter().position(|&x| x == m).unwrap() as u64,
        }
    }
}

impl fmt::Display for Measure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Measure {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Measure::ALL
            .into_iter()
            .find(|m| m.name() == s)
            .ok_or_else(|| Error::invalid("measure", format!("unknown centrality `{s}`")))
    }
}

/// Name of an isolation strategy, `"none"` for no isolation.
pub fn strategy_name(measure: Option<Measure>) -> &'static str {
    measure.map_or("none", Measure::name)
}

/// Parses `degree | betweenness | closeness | katz | pagerank | exf |
/// eigenvector | none`.
pub fn parse_strategy(s: &str) -> Result<Option<Measure>> {
    if s == "none" {
        Ok(None)
    } else {
        s.parse().map(Some)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CentralityParams<F> {
    /// Katz attenuation; `None` selects `0.9 / λ_max`.
    pub katz_alpha: Option<F>,
    pub katz_offset: F,
    pub damping: F,
    pub tolerance: F,
    pub max_iterations: usize,
}

impl<F: Scalar> Default for CentralityParams<F> {
    fn default() -> Self {
        Self {
            katz_alpha: None,
            katz_offset: F::one(),
            damping: F::lit(0.85),
            tolerance: F::default_tolerance(),
            max_iterations: 100_000,
        }
    }
}

/// Parameters a measure actually ran with.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum UsedParams<F> {
    None,
    Katz {
        alpha: F,
        offset: F,
        spectral_radius: F,
        iterations: usize,
    },
    PageRank {
        damping: F,
        iterations: usize,
    },
    Eigenvector {
        eigenvalue: F,
        iterations: usize,
    },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CentralityScores<F> {
    pub measure: Measure,
    pub scores: Vec<F>,
    pub params: UsedParams<F>,
}

impl<F: Scalar> CentralityScores<F> {
    fn plain(measure: Measure, scores: Vec<F>) -> Self {
        Self {
            measure,
            scores,
            params: UsedParams::None,
        }
    }
}

pub fn compute<F: Scalar>(
    g: &Graph,
    measure: Measure,
    params: &CentralityParams<F>,
) -> Result<CentralityScores<F>> {
    match measure {
        Measure::Degree => Ok(degree_scores(g)),
        Measure::Betweenness => Ok(betweenness_scores(g)),
        Measure::Closeness => Ok(closeness_scores(g)),
        Measure::Katz => katz_scores(g, params),
        Measure::PageRank => pagerank_scores(g, params),
        Measure::ExpectedForce => expected_force_scores(g),
        Measure::Eigenvector => eigenvector_scores(g, params),
    }
}

pub fn degree_scores<F: Scalar>(g: &Graph) -> CentralityScores<F> {
    let scores = g
        .nodes()
        .map(|u| F::from_usize(g.degree(u)).unwrap())
        .collect();
    CentralityScores::plain(Measure::Degree, scores)
}

/// Unnormalized betweenness over unordered pairs, by dependency accumulation
/// on one BFS DAG per source.
pub fn betweenness_scores<F: Scalar>(g: &Graph) -> CentralityScores<F> {
    let n = g.node_count();
    let per_source: Vec<Vec<F>> = g
        .nodes()
        .into_par_iter()
        .map(|s| source_dependencies(g, s))
        .collect();
    // Sum in source order so the result is independent of thread count.
    let mut scores = vec![F::zero(); n];
    for delta in &per_source {
        for (acc, &d) in scores.iter_mut().zip(delta) {
            *acc += d;
        }
    }
    // Each unordered pair was counted from both endpoints.
    let half = F::lit(0.5);
    scores.iter_mut().for_each(|x| *x *= half);
    CentralityScores::plain(Measure::Betweenness, scores)
}

fn source_dependencies<F: Scalar>(g: &Graph, s: NodeId) -> Vec<F> {
    let n = g.node_count();
    let mut order = Vec::with_capacity(n);
    let mut dist: Vec<Option<u32>> = vec![None; n];
    let mut sigma = vec![F::zero(); n];
    dist[s] = Some(0);
    sigma[s] = F::one();
    order.push(s);
    let mut head = 0;
    while head < order.len() {
        let v = order[head];
        head += 1;
        let dv = dist[v].unwrap();
        for &w in g.neighbors(v) {
            if dist[w].is_none() {
                dist[w] = Some(dv + 1);
                order.push(w);
            }
            if dist[w] == Some(dv + 1) {
                let sv = sigma[v];
                sigma[w] += sv;
            }
        }
    }
    let mut delta = vec![F::zero(); n];
    for &w in order.iter().rev() {
        let dw = dist[w].unwrap();
        if dw == 0 {
            continue;
        }
        let coeff = (F::one() + delta[w]) / sigma[w];
        for &v in g.neighbors(w) {
            if dist[v] == Some(dw - 1) {
                delta[v] += sigma[v] * coeff;
            }
        }
    }
    delta[s] = F::zero();
    delta
}

/// `1 / Σ d(v, u)` over the nodes `u` reachable from `v`; zero for nodes that
/// reach nobody.
pub fn closeness_scores<F: Scalar>(g: &Graph) -> CentralityScores<F> {
    let scores = g
        .nodes()
        .into_par_iter()
        .map(|v| {
            let total = g.bfs_distances(v).expect("node in range").total_distance();
            if total == 0 {
                F::zero()
            } else {
                F::one() / F::from_count(total)
            }
        })
        .collect();
    CentralityScores::plain(Measure::Closeness, scores)
}

/// `Σ_{j ∈ N(i)} deg(i)·deg(j)` divided by the number of possible edges
/// `n(n-1)/2`.
pub fn expected_force_scores<F: Scalar>(g: &Graph) -> Result<CentralityScores<F>> {
    let n = g.node_count();
    if n < 2 {
        return Err(Error::invalid(
            "n",
            "expected force needs at least two nodes",
        ));
    }
    let possible = F::from_usize(n * (n - 1) / 2).unwrap();
    let scores = g
        .nodes()
        .map(|i| {
            let di = g.degree(i);
            let sum: usize = g.neighbors(i).iter().map(|&j| di * g.degree(j)).sum();
            F::from_usize(sum).unwrap() / possible
        })
        .collect();
    Ok(CentralityScores::plain(Measure::ExpectedForce, scores))
}

fn adjacency_times<F: Scalar>(g: &Graph, x: &[F], out: &mut [F]) {
    for (u, o) in out.iter_mut().enumerate() {
        *o = g.neighbors(u).iter().map(|&v| x[v]).sum();
    }
}

fn l2_norm<F: Scalar>(x: &[F]) -> F {
    x.iter().map(|&v| v * v).sum::<F>().sqrt()
}

struct Eigenpair<F> {
    value: F,
    vector: Vec<F>,
    iterations: usize,
}

/// Leading eigenpair of the adjacency matrix by power iteration on `A + I`.
/// The shift makes the Perron root strictly dominant in modulus, so
/// bipartite graphs converge too. Stops when `‖A x − λ x‖_∞ < tol`.
fn leading_eigenpair<F: Scalar>(g: &Graph, tol: F, cap: usize) -> Result<Eigenpair<F>> {
    let n = g.node_count();
    let start = F::one() / F::from_usize(n).unwrap().sqrt();
    let mut x = vec![start; n];
    let mut ax = vec![F::zero(); n];
    let mut residual = F::infinity();
    for it in 1..=cap {
        adjacency_times(g, &x, &mut ax);
        let lambda: F = x.iter().zip(&ax).map(|(&a, &b)| a * b).sum();
        residual = x
            .iter()
            .zip(&ax)
            .map(|(&xi, &axi)| (axi - lambda * xi).abs())
            .fold(F::zero(), F::max);
        if residual < tol {
            return Ok(Eigenpair {
                value: lambda,
                vector: x,
                iterations: it,
            });
        }
        for (xi, &axi) in x.iter_mut().zip(&ax) {
            *xi += axi;
        }
        let norm = l2_norm(&x);
        x.iter_mut().for_each(|v| *v /= norm);
    }
    Err(Error::NotConverged {
        what: "eigenvector power iteration",
        cap,
        residual: residual.to_f64().unwrap_or(f64::NAN),
    })
}

/// Largest adjacency eigenvalue, zero for an edgeless graph.
pub fn spectral_radius<F: Scalar>(g: &Graph, params: &CentralityParams<F>) -> Result<F> {
    if g.edge_count() == 0 {
        return Ok(F::zero());
    }
    Ok(leading_eigenpair(g, params.tolerance, params.max_iterations)?.value)
}

/// Solves `x = α A x + β₀ 1` by fixed-point iteration.
pub fn katz_scores<F: Scalar>(
    g: &Graph,
    params: &CentralityParams<F>,
) -> Result<CentralityScores<F>> {
    let radius = spectral_radius(g, params)?;
    let alpha = match params.katz_alpha {
        Some(a) => {
            if a <= F::zero() || a * radius >= F::one() {
                return Err(Error::invalid(
                    "katz_alpha",
                    format!("attenuation {a} must lie in (0, 1/λ_max) with λ_max = {radius}"),
                ));
            }
            a
        }
        None if radius > F::zero() => F::lit(0.9) / radius,
        None => F::lit(0.9),
    };
    let offset = params.katz_offset;
    let n = g.node_count();
    let mut x = vec![offset; n];
    let mut ax = vec![F::zero(); n];
    let mut residual = F::infinity();
    for it in 1..=params.max_iterations {
        adjacency_times(g, &x, &mut ax);
        residual = x
            .iter()
            .zip(&ax)
            .map(|(&xi, &axi)| (xi - alpha * axi - offset).abs())
            .fold(F::zero(), F::max);
        if residual < params.tolerance {
            return Ok(CentralityScores {
                measure: Measure::Katz,
                scores: x,
                params: UsedParams::Katz {
                    alpha,
                    offset,
                    spectral_radius: radius,
                    iterations: it,
                },
            });
        }
        for (xi, &axi) in x.iter_mut().zip(&ax) {
            *xi = alpha * axi + offset;
        }
    }
    Err(Error::NotConverged {
        what: "katz iteration",
        cap: params.max_iterations,
        residual: residual.to_f64().unwrap_or(f64::NAN),
    })
}

/// Stationary distribution of the damped random walk. Isolated nodes
/// redistribute their mass uniformly.
pub fn pagerank_scores<F: Scalar>(
    g: &Graph,
    params: &CentralityParams<F>,
) -> Result<CentralityScores<F>> {
    let d = params.damping;
    if !(d > F::zero() && d < F::one()) {
        return Err(Error::invalid("damping", format!("{d} outside (0, 1)")));
    }
    let n = g.node_count();
    let nf = F::from_usize(n).unwrap();
    let degrees: Vec<F> = g
        .nodes()
        .map(|u| F::from_usize(g.degree(u)).unwrap())
        .collect();
    let mut x = vec![F::one() / nf; n];
    let mut next = vec![F::zero(); n];
    let mut residual = F::infinity();
    for it in 1..=params.max_iterations {
        let dangling: F = (0..n).filter(|&u| g.degree(u) == 0).map(|u| x[u]).sum();
        let base = (F::one() - d) / nf + d * dangling / nf;
        for (u, out) in next.iter_mut().enumerate() {
            let inflow: F = g.neighbors(u).iter().map(|&v| x[v] / degrees[v]).sum();
            *out = base + d * inflow;
        }
        residual = x.iter().zip(&next).map(|(&a, &b)| (a - b).abs()).sum();
        std::mem::swap(&mut x, &mut next);
        if residual < params.tolerance {
            let total: F = x.iter().copied().sum();
            x.iter_mut().for_each(|v| *v /= total);
            return Ok(CentralityScores {
                measure: Measure::PageRank,
                scores: x,
                params: UsedParams::PageRank {
                    damping: d,
                    iterations: it,
                },
            });
        }
    }
    Err(Error::NotConverged {
        what: "pagerank iteration",
        cap: params.max_iterations,
        residual: residual.to_f64().unwrap_or(f64::NAN),
    })
}

/// Unit-norm, entrywise nonnegative leading eigenvector of the adjacency
/// matrix.
pub fn eigenvector_scores<F: Scalar>(
    g: &Graph,
    params: &CentralityParams<F>,
) -> Result<CentralityScores<F>> {
    if g.edge_count() == 0 {
        return Err(Error::Degenerate(
            "eigenvector centrality is undefined on an edgeless graph".into(),
        ));
    }
    let pair = leading_eigenpair(g, params.tolerance, params.max_iterations)?;
    let mut scores = pair.vector;
    // Iterating from a positive vector on a nonnegative matrix keeps every
    // entry nonnegative up to rounding.
    scores.iter_mut().for_each(|v| *v = v.max(F::zero()));
    let norm = l2_norm(&scores);
    scores.iter_mut().for_each(|v| *v /= norm);
    Ok(CentralityScores {
        measure: Measure::Eigenvector,
        scores,
        params: UsedParams::Eigenvector {
            eigenvalue: pair.value,
            iterations: pair.iterations,
        },
    })
}

/// Nodes ordered by descending score, ties by ascending id, and the prefix
/// selected for isolation.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Ranking {
    pub order: Vec<NodeId>,
    pub selected: Vec<NodeId>,
}

/// `floor(fraction · n)`, tolerant of products such as `0.29 · 100` that
/// land a rounding error below an integer.
pub fn isolation_count(fraction: f64, n: usize) -> usize {
    (fraction * n as f64 + 1e-9).floor() as usize
}

pub fn rank_top_fraction<F: Scalar>(scores: &[F], fraction: f64) -> Result<Ranking> {
    if !(0.0..1.0).contains(&fraction) {
        return Err(Error::invalid(
            "fraction",
            format!("isolation fraction {fraction} outside [0, 1)"),
        ));
    }
    if let Some(bad) = scores.iter().position(|s| !s.is_finite()) {
        return Err(Error::Degenerate(format!(
            "score of node {bad} is not finite"
        )));
    }
    let mut order: Vec<NodeId> = (0..scores.len()).collect();
    order.sort_by(|&a, &b| {
        scores[b]
            .partial_cmp(&scores[a])
            .expect("finite scores")
            .then(a.cmp(&b))
    });
    let selected = order[..isolation_count(fraction, scores.len())].to_vec();
    Ok(Ranking { order, selected })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators::ring_lattice;

    fn star(leaves: usize) -> Graph {
        Graph::from_edges(leaves + 1, (1..=leaves).map(|l| (0, l))).unwrap()
    }

    fn complete(n: usize) -> Graph {
        let mut g = Graph::new(n).unwrap();
        for u in 0..n {
            for v in u + 1..n {
                g.add_edge(u, v).unwrap();
            }
        }
        g
    }

    fn path3() -> Graph {
        Graph::from_edges(3, [(0, 1), (1, 2)]).unwrap()
    }

    fn close(a: &[f64], b: &[f64], tol: f64) -> bool {
        a.len() == b.len() && a.iter().zip(b).all(|(x, y)| (x - y).abs() < tol)
    }

    #[test]
    fn names_round_trip() {
        for m in Measure::ALL {
            assert_eq!(m.name().parse::<Measure>().unwrap(), m);
            assert_eq!(parse_strategy(m.name()).unwrap(), Some(m));
        }
        assert_eq!(parse_strategy("none").unwrap(), None);
        assert!(parse_strategy("harmonic").is_err());
    }

    #[test]
    fn degree_examples() {
        assert_eq!(
            degree_scores::<f64>(&star(4)).scores,
            vec![4.0, 1.0, 1.0, 1.0, 1.0]
        );
        let ring = degree_scores::<f64>(&ring_lattice(20, 6).unwrap());
        assert!(ring.scores.iter().all(|&s| s == 6.0));
        let empty = degree_scores::<f64>(&Graph::new(3).unwrap());
        assert!(empty.scores.iter().all(|&s| s == 0.0));
    }

    #[test]
    fn betweenness_examples() {
        assert_eq!(
            betweenness_scores::<f64>(&path3()).scores,
            vec![0.0, 1.0, 0.0]
        );
        assert_eq!(
            betweenness_scores::<f64>(&star(4)).scores,
            vec![6.0, 0.0, 0.0, 0.0, 0.0]
        );
        // Two disjoint paths: cross-component pairs contribute nothing.
        let g = Graph::from_edges(6, [(0, 1), (1, 2), (3, 4), (4, 5)]).unwrap();
        assert_eq!(
            betweenness_scores::<f64>(&g).scores,
            vec![0.0, 1.0, 0.0, 0.0, 1.0, 0.0]
        );
        // 4-cycle: two shortest paths between opposite corners.
        let c4 = Graph::from_edges(4, [(0, 1), (1, 2), (2, 3), (3, 0)]).unwrap();
        assert_eq!(betweenness_scores::<f64>(&c4).scores, vec![0.5; 4]);
    }

    #[test]
    fn closeness_examples() {
        assert!(close(
            &closeness_scores::<f64>(&complete(4)).scores,
            &[1.0 / 3.0; 4],
            1e-15
        ));
        assert!(close(
            &closeness_scores::<f64>(&path3()).scores,
            &[1.0 / 3.0, 0.5, 1.0 / 3.0],
            1e-15
        ));
        let g = Graph::from_edges(3, [(0, 1)]).unwrap();
        assert_eq!(closeness_scores::<f64>(&g).scores, vec![1.0, 1.0, 0.0]);
    }

    #[test]
    fn katz_examples() {
        let params = CentralityParams::<f64>::default();
        let empty = katz_scores(&Graph::new(4).unwrap(), &params).unwrap();
        assert_eq!(empty.scores, vec![1.0; 4]);

        let params = CentralityParams {
            katz_alpha: Some(0.1),
            ..CentralityParams::default()
        };
        let k3 = katz_scores(&complete(3), &params).unwrap();
        assert!(close(&k3.scores, &[1.25; 3], 1e-9));

        let too_big = CentralityParams {
            katz_alpha: Some(0.5),
            ..CentralityParams::default()
        };
        assert!(matches!(
            katz_scores(&complete(3), &too_big),
            Err(Error::InvalidParameter { .. })
        ));
    }

    #[test]
    fn katz_reports_iteration_cap() {
        let params = CentralityParams {
            max_iterations: 3,
            ..CentralityParams::<f64>::default()
        };
        let g = ring_lattice(30, 4).unwrap();
        let err = katz_scores(&g, &params).unwrap_err();
        assert!(err.to_string().contains('3'), "{err}");
    }

    #[test]
    fn pagerank_examples() {
        let params = CentralityParams::<f64>::default();
        let k5 = pagerank_scores(&complete(5), &params).unwrap();
        assert!(close(&k5.scores, &[0.2; 5], 1e-12));
        let single = pagerank_scores(&Graph::new(1).unwrap(), &params).unwrap();
        assert!((single.scores[0] - 1.0).abs() < 1e-12);
        let bad = CentralityParams {
            damping: 1.0,
            ..params
        };
        assert!(pagerank_scores(&complete(3), &bad).is_err());
    }

    #[test]
    fn expected_force_examples() {
        let k3 = expected_force_scores::<f64>(&complete(3)).unwrap();
        assert!(close(&k3.scores, &[8.0 / 3.0; 3], 1e-15));
        let s = expected_force_scores::<f64>(&star(3)).unwrap();
        assert!(close(&s.scores, &[1.5, 0.5, 0.5, 0.5], 1e-15));
        let ring = expected_force_scores::<f64>(&ring_lattice(10, 2).unwrap()).unwrap();
        assert!(close(&ring.scores, &[8.0 / 45.0; 10], 1e-15));
        assert!(expected_force_scores::<f64>(&Graph::new(1).unwrap()).is_err());
    }

    #[test]
    fn eigenvector_examples() {
        let params = CentralityParams::<f64>::default();
        let k4 = eigenvector_scores(&complete(4), &params).unwrap();
        assert!(close(&k4.scores, &[0.5; 4], 1e-10));
        let p = eigenvector_scores(&path3(), &params).unwrap();
        assert!((p.scores[1] / p.scores[0] - 2f64.sqrt()).abs() < 1e-9);
        assert!(eigenvector_scores(&Graph::new(3).unwrap(), &params).is_err());
    }

    #[test]
    fn eigenvector_reports_iteration_cap() {
        let params = CentralityParams {
            max_iterations: 2,
            ..CentralityParams::<f64>::default()
        };
        let g = Graph::from_edges(4, [(0, 1), (1, 2), (2, 3)]).unwrap();
        assert!(matches!(
            eigenvector_scores(&g, &params),
            Err(Error::NotConverged { cap: 2, .. })
        ));
    }

    #[test]
    fn ranking_examples() {
        let scores: Vec<f64> = (0..100).map(|i| (i * 37 % 100) as f64).collect();
        assert_eq!(rank_top_fraction(&scores, 0.15).unwrap().selected.len(), 15);
        assert!(rank_top_fraction(&scores, 0.0).unwrap().selected.is_empty());
        let flat = vec![1.0f64; 10];
        assert_eq!(
            rank_top_fraction(&flat, 0.3).unwrap().selected,
            vec![0, 1, 2]
        );
        assert!(rank_top_fraction(&flat, 1.0).is_err());
        assert!(rank_top_fraction(&flat, -0.1).is_err());
        assert_eq!(isolation_count(0.29, 100), 29);
        assert_eq!(isolation_count(0.14, 150), 21);
    }

    #[test]
    fn single_precision_scores() {
        let params = CentralityParams::<f32>::default();
        let k4 = eigenvector_scores(&complete(4), &params).unwrap();
        assert!(k4.scores.iter().all(|&s| (s - 0.5).abs() < 1e-4));
        let pr = pagerank_scores(&complete(5), &params).unwrap();
        assert!((pr.scores.iter().sum::<f32>() - 1.0).abs() < 1e-5);
    }
}
