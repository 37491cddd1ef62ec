//! Global clustering, characteristic path length and small-worldness.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::generators::{erdos_renyi, ring_lattice};
use crate::graph::Graph;
use crate::rng::{mix, rng_from_seed};
use crate::scalar::Scalar;

/// `3 · triangles / connected triplets`, or zero when the graph has no
/// triplet.
pub fn global_clustering<F: Scalar>(g: &Graph) -> F {
    let triplets: u64 = g
        .nodes()
        .map(|u| {
            let d = g.degree(u) as u64;
            d * d.saturating_sub(1) / 2
        })
        .sum();
    if triplets == 0 {
        return F::zero();
    }
    F::from_count(3 * triangle_count(g)) / F::from_count(triplets)
}

/// Triangles counted once each, via merges of sorted adjacency lists.
pub fn triangle_count(g: &Graph) -> u64 {
    let mut count = 0;
    for u in g.nodes() {
        let nu = g.neighbors(u);
        for &v in nu.iter().filter(|&&v| v > u) {
            let nv = g.neighbors(v);
            let (mut i, mut j) = (0, 0);
            while i < nu.len() && j < nv.len() {
                match nu[i].cmp(&nv[j]) {
                    std::cmp::Ordering::Less => i += 1,
                    std::cmp::Ordering::Greater => j += 1,
                    std::cmp::Ordering::Equal => {
                        if nu[i] > v {
                            count += 1;
                        }
                        i += 1;
                        j += 1;
                    }
                }
            }
        }
    }
    count
}

/// Mean hop distance over mutually reachable ordered pairs.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PathLength<F> {
    /// `None` when no pair of distinct nodes is connected.
    pub mean: Option<F>,
    pub reachable_pairs: u64,
    pub disconnected_pairs: u64,
}

impl<F: Scalar> PathLength<F> {
    /// Share of ordered pairs `(u, v)`, `u ≠ v`, with no path between them.
    pub fn disconnected_fraction(&self) -> F {
        let total = self.reachable_pairs + self.disconnected_pairs;
        if total == 0 {
            F::zero()
        } else {
            F::from_count(self.disconnected_pairs) / F::from_count(total)
        }
    }
}

pub fn characteristic_path_length<F: Scalar>(g: &Graph) -> PathLength<F> {
    let n = g.node_count() as u64;
    // Integer sums, so the parallel reduction order does not matter.
    let (sum, pairs) = g
        .nodes()
        .into_par_iter()
        .map(|s| {
            let d = g.bfs_distances(s).expect("source in range");
            (d.total_distance(), d.reachable_count as u64 - 1)
        })
        .reduce(|| (0, 0), |a, b| (a.0 + b.0, a.1 + b.1));
    PathLength {
        mean: (pairs > 0).then(|| F::from_count(sum) / F::from_count(pairs)),
        reachable_pairs: pairs,
        disconnected_pairs: n * (n - 1) - pairs,
    }
}

/// How the random and lattice reference values are obtained.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ReferenceMode {
    /// Closed-form limits of the lattice and of the equivalent random graph.
    Analytic,
    /// Seed-averaged measurements on sampled random graphs with edge
    /// probability `k/(n-1)`, and on the ring lattice itself.
    Empirical { samples: usize, seed: u64 },
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ReferenceValues<F> {
    pub c_rand: F,
    pub l_rand: F,
    pub c_latt: F,
    pub l_latt: F,
}

pub fn reference_values<F: Scalar>(
    n: usize,
    k: usize,
    mode: ReferenceMode,
) -> Result<ReferenceValues<F>> {
    if k <= 1 {
        return Err(Error::invalid("k", "reference path length needs k > 1"));
    }
    if !k.is_multiple_of(2) || k >= n || n < 3 {
        return Err(Error::invalid(
            "k",
            format!("need even k < n and n >= 3, got n = {n}, k = {k}"),
        ));
    }
    let (nf, kf) = (F::from_usize(n).unwrap(), F::from_usize(k).unwrap());
    match mode {
        ReferenceMode::Analytic => Ok(ReferenceValues {
            c_rand: kf / (nf - F::one()),
            l_rand: nf.ln() / kf.ln(),
            c_latt: F::lit(3.0) * (kf - F::lit(2.0)) / (F::lit(4.0) * (kf - F::one())),
            l_latt: nf / (F::lit(2.0) * kf),
        }),
        ReferenceMode::Empirical { samples, seed } => {
            if samples == 0 {
                return Err(Error::invalid("samples", "need at least one random sample"));
            }
            let p = k as f64 / (n as f64 - 1.0);
            let mut c_sum = F::zero();
            let mut l_sum = F::zero();
            let mut l_count = 0usize;
            for i in 0..samples {
                let g = erdos_renyi(n, p, &mut rng_from_seed(mix(seed, i as u64)))?;
                c_sum += global_clustering::<F>(&g);
                if let Some(l) = characteristic_path_length::<F>(&g).mean {
                    l_sum += l;
                    l_count += 1;
                }
            }
            if l_count == 0 {
                return Err(Error::Degenerate(
                    "no sampled random reference graph has a connected pair".into(),
                ));
            }
            let lattice = ring_lattice(n, k)?;
            Ok(ReferenceValues {
                c_rand: c_sum / F::from_usize(samples).unwrap(),
                l_rand: l_sum / F::from_usize(l_count).unwrap(),
                c_latt: global_clustering(&lattice),
                l_latt: characteristic_path_length(&lattice)
                    .mean
                    .expect("lattice is connected"),
            })
        }
    }
}

/// The three small-worldness indices. `None` marks an index whose formula
/// divides by zero (or by a non-finite value) for the given inputs.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SmallWorldness<F> {
    pub s1: Option<F>,
    pub s2: Option<F>,
    pub s3: Option<F>,
}

fn ratio<F: Scalar>(num: F, den: F) -> Option<F> {
    let q = num / den;
    (den != F::zero() && q.is_finite()).then_some(q)
}

pub fn small_worldness<F: Scalar>(c: F, l: F, refs: &ReferenceValues<F>) -> SmallWorldness<F> {
    let s1 = ratio(c, l)
        .zip(ratio(refs.l_rand, refs.c_rand))
        .map(|(a, b)| a * b);
    let s2 = ratio(refs.l_rand, l)
        .zip(ratio(c, refs.c_latt))
        .map(|(a, b)| a - b);
    let s3 = ratio(l - refs.l_latt, refs.l_rand - refs.l_latt)
        .zip(ratio(c - refs.c_rand, refs.c_latt - refs.c_rand))
        .map(|(a, b)| a * b);
    SmallWorldness { s1, s2, s3 }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct StructuralMetrics<F> {
    pub clustering: F,
    pub path_length: PathLength<F>,
    pub small_worldness: SmallWorldness<F>,
    pub references: ReferenceValues<F>,
}

/// Clustering, path length and small-worldness of `g` against `refs`.
/// Small-worldness is undefined when `g` has no connected pair.
pub fn structural_metrics<F: Scalar>(g: &Graph, refs: &ReferenceValues<F>) -> StructuralMetrics<F> {
    let clustering = global_clustering(g);
    let path_length = characteristic_path_length(g);
    let small_worldness = match path_length.mean {
        Some(l) => small_worldness(clustering, l, refs),
        None => SmallWorldness {
            s1: None,
            s2: None,
            s3: None,
        },
    };
    StructuralMetrics {
        clustering,
        path_length,
        small_worldness,
        references: *refs,
    }
}
