//! Ring lattices, Watts-Strogatz rewiring and Erdős–Rényi graphs.
//!
//! Random draws follow a fixed consumption order so that a given seed yields
//! the same graph on every platform:
//!
//! * Watts-Strogatz: nodes `0..n` in order, and for each node the ring
//!   offsets `1..=k/2` in order. Each lattice edge draws one `f64` coin; a
//!   rewired edge then draws uniform targets in `0..n` until one is neither
//!   the node itself nor an existing neighbour, giving up after `n` draws.
//! * Erdős–Rényi: one `f64` per unordered pair, pairs in lexicographic order.

use rand::Rng;

use crate::error::{Error, Result};
use crate::graph::Graph;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WsParams {
    pub n: usize,
    /// Mean degree; each node links to `k/2` neighbours on either side.
    pub k: usize,
    pub beta: f64,
}

impl WsParams {
    pub fn new(n: usize, k: usize, beta: f64) -> Result<Self> {
        let params = Self { n, k, beta };
        params.validate()?;
        Ok(params)
    }

    pub fn validate(&self) -> Result<()> {
        validate_lattice(self.n, self.k)?;
        if !(0.0..=1.0).contains(&self.beta) {
            return Err(Error::invalid(
                "beta",
                format!("rewiring probability {} outside [0, 1]", self.beta),
            ));
        }
        Ok(())
    }
}

fn validate_lattice(n: usize, k: usize) -> Result<()> {
    if !k.is_multiple_of(2) || k < 2 {
        return Err(Error::invalid(
            "k",
            format!("{k} must be even and at least 2"),
        ));
    }
    if k >= n {
        return Err(Error::invalid(
            "k",
            format!("{k} must be smaller than n = {n}"),
        ));
    }
    Ok(())
}

/// Node `i` adjacent to `i ± 1, …, i ± k/2 (mod n)`.
pub fn ring_lattice(n: usize, k: usize) -> Result<Graph> {
    validate_lattice(n, k)?;
    let mut g = Graph::new(n)?;
    for u in 0..n {
        for offset in 1..=k / 2 {
            g.add_edge(u, (u + offset) % n)?;
        }
    }
    Ok(g)
}

pub fn watts_strogatz<R: Rng + ?Sized>(params: &WsParams, rng: &mut R) -> Result<Graph> {
    params.validate()?;
    let WsParams { n, k, beta } = *params;
    let mut g = ring_lattice(n, k)?;
    for u in 0..n {
        for offset in 1..=k / 2 {
            if rng.random::<f64>() >= beta {
                continue;
            }
            let old = (u + offset) % n;
            for _ in 0..n {
                let target = rng.random_range(0..n);
                if target == u || g.has_edge(u, target) {
                    continue;
                }
                let removed = g.remove_edge(u, old);
                debug_assert!(removed, "lattice edge ({u}, {old}) owned by this step");
                g.add_edge(u, target)?;
                break;
            }
        }
    }
    Ok(g)
}

pub fn erdos_renyi<R: Rng + ?Sized>(n: usize, p: f64, rng: &mut R) -> Result<Graph> {
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::invalid("p", format!("{p} outside [0, 1]")));
    }
    let mut g = Graph::new(n)?;
    for u in 0..n {
        for v in u + 1..n {
            if rng.random::<f64>() < p {
                g.add_edge(u, v)?;
            }
        }
    }
    Ok(g)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::rng_from_seed;

    #[test]
    fn ring_lattice_shape() {
        let g = ring_lattice(6, 2).unwrap();
        assert_eq!(g.edge_count(), 6);
        assert!(g.nodes().all(|u| g.has_edge(u, (u + 1) % 6)));

        let g = ring_lattice(500, 6).unwrap();
        assert_eq!(g.edge_count(), 1500);
        assert!(g.degrees().iter().all(|&d| d == 6));
    }

    #[test]
    fn lattice_parameter_errors() {
        assert!(ring_lattice(10, 3).is_err());
        assert!(ring_lattice(6, 6).is_err());
        assert!(ring_lattice(6, 0).is_err());
        assert!(WsParams::new(10, 4, 1.5).is_err());
        assert!(WsParams::new(10, 4, -0.1).is_err());
    }

    #[test]
    fn beta_zero_is_the_lattice() {
        let params = WsParams::new(50, 6, 0.0).unwrap();
        let g = watts_strogatz(&params, &mut rng_from_seed(7)).unwrap();
        assert_eq!(g, ring_lattice(50, 6).unwrap());
    }

    #[test]
    fn rewiring_conserves_edges_and_is_seeded() {
        for beta in [0.1, 0.5, 1.0] {
            let params = WsParams::new(60, 4, beta).unwrap();
            let a = watts_strogatz(&params, &mut rng_from_seed(3)).unwrap();
            let b = watts_strogatz(&params, &mut rng_from_seed(3)).unwrap();
            assert_eq!(a, b);
            assert_eq!(a.edge_count(), 120);
            assert_ne!(a, ring_lattice(60, 4).unwrap());
        }
    }

    #[test]
    fn dense_rewiring_terminates() {
        // k = n - 2: most targets are already neighbours.
        let params = WsParams::new(8, 6, 1.0).unwrap();
        let g = watts_strogatz(&params, &mut rng_from_seed(1)).unwrap();
        assert_eq!(g.edge_count(), 24);
    }

    #[test]
    fn erdos_renyi_extremes() {
        let mut rng = rng_from_seed(5);
        assert_eq!(erdos_renyi(20, 0.0, &mut rng).unwrap().edge_count(), 0);
        assert_eq!(erdos_renyi(20, 1.0, &mut rng).unwrap().edge_count(), 190);
        assert!(erdos_renyi(20, 1.2, &mut rng).is_err());
    }

    #[test]
    fn erdos_renyi_mean_degree() {
        // Binomial expectation: mean degree = p (n - 1) = 9.99.
        let expected = 0.01 * 999.0;
        let mut total = 0.0;
        for seed in 0..20 {
            let g = erdos_renyi(1000, 0.01, &mut rng_from_seed(seed)).unwrap();
            total += 2.0 * g.edge_count() as f64 / 1000.0;
        }
        let mean = total / 20.0;
        assert!(
            (mean - expected).abs() / expected < 0.05,
            "mean degree {mean}"
        );
    }
}
