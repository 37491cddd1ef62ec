mod common;

use common::*;
use curveflat::centrality::{self, rank_top_fraction, Measure};
use curveflat::distfit::{fit_gamma, fit_histogram, FitMethod};
use curveflat::epidemic::{aggregate, isolate, spread_from};
use curveflat::generators::{ring_lattice, watts_strogatz};
use curveflat::metrics::{characteristic_path_length, global_clustering};
use curveflat::rng::rng_from_seed;
use curveflat::{CentralityParams, DistanceHistogram, Graph, WsParams};
use proptest::prelude::*;
use rand::seq::SliceRandom;

fn relabel(g: &Graph, perm: &[usize]) -> Graph {
    Graph::from_edges(g.node_count(), g.edges().map(|(u, v)| (perm[u], perm[v]))).unwrap()
}

fn ws_strategy() -> impl Strategy<Value = (usize, usize, f64, u64)> {
    (3usize..40)
        .prop_flat_map(|half| {
            let n = 2 * half + 1;
            (Just(n), 1usize..=(half.min(4)), 0.0f64..=1.0, any::<u64>())
        })
        .prop_map(|(n, k_half, beta, seed)| (n, 2 * k_half, beta, seed))
}

fn histogram_strategy() -> impl Strategy<Value = DistanceHistogram> {
    (prop::collection::vec(0u64..50, 1..8), 0u64..20).prop_map(|(counts, unreachable)| {
        let mass: u64 = counts.iter().sum();
        DistanceHistogram {
            counts,
            trials: 1,
            unreachable_total: unreachable,
            susceptible_total: mass + unreachable,
        }
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn watts_strogatz_invariants((n, k, beta, seed) in ws_strategy()) {
        let g = watts_strogatz(&WsParams::new(n, k, beta).unwrap(), &mut rng_from_seed(seed)).unwrap();
        prop_assert_eq!(g.node_count(), n);
        prop_assert_eq!(g.edge_count(), n * k / 2);
        for u in g.nodes() {
            prop_assert!(!g.neighbors(u).contains(&u));
            prop_assert!(g.neighbors(u).windows(2).all(|w| w[0] < w[1]));
            for &v in g.neighbors(u) {
                prop_assert!(g.has_edge(v, u));
            }
        }
        let again = watts_strogatz(&WsParams::new(n, k, beta).unwrap(), &mut rng_from_seed(seed)).unwrap();
        prop_assert_eq!(g, again);
    }

    #[test]
    fn structural_metrics_stay_in_range((n, k, beta, seed) in ws_strategy()) {
        let g = watts_strogatz(&WsParams::new(n, k, beta).unwrap(), &mut rng_from_seed(seed)).unwrap();
        let c: f64 = global_clustering(&g);
        prop_assert!((0.0..=1.0).contains(&c));
        if let Some(l) = characteristic_path_length::<f64>(&g).mean {
            prop_assert!(l >= 1.0);
        }
    }

    #[test]
    fn metrics_invariant_under_relabeling(seed in any::<u64>()) {
        let g = random_graph(seed, 12);
        let mut perm: Vec<usize> = g.nodes().collect();
        perm.shuffle(&mut rng_from_seed(seed ^ 1));
        let h = relabel(&g, &perm);
        prop_assert_eq!(global_clustering::<f64>(&g), global_clustering::<f64>(&h));
        prop_assert_eq!(
            characteristic_path_length::<f64>(&g),
            characteristic_path_length::<f64>(&h)
        );
        let params = CentralityParams::default();
        for m in Measure::ALL {
            if m == Measure::ExpectedForce && g.node_count() < 2 {
                continue;
            }
            if m == Measure::Eigenvector {
                // Degenerate leading eigenvalues make the vector basis
                // dependent; the dense oracle test covers this measure.
                continue;
            }
            let a = centrality::compute(&g, m, &params).unwrap().scores;
            let b = centrality::compute(&h, m, &params).unwrap().scores;
            for u in g.nodes() {
                let tol = 1e-9 * a[u].abs().max(1.0);
                prop_assert!((a[u] - b[perm[u]]).abs() < tol, "{} node {}", m, u);
            }
        }
    }

    #[test]
    fn ranking_invariant_under_positive_scaling(
        scores in prop::collection::vec(0u32..20, 1..40),
        scale in 1u32..64,
        fraction in 0.0f64..0.99,
    ) {
        // Small integer scores and factors keep the products exact.
        let base: Vec<f64> = scores.iter().map(|&s| s as f64).collect();
        let scaled: Vec<f64> = base.iter().map(|&s| s * scale as f64).collect();
        let a = rank_top_fraction(&base, fraction).unwrap();
        let b = rank_top_fraction(&scaled, fraction).unwrap();
        prop_assert_eq!(&a, &b);
        let sorted = a
            .order
            .windows(2)
            .all(|w| base[w[0]] > base[w[1]] || (base[w[0]] == base[w[1]] && w[0] < w[1]));
        prop_assert!(sorted);
    }

    #[test]
    fn spread_equals_bfs_levels(seed in any::<u64>()) {
        let g = random_graph(seed, 15);
        for s in g.nodes() {
            let levels = spread_from(&g, s).unwrap();
            prop_assert_eq!(&levels, &g.bfs_distances(s).unwrap().level_sizes());
            let reached = g.bfs_distances(s).unwrap().reachable_count as u64 - 1;
            prop_assert_eq!(levels.iter().sum::<u64>(), reached);
        }
    }

    #[test]
    fn isolation_never_shortens_paths(seed in any::<u64>(), picks in prop::collection::vec(any::<prop::sample::Index>(), 0..5)) {
        let g = random_graph(seed, 12);
        let mut selected: Vec<usize> = picks.iter().map(|i| i.index(g.node_count())).collect();
        selected.sort_unstable();
        selected.dedup();
        prop_assume!(selected.len() < g.node_count());
        let iso = isolate(&g, &selected).unwrap();
        for (new_u, &old_u) in iso.new_to_old.iter().enumerate() {
            let before = g.bfs_distances(old_u).unwrap();
            let after = iso.graph.bfs_distances(new_u).unwrap();
            for (new_v, &old_v) in iso.new_to_old.iter().enumerate() {
                if let Some(d) = after.get(new_v) {
                    prop_assert!(before.get(old_v).unwrap() <= d);
                }
            }
        }
    }

    #[test]
    fn aggregation_is_commutative_and_associative(
        a in histogram_strategy(), b in histogram_strategy(), c in histogram_strategy(),
    ) {
        let ab_c = aggregate([&aggregate([&a, &b]).unwrap(), &c]).unwrap();
        let a_bc = aggregate([&a, &aggregate([&b, &c]).unwrap()]).unwrap();
        let cba = aggregate([&c, &b, &a]).unwrap();
        prop_assert_eq!(&ab_c, &a_bc);
        prop_assert_eq!(&ab_c, &cba);
        prop_assert_eq!(ab_c.mass() + ab_c.unreachable_total, ab_c.susceptible_total);
        prop_assert_eq!(ab_c.trials, 3);
    }

    #[test]
    fn gamma_fit_is_scale_equivariant(
        samples in prop::collection::vec(0.1f64..20.0, 5..60),
        c in 0.01f64..100.0,
    ) {
        let spread = samples.iter().cloned().fold(f64::MIN, f64::max)
            - samples.iter().cloned().fold(f64::MAX, f64::min);
        prop_assume!(spread > 0.5);
        let base = fit_gamma(&samples, None, FitMethod::Mle).unwrap();
        let scaled: Vec<f64> = samples.iter().map(|x| x * c).collect();
        let fit = fit_gamma(&scaled, None, FitMethod::Mle).unwrap();
        prop_assert!((fit.shape / base.shape - 1.0).abs() < 1e-6);
        prop_assert!((fit.scale / (c * base.scale) - 1.0).abs() < 1e-6);
    }

    #[test]
    fn integer_weights_match_repeated_samples(
        pairs in prop::collection::vec((1u32..15, 1u32..6), 2..12),
    ) {
        prop_assume!(pairs.iter().any(|p| p.0 != pairs[0].0));
        let xs: Vec<f64> = pairs.iter().map(|p| p.0 as f64).collect();
        let ws: Vec<f64> = pairs.iter().map(|p| p.1 as f64).collect();
        let repeated: Vec<f64> = pairs
            .iter()
            .flat_map(|&(x, w)| std::iter::repeat_n(x as f64, w as usize))
            .collect();
        for method in [FitMethod::Mle, FitMethod::Mom] {
            let weighted = fit_gamma(&xs, Some(&ws), method).unwrap();
            let plain = fit_gamma(&repeated, None, method).unwrap();
            prop_assert!((weighted.shape / plain.shape - 1.0).abs() < 1e-8);
            prop_assert!((weighted.scale / plain.scale - 1.0).abs() < 1e-8);
        }
    }

    #[test]
    fn likelihood_estimate_beats_moments(samples in prop::collection::vec(0.1f64..20.0, 5..60)) {
        let spread = samples.iter().cloned().fold(f64::MIN, f64::max)
            - samples.iter().cloned().fold(f64::MAX, f64::min);
        prop_assume!(spread > 0.5);
        let mle = fit_gamma(&samples, None, FitMethod::Mle).unwrap();
        let mom = fit_gamma(&samples, None, FitMethod::Mom).unwrap();
        let ll = |p: &curveflat::GammaParams| p.diagnostics.unwrap().log_likelihood;
        prop_assert!(ll(&mle) >= ll(&mom) - 1e-9);
    }
}

#[test]
fn lattice_histogram_fit_is_finite() {
    let g = ring_lattice(30, 4).unwrap();
    let h = DistanceHistogram::from_levels(spread_from(&g, 0).unwrap(), 30);
    let p = fit_histogram::<f64>(&h, FitMethod::Mle).unwrap();
    assert!(p.shape.is_finite() && p.scale > 0.0);
}

#[test]
fn fully_rewired_graph_loses_lattice_clustering() {
    let mut total = 0.0;
    for seed in 0..20 {
        let g = watts_strogatz(
            &WsParams::new(500, 6, 1.0).unwrap(),
            &mut rng_from_seed(seed),
        )
        .unwrap();
        total += global_clustering::<f64>(&g);
    }
    let mean = total / 20.0;
    // The equivalent random graph has clustering k/(n-1) ≈ 0.012.
    assert!(mean < 0.03, "mean clustering {mean}");
}

#[test]
fn ws_path_length_between_lattice_and_random() {
    let mut total = 0.0;
    for seed in 0..50 {
        let g = watts_strogatz(
            &WsParams::new(500, 6, 0.3).unwrap(),
            &mut rng_from_seed(seed),
        )
        .unwrap();
        total += characteristic_path_length::<f64>(&g).mean.unwrap();
    }
    let mean = total / 50.0;
    assert!(
        mean > 500.0f64.ln() / 6.0f64.ln() && mean < 500.0 / 12.0,
        "mean L {mean}"
    );
}
