//! Deterministic hop-by-hop infection spread with targeted isolation.
//!
//! Each iteration infects every susceptible neighbour of the nodes infected
//! in the previous iteration, so the number of new cases at iteration `d` is
//! the number of nodes at hop distance `d` from the seed. The histogram of
//! those counts is the infection curve.

use std::io::Write;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::centrality::{self, CentralityParams, Measure};
use crate::error::{Error, Result};
use crate::generators::{watts_strogatz, WsParams};
use crate::graph::{Graph, NodeId};
use crate::rng::rng_from_seed;
use crate::scalar::Scalar;

/// New infections per hop distance, summed over trials.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct DistanceHistogram {
    /// `counts[i]` is the number of nodes infected at distance `i + 1`.
    pub counts: Vec<u64>,
    pub trials: u64,
    /// Surviving nodes never reached from the seed.
    pub unreachable_total: u64,
    /// `Σ (surviving nodes − 1)` over trials; always equals
    /// `mass() + unreachable_total`.
    pub susceptible_total: u64,
}

impl DistanceHistogram {
    /// Histogram of a single trial from its level sizes.
    pub fn from_levels(levels: Vec<u64>, surviving: usize) -> Self {
        let susceptible = surviving as u64 - 1;
        let reached: u64 = levels.iter().sum();
        Self {
            counts: levels,
            trials: 1,
            unreachable_total: susceptible - reached,
            susceptible_total: susceptible,
        }
    }

    pub fn count(&self, distance: u32) -> u64 {
        match distance {
            0 => 0,
            d => self.counts.get(d as usize - 1).copied().unwrap_or(0),
        }
    }

    /// `(distance, count)` pairs for distances `1..=max`, zero bins included.
    pub fn bins(&self) -> impl Iterator<Item = (u32, u64)> + '_ {
        self.counts
            .iter()
            .enumerate()
            .map(|(i, &c)| (i as u32 + 1, c))
    }

    pub fn mass(&self) -> u64 {
        self.counts.iter().sum()
    }

    pub fn merge(&mut self, other: &DistanceHistogram) {
        if self.counts.len() < other.counts.len() {
            self.counts.resize(other.counts.len(), 0);
        }
        for (a, &b) in self.counts.iter_mut().zip(&other.counts) {
            *a += b;
        }
        self.trials += other.trials;
        self.unreachable_total += other.unreachable_total;
        self.susceptible_total += other.susceptible_total;
    }

    /// Writes `distance,count` rows under a `#` header carrying the trial
    /// count, the unreachable total and a caller-supplied fingerprint.
    pub fn write_csv<W: Write>(&self, mut out: W, fingerprint: &str) -> std::io::Result<()> {
        writeln!(
            out,
            "# trials={} unreachable_total={} config={}",
            self.trials, self.unreachable_total, fingerprint
        )?;
        writeln!(out, "distance,count")?;
        for (d, c) in self.bins() {
            writeln!(out, "{d},{c}")?;
        }
        Ok(())
    }
}

/// Bin-wise sum of histograms.
pub fn aggregate<'a, I>(histograms: I) -> Result<DistanceHistogram>
where
    I: IntoIterator<Item = &'a DistanceHistogram>,
{
    let mut iter = histograms.into_iter();
    let mut total = iter
        .next()
        .ok_or_else(|| Error::invalid("histograms", "nothing to aggregate"))?
        .clone();
    for h in iter {
        total.merge(h);
    }
    Ok(total)
}

/// Highest bin as `(distance, count)`, the smaller distance on ties.
pub fn peak(h: &DistanceHistogram) -> Result<(u32, u64)> {
    let mut best: Option<(u32, u64)> = None;
    for (d, c) in h.bins() {
        if best.is_none_or(|(_, bc)| c > bc) {
            best = Some((d, c));
        }
    }
    match best {
        Some(b) if b.1 > 0 => Ok(b),
        _ => Err(Error::Degenerate("histogram has no infections".into())),
    }
}

/// Counts divided by total mass, as `(distance, mass)` pairs.
pub fn normalize<F: Scalar>(h: &DistanceHistogram) -> Result<Vec<(u32, F)>> {
    let total = h.mass();
    if total == 0 {
        return Err(Error::Degenerate(
            "cannot normalize an empty histogram".into(),
        ));
    }
    let total = F::from_count(total);
    Ok(h.bins()
        .map(|(d, c)| (d, F::from_count(c) / total))
        .collect())
}

/// A graph with some nodes removed, re-indexed densely.
#[derive(Debug, Clone, PartialEq)]
pub struct IsolatedGraph {
    pub graph: Graph,
    /// Original id → new id, `None` for removed nodes.
    pub old_to_new: Vec<Option<NodeId>>,
    /// New id → original id.
    pub new_to_old: Vec<NodeId>,
}

/// Induced subgraph on the nodes not in `selected`.
pub fn isolate(g: &Graph, selected: &[NodeId]) -> Result<IsolatedGraph> {
    let n = g.node_count();
    let mut removed = vec![false; n];
    for &u in selected {
        g.check_node(u)?;
        removed[u] = true;
    }
    let new_to_old: Vec<NodeId> = (0..n).filter(|&u| !removed[u]).collect();
    if new_to_old.is_empty() {
        return Err(Error::Degenerate(
            "isolation would remove every node".into(),
        ));
    }
    let mut old_to_new = vec![None; n];
    for (new, &old) in new_to_old.iter().enumerate() {
        old_to_new[old] = Some(new);
    }
    let mut graph = Graph::new(new_to_old.len())?;
    for (u, v) in g.edges() {
        if let (Some(a), Some(b)) = (old_to_new[u], old_to_new[v]) {
            graph.add_edge(a, b)?;
        }
    }
    Ok(IsolatedGraph {
        graph,
        old_to_new,
        new_to_old,
    })
}

/// New infections per iteration, starting from `source`. Entry `i` is the
/// number of nodes first infected at iteration `i + 1`.
pub fn spread_from(g: &Graph, source: NodeId) -> Result<Vec<u64>> {
    g.check_node(source)?;
    let mut infected = vec![false; g.node_count()];
    infected[source] = true;
    let mut frontier = vec![source];
    let mut waves = Vec::new();
    while !frontier.is_empty() {
        let mut next = Vec::new();
        for &u in &frontier {
            for &v in g.neighbors(u) {
                if !infected[v] {
                    infected[v] = true;
                    next.push(v);
                }
            }
        }
        if !next.is_empty() {
            waves.push(next.len() as u64);
        }
        frontier = next;
    }
    Ok(waves)
}

/// Which nodes to quarantine before the spread starts.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Isolation {
    /// `None` isolates nobody and requires `fraction == 0`.
    pub measure: Option<Measure>,
    pub fraction: f64,
}

impl Isolation {
    pub const NONE: Isolation = Isolation {
        measure: None,
        fraction: 0.0,
    };

    pub fn validate(&self) -> Result<()> {
        if !(0.0..1.0).contains(&self.fraction) {
            return Err(Error::invalid(
                "isolation",
                format!("fraction {} outside [0, 1)", self.fraction),
            ));
        }
        if self.measure.is_none() && self.fraction > 0.0 {
            return Err(Error::invalid(
                "isolation",
                "measure `none` is only valid with an isolation fraction of 0",
            ));
        }
        Ok(())
    }
}

/// Everything one trial produced.
#[derive(Debug, Clone)]
pub struct Trial {
    /// The generated graph before isolation.
    pub graph: Graph,
    /// Isolated nodes, in original ids.
    pub isolated: Vec<NodeId>,
    /// Infection seed, in original ids.
    pub source: NodeId,
    pub histogram: DistanceHistogram,
}

/// One Monte-Carlo trial: generate a graph from `graph_seed`, rank nodes on
/// the intact graph, isolate the top fraction, and spread from a seed node
/// drawn uniformly among the survivors with a stream seeded by `source_seed`.
pub fn run_trial(
    params: &WsParams,
    isolation: &Isolation,
    centrality: &CentralityParams<f64>,
    graph_seed: u64,
    source_seed: u64,
) -> Result<Trial> {
    isolation.validate()?;
    let graph = watts_strogatz(params, &mut rng_from_seed(graph_seed))?;
    run_trial_on(
        graph,
        isolation,
        centrality,
        &mut rng_from_seed(source_seed),
    )
}

/// [`run_trial`] on an already generated graph.
pub fn run_trial_on<R: Rng + ?Sized>(
    graph: Graph,
    isolation: &Isolation,
    centrality: &CentralityParams<f64>,
    rng: &mut R,
) -> Result<Trial> {
    isolation.validate()?;
    let isolated = match isolation.measure {
        Some(m) if centrality::isolation_count(isolation.fraction, graph.node_count()) > 0 => {
            let scores = centrality::compute(&graph, m, centrality)?;
            centrality::rank_top_fraction(&scores.scores, isolation.fraction)?.selected
        }
        _ => Vec::new(),
    };
    let remaining = isolate(&graph, &isolated)?;
    let local_source = rng.random_range(0..remaining.graph.node_count());
    let levels = spread_from(&remaining.graph, local_source)?;
    let histogram = DistanceHistogram::from_levels(levels, remaining.graph.node_count());
    Ok(Trial {
        source: remaining.new_to_old[local_source],
        graph,
        isolated,
        histogram,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators::ring_lattice;

    fn hist(counts: &[u64]) -> DistanceHistogram {
        DistanceHistogram {
            counts: counts.to_vec(),
            trials: 1,
            unreachable_total: 0,
            susceptible_total: counts.iter().sum(),
        }
    }

    #[test]
    fn isolate_examples() {
        let g = ring_lattice(10, 4).unwrap();
        let same = isolate(&g, &[]).unwrap();
        assert_eq!(same.graph, g);
        assert_eq!(same.new_to_old, (0..10).collect::<Vec<_>>());

        let path = Graph::from_edges(3, [(0, 1), (1, 2)]).unwrap();
        let split = isolate(&path, &[1]).unwrap();
        assert_eq!(split.graph.node_count(), 2);
        assert_eq!(split.graph.edge_count(), 0);
        assert_eq!(split.old_to_new, vec![Some(0), None, Some(1)]);

        assert!(isolate(&path, &[0, 1, 2]).is_err());
        assert!(isolate(&path, &[3]).is_err());
    }

    #[test]
    fn isolate_keeps_induced_edges() {
        let g = ring_lattice(100, 6).unwrap();
        let removed: Vec<NodeId> = (0..15).map(|i| i * 6).collect();
        let iso = isolate(&g, &removed).unwrap();
        assert_eq!(iso.graph.node_count(), 85);
        let expected = g
            .edges()
            .filter(|(u, v)| !removed.contains(u) && !removed.contains(v))
            .count();
        assert_eq!(iso.graph.edge_count(), expected);
        for (a, b) in iso.graph.edges() {
            assert!(g.has_edge(iso.new_to_old[a], iso.new_to_old[b]));
        }
    }

    #[test]
    fn spread_examples() {
        let star = Graph::from_edges(6, (1..6).map(|l| (0, l))).unwrap();
        assert_eq!(spread_from(&star, 0).unwrap(), vec![5]);
        let ring = ring_lattice(10, 2).unwrap();
        for s in 0..10 {
            assert_eq!(spread_from(&ring, s).unwrap(), vec![2, 2, 2, 2, 1]);
        }
        assert!(spread_from(&ring, 10).is_err());
    }

    #[test]
    fn histogram_ops() {
        let h = hist(&[5, 9, 4]);
        assert_eq!(peak(&h).unwrap(), (2, 9));
        assert_eq!(peak(&hist(&[3, 7, 7])).unwrap(), (2, 7));
        assert!(peak(&hist(&[0, 0])).is_err());
        assert!(peak(&hist(&[])).is_err());

        assert_eq!(aggregate([&h]).unwrap(), h);
        let doubled = aggregate([&h, &h]).unwrap();
        assert_eq!(doubled.counts, vec![10, 18, 8]);
        assert_eq!(doubled.trials, 2);
        assert!(aggregate(std::iter::empty()).is_err());

        let p: Vec<(u32, f64)> = normalize(&hist(&[5, 5])).unwrap();
        assert_eq!(p, vec![(1, 0.5), (2, 0.5)]);
        assert!(normalize::<f64>(&hist(&[])).is_err());
    }

    #[test]
    fn isolation_contract() {
        assert!(Isolation {
            measure: None,
            fraction: 0.1
        }
        .validate()
        .is_err());
        assert!(Isolation {
            measure: Some(Measure::Degree),
            fraction: 1.0
        }
        .validate()
        .is_err());
        assert!(Isolation::NONE.validate().is_ok());
    }

    #[test]
    fn lattice_trial_matches_level_sizes() {
        let params = WsParams::new(10, 2, 0.0).unwrap();
        let trial = run_trial(
            &params,
            &Isolation::NONE,
            &CentralityParams::default(),
            1,
            2,
        )
        .unwrap();
        assert_eq!(trial.histogram.counts, vec![2, 2, 2, 2, 1]);
        assert_eq!(trial.histogram.unreachable_total, 0);
        assert_eq!(trial.histogram.susceptible_total, 9);
    }

    #[test]
    fn trial_conserves_nodes() {
        let params = WsParams::new(100, 6, 0.1).unwrap();
        let iso = Isolation {
            measure: Some(Measure::Betweenness),
            fraction: 0.15,
        };
        let trial = run_trial(&params, &iso, &CentralityParams::default(), 11, 12).unwrap();
        assert_eq!(trial.isolated.len(), 15);
        assert!(!trial.isolated.contains(&trial.source));
        let h = &trial.histogram;
        assert_eq!(h.mass() + h.unreachable_total, 84);
    }

    #[test]
    fn histogram_csv_layout() {
        let mut out = Vec::new();
        hist(&[2, 0, 1]).write_csv(&mut out, "n=5").unwrap();
        let text = String::from_utf8(out).unwrap();
        assert_eq!(
            text,
            "# trials=1 unreachable_total=0 config=n=5\ndistance,count\n1,2\n2,0\n3,1\n"
        );
    }
}
