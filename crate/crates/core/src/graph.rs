//! Undirected simple graphs over dense integer node ids.
//!
//! Adjacency lists are kept sorted at all times, so every traversal visits
//! neighbours in ascending id order and seeded experiments are reproducible.

use std::collections::VecDeque;
use std::fmt::Write as _;
use std::io::{BufRead, Write};

use crate::error::{Error, Result};

pub type NodeId = usize;

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Graph {
    adjacency: Vec<Vec<NodeId>>,
    edge_count: usize,
}

impl Graph {
    /// An edgeless graph on `n ≥ 1` nodes.
    pub fn new(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::EmptyGraph);
        }
        Ok(Self {
            adjacency: vec![Vec::new(); n],
            edge_count: 0,
        })
    }

    /// Builds a graph from an edge iterator, rejecting self-loops, out of
    /// range ids and repeated edges.
    pub fn from_edges<I>(n: usize, edges: I) -> Result<Self>
    where
        I: IntoIterator<Item = (NodeId, NodeId)>,
    {
        let mut g = Self::new(n)?;
        for (u, v) in edges {
            if !g.add_edge(u, v)? {
                return Err(Error::invalid(
                    "edges",
                    format!("edge ({u}, {v}) declared twice"),
                ));
            }
        }
        Ok(g)
    }

    pub fn node_count(&self) -> usize {
        self.adjacency.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edge_count
    }

    /// Inserts the undirected edge `{u, v}`.
    ///
    /// Returns `Ok(false)` without modifying the graph when the edge already
    /// exists.
    pub fn add_edge(&mut self, u: NodeId, v: NodeId) -> Result<bool> {
        self.check_node(u)?;
        self.check_node(v)?;
        if u == v {
            return Err(Error::SelfLoop(u));
        }
        match self.adjacency[u].binary_search(&v) {
            Ok(_) => Ok(false),
            Err(pos) => {
                self.adjacency[u].insert(pos, v);
                let pos = self.adjacency[v]
                    .binary_search(&u)
                    .expect_err("adjacency symmetric");
                self.adjacency[v].insert(pos, u);
                self.edge_count += 1;
                Ok(true)
            }
        }
    }

    /// Removes `{u, v}` if present. Used by the rewiring generator only.
    pub(crate) fn remove_edge(&mut self, u: NodeId, v: NodeId) -> bool {
        match self.adjacency[u].binary_search(&v) {
            Ok(pos) => {
                self.adjacency[u].remove(pos);
                let pos = self.adjacency[v]
                    .binary_search(&u)
                    .expect("adjacency symmetric");
                self.adjacency[v].remove(pos);
                self.edge_count -= 1;
                true
            }
            Err(_) => false,
        }
    }

    pub fn has_edge(&self, u: NodeId, v: NodeId) -> bool {
        u < self.node_count() && self.adjacency[u].binary_search(&v).is_ok()
    }

    /// Sorted neighbour ids of `u`.
    pub fn neighbors(&self, u: NodeId) -> &[NodeId] {
        &self.adjacency[u]
    }

    pub fn degree(&self, u: NodeId) -> usize {
        self.adjacency[u].len()
    }

    pub fn degrees(&self) -> Vec<usize> {
        self.adjacency.iter().map(Vec::len).collect()
    }

    pub fn nodes(&self) -> std::ops::Range<NodeId> {
        0..self.node_count()
    }

    /// Every edge once, as `(u, v)` with `u < v`, in lexicographic order.
    pub fn edges(&self) -> impl Iterator<Item = (NodeId, NodeId)> + '_ {
        self.adjacency.iter().enumerate().flat_map(|(u, adj)| {
            adj.iter()
                .copied()
                .filter(move |&v| v > u)
                .map(move |v| (u, v))
        })
    }

    pub fn check_node(&self, u: NodeId) -> Result<()> {
        if u < self.node_count() {
            Ok(())
        } else {
            Err(Error::NodeOutOfRange {
                node: u,
                n: self.node_count(),
            })
        }
    }

    /// Unweighted shortest-path distances from `source`.
    pub fn bfs_distances(&self, source: NodeId) -> Result<DistanceVector> {
        self.check_node(source)?;
        let n = self.node_count();
        let mut dist = vec![None; n];
        let mut queue = VecDeque::with_capacity(n);
        dist[source] = Some(0u32);
        queue.push_back(source);
        let mut reachable = 1;
        while let Some(u) = queue.pop_front() {
            let next = dist[u].map(|d| d + 1);
            for &v in &self.adjacency[u] {
                if dist[v].is_none() {
                    dist[v] = next;
                    reachable += 1;
                    queue.push_back(v);
                }
            }
        }
        Ok(DistanceVector {
            source,
            dist,
            reachable_count: reachable,
        })
    }

    /// Connected components, each sorted ascending, ordered by smallest member.
    pub fn connected_components(&self) -> Vec<Vec<NodeId>> {
        let n = self.node_count();
        let mut seen = vec![false; n];
        let mut components = Vec::new();
        let mut stack = Vec::new();
        for start in 0..n {
            if seen[start] {
                continue;
            }
            seen[start] = true;
            stack.push(start);
            let mut component = Vec::new();
            while let Some(u) = stack.pop() {
                component.push(u);
                for &v in &self.adjacency[u] {
                    if !seen[v] {
                        seen[v] = true;
                        stack.push(v);
                    }
                }
            }
            component.sort_unstable();
            components.push(component);
        }
        components
    }

    /// Writes the debugging edge-list format: a `# nodes N` header followed
    /// by one `u v` line per edge.
    pub fn write_edge_list<W: Write>(&self, mut out: W) -> std::io::Result<()> {
        let mut buf = String::new();
        writeln!(buf, "# nodes {}", self.node_count()).unwrap();
        for (u, v) in self.edges() {
            writeln!(buf, "{u} {v}").unwrap();
        }
        out.write_all(buf.as_bytes())
    }

    /// Reads the edge-list format. Lines starting with `#` are comments,
    /// except `# nodes N` which fixes the node count; without it the count is
    /// one more than the largest id seen.
    pub fn read_edge_list<R: BufRead>(input: R) -> Result<Self> {
        let mut declared_nodes = None;
        let mut edges = Vec::new();
        for (idx, line) in input.lines().enumerate() {
            let lineno = idx + 1;
            let line = line.map_err(|e| Error::Parse {
                line: lineno,
                message: e.to_string(),
            })?;
            let line = line.trim();
            if line.is_empty() {
                continue;
            }
            if let Some(comment) = line.strip_prefix('#') {
                let mut words = comment.split_whitespace();
                if words.next() == Some("nodes") {
                    let n =
                        words
                            .next()
                            .and_then(|w| w.parse::<usize>().ok())
                            .ok_or(Error::Parse {
                                line: lineno,
                                message: "malformed `# nodes` header".into(),
                            })?;
                    declared_nodes = Some(n);
                }
                continue;
            }
            let mut fields = line.split_whitespace();
            let mut id = || -> Result<NodeId> {
                fields
                    .next()
                    .and_then(|w| w.parse().ok())
                    .ok_or_else(|| Error::Parse {
                        line: lineno,
                        message: format!("expected `u v`, got `{line}`"),
                    })
            };
            let (u, v) = (id()?, id()?);
            if fields.next().is_some() {
                return Err(Error::Parse {
                    line: lineno,
                    message: format!("trailing fields in `{line}`"),
                });
            }
            edges.push((lineno, u, v));
        }
        let n = declared_nodes.unwrap_or_else(|| {
            edges
                .iter()
                .map(|&(_, u, v)| u.max(v) + 1)
                .max()
                .unwrap_or(1)
        });
        let mut g = Graph::new(n)?;
        for (line, u, v) in edges {
            match g.add_edge(u, v) {
                Ok(true) => {}
                Ok(false) => {
                    return Err(Error::Parse {
                        line,
                        message: format!("edge ({u}, {v}) declared twice"),
                    })
                }
                Err(e) => {
                    return Err(Error::Parse {
                        line,
                        message: e.to_string(),
                    })
                }
            }
        }
        Ok(g)
    }
}

/// Hop distances from one source. `None` marks an unreachable node.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DistanceVector {
    pub source: NodeId,
    pub dist: Vec<Option<u32>>,
    pub reachable_count: usize,
}

impl DistanceVector {
    pub fn get(&self, v: NodeId) -> Option<u32> {
        self.dist[v]
    }

    pub fn is_reachable(&self, v: NodeId) -> bool {
        self.dist[v].is_some()
    }

    /// Number of nodes at each distance `1..=eccentricity`; index 0 holds
    /// distance 1.
    pub fn level_sizes(&self) -> Vec<u64> {
        let mut levels: Vec<u64> = Vec::new();
        for d in self.dist.iter().flatten().copied().filter(|&d| d > 0) {
            let idx = d as usize - 1;
            if levels.len() <= idx {
                levels.resize(idx + 1, 0);
            }
            levels[idx] += 1;
        }
        levels
    }

    /// Sum of finite distances.
    pub fn total_distance(&self) -> u64 {
        self.dist.iter().flatten().map(|&d| u64::from(d)).sum()
    }
}
