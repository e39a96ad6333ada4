//! Graph, partition and cover data model.
//!
//! Graphs are sparse weighted networks over dense 0-based node ids, immutable
//! after construction so replicate clustering runs can share them across
//! threads. Edge weights may be negative (correlation-style networks) and
//! edges may be directed.

use std::collections::{BTreeSet, HashMap, HashSet};

use crate::error::{Error, Result};

/// One weighted edge. For undirected graphs the pair is stored once,
/// in whichever orientation it was supplied.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Edge {
    pub src: usize,
    pub dst: usize,
    pub weight: f64,
}

/// Sparse weighted network over node ids `0..n`.
///
/// Construction validates the full invariant set: ids in range, no
/// self-loops, finite weights, and no duplicate edges (duplicates are a hard
/// error rather than being merged, so data bugs surface instead of hiding).
#[derive(Debug, Clone)]
pub struct Graph {
    n: usize,
    edges: Vec<Edge>,
    directed: bool,
    names: Option<Vec<String>>,
    // CSR over label-influence sources: both endpoints for undirected
    // graphs, in-neighbors for directed ones (labels flow along edges).
    adj_offsets: Vec<usize>,
    adj: Vec<(u32, f64)>,
}

impl Graph {
    /// Build a graph from an edge list, validating all invariants.
    pub fn new(n: usize, edges: Vec<Edge>, directed: bool) -> Result<Self> {
        let mut seen: HashSet<(usize, usize)> = HashSet::with_capacity(edges.len());
        for e in &edges {
            if e.src >= n {
                return Err(Error::NodeOutOfRange { id: e.src, n });
            }
            if e.dst >= n {
                return Err(Error::NodeOutOfRange { id: e.dst, n });
            }
            if e.src == e.dst {
                return Err(Error::InvalidGraph(format!("self-loop at node {}", e.src)));
            }
            if !e.weight.is_finite() {
                return Err(Error::InvalidGraph(format!(
                    "non-finite weight on edge {} -> {}",
                    e.src, e.dst
                )));
            }
            let key = if directed {
                (e.src, e.dst)
            } else {
                (e.src.min(e.dst), e.src.max(e.dst))
            };
            if !seen.insert(key) {
                return Err(Error::InvalidGraph(format!(
                    "duplicate edge {} -- {}",
                    e.src, e.dst
                )));
            }
        }
        let (adj_offsets, adj) = build_adjacency(n, &edges, directed);
        Ok(Graph {
            n,
            edges,
            directed,
            names: None,
            adj_offsets,
            adj,
        })
    }

    /// Attach external node names (e.g. from a dense-matrix header row).
    pub fn with_names(mut self, names: Vec<String>) -> Result<Self> {
        if names.len() != self.n {
            return Err(Error::InvalidGraph(format!(
                "{} names for {} nodes",
                names.len(),
                self.n
            )));
        }
        self.names = Some(names);
        Ok(self)
    }

    pub fn node_count(&self) -> usize {
        self.n
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn is_directed(&self) -> bool {
        self.directed
    }

    pub fn names(&self) -> Option<&[String]> {
        self.names.as_deref()
    }

    /// Label-influence sources of `v` with edge weights: all incident
    /// neighbors for undirected graphs, in-neighbors for directed ones.
    pub fn neighbors(&self, v: usize) -> &[(u32, f64)] {
        &self.adj[self.adj_offsets[v]..self.adj_offsets[v + 1]]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adj_offsets[v + 1] - self.adj_offsets[v]
    }

    /// Subgraph induced by `nodes`, plus the id remap. New ids are dense and
    /// assigned in ascending old-id order; `old_of_new[new] = old`. Edge
    /// weights are preserved exactly and no edges are introduced.
    pub fn induced_subgraph(&self, nodes: &BTreeSet<usize>) -> Result<(Graph, Vec<usize>)> {
        let mut new_of_old: HashMap<usize, usize> = HashMap::with_capacity(nodes.len());
        let mut old_of_new = Vec::with_capacity(nodes.len());
        for &v in nodes {
            if v >= self.n {
                return Err(Error::NodeOutOfRange { id: v, n: self.n });
            }
            new_of_old.insert(v, old_of_new.len());
            old_of_new.push(v);
        }
        let edges = self
            .edges
            .iter()
            .filter_map(|e| {
                match (new_of_old.get(&e.src), new_of_old.get(&e.dst)) {
                    (Some(&s), Some(&d)) => Some(Edge {
                        src: s,
                        dst: d,
                        weight: e.weight,
                    }),
                    _ => None,
                }
            })
            .collect();
        let g = Graph::new(old_of_new.len(), edges, self.directed)?;
        Ok((g, old_of_new))
    }

    /// Total positive edge weight and weighted degrees over the positive
    /// subgraph; used by the quality metrics, which are undefined for
    /// negative weights.
    pub fn positive_weight(&self) -> f64 {
        self.edges
            .iter()
            .filter(|e| e.weight > 0.0)
            .map(|e| e.weight)
            .sum()
    }
}

fn build_adjacency(n: usize, edges: &[Edge], directed: bool) -> (Vec<usize>, Vec<(u32, f64)>) {
    let mut counts = vec![0usize; n + 1];
    for e in edges {
        counts[e.dst + 1] += 1;
        if !directed {
            counts[e.src + 1] += 1;
        }
    }
    for i in 1..=n {
        counts[i] += counts[i - 1];
    }
    let offsets = counts.clone();
    let mut fill = counts;
    let total = offsets[n];
    let mut adj = vec![(0u32, 0f64); total];
    for e in edges {
        adj[fill[e.dst]] = (e.src as u32, e.weight);
        fill[e.dst] += 1;
        if !directed {
            adj[fill[e.src]] = (e.dst as u32, e.weight);
            fill[e.src] += 1;
        }
    }
    (offsets, adj)
}

/// Disjoint, exhaustive assignment of nodes to communities with dense ids.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Partition {
    assignment: Vec<usize>,
    num_communities: usize,
}

impl Partition {
    /// Build from an explicit assignment whose community ids must already be
    /// dense in `[0, num_communities)`.
    pub fn new(assignment: Vec<usize>) -> Result<Self> {
        if assignment.is_empty() {
            return Ok(Partition {
                assignment,
                num_communities: 0,
            });
        }
        let max = *assignment.iter().max().unwrap();
        let mut present = vec![false; max + 1];
        for &c in &assignment {
            present[c] = true;
        }
        if let Some(gap) = present.iter().position(|p| !p) {
            return Err(Error::InvalidPartition(format!(
                "community ids not dense: id {} unused but {} present",
                gap, max
            )));
        }
        Ok(Partition {
            assignment,
            num_communities: max + 1,
        })
    }

    /// Build from raw labels, relabeling communities to dense ids in order
    /// of first appearance by node index.
    pub fn from_labels<L: Copy + Eq + std::hash::Hash>(labels: &[L]) -> Self {
        let mut remap: HashMap<L, usize> = HashMap::new();
        let assignment = labels
            .iter()
            .map(|&l| {
                let next = remap.len();
                *remap.entry(l).or_insert(next)
            })
            .collect();
        Partition {
            assignment,
            num_communities: remap.len(),
        }
    }

    pub fn len(&self) -> usize {
        self.assignment.len()
    }

    pub fn is_empty(&self) -> bool {
        self.assignment.is_empty()
    }

    pub fn community_of(&self, node: usize) -> usize {
        self.assignment[node]
    }

    pub fn assignment(&self) -> &[usize] {
        &self.assignment
    }

    pub fn num_communities(&self) -> usize {
        self.num_communities
    }

    /// Members of each community, indexed by community id.
    pub fn communities(&self) -> Vec<Vec<usize>> {
        let mut out = vec![Vec::new(); self.num_communities];
        for (v, &c) in self.assignment.iter().enumerate() {
            out[c].push(v);
        }
        out
    }

    /// View as a cover with exactly one membership per node.
    pub fn to_cover(&self) -> Cover {
        Cover::new(self.assignment.iter().map(|&c| vec![c]).collect()).expect("partition is a valid cover")
    }
}

/// Assignment of nodes to one or more communities. Nodes with two or more
/// memberships are multi-community nodes.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Cover {
    memberships: Vec<Vec<usize>>,
}

impl Cover {
    /// Build from per-node membership lists. Each list is sorted and
    /// deduplicated; every node must belong to at least one community.
    pub fn new(mut memberships: Vec<Vec<usize>>) -> Result<Self> {
        for (v, m) in memberships.iter_mut().enumerate() {
            m.sort_unstable();
            m.dedup();
            if m.is_empty() {
                return Err(Error::InvalidCover(format!("node {} has no community", v)));
            }
        }
        Ok(Cover { memberships })
    }

    pub fn len(&self) -> usize {
        self.memberships.len()
    }

    pub fn is_empty(&self) -> bool {
        self.memberships.is_empty()
    }

    /// Sorted community ids of `node`.
    pub fn memberships_of(&self, node: usize) -> &[usize] {
        &self.memberships[node]
    }

    pub fn is_multi(&self, node: usize) -> bool {
        self.memberships[node].len() >= 2
    }

    pub fn multi_nodes(&self) -> Vec<usize> {
        (0..self.len()).filter(|&v| self.is_multi(v)).collect()
    }

    /// Community id -> sorted member list, for every id present in the cover.
    pub fn community_members(&self) -> HashMap<usize, Vec<usize>> {
        let mut map: HashMap<usize, Vec<usize>> = HashMap::new();
        for (v, ms) in self.memberships.iter().enumerate() {
            for &c in ms {
                map.entry(c).or_default().push(v);
            }
        }
        map
    }
}
