//! Community quality scores: Newman modularity Q and the split-penalty
//! modularity density Qds, which weights each term by community edge density
//! and penalizes fragmented communities.
//!
//! Both scores are defined on undirected graphs with non-negative weights;
//! for signed graphs only the positive-weight subgraph is scored. Negative
//! weights steer the clustering itself but not these quality numbers.

use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::graph::{Graph, Partition};

struct CommunityTallies {
    m: f64,
    sizes: Vec<usize>,
    intra: Vec<f64>,
    degree: Vec<f64>,
    cross: HashMap<(usize, usize), f64>,
}

fn tally(g: &Graph, p: &Partition) -> Result<CommunityTallies> {
    if g.is_directed() {
        return Err(Error::InvalidGraph(
            "quality metrics are defined for undirected graphs".into(),
        ));
    }
    if p.len() != g.node_count() {
        return Err(Error::NodeSetMismatch(format!(
            "partition covers {} nodes, graph has {}",
            p.len(),
            g.node_count()
        )));
    }
    let k = p.num_communities();
    let mut sizes = vec![0usize; k];
    for v in 0..p.len() {
        sizes[p.community_of(v)] += 1;
    }
    let mut m = 0.0;
    let mut intra = vec![0.0; k];
    let mut degree = vec![0.0; k];
    let mut cross: HashMap<(usize, usize), f64> = HashMap::new();
    for e in g.edges() {
        if e.weight <= 0.0 {
            continue;
        }
        m += e.weight;
        let a = p.community_of(e.src);
        let b = p.community_of(e.dst);
        degree[a] += e.weight;
        degree[b] += e.weight;
        if a == b {
            intra[a] += e.weight;
        } else {
            *cross.entry((a.min(b), a.max(b))).or_insert(0.0) += e.weight;
        }
    }
    if m == 0.0 {
        return Err(Error::EmptyGraph);
    }
    Ok(CommunityTallies {
        m,
        sizes,
        intra,
        degree,
        cross,
    })
}

/// Newman modularity: sum over communities of the intra-community weight
/// fraction minus the squared degree fraction expected at random.
pub fn modularity_q(g: &Graph, p: &Partition) -> Result<f64> {
    let t = tally(g, p)?;
    Ok((0..p.num_communities())
        .map(|c| t.intra[c] / t.m - (t.degree[c] / (2.0 * t.m)).powi(2))
        .sum())
}

/// Split-penalty modularity density. Each community's contribution is
/// weighted by its internal density 2e_c / (n_c (n_c - 1)) and reduced by a
/// penalty for every weighted connection to another community, weighted by
/// the pair density e_cc' / (n_c n_c'). Size-1 communities have internal
/// density 0.
pub fn modularity_density_qds(g: &Graph, p: &Partition) -> Result<f64> {
    let t = tally(g, p)?;
    let k = p.num_communities();
    let mut out_weight = vec![0.0; k];
    for (&(a, b), &w) in &t.cross {
        out_weight[a] += w;
        out_weight[b] += w;
    }
    let density = |c: usize| {
        if t.sizes[c] < 2 {
            0.0
        } else {
            2.0 * t.intra[c] / (t.sizes[c] as f64 * (t.sizes[c] as f64 - 1.0))
        }
    };
    let mut qds = 0.0;
    for c in 0..k {
        let d_c = density(c);
        qds += t.intra[c] / t.m * d_c;
        qds -= ((2.0 * t.intra[c] + out_weight[c]) / (2.0 * t.m) * d_c).powi(2);
    }
    for (&(a, b), &w) in &t.cross {
        let pair_density = w / (t.sizes[a] as f64 * t.sizes[b] as f64);
        // the split penalty is incurred once from each side of the pair
        qds -= 2.0 * (w / (2.0 * t.m)) * pair_density;
    }
    Ok(qds)
}
