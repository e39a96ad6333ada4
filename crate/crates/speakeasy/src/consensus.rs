//! Consensus clustering over replicate propagation runs: representative
//! partition selection by mean adjusted Rand index, pairwise co-occurrence
//! counting, multi-community node extraction against the 1/maxCommunities
//! affinity threshold, and iterative subclustering.

use std::collections::BTreeSet;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::graph::{Cover, Graph, Partition};
use crate::labelprop::{run, EngineParams};
use crate::metrics::ari;
use crate::seed::derive_seed;

const SUBCLUSTER_SALT: u64 = 0x7375626c766c;

/// Replicate partitions over one node set plus the seeds that produced them.
#[derive(Debug, Clone)]
pub struct PartitionEnsemble {
    partitions: Vec<Partition>,
    seeds: Vec<u64>,
}

impl PartitionEnsemble {
    pub fn new(partitions: Vec<Partition>, seeds: Vec<u64>) -> Result<Self> {
        if partitions.is_empty() {
            return Err(Error::InvalidParameter("ensemble needs >= 1 partition".into()));
        }
        if partitions.len() != seeds.len() {
            return Err(Error::InvalidParameter(
                "one seed per ensemble member required".into(),
            ));
        }
        let n = partitions[0].len();
        if partitions.iter().any(|p| p.len() != n) {
            return Err(Error::NodeSetMismatch(
                "ensemble members cover different node sets".into(),
            ));
        }
        Ok(PartitionEnsemble { partitions, seeds })
    }

    pub fn len(&self) -> usize {
        self.partitions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.partitions.is_empty()
    }

    pub fn partitions(&self) -> &[Partition] {
        &self.partitions
    }

    pub fn seeds(&self) -> &[u64] {
        &self.seeds
    }

    pub fn node_count(&self) -> usize {
        self.partitions[0].len()
    }
}

/// Symmetric pairwise counts of how often nodes co-cluster across replicates.
#[derive(Debug, Clone)]
pub struct CoOccurrenceMatrix {
    n: usize,
    replicates: usize,
    counts: Vec<u32>,
}

impl CoOccurrenceMatrix {
    pub fn node_count(&self) -> usize {
        self.n
    }

    pub fn replicates(&self) -> usize {
        self.replicates
    }

    pub fn count(&self, i: usize, j: usize) -> u32 {
        self.counts[i * self.n + j]
    }

    /// Co-clustering rate in [0, 1].
    pub fn rate(&self, i: usize, j: usize) -> f64 {
        self.count(i, j) as f64 / self.replicates as f64
    }

    /// Dense TSV with a `# R=<replicates>` header comment.
    pub fn to_tsv(&self) -> String {
        let mut out = format!("# R={}\n", self.replicates);
        for i in 0..self.n {
            let row: Vec<String> = (0..self.n).map(|j| self.count(i, j).to_string()).collect();
            out.push_str(&row.join("\t"));
            out.push('\n');
        }
        out
    }
}

/// Derived seed for replicate `index` of a run with master seed `master`.
pub fn replicate_seed(master: u64, index: usize) -> u64 {
    derive_seed(master, index as u64)
}

/// R independent runs with per-index derived seeds. Replicates execute in
/// parallel; ensemble order follows the seed index regardless of schedule.
pub fn replicate(g: &Graph, p: &EngineParams, r: usize) -> Result<PartitionEnsemble> {
    if r < 1 {
        return Err(Error::InvalidParameter("replicate count must be >= 1".into()));
    }
    p.validate()?;
    let seeds: Vec<u64> = (0..r).map(|i| replicate_seed(p.seed, i)).collect();
    let partitions: Result<Vec<Partition>> = seeds
        .par_iter()
        .map(|&seed| run(g, &EngineParams { seed, ..*p }))
        .collect();
    PartitionEnsemble::new(partitions?, seeds)
}

/// Index of the ensemble member with the highest mean ARI against all other
/// members (self excluded when R > 1); ties go to the lowest index.
pub fn representative_index(e: &PartitionEnsemble) -> usize {
    let r = e.len();
    if r == 1 {
        return 0;
    }
    // symmetric pairwise ARI matrix, computed once
    let pairs: Vec<(usize, usize)> = (0..r)
        .flat_map(|i| ((i + 1)..r).map(move |j| (i, j)))
        .collect();
    let values: Vec<f64> = pairs
        .par_iter()
        .map(|&(i, j)| ari(&e.partitions[i], &e.partitions[j]).expect("same node set"))
        .collect();
    let mut matrix = vec![0.0; r * r];
    for (&(i, j), &v) in pairs.iter().zip(&values) {
        matrix[i * r + j] = v;
        matrix[j * r + i] = v;
    }
    let mut best = 0;
    let mut best_mean = f64::NEG_INFINITY;
    for i in 0..r {
        let mean: f64 = (0..r).filter(|&j| j != i).map(|j| matrix[i * r + j]).sum::<f64>()
            / (r - 1) as f64;
        if mean > best_mean {
            best_mean = mean;
            best = i;
        }
    }
    best
}

/// The representative member itself; always an ensemble member, never a
/// synthesized partition.
pub fn representative_partition(e: &PartitionEnsemble) -> &Partition {
    &e.partitions[representative_index(e)]
}

/// counts[i][j] = number of replicates assigning i and j to one community.
pub fn co_occurrence(e: &PartitionEnsemble) -> CoOccurrenceMatrix {
    let n = e.node_count();
    let mut counts = vec![0u32; n * n];
    for p in &e.partitions {
        for members in p.communities() {
            for (a, &i) in members.iter().enumerate() {
                counts[i * n + i] += 1;
                for &j in &members[a + 1..] {
                    counts[i * n + j] += 1;
                    counts[j * n + i] += 1;
                }
            }
        }
    }
    CoOccurrenceMatrix {
        n,
        replicates: e.len(),
        counts,
    }
}

/// Affinity of `v` to community `members`: mean co-clustering rate against
/// the members, excluding `v` itself. `None` when there is nothing to
/// average (the community is just `v`).
fn affinity(co: &CoOccurrenceMatrix, v: usize, members: &[usize]) -> Option<f64> {
    let mut sum = 0.0;
    let mut count = 0usize;
    for &u in members {
        if u != v {
            sum += co.rate(v, u);
            count += 1;
        }
    }
    if count == 0 {
        None
    } else {
        Some(sum / count as f64)
    }
}

/// Expand a representative partition into a cover: a node joins every
/// representative community it co-occurs with at average rate >=
/// 1/maxCommunities, and always retains its own representative community.
pub fn multi_community_nodes(
    co: &CoOccurrenceMatrix,
    rep: &Partition,
    max_communities: usize,
) -> Result<Cover> {
    if max_communities < 1 {
        return Err(Error::InvalidParameter("maxCommunities must be >= 1".into()));
    }
    if rep.len() != co.node_count() {
        return Err(Error::NodeSetMismatch(format!(
            "partition covers {} nodes, co-occurrence {}",
            rep.len(),
            co.node_count()
        )));
    }
    let threshold = 1.0 / max_communities as f64;
    let communities = rep.communities();
    let mut memberships: Vec<Vec<usize>> = vec![Vec::new(); rep.len()];
    for v in 0..rep.len() {
        let home = rep.community_of(v);
        for (c, members) in communities.iter().enumerate() {
            let keep = c == home
                || affinity(co, v, members).is_some_and(|a| a >= threshold);
            if keep {
                memberships[v].push(c);
            }
        }
    }
    Cover::new(memberships)
}

/// Iterative subclustering: level 1 is the consensus representative
/// partition of the whole graph; each next level re-clusters every
/// community of size >= 2 on its induced subgraph and replaces it with the
/// sub-communities found. Ids stay globally dense and every sub-community
/// refines its parent.
pub fn subcluster(
    g: &Graph,
    p: &EngineParams,
    depth: usize,
    r: usize,
) -> Result<Vec<Partition>> {
    if depth < 1 {
        return Err(Error::InvalidParameter("subcluster depth must be >= 1".into()));
    }
    let ensemble = replicate(g, p, r)?;
    let mut levels = vec![representative_partition(&ensemble).clone()];
    let sub_root = derive_seed(p.seed, SUBCLUSTER_SALT);
    for level in 1..depth {
        let prev = levels.last().unwrap();
        let level_seed = derive_seed(sub_root, level as u64);
        let mut labels = vec![0usize; prev.len()];
        let mut next_id = 0usize;
        for (cid, members) in prev.communities().iter().enumerate() {
            if members.len() < 2 {
                labels[members[0]] = next_id;
                next_id += 1;
                continue;
            }
            let selection: BTreeSet<usize> = members.iter().copied().collect();
            let (sub, old_of_new) = g.induced_subgraph(&selection)?;
            let sub_params = EngineParams {
                seed: derive_seed(level_seed, cid as u64),
                ..*p
            };
            let sub_ensemble = replicate(&sub, &sub_params, r)?;
            let sub_rep = representative_partition(&sub_ensemble);
            for (new, &old) in old_of_new.iter().enumerate() {
                labels[old] = next_id + sub_rep.community_of(new);
            }
            next_id += sub_rep.num_communities();
        }
        levels.push(Partition::new(labels)?);
    }
    Ok(levels)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::Edge;

    fn graph(n: usize, edges: &[(usize, usize, f64)]) -> Graph {
        Graph::new(
            n,
            edges
                .iter()
                .map(|&(src, dst, weight)| Edge { src, dst, weight })
                .collect(),
            false,
        )
        .unwrap()
    }

    fn two_triangles() -> Graph {
        graph(
            6,
            &[
                (0, 1, 1.0),
                (1, 2, 1.0),
                (2, 0, 1.0),
                (3, 4, 1.0),
                (4, 5, 1.0),
                (5, 3, 1.0),
            ],
        )
    }

    #[test]
    fn replicate_single_matches_run() {
        let g = two_triangles();
        let p = EngineParams::default().with_seed(11);
        let e = replicate(&g, &p, 1).unwrap();
        let solo = run(
            &g,
            &EngineParams {
                seed: replicate_seed(11, 0),
                ..p
            },
        )
        .unwrap();
        assert_eq!(e.partitions()[0], solo);
    }

    #[test]
    fn replicate_is_deterministic() {
        let g = two_triangles();
        let p = EngineParams::default().with_seed(5);
        let a = replicate(&g, &p, 8).unwrap();
        let b = replicate(&g, &p, 8).unwrap();
        assert_eq!(a.partitions(), b.partitions());
        assert_eq!(a.seeds(), b.seeds());
    }

    #[test]
    fn representative_prefers_duplicated_member() {
        let p = Partition::from_labels(&[0, 0, 0, 1, 1, 1]);
        let q = Partition::from_labels(&[0, 1, 0, 1, 0, 1]);
        let e = PartitionEnsemble::new(vec![p.clone(), p.clone(), q], vec![0, 1, 2]).unwrap();
        assert_eq!(representative_index(&e), 0);
        assert_eq!(representative_partition(&e), &p);
    }

    #[test]
    fn representative_single_member() {
        let p = Partition::from_labels(&[0, 1, 0]);
        let e = PartitionEnsemble::new(vec![p.clone()], vec![7]).unwrap();
        assert_eq!(representative_partition(&e), &p);
    }

    #[test]
    fn representative_matches_brute_force_on_random_ensembles() {
        use rand::prelude::*;
        use rand_chacha::ChaCha8Rng;
        let mut rng = ChaCha8Rng::seed_from_u64(77);
        for _ in 0..50 {
            let r = rng.gen_range(2..=6);
            let n = rng.gen_range(3..=10);
            let members: Vec<Partition> = (0..r)
                .map(|_| {
                    let labels: Vec<usize> = (0..n).map(|_| rng.gen_range(0..3)).collect();
                    Partition::from_labels(&labels)
                })
                .collect();
            let e = PartitionEnsemble::new(members.clone(), (0..r as u64).collect()).unwrap();
            // brute force: recompute every mean directly
            let mut best = 0;
            let mut best_mean = f64::NEG_INFINITY;
            for i in 0..r {
                let mut sum = 0.0;
                for j in 0..r {
                    if i != j {
                        sum += ari(&members[i], &members[j]).unwrap();
                    }
                }
                let mean = sum / (r - 1) as f64;
                if mean > best_mean {
                    best_mean = mean;
                    best = i;
                }
            }
            assert_eq!(representative_index(&e), best);
        }
    }

    #[test]
    fn co_occurrence_counts_pairs() {
        let p = Partition::from_labels(&[0, 0, 1]);
        let q = Partition::from_labels(&[0, 0, 0]);
        let e = PartitionEnsemble::new(vec![p, q], vec![0, 1]).unwrap();
        let co = co_occurrence(&e);
        assert_eq!(co.count(0, 1), 2);
        assert_eq!(co.count(0, 2), 1);
        assert_eq!(co.count(1, 2), 1);
        assert_eq!(co.count(2, 2), 2);
        assert_eq!(co.count(0, 1), co.count(1, 0));
    }

    #[test]
    fn co_occurrence_identical_members_all_or_nothing() {
        let p = Partition::from_labels(&[0, 0, 1, 1]);
        let e = PartitionEnsemble::new(vec![p.clone(), p.clone(), p], vec![0, 1, 2]).unwrap();
        let co = co_occurrence(&e);
        for i in 0..4 {
            for j in 0..4 {
                let c = co.count(i, j);
                assert!(c == 0 || c == 3, "count({i},{j}) = {c}");
            }
        }
    }

    #[test]
    fn co_occurrence_matches_naive_recount() {
        use rand::prelude::*;
        use rand_chacha::ChaCha8Rng;
        let mut rng = ChaCha8Rng::seed_from_u64(42);
        let n = 8;
        let members: Vec<Partition> = (0..5)
            .map(|_| {
                let labels: Vec<usize> = (0..n).map(|_| rng.gen_range(0..3)).collect();
                Partition::from_labels(&labels)
            })
            .collect();
        let e = PartitionEnsemble::new(members.clone(), (0..5).collect()).unwrap();
        let co = co_occurrence(&e);
        for i in 0..n {
            for j in 0..n {
                let naive = members
                    .iter()
                    .filter(|p| p.community_of(i) == p.community_of(j))
                    .count() as u32;
                assert_eq!(co.count(i, j), naive);
            }
        }
    }

    #[test]
    fn co_occurrence_invariant_under_reordering() {
        let p = Partition::from_labels(&[0, 0, 1, 1]);
        let q = Partition::from_labels(&[0, 1, 1, 0]);
        let a = PartitionEnsemble::new(vec![p.clone(), q.clone()], vec![0, 1]).unwrap();
        let b = PartitionEnsemble::new(vec![q, p], vec![1, 0]).unwrap();
        assert_eq!(co_occurrence(&a).counts, co_occurrence(&b).counts);
    }

    fn manual_co(n: usize, replicates: usize, entries: &[(usize, usize, u32)]) -> CoOccurrenceMatrix {
        let mut counts = vec![0u32; n * n];
        for i in 0..n {
            counts[i * n + i] = replicates as u32;
        }
        for &(i, j, c) in entries {
            counts[i * n + j] = c;
            counts[j * n + i] = c;
        }
        CoOccurrenceMatrix {
            n,
            replicates,
            counts,
        }
    }

    #[test]
    fn multi_community_keeps_single_membership_when_unambiguous() {
        // nodes 0,1 together always; node 2 never joins them
        let co = manual_co(3, 10, &[(0, 1, 10)]);
        let rep = Partition::from_labels(&[0, 0, 1]);
        let cover = multi_community_nodes(&co, &rep, 5).unwrap();
        assert_eq!(cover.memberships_of(0), &[0]);
        assert_eq!(cover.memberships_of(2), &[1]);
    }

    #[test]
    fn multi_community_threshold_includes_both() {
        // node 4 co-occurs with community 0 at rate .6 and community 1 at .4
        let co = manual_co(
            5,
            10,
            &[
                (0, 1, 10),
                (2, 3, 10),
                (4, 0, 6),
                (4, 1, 6),
                (4, 2, 4),
                (4, 3, 4),
            ],
        );
        let rep = Partition::from_labels(&[0, 0, 1, 1, 0]);
        let cover = multi_community_nodes(&co, &rep, 5).unwrap();
        assert_eq!(cover.memberships_of(4), &[0, 1]);
        assert!(cover.is_multi(4));
    }

    #[test]
    fn multi_community_max_one_degenerates_to_partition() {
        let co = manual_co(4, 10, &[(0, 1, 10), (2, 3, 10), (1, 2, 9)]);
        let rep = Partition::from_labels(&[0, 0, 1, 1]);
        let cover = multi_community_nodes(&co, &rep, 1).unwrap();
        // threshold 1.0: nothing below perfect co-occurrence is added
        for v in 0..4 {
            assert_eq!(cover.memberships_of(v), &[rep.community_of(v)]);
        }
    }

    #[test]
    fn multi_community_monotone_in_max_communities() {
        let co = manual_co(
            5,
            10,
            &[(0, 1, 10), (2, 3, 10), (4, 0, 5), (4, 1, 5), (4, 2, 3), (4, 3, 3)],
        );
        let rep = Partition::from_labels(&[0, 0, 1, 1, 0]);
        let mut prev: Vec<Vec<usize>> = Vec::new();
        for max in 1..=6 {
            let cover = multi_community_nodes(&co, &rep, max).unwrap();
            let cur: Vec<Vec<usize>> = (0..5).map(|v| cover.memberships_of(v).to_vec()).collect();
            for (v, old) in prev.iter().enumerate() {
                for c in old {
                    assert!(cur[v].contains(c), "membership lost when raising max");
                }
            }
            prev = cur;
        }
    }

    #[test]
    fn cover_restricted_to_rep_membership_is_rep() {
        let g = two_triangles();
        let p = EngineParams::default().with_seed(3);
        let e = replicate(&g, &p, 20).unwrap();
        let rep = representative_partition(&e);
        let co = co_occurrence(&e);
        let cover = multi_community_nodes(&co, rep, 5).unwrap();
        for v in 0..g.node_count() {
            assert!(cover.memberships_of(v).contains(&rep.community_of(v)));
        }
    }

    #[test]
    fn subcluster_depth_one_is_consensus() {
        let g = two_triangles();
        let p = EngineParams::default().with_seed(2);
        let levels = subcluster(&g, &p, 1, 10).unwrap();
        assert_eq!(levels.len(), 1);
        let e = replicate(&g, &p, 10).unwrap();
        assert_eq!(&levels[0], representative_partition(&e));
    }

    // Four 5-cliques arranged as two densely linked pairs: level 1 finds
    // the two super-communities, level 2 splits each into its cliques.
    #[test]
    fn subcluster_splits_hierarchical_graph() {
        let clique = |base: usize, edges: &mut Vec<(usize, usize, f64)>| {
            for i in 0..5 {
                for j in (i + 1)..5 {
                    edges.push((base + i, base + j, 1.0));
                }
            }
        };
        let mut edges = Vec::new();
        for base in [0, 5, 10, 15] {
            clique(base, &mut edges);
        }
        // dense inter-clique links within each super-pair, enough to fuse
        // the pair at level 1 but weaker than the cliques themselves
        for i in 0..5 {
            for j in 0..3 {
                edges.push((i, 5 + (i + j) % 5, 1.0));
                edges.push((10 + i, 15 + (i + j) % 5, 1.0));
            }
        }
        let g = graph(20, &edges);
        let p = EngineParams::default().with_seed(1);
        let levels = subcluster(&g, &p, 2, 20).unwrap();
        let super_pairs = Partition::from_labels(&[0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 1, 1, 1, 1, 1, 1, 1, 1, 1, 1]);
        assert_eq!(levels[0], super_pairs, "level 1 should find the two super-communities");
        let cliques: Vec<usize> = (0..20).map(|v| v / 5).collect();
        assert_eq!(levels[1], Partition::from_labels(&cliques));
    }

    #[test]
    fn subcluster_levels_refine_parents() {
        let g = two_triangles();
        let p = EngineParams::default().with_seed(9);
        let levels = subcluster(&g, &p, 3, 10).unwrap();
        for w in levels.windows(2) {
            let (parent, child) = (&w[0], &w[1]);
            for members in child.communities() {
                let parents: BTreeSet<usize> =
                    members.iter().map(|&v| parent.community_of(v)).collect();
                assert_eq!(parents.len(), 1, "child community spans parents");
            }
        }
    }

    #[test]
    fn rejects_bad_arguments() {
        let g = two_triangles();
        let p = EngineParams::default();
        assert!(replicate(&g, &p, 0).is_err());
        assert!(subcluster(&g, &p, 0, 5).is_err());
        let e = replicate(&g, &p, 2).unwrap();
        let co = co_occurrence(&e);
        let rep = representative_partition(&e);
        assert!(multi_community_nodes(&co, rep, 0).is_err());
    }
}
