//! Planted-community benchmark generator with tunable mixing, power-law
//! degree and community-size distributions, and overlapping nodes holding a
//! fixed number of memberships.
//!
//! The construction follows the usual planted-partition recipe: sample a
//! degree sequence, sample community sizes, assign nodes to communities with
//! capacities respected, split each node's stubs into internal and external
//! shares by the mixing fraction, then wire stubs by random matching with
//! rejection of self-loops and duplicate edges plus a bounded completion /
//! rewiring pass. Fidelity is enforced by invariants (realized mixing, mean
//! degree, size bounds) rather than bit-exactness to any particular
//! generator implementation.

use std::collections::HashSet;

use rand::prelude::*;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::graph::{Cover, Edge, Graph};

const SIZE_SAMPLING_RETRIES: usize = 100;
const ASSIGNMENT_RETRIES: usize = 8;
const GENERATION_RETRIES: usize = 25;
const WIRING_SWEEPS: usize = 100;
const REWIRE_TRIES: usize = 200;

/// Parameters of one planted-community network.
#[derive(Debug, Clone, PartialEq)]
pub struct BenchmarkSpec {
    pub n: usize,
    /// Target mean degree.
    pub avg_degree: f64,
    pub max_degree: usize,
    /// Degree-sequence power-law exponent.
    pub gamma_degree: f64,
    /// Community-size power-law exponent.
    pub beta_community: f64,
    /// Fraction of each node's edges leaving its own communities.
    pub mu: f64,
    /// Fraction of nodes holding `om` memberships (applies when om >= 2).
    pub overlap_fraction: f64,
    /// Memberships per overlapping node.
    pub om: usize,
    pub min_community_size: usize,
    pub max_community_size: usize,
    pub seed: u64,
}

impl Default for BenchmarkSpec {
    fn default() -> Self {
        BenchmarkSpec {
            n: 1000,
            avg_degree: 15.0,
            max_degree: 50,
            gamma_degree: 2.0,
            beta_community: 1.0,
            mu: 0.1,
            overlap_fraction: 0.1,
            om: 1,
            min_community_size: 10,
            max_community_size: 100,
            seed: 0,
        }
    }
}

impl BenchmarkSpec {
    fn validate(&self) -> Result<()> {
        let err = |msg: &str| Err(Error::InfeasibleSpec(msg.into()));
        if self.n < 2 {
            return err("n must be >= 2");
        }
        if !(0.0..=1.0).contains(&self.mu) {
            return err("mu must lie in [0, 1]");
        }
        if !(0.0..=1.0).contains(&self.overlap_fraction) {
            return err("overlapFraction must lie in [0, 1]");
        }
        if self.om < 1 {
            return err("om must be >= 1");
        }
        if self.max_degree >= self.n {
            return err("maxDegree must be < n");
        }
        if self.avg_degree < 1.0 || self.avg_degree > self.max_degree as f64 {
            return err("avgDegree must lie in [1, maxDegree]");
        }
        if self.min_community_size < 2 || self.min_community_size > self.max_community_size {
            return err("community size bounds must satisfy 2 <= min <= max");
        }
        if self.max_community_size > self.n {
            return err("maxCommunitySize must be <= n");
        }
        if self.om > 1 && self.om * self.min_community_size > self.n {
            return err("om exceeds what the community size bounds can host");
        }
        Ok(())
    }

    fn overlap_count(&self) -> usize {
        if self.om >= 2 {
            (self.overlap_fraction * self.n as f64).round() as usize
        } else {
            0
        }
    }
}

/// integral of x^p over [a, b]
fn power_integral(p: f64, a: f64, b: f64) -> f64 {
    if (p + 1.0).abs() < 1e-12 {
        (b / a).ln()
    } else {
        (b.powf(p + 1.0) - a.powf(p + 1.0)) / (p + 1.0)
    }
}

/// Mean of a continuous truncated power law with density ~ x^-gamma on [a, b].
fn power_law_mean(gamma: f64, a: f64, b: f64) -> f64 {
    power_integral(1.0 - gamma, a, b) / power_integral(-gamma, a, b)
}

/// Lower cutoff such that the truncated power law on [cutoff, b] has the
/// requested mean; bisection, since the mean is increasing in the cutoff.
fn solve_min_cutoff(gamma: f64, b: f64, target_mean: f64) -> Result<f64> {
    let mut lo = 1.0f64;
    let mut hi = b;
    if power_law_mean(gamma, lo, b) > target_mean {
        return Err(Error::InfeasibleSpec(format!(
            "average degree {} below the minimum reachable with maxDegree {}",
            target_mean, b
        )));
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if power_law_mean(gamma, mid, b) < target_mean {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

/// Inverse-CDF sample from the continuous power law on [a, b].
fn sample_power_law(gamma: f64, a: f64, b: f64, rng: &mut ChaCha8Rng) -> f64 {
    let u: f64 = rng.gen();
    if (gamma - 1.0).abs() < 1e-12 {
        a * (b / a).powf(u)
    } else {
        let e = 1.0 - gamma;
        (a.powf(e) + u * (b.powf(e) - a.powf(e))).powf(1.0 / e)
    }
}

fn sample_degrees(spec: &BenchmarkSpec, rng: &mut ChaCha8Rng) -> Result<Vec<usize>> {
    let b = spec.max_degree as f64;
    let a = solve_min_cutoff(spec.gamma_degree, b, spec.avg_degree)?;
    Ok((0..spec.n)
        .map(|_| {
            let x = sample_power_law(spec.gamma_degree, a, b, rng);
            (x.round() as usize).clamp(1, spec.max_degree)
        })
        .collect())
}

/// Community sizes summing exactly to `slots`, each within the spec bounds,
/// with at least one community of size >= `min_required_max` so the largest
/// internal-degree share can be hosted.
fn sample_community_sizes(
    spec: &BenchmarkSpec,
    slots: usize,
    min_required_max: usize,
    rng: &mut ChaCha8Rng,
) -> Result<Vec<usize>> {
    let (smin, smax) = (spec.min_community_size, spec.max_community_size);
    'outer: for _ in 0..SIZE_SAMPLING_RETRIES {
        let mut sizes: Vec<usize> = Vec::new();
        let mut total = 0usize;
        while total < slots {
            let s = sample_power_law(spec.beta_community, smin as f64, smax as f64, rng)
                .round() as usize;
            let s = s.clamp(smin, smax);
            sizes.push(s);
            total += s;
        }
        let mut excess = total - slots;
        if excess > 0 {
            let last = *sizes.last().unwrap();
            if last >= excess + smin {
                *sizes.last_mut().unwrap() = last - excess;
            } else {
                // drop the last community and feed its remainder into the others
                sizes.pop();
                let mut deficit = slots - (total - last);
                let mut order: Vec<usize> = (0..sizes.len()).collect();
                order.shuffle(rng);
                let mut progressed = true;
                while deficit > 0 && progressed {
                    progressed = false;
                    for &i in &order {
                        if deficit == 0 {
                            break;
                        }
                        if sizes[i] < smax {
                            sizes[i] += 1;
                            deficit -= 1;
                            progressed = true;
                        }
                    }
                }
                if deficit > 0 {
                    continue 'outer;
                }
            }
            excess = 0;
        }
        debug_assert_eq!(sizes.iter().sum::<usize>(), slots);
        let _ = excess;
        let hosts_max = sizes.iter().max().is_some_and(|&m| m >= min_required_max);
        if sizes.len() >= spec.om.max(1) && hosts_max {
            return Ok(sizes);
        }
    }
    Err(Error::InfeasibleSpec(format!(
        "community sizes in [{}, {}] cannot tile {} membership slots",
        smin, smax, slots
    )))
}

/// Per-node internal-degree shares, one per membership, as even as the
/// integer split allows.
fn internal_shares(k_int: usize, memberships: usize, rng: &mut ChaCha8Rng) -> Vec<usize> {
    let base = k_int / memberships;
    let rem = k_int % memberships;
    let mut shares = vec![base; memberships];
    let mut order: Vec<usize> = (0..memberships).collect();
    order.shuffle(rng);
    for &i in order.iter().take(rem) {
        shares[i] += 1;
    }
    shares
}

struct Assignment {
    /// memberships[v] = community ids of v
    memberships: Vec<Vec<usize>>,
    /// internal degree share of v inside each of its communities
    shares: Vec<Vec<usize>>,
}

/// Assign nodes to communities with capacities respected. High-requirement
/// nodes go first; each picks its communities weighted by remaining capacity
/// among those large enough to host its internal share.
fn assign_memberships(
    spec: &BenchmarkSpec,
    degrees: &[usize],
    sizes: &[usize],
    overlapping: &[bool],
    rng: &mut ChaCha8Rng,
) -> Result<Assignment> {
    let n = spec.n;
    let k_int: Vec<usize> = degrees
        .iter()
        .map(|&k| ((1.0 - spec.mu) * k as f64).round() as usize)
        .collect();
    let m_of: Vec<usize> = (0..n).map(|v| if overlapping[v] { spec.om } else { 1 }).collect();
    let max_share: Vec<usize> = (0..n)
        .map(|v| k_int[v].div_ceil(m_of[v]))
        .collect();

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by_key(|&v| std::cmp::Reverse(max_share[v]));

    'attempt: for _ in 0..ASSIGNMENT_RETRIES {
        let mut capacity = sizes.to_vec();
        let mut stub_budget: Vec<usize> = sizes.iter().map(|&s| s * (s - 1)).collect();
        let mut memberships: Vec<Vec<usize>> = vec![Vec::new(); n];
        for &v in &order {
            let need = max_share[v];
            let mut picked: Vec<usize> = Vec::with_capacity(m_of[v]);
            for _ in 0..m_of[v] {
                let total: usize = sizes
                    .iter()
                    .enumerate()
                    .filter(|&(c, &s)| {
                        capacity[c] > 0
                            && s > need
                            && stub_budget[c] >= need
                            && !picked.contains(&c)
                    })
                    .map(|(c, _)| capacity[c])
                    .sum();
                if total == 0 {
                    continue 'attempt;
                }
                let mut draw = rng.gen_range(0..total);
                let mut chosen = None;
                for (c, &s) in sizes.iter().enumerate() {
                    if capacity[c] > 0 && s > need && stub_budget[c] >= need && !picked.contains(&c)
                    {
                        if draw < capacity[c] {
                            chosen = Some(c);
                            break;
                        }
                        draw -= capacity[c];
                    }
                }
                let c = chosen.expect("weighted draw within total");
                picked.push(c);
                capacity[c] -= 1;
                stub_budget[c] = stub_budget[c].saturating_sub(need);
            }
            memberships[v] = picked;
        }
        let shares: Vec<Vec<usize>> = (0..n)
            .map(|v| internal_shares(k_int[v], m_of[v], rng))
            .collect();
        return Ok(Assignment {
            memberships,
            shares,
        });
    }
    Err(Error::InfeasibleSpec(
        "community sizes cannot host the required internal degrees".into(),
    ))
}

struct EdgeSet {
    edges: HashSet<(usize, usize)>,
}

impl EdgeSet {
    fn new() -> Self {
        EdgeSet {
            edges: HashSet::new(),
        }
    }

    fn key(a: usize, b: usize) -> (usize, usize) {
        (a.min(b), a.max(b))
    }

    fn contains(&self, a: usize, b: usize) -> bool {
        self.edges.contains(&Self::key(a, b))
    }

    fn insert(&mut self, a: usize, b: usize) -> bool {
        a != b && self.edges.insert(Self::key(a, b))
    }

    fn remove(&mut self, a: usize, b: usize) {
        self.edges.remove(&Self::key(a, b));
    }
}

/// Random matching over a stub list: repeated shuffle-and-pair sweeps with
/// invalid pairs thrown back. Returns the stubs it could not place.
fn match_stubs<F: Fn(usize, usize) -> bool>(
    stubs: &mut Vec<usize>,
    edges: &mut EdgeSet,
    valid: F,
    rng: &mut ChaCha8Rng,
) -> Vec<usize> {
    for _ in 0..WIRING_SWEEPS {
        if stubs.len() < 2 {
            break;
        }
        stubs.shuffle(rng);
        let mut leftover = Vec::new();
        let mut progressed = false;
        let mut i = 0;
        while i + 1 < stubs.len() {
            let (a, b) = (stubs[i], stubs[i + 1]);
            if a != b && !edges.contains(a, b) && valid(a, b) {
                edges.insert(a, b);
                progressed = true;
            } else {
                leftover.push(a);
                leftover.push(b);
            }
            i += 2;
        }
        if i < stubs.len() {
            leftover.push(stubs[i]);
        }
        *stubs = leftover;
        if !progressed {
            break;
        }
    }
    std::mem::take(stubs)
}

/// Deterministic completion for leftover stubs inside one member list: scan
/// all non-adjacent pairs with remaining demand and connect them directly.
fn complete_within(
    members: &[usize],
    leftover: &[usize],
    edges: &mut EdgeSet,
) -> Vec<usize> {
    let mut remaining: std::collections::HashMap<usize, usize> = std::collections::HashMap::new();
    for &v in leftover {
        *remaining.entry(v).or_insert(0) += 1;
    }
    for i in 0..members.len() {
        let a = members[i];
        if remaining.get(&a).copied().unwrap_or(0) == 0 {
            continue;
        }
        for j in (i + 1)..members.len() {
            let b = members[j];
            if remaining.get(&a).copied().unwrap_or(0) == 0 {
                break;
            }
            if remaining.get(&b).copied().unwrap_or(0) == 0 || edges.contains(a, b) {
                continue;
            }
            edges.insert(a, b);
            *remaining.get_mut(&a).unwrap() -= 1;
            *remaining.get_mut(&b).unwrap() -= 1;
        }
    }
    let mut rest = Vec::new();
    for (v, c) in remaining {
        for _ in 0..c {
            rest.push(v);
        }
    }
    rest
}

/// Swap-rewiring for external stubs that direct matching could not place:
/// break an existing external edge (x, y) and connect (a, x) and (b, y).
fn rewire_external<F: Fn(usize, usize) -> bool>(
    leftover: Vec<usize>,
    external_edges: &mut Vec<(usize, usize)>,
    edges: &mut EdgeSet,
    valid: F,
    rng: &mut ChaCha8Rng,
) -> usize {
    let mut dropped = 0;
    let mut queue = leftover;
    while queue.len() >= 2 {
        let b = queue.pop().unwrap();
        let a = queue.pop().unwrap();
        let mut placed = false;
        if a != b && !edges.contains(a, b) && valid(a, b) {
            edges.insert(a, b);
            external_edges.push((a, b));
            placed = true;
        } else if !external_edges.is_empty() {
            for _ in 0..REWIRE_TRIES {
                let idx = rng.gen_range(0..external_edges.len());
                let (x, y) = external_edges[idx];
                let ok = a != x
                    && b != y
                    && !edges.contains(a, x)
                    && !edges.contains(b, y)
                    && valid(a, x)
                    && valid(b, y);
                if ok {
                    edges.remove(x, y);
                    external_edges.swap_remove(idx);
                    edges.insert(a, x);
                    edges.insert(b, y);
                    external_edges.push((a, x));
                    external_edges.push((b, y));
                    placed = true;
                    break;
                }
            }
        }
        if !placed {
            dropped += 2;
        }
    }
    dropped + queue.len()
}

/// Realized statistics of a generated instance, for sidecar reports.
#[derive(Debug, Clone, serde::Serialize)]
pub struct RealizedStats {
    pub nodes: usize,
    pub edges: usize,
    pub mean_degree: f64,
    pub realized_mixing: f64,
    pub communities: usize,
    pub multi_membership_nodes: usize,
    pub dropped_stubs: usize,
}

/// Generate one planted-community graph and its ground-truth cover.
pub fn generate(spec: &BenchmarkSpec) -> Result<(Graph, Cover)> {
    generate_with_stats(spec).map(|(g, c, _)| (g, c))
}

/// As [`generate`], also returning realized statistics.
pub fn generate_with_stats(spec: &BenchmarkSpec) -> Result<(Graph, Cover, RealizedStats)> {
    spec.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let degrees = sample_degrees(spec, &mut rng)?;

    let n_ov = spec.overlap_count();
    let mut overlapping = vec![false; spec.n];
    {
        let mut ids: Vec<usize> = (0..spec.n).collect();
        ids.shuffle(&mut rng);
        for &v in ids.iter().take(n_ov) {
            overlapping[v] = true;
        }
    }
    let slots = spec.n + n_ov * (spec.om - 1);

    // the largest per-community internal share must fit inside a community
    let largest_share = (0..spec.n)
        .map(|v| {
            let k_int = ((1.0 - spec.mu) * degrees[v] as f64).round() as usize;
            let m = if overlapping[v] { spec.om } else { 1 };
            k_int.div_ceil(m)
        })
        .max()
        .unwrap_or(0);
    if largest_share + 1 > spec.max_community_size {
        return Err(Error::InfeasibleSpec(format!(
            "internal degree share {} cannot fit in communities of size <= {}",
            largest_share, spec.max_community_size
        )));
    }

    let (sizes, assignment) = {
        let mut result = None;
        let mut last_err = None;
        for _ in 0..GENERATION_RETRIES {
            let sizes = sample_community_sizes(spec, slots, largest_share + 1, &mut rng)?;
            match assign_memberships(spec, &degrees, &sizes, &overlapping, &mut rng) {
                Ok(a) => {
                    result = Some((sizes, a));
                    break;
                }
                Err(e) => last_err = Some(e),
            }
        }
        match result {
            Some(r) => r,
            None => return Err(last_err.expect("at least one attempt ran")),
        }
    };

    let mut members: Vec<Vec<usize>> = vec![Vec::new(); sizes.len()];
    for (v, ms) in assignment.memberships.iter().enumerate() {
        for &c in ms {
            members[c].push(v);
        }
    }

    let mut edges = EdgeSet::new();
    let mut dropped = 0usize;

    // internal wiring, one community at a time
    for (c, member_list) in members.iter().enumerate() {
        let mut stubs: Vec<usize> = Vec::new();
        for &v in member_list {
            let slot = assignment.memberships[v].iter().position(|&x| x == c).unwrap();
            for _ in 0..assignment.shares[v][slot] {
                stubs.push(v);
            }
        }
        let leftover = match_stubs(&mut stubs, &mut edges, |_, _| true, &mut rng);
        dropped += complete_within(member_list, &leftover, &mut edges).len();
    }

    // external wiring across communities
    let share_sum: Vec<usize> = assignment.shares.iter().map(|s| s.iter().sum()).collect();
    let mut ext_stubs: Vec<usize> = Vec::new();
    for v in 0..spec.n {
        for _ in 0..degrees[v].saturating_sub(share_sum[v]) {
            ext_stubs.push(v);
        }
    }
    let disjoint = |a: usize, b: usize| {
        assignment.memberships[a]
            .iter()
            .all(|c| !assignment.memberships[b].contains(c))
    };
    let mut external_edges: Vec<(usize, usize)> = Vec::new();
    {
        // matching sweeps first, recording placed external edges for rewiring
        let before: HashSet<(usize, usize)> = edges.edges.clone();
        let leftover = match_stubs(&mut ext_stubs, &mut edges, disjoint, &mut rng);
        external_edges = edges.edges.difference(&before).copied().collect();
        external_edges.sort_unstable();
        dropped += rewire_external(leftover, &mut external_edges, &mut edges, disjoint, &mut rng);
    }

    let mut edge_list: Vec<(usize, usize)> = edges.edges.into_iter().collect();
    edge_list.sort_unstable();
    let graph_edges: Vec<Edge> = edge_list
        .into_iter()
        .map(|(src, dst)| Edge {
            src,
            dst,
            weight: 1.0,
        })
        .collect();
    let graph = Graph::new(spec.n, graph_edges, false)?;
    let cover = Cover::new(assignment.memberships)?;

    let stats = RealizedStats {
        nodes: spec.n,
        edges: graph.edge_count(),
        mean_degree: 2.0 * graph.edge_count() as f64 / spec.n as f64,
        realized_mixing: realized_mixing(&graph, &cover),
        communities: sizes.len(),
        multi_membership_nodes: (0..spec.n).filter(|&v| cover.is_multi(v)).count(),
        dropped_stubs: dropped,
    };
    Ok((graph, cover, stats))
}

/// Fraction of edges whose endpoints share no true community.
pub fn realized_mixing(g: &Graph, truth: &Cover) -> f64 {
    if g.edge_count() == 0 {
        return 0.0;
    }
    let between = g
        .edges()
        .iter()
        .filter(|e| {
            truth
                .memberships_of(e.src)
                .iter()
                .all(|c| !truth.memberships_of(e.dst).contains(c))
        })
        .count();
    between as f64 / g.edge_count() as f64
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn mu_zero_has_no_external_edges() {
        let spec = BenchmarkSpec {
            n: 300,
            avg_degree: 8.0,
            max_degree: 20,
            mu: 0.0,
            om: 1,
            min_community_size: 10,
            max_community_size: 50,
            seed: 4,
            ..BenchmarkSpec::default()
        };
        let (g, truth, stats) = generate_with_stats(&spec).unwrap();
        assert_eq!(realized_mixing(&g, &truth), 0.0);
        assert!(stats.edges > 0);
    }

    #[test]
    fn paper_regime_hits_mixing_and_degree_targets() {
        let spec = BenchmarkSpec {
            seed: 7,
            ..BenchmarkSpec::default()
        };
        // n=1000, <k>=15, kmax=50, gamma=2, beta=1, mu=0.1
        let (g, truth, stats) = generate_with_stats(&spec).unwrap();
        let realized = realized_mixing(&g, &truth);
        assert!(
            (realized - spec.mu).abs() <= 0.02,
            "realized mixing {realized} vs target {}",
            spec.mu
        );
        assert!(
            (stats.mean_degree - spec.avg_degree).abs() <= 0.1 * spec.avg_degree,
            "mean degree {} vs target {}",
            stats.mean_degree,
            spec.avg_degree
        );
    }

    #[test]
    fn community_sizes_respect_bounds() {
        let spec = BenchmarkSpec {
            n: 500,
            seed: 3,
            ..BenchmarkSpec::default()
        };
        let (_, truth, _) = generate_with_stats(&spec).unwrap();
        for (_, members) in truth.community_members() {
            assert!(members.len() >= spec.min_community_size);
            assert!(members.len() <= spec.max_community_size);
        }
    }

    #[test]
    fn overlap_counts_are_exact() {
        let spec = BenchmarkSpec {
            overlap_fraction: 0.1,
            om: 3,
            avg_degree: 20.0,
            seed: 5,
            ..BenchmarkSpec::default()
        };
        let (_, truth, _) = generate_with_stats(&spec).unwrap();
        let mut triple = 0;
        let mut single = 0;
        for v in 0..spec.n {
            match truth.memberships_of(v).len() {
                1 => single += 1,
                3 => triple += 1,
                other => panic!("node {v} has {other} memberships"),
            }
        }
        assert_eq!(triple, 100);
        assert_eq!(single, 900);
    }

    #[test]
    fn om_one_means_disjoint_truth() {
        let spec = BenchmarkSpec {
            n: 400,
            om: 1,
            overlap_fraction: 0.1,
            seed: 9,
            ..BenchmarkSpec::default()
        };
        let (_, truth, _) = generate_with_stats(&spec).unwrap();
        for v in 0..spec.n {
            assert_eq!(truth.memberships_of(v).len(), 1);
        }
    }

    #[test]
    fn generation_is_deterministic() {
        let spec = BenchmarkSpec {
            n: 300,
            om: 2,
            seed: 11,
            ..BenchmarkSpec::default()
        };
        let (g1, t1, _) = generate_with_stats(&spec).unwrap();
        let (g2, t2, _) = generate_with_stats(&spec).unwrap();
        assert_eq!(g1.edges(), g2.edges());
        assert_eq!(t1, t2);
    }

    #[test]
    fn infeasible_spec_is_reported() {
        let spec = BenchmarkSpec {
            n: 30,
            min_community_size: 20,
            max_community_size: 25,
            om: 2,
            overlap_fraction: 0.5,
            avg_degree: 5.0,
            max_degree: 10,
            ..BenchmarkSpec::default()
        };
        // 15 overlapping nodes need 2 distinct communities of >= 20 nodes,
        // but 30 + 15 = 45 slots cannot be tiled by sizes in [20, 25] other
        // than 20+25, and hosting requirements then collide
        match generate(&spec) {
            Err(Error::InfeasibleSpec(_)) => {}
            Ok(_) => {} // tiling 45 = 20 + 25 can succeed; force harder case below
            Err(e) => panic!("unexpected error {e}"),
        }
        let really_bad = BenchmarkSpec {
            n: 30,
            min_community_size: 28,
            max_community_size: 29,
            ..BenchmarkSpec::default()
        };
        assert!(matches!(
            generate(&really_bad),
            Err(Error::InfeasibleSpec(_))
        ));
    }

    #[test]
    fn realized_mixing_trivial_cases() {
        use crate::graph::Edge;
        let g = Graph::new(
            3,
            vec![
                Edge { src: 0, dst: 1, weight: 1.0 },
                Edge { src: 1, dst: 2, weight: 1.0 },
            ],
            false,
        )
        .unwrap();
        let single = Cover::new(vec![vec![0], vec![0], vec![0]]).unwrap();
        assert_eq!(realized_mixing(&g, &single), 0.0);
        let split = Cover::new(vec![vec![0], vec![1], vec![0]]).unwrap();
        assert_eq!(realized_mixing(&g, &split), 1.0);
    }

    #[test]
    fn pipeline_recovers_planted_partition_at_mu_zero() {
        use crate::consensus::{replicate, representative_partition};
        use crate::graph::Partition;
        use crate::labelprop::EngineParams;
        use crate::metrics::nmi;
        let mut perfect = 0;
        let total = 20;
        for seed in 0..total {
            // communities dense enough to be unambiguous: sparse random
            // components (internal degree ~6) can legitimately split
            let spec = BenchmarkSpec {
                n: 250,
                avg_degree: 12.0,
                max_degree: 24,
                mu: 0.0,
                om: 1,
                min_community_size: 10,
                max_community_size: 30,
                seed,
                ..BenchmarkSpec::default()
            };
            let (g, truth, _) = generate_with_stats(&spec).unwrap();
            let truth_part = Partition::from_labels(
                &(0..spec.n)
                    .map(|v| truth.memberships_of(v)[0])
                    .collect::<Vec<_>>(),
            );
            let params = EngineParams::default().with_seed(seed);
            let e = replicate(&g, &params, 20).unwrap();
            let rep = representative_partition(&e);
            if (nmi(rep, &truth_part).unwrap() - 1.0).abs() < 1e-12 {
                perfect += 1;
            }
        }
        assert!(
            perfect * 100 >= total * 95,
            "only {perfect}/{total} instances recovered exactly"
        );
    }
}
