//! Cover comparison metrics: the Lancichinetti-Fortunato-Kertesz overlapping
//! normalized mutual information, the Omega index (chance-corrected pair
//! agreement over shared-membership counts, which reduces to the adjusted
//! Rand index for disjoint covers), and a multi-community F-score tracking
//! whether nodes with several memberships are assigned to all of their true
//! communities.

use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::graph::Cover;

fn check_same_nodes(a: &Cover, b: &Cover) -> Result<()> {
    if a.len() != b.len() {
        return Err(Error::NodeSetMismatch(format!(
            "{} vs {} nodes",
            a.len(),
            b.len()
        )));
    }
    Ok(())
}

/// Communities of a cover as (id, sorted member list), ordered by id.
fn sorted_communities(c: &Cover) -> Vec<(usize, Vec<usize>)> {
    let mut comms: Vec<(usize, Vec<usize>)> = c.community_members().into_iter().collect();
    comms.sort_unstable_by_key(|(id, _)| *id);
    comms
}

fn h(p: f64) -> f64 {
    if p > 0.0 {
        -p * p.ln()
    } else {
        0.0
    }
}

/// Binary membership entropy of one community over n nodes.
fn community_entropy(size: usize, n: usize) -> f64 {
    let p = size as f64 / n as f64;
    h(p) + h(1.0 - p)
}

/// Conditional entropies H(X_i | Y) for every community of `xs` against the
/// best-matching community of `ys`, normalized by H(X_i).
fn normalized_conditional(xs: &[(usize, Vec<usize>)], ys: &[(usize, Vec<usize>)], n: usize) -> f64 {
    let mut total = 0.0;
    for (_, x) in xs {
        let hx = community_entropy(x.len(), n);
        if hx == 0.0 {
            continue; // community spans all nodes: perfectly predictable
        }
        let mut best = hx;
        for (_, y) in ys {
            let inter = sorted_intersection_len(x, y);
            let p11 = inter as f64 / n as f64;
            let p10 = (x.len() - inter) as f64 / n as f64;
            let p01 = (y.len() - inter) as f64 / n as f64;
            let p00 = 1.0 - p11 - p10 - p01;
            // only accept positively associated pairs; otherwise the
            // unconditioned entropy stands
            if h(p11) + h(p00) >= h(p10) + h(p01) {
                let joint = h(p11) + h(p10) + h(p01) + h(p00);
                let hy = community_entropy(y.len(), n);
                best = best.min(joint - hy);
            }
        }
        total += best.max(0.0) / hx;
    }
    total / xs.len() as f64
}

fn sorted_intersection_len(a: &[usize], b: &[usize]) -> usize {
    let (mut i, mut j, mut count) = (0, 0, 0);
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            std::cmp::Ordering::Less => i += 1,
            std::cmp::Ordering::Greater => j += 1,
            std::cmp::Ordering::Equal => {
                count += 1;
                i += 1;
                j += 1;
            }
        }
    }
    count
}

/// Overlapping NMI in [0, 1]; 1 for identical covers. Does not reduce to the
/// disjoint NMI when both covers happen to be partitions.
pub fn overlapping_nmi(c1: &Cover, c2: &Cover) -> Result<f64> {
    check_same_nodes(c1, c2)?;
    let n = c1.len();
    if n == 0 {
        return Ok(1.0);
    }
    let xs = sorted_communities(c1);
    let ys = sorted_communities(c2);
    let nx = normalized_conditional(&xs, &ys, n);
    let ny = normalized_conditional(&ys, &xs, n);
    Ok((1.0 - 0.5 * (nx + ny)).clamp(0.0, 1.0))
}

/// Omega index: chance-corrected agreement on the number of communities each
/// node pair shares. Equals the adjusted Rand index when both covers are
/// disjoint partitions.
pub fn omega_index(c1: &Cover, c2: &Cover) -> Result<f64> {
    check_same_nodes(c1, c2)?;
    let n = c1.len();
    if n < 2 {
        return Ok(1.0);
    }
    let mut hist1: HashMap<usize, u64> = HashMap::new();
    let mut hist2: HashMap<usize, u64> = HashMap::new();
    let mut agreements = 0u64;
    for i in 0..n {
        for j in (i + 1)..n {
            let t1 = sorted_intersection_len(c1.memberships_of(i), c1.memberships_of(j));
            let t2 = sorted_intersection_len(c2.memberships_of(i), c2.memberships_of(j));
            *hist1.entry(t1).or_insert(0) += 1;
            *hist2.entry(t2).or_insert(0) += 1;
            if t1 == t2 {
                agreements += 1;
            }
        }
    }
    let pairs = (n * (n - 1) / 2) as f64;
    let observed = agreements as f64 / pairs;
    let expected: f64 = hist1
        .iter()
        .filter_map(|(k, &a)| hist2.get(k).map(|&b| a as f64 * b as f64))
        .sum::<f64>()
        / (pairs * pairs);
    if (1.0 - expected).abs() < 1e-15 {
        // expected agreement 1 forces observed agreement 1: identical
        // pair-count structure on both sides
        return Ok(1.0);
    }
    Ok((observed - expected) / (1.0 - expected))
}

/// Greedy best-overlap matching: each community of `from` is paired with the
/// community of `to` maximizing Jaccard overlap, ties to the lower id.
fn best_jaccard_match(
    from: &[(usize, Vec<usize>)],
    to: &[(usize, Vec<usize>)],
) -> HashMap<usize, usize> {
    let mut matching = HashMap::with_capacity(from.len());
    for (fid, fm) in from {
        let mut best_id = None;
        let mut best_j = -1.0;
        for (tid, tm) in to {
            let inter = sorted_intersection_len(fm, tm) as f64;
            let union = (fm.len() + tm.len()) as f64 - inter;
            let j = if union > 0.0 { inter / union } else { 0.0 };
            if j > best_j {
                best_j = j;
                best_id = Some(*tid);
            }
        }
        if let Some(id) = best_id {
            matching.insert(*fid, id);
        }
    }
    matching
}

/// Fraction of multi-community nodes of `of` whose mapped community set
/// equals their counterpart set in `against`; vacuously 1 when `of` has no
/// multi-community nodes.
fn multi_match_fraction(of: &Cover, against: &Cover, matching: &HashMap<usize, usize>) -> f64 {
    let multi = of.multi_nodes();
    if multi.is_empty() {
        return 1.0;
    }
    let mut correct = 0usize;
    for &v in &multi {
        if !against.is_multi(v) {
            continue;
        }
        let mut mapped: Vec<usize> = of
            .memberships_of(v)
            .iter()
            .filter_map(|c| matching.get(c).copied())
            .collect();
        mapped.sort_unstable();
        mapped.dedup();
        if mapped == against.memberships_of(v) {
            correct += 1;
        }
    }
    correct as f64 / multi.len() as f64
}

/// F-score for multi-community node recovery: precision over predicted
/// multi-community nodes, recall over true ones, each requiring the node's
/// community set to map onto its counterpart under best-Jaccard matching.
pub fn f_multi(pred: &Cover, truth: &Cover) -> Result<f64> {
    check_same_nodes(pred, truth)?;
    let pred_comms = sorted_communities(pred);
    let truth_comms = sorted_communities(truth);
    let forward = best_jaccard_match(&pred_comms, &truth_comms);
    let backward = best_jaccard_match(&truth_comms, &pred_comms);
    let precision = multi_match_fraction(pred, truth, &forward);
    let recall = multi_match_fraction(truth, pred, &backward);
    if precision + recall == 0.0 {
        return Ok(0.0);
    }
    Ok(2.0 * precision * recall / (precision + recall))
}
