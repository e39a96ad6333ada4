//! Contingency table over two partitions plus the pairwise comparison
//! metrics derived from it. Degenerate 0/0 normalizations resolve to the
//! perfect-agreement value exactly when the partitions agree, so identical
//! inputs always score 1 (or 0 for the distance-flavored NVD).

use crate::error::{Error, Result};
use crate::graph::Partition;

/// Cross-tabulation of two partitions over the same node set:
/// `count(i, j)` is the number of nodes in community i of P and j of Q.
#[derive(Debug, Clone)]
pub struct ContingencyTable {
    counts: Vec<u64>,
    rows: usize,
    cols: usize,
    row_marginals: Vec<u64>,
    col_marginals: Vec<u64>,
    n: u64,
}

impl ContingencyTable {
    pub fn new(p: &Partition, q: &Partition) -> Result<Self> {
        if p.len() != q.len() {
            return Err(Error::NodeSetMismatch(format!(
                "{} vs {} nodes",
                p.len(),
                q.len()
            )));
        }
        let rows = p.num_communities();
        let cols = q.num_communities();
        let mut counts = vec![0u64; rows * cols];
        for v in 0..p.len() {
            counts[p.community_of(v) * cols + q.community_of(v)] += 1;
        }
        let mut row_marginals = vec![0u64; rows];
        let mut col_marginals = vec![0u64; cols];
        for i in 0..rows {
            for j in 0..cols {
                row_marginals[i] += counts[i * cols + j];
                col_marginals[j] += counts[i * cols + j];
            }
        }
        Ok(ContingencyTable {
            counts,
            rows,
            cols,
            row_marginals,
            col_marginals,
            n: p.len() as u64,
        })
    }

    pub fn count(&self, i: usize, j: usize) -> u64 {
        self.counts[i * self.cols + j]
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn row_marginal(&self, i: usize) -> u64 {
        self.row_marginals[i]
    }

    pub fn col_marginal(&self, j: usize) -> u64 {
        self.col_marginals[j]
    }

    pub fn total(&self) -> u64 {
        self.n
    }

    fn entropy(marginals: &[u64], n: f64) -> f64 {
        marginals
            .iter()
            .filter(|&&c| c > 0)
            .map(|&c| {
                let p = c as f64 / n;
                -p * p.ln()
            })
            .sum()
    }

    fn mutual_information(&self) -> f64 {
        let n = self.n as f64;
        let mut mi = 0.0;
        for i in 0..self.rows {
            for j in 0..self.cols {
                let nij = self.count(i, j);
                if nij > 0 {
                    let pij = nij as f64 / n;
                    mi += pij
                        * ((n * nij as f64)
                            / (self.row_marginals[i] as f64 * self.col_marginals[j] as f64))
                            .ln();
                }
            }
        }
        mi
    }

    /// Pair-confusion counts (n11, n10, n01, n00): pairs together in both,
    /// only in P, only in Q, in neither.
    fn pair_counts(&self) -> (u64, u64, u64, u64) {
        let choose2 = |x: u64| x * x.saturating_sub(1) / 2;
        let together_both: u64 = self.counts.iter().map(|&c| choose2(c)).sum();
        let together_p: u64 = self.row_marginals.iter().map(|&c| choose2(c)).sum();
        let together_q: u64 = self.col_marginals.iter().map(|&c| choose2(c)).sum();
        let all = choose2(self.n);
        let n11 = together_both;
        let n10 = together_p - together_both;
        let n01 = together_q - together_both;
        let n00 = all - together_p - together_q + together_both;
        (n11, n10, n01, n00)
    }
}

/// Normalized mutual information, 2I / (H(P) + H(Q)). Two zero-entropy
/// partitions are necessarily identical single-community partitions and
/// score 1.
pub fn nmi(p: &Partition, q: &Partition) -> Result<f64> {
    let t = ContingencyTable::new(p, q)?;
    let n = t.total() as f64;
    let h_p = ContingencyTable::entropy(&t.row_marginals, n);
    let h_q = ContingencyTable::entropy(&t.col_marginals, n);
    if h_p + h_q == 0.0 {
        return Ok(1.0);
    }
    Ok((2.0 * t.mutual_information() / (h_p + h_q)).clamp(0.0, 1.0))
}

/// Adjusted Rand index: chance-corrected pair agreement. May be slightly
/// negative for anti-correlated partitions. Degenerate denominators occur
/// only when both partitions are all-singletons or both single-community,
/// i.e. identical: scored 1.
pub fn ari(p: &Partition, q: &Partition) -> Result<f64> {
    let t = ContingencyTable::new(p, q)?;
    let choose2 = |x: u64| (x * x.saturating_sub(1)) as f64 / 2.0;
    let sum_ij: f64 = t.counts.iter().map(|&c| choose2(c)).sum();
    let sum_p: f64 = t.row_marginals.iter().map(|&c| choose2(c)).sum();
    let sum_q: f64 = t.col_marginals.iter().map(|&c| choose2(c)).sum();
    let all = choose2(t.n);
    if all == 0.0 {
        return Ok(1.0);
    }
    let expected = sum_p * sum_q / all;
    let max = 0.5 * (sum_p + sum_q);
    if (max - expected).abs() < f64::EPSILON * all {
        return Ok(1.0);
    }
    Ok((sum_ij - expected) / (max - expected))
}

/// Rand index: fraction of node pairs on which both partitions agree.
pub fn rand_index(p: &Partition, q: &Partition) -> Result<f64> {
    let t = ContingencyTable::new(p, q)?;
    let (n11, n10, n01, n00) = t.pair_counts();
    let all = n11 + n10 + n01 + n00;
    if all == 0 {
        return Ok(1.0);
    }
    Ok((n11 + n00) as f64 / all as f64)
}

/// Jaccard index over co-clustered pairs.
pub fn jaccard_index(p: &Partition, q: &Partition) -> Result<f64> {
    let t = ContingencyTable::new(p, q)?;
    let (n11, n10, n01, _) = t.pair_counts();
    let denom = n11 + n10 + n01;
    if denom == 0 {
        return Ok(1.0);
    }
    Ok(n11 as f64 / denom as f64)
}

/// Best-match F-measure, symmetrized by averaging both orientations. Each
/// community of one partition is matched to the community of the other that
/// maximizes 2|X n Y| / (|X| + |Y|), weighted by community size.
pub fn f_measure(p: &Partition, q: &Partition) -> Result<f64> {
    let t = ContingencyTable::new(p, q)?;
    if t.total() == 0 {
        return Ok(1.0);
    }
    let n = t.total() as f64;
    let mut forward = 0.0;
    for i in 0..t.rows {
        let mut best: f64 = 0.0;
        for j in 0..t.cols {
            let f = 2.0 * t.count(i, j) as f64
                / (t.row_marginals[i] + t.col_marginals[j]) as f64;
            best = best.max(f);
        }
        forward += t.row_marginals[i] as f64 / n * best;
    }
    let mut backward = 0.0;
    for j in 0..t.cols {
        let mut best: f64 = 0.0;
        for i in 0..t.rows {
            let f = 2.0 * t.count(i, j) as f64
                / (t.row_marginals[i] + t.col_marginals[j]) as f64;
            best = best.max(f);
        }
        backward += t.col_marginals[j] as f64 / n * best;
    }
    Ok(0.5 * (forward + backward))
}

/// Normalized Van Dongen distance, 0 for identical partitions and smaller
/// is better: 1 - (sum of best-match overlaps both ways) / 2n.
pub fn nvd(p: &Partition, q: &Partition) -> Result<f64> {
    let t = ContingencyTable::new(p, q)?;
    if t.total() == 0 {
        return Ok(0.0);
    }
    let n = t.total() as f64;
    let mut row_best_sum = 0u64;
    for i in 0..t.rows {
        row_best_sum += (0..t.cols).map(|j| t.count(i, j)).max().unwrap_or(0);
    }
    let mut col_best_sum = 0u64;
    for j in 0..t.cols {
        col_best_sum += (0..t.rows).map(|i| t.count(i, j)).max().unwrap_or(0);
    }
    Ok(1.0 - (row_best_sum + col_best_sum) as f64 / (2.0 * n))
}
