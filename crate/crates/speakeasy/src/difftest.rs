//! Permutation test for community reorganization between two cohorts of
//! per-subject connectivity matrices.
//!
//! Each cohort's subject matrices are averaged, clustered with replicate
//! runs, and summarized by a co-occurrence matrix. Reference clusters come
//! from cohort A; the observed statistic per cluster is the change in mean
//! within-cluster co-occurrence rate from A to B. The null distribution
//! shuffles subjects into pseudo-cohorts of the original sizes and repeats
//! the same measurement, yielding an add-one two-sided p-value per cluster.

use rayon::prelude::*;
use serde::Serialize;

use crate::consensus::{co_occurrence, replicate, representative_partition, CoOccurrenceMatrix};
use crate::error::{Error, Result};
use crate::graph::Partition;
use crate::io::graph_from_dense;
use crate::labelprop::EngineParams;
use crate::metrics::nmi;
use crate::seed::derive_seed;

pub type DenseMatrix = Vec<Vec<f64>>;

// Both cohorts (and both pseudo-cohorts within a null round) cluster with a
// shared derived seed: identical inputs then yield identical ensembles, so
// the observed delta for equal cohorts is exactly zero and comparisons are
// paired (common random numbers).
const SEED_COHORT: u64 = 1;
const SEED_SHUFFLE: u64 = 3;
const SEED_PSEUDO: u64 = 4;

/// One cohort: a name plus per-subject dense symmetric matrices over a
/// shared node ordering.
#[derive(Debug, Clone)]
pub struct CohortData {
    label: String,
    subjects: Vec<DenseMatrix>,
}

impl CohortData {
    pub fn new(label: impl Into<String>, subjects: Vec<DenseMatrix>) -> Result<Self> {
        let label = label.into();
        if subjects.is_empty() {
            return Err(Error::InvalidParameter(format!(
                "cohort {label} has no subjects"
            )));
        }
        let n = subjects[0].len();
        for (idx, m) in subjects.iter().enumerate() {
            if m.len() != n || m.iter().any(|row| row.len() != n) {
                return Err(Error::NodeSetMismatch(format!(
                    "cohort {label} subject {idx} is not {n}x{n}"
                )));
            }
        }
        Ok(CohortData { label, subjects })
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn len(&self) -> usize {
        self.subjects.len()
    }

    pub fn is_empty(&self) -> bool {
        self.subjects.is_empty()
    }

    pub fn dim(&self) -> usize {
        self.subjects[0].len()
    }

    pub fn subjects(&self) -> &[DenseMatrix] {
        &self.subjects
    }
}

/// Element-wise mean of a set of equally sized matrices.
fn mean_matrix(subjects: &[&DenseMatrix]) -> DenseMatrix {
    let n = subjects[0].len();
    let scale = 1.0 / subjects.len() as f64;
    let mut out = vec![vec![0.0; n]; n];
    for m in subjects {
        for i in 0..n {
            for j in 0..n {
                out[i][j] += m[i][j] * scale;
            }
        }
    }
    out
}

fn cluster_mean(
    subjects: &[&DenseMatrix],
    p: &EngineParams,
    r: usize,
) -> Result<(Partition, CoOccurrenceMatrix)> {
    let g = graph_from_dense(&mean_matrix(subjects), true)?;
    let ensemble = replicate(&g, p, r)?;
    let rep = representative_partition(&ensemble).clone();
    Ok((rep, co_occurrence(&ensemble)))
}

/// Average the cohort's subject matrices, cluster the mean connectivity R
/// times, and return the representative partition with the co-occurrence
/// matrix of the ensemble.
pub fn cohort_cooccurrence(
    c: &CohortData,
    p: &EngineParams,
    r: usize,
) -> Result<(Partition, CoOccurrenceMatrix)> {
    let refs: Vec<&DenseMatrix> = c.subjects.iter().collect();
    cluster_mean(&refs, p, r)
}

/// Mean pairwise co-occurrence rate within each reference cluster;
/// singleton clusters score 1.0 by convention.
pub fn cluster_stat(ref_partition: &Partition, co: &CoOccurrenceMatrix) -> Vec<f64> {
    ref_partition
        .communities()
        .iter()
        .map(|members| {
            if members.len() < 2 {
                return 1.0;
            }
            let mut sum = 0.0;
            let mut pairs = 0usize;
            for (a, &i) in members.iter().enumerate() {
                for &j in &members[a + 1..] {
                    sum += co.rate(i, j);
                    pairs += 1;
                }
            }
            sum / pairs as f64
        })
        .collect()
}

/// Mean co-occurrence change between every pair of reference clusters
/// (diagonal = within-cluster change).
fn inter_cluster_delta(
    ref_partition: &Partition,
    co_a: &CoOccurrenceMatrix,
    co_b: &CoOccurrenceMatrix,
) -> Vec<Vec<f64>> {
    let communities = ref_partition.communities();
    let k = communities.len();
    let mut out = vec![vec![0.0; k]; k];
    for (c1, m1) in communities.iter().enumerate() {
        for (c2, m2) in communities.iter().enumerate() {
            let mut sum = 0.0;
            let mut count = 0usize;
            if c1 == c2 {
                for (a, &i) in m1.iter().enumerate() {
                    for &j in &m1[a + 1..] {
                        sum += co_b.rate(i, j) - co_a.rate(i, j);
                        count += 1;
                    }
                }
            } else {
                for &i in m1 {
                    for &j in m2 {
                        sum += co_b.rate(i, j) - co_a.rate(i, j);
                        count += 1;
                    }
                }
            }
            out[c1][c2] = if count == 0 { 0.0 } else { sum / count as f64 };
        }
    }
    out
}

/// Per-cluster summary of the permutation test.
#[derive(Debug, Clone, Serialize)]
pub struct ClusterDiff {
    pub cluster: usize,
    pub size: usize,
    pub stat_a: f64,
    pub stat_b: f64,
    pub observed_delta: f64,
    pub null_mean: f64,
    pub null_std: f64,
    pub p_value: f64,
}

/// Full permutation-test report.
#[derive(Debug, Clone, Serialize)]
pub struct DiffReport {
    pub cohort_a: String,
    pub cohort_b: String,
    pub n_permutations: usize,
    pub replicates: usize,
    pub null_replicates: usize,
    /// NMI between the two cohorts' representative partitions.
    pub partition_nmi: f64,
    pub clusters: Vec<ClusterDiff>,
    /// Mean co-occurrence change between reference-cluster pairs.
    pub inter_cluster_delta: Vec<Vec<f64>>,
}

/// Default null-loop replicate count: half the observed count, floor 20.
pub fn default_null_replicates(r: usize) -> usize {
    (r / 2).max(20)
}

/// Two-sided group-label permutation test over per-cluster co-occurrence
/// changes. Reference clusters come from cohort A's representative
/// partition; each permutation round shuffles the pooled subjects into
/// pseudo-cohorts of the original sizes and re-measures the same
/// per-reference-cluster statistic.
pub fn permutation_test(
    a: &CohortData,
    b: &CohortData,
    p: &EngineParams,
    r: usize,
    n_perm: usize,
    null_r: usize,
) -> Result<DiffReport> {
    if n_perm < 1 {
        return Err(Error::InvalidParameter("nPerm must be >= 1".into()));
    }
    if a.dim() != b.dim() {
        return Err(Error::NodeSetMismatch(format!(
            "cohort {} is {}x{} but cohort {} is {}x{}",
            a.label,
            a.dim(),
            a.dim(),
            b.label,
            b.dim(),
            b.dim()
        )));
    }
    let master = p.seed;
    let cohort_params = p.with_seed(derive_seed(master, SEED_COHORT));
    let (rep_a, co_a) = cohort_cooccurrence(a, &cohort_params, r)?;
    let (rep_b, co_b) = cohort_cooccurrence(b, &cohort_params, r)?;

    let stat_a = cluster_stat(&rep_a, &co_a);
    let stat_b = cluster_stat(&rep_a, &co_b);
    let observed: Vec<f64> = stat_a
        .iter()
        .zip(&stat_b)
        .map(|(sa, sb)| sb - sa)
        .collect();

    // pooled subjects, shuffled per round into pseudo-cohorts
    let pool: Vec<&DenseMatrix> = a.subjects.iter().chain(b.subjects.iter()).collect();
    let shuffle_root = derive_seed(master, SEED_SHUFFLE);
    let pseudo_root = derive_seed(master, SEED_PSEUDO);
    let null_deltas: Result<Vec<Vec<f64>>> = (0..n_perm)
        .into_par_iter()
        .map(|round| {
            use rand::seq::SliceRandom;
            use rand::SeedableRng;
            let mut rng =
                rand_chacha::ChaCha8Rng::seed_from_u64(derive_seed(shuffle_root, round as u64));
            let mut order: Vec<usize> = (0..pool.len()).collect();
            order.shuffle(&mut rng);
            let pseudo_a: Vec<&DenseMatrix> =
                order[..a.len()].iter().map(|&i| pool[i]).collect();
            let pseudo_b: Vec<&DenseMatrix> =
                order[a.len()..].iter().map(|&i| pool[i]).collect();
            let round_params = p.with_seed(derive_seed(pseudo_root, round as u64));
            let (_, pa) = cluster_mean(&pseudo_a, &round_params, null_r)?;
            let (_, pb) = cluster_mean(&pseudo_b, &round_params, null_r)?;
            let sa = cluster_stat(&rep_a, &pa);
            let sb = cluster_stat(&rep_a, &pb);
            Ok(sa.iter().zip(&sb).map(|(x, y)| y - x).collect())
        })
        .collect();
    let null_deltas = null_deltas?;

    let sizes: Vec<usize> = rep_a.communities().iter().map(|m| m.len()).collect();
    let clusters: Vec<ClusterDiff> = observed
        .iter()
        .enumerate()
        .map(|(c, &obs)| {
            let samples: Vec<f64> = null_deltas.iter().map(|row| row[c]).collect();
            let exceed = samples.iter().filter(|d| d.abs() >= obs.abs()).count();
            let p_value = (1 + exceed) as f64 / (1 + n_perm) as f64;
            let mean = samples.iter().sum::<f64>() / samples.len() as f64;
            let var = samples.iter().map(|d| (d - mean).powi(2)).sum::<f64>()
                / samples.len() as f64;
            ClusterDiff {
                cluster: c,
                size: sizes[c],
                stat_a: stat_a[c],
                stat_b: stat_b[c],
                observed_delta: obs,
                null_mean: mean,
                null_std: var.sqrt(),
                p_value,
            }
        })
        .collect();

    Ok(DiffReport {
        cohort_a: a.label.clone(),
        cohort_b: b.label.clone(),
        n_permutations: n_perm,
        replicates: r,
        null_replicates: null_r,
        partition_nmi: nmi(&rep_a, &rep_b)?,
        clusters,
        inter_cluster_delta: inter_cluster_delta(&rep_a, &co_a, &co_b),
    })
}

/// Parsed cohort manifest: exactly two cohorts of subject-matrix files.
#[derive(Debug, serde::Deserialize)]
struct ManifestFile {
    cohorts: Vec<ManifestCohort>,
}

#[derive(Debug, serde::Deserialize)]
struct ManifestCohort {
    name: String,
    subjects: Vec<String>,
}

/// Load a manifest JSON (`{"cohorts": [{"name", "subjects": [paths]}, ...]}`)
/// and the dense matrices it references. Paths are resolved relative to the
/// manifest's directory. Errors carry the JSON path of the offending field.
pub fn load_manifest(path: &std::path::Path) -> Result<(CohortData, CohortData)> {
    let text = std::fs::read_to_string(path).map_err(|source| Error::Io {
        path: path.display().to_string(),
        source,
    })?;
    let manifest: ManifestFile = serde_json::from_str(&text).map_err(|e| Error::Manifest {
        path: "$".into(),
        msg: e.to_string(),
    })?;
    if manifest.cohorts.len() != 2 {
        return Err(Error::Manifest {
            path: "cohorts".into(),
            msg: format!("expected exactly 2 cohorts, found {}", manifest.cohorts.len()),
        });
    }
    let base = path.parent().unwrap_or_else(|| std::path::Path::new("."));
    let mut loaded = Vec::new();
    for (ci, cohort) in manifest.cohorts.iter().enumerate() {
        if cohort.name.is_empty() {
            return Err(Error::Manifest {
                path: format!("cohorts[{ci}].name"),
                msg: "must be non-empty".into(),
            });
        }
        if cohort.subjects.is_empty() {
            return Err(Error::Manifest {
                path: format!("cohorts[{ci}].subjects"),
                msg: "must list at least one matrix file".into(),
            });
        }
        let mut matrices = Vec::new();
        for (si, rel) in cohort.subjects.iter().enumerate() {
            let mpath = base.join(rel);
            let rows = crate::io::read_dense_rows(&mpath).map_err(|e| Error::Manifest {
                path: format!("cohorts[{ci}].subjects[{si}]"),
                msg: e.to_string(),
            })?;
            matrices.push(rows);
        }
        loaded.push(CohortData::new(cohort.name.clone(), matrices)?);
    }
    let second = loaded.pop().unwrap();
    let first = loaded.pop().unwrap();
    Ok((first, second))
}
