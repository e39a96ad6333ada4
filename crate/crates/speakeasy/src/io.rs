//! File ingestion and serialization: edge-list TSV, dense-matrix TSV,
//! partition/cover TSV, co-occurrence TSV. All files are UTF-8 with LF line
//! endings; lines starting with `#` are comments.

use std::fs;
use std::path::Path;

use crate::error::{Error, Result};
use crate::graph::{Cover, Edge, Graph, Partition};

fn read_to_string(path: &Path) -> Result<String> {
    fs::read_to_string(path).map_err(|source| Error::Io {
        path: path.display().to_string(),
        source,
    })
}

fn write_string(path: &Path, contents: &str) -> Result<()> {
    fs::write(path, contents).map_err(|source| Error::Io {
        path: path.display().to_string(),
        source,
    })
}

fn parse_err(path: &Path, line: usize, msg: impl Into<String>) -> Error {
    Error::Parse {
        path: path.display().to_string(),
        line,
        msg: msg.into(),
    }
}

/// Load a TSV edge list: `src<TAB>dst<TAB>weight`, the weight column
/// optional (default 1.0). Node count is 1 + the largest id encountered.
pub fn load_edge_list(path: &Path, directed: bool) -> Result<Graph> {
    let text = read_to_string(path)?;
    let mut edges = Vec::new();
    let mut max_id: Option<usize> = None;
    for (idx, line) in text.lines().enumerate() {
        let lineno = idx + 1;
        let line = line.trim_end_matches('\r');
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let mut fields = line.split('\t');
        let src: usize = fields
            .next()
            .ok_or_else(|| parse_err(path, lineno, "missing source column"))?
            .trim()
            .parse()
            .map_err(|_| parse_err(path, lineno, "source is not a node id"))?;
        let dst: usize = fields
            .next()
            .ok_or_else(|| parse_err(path, lineno, "missing destination column"))?
            .trim()
            .parse()
            .map_err(|_| parse_err(path, lineno, "destination is not a node id"))?;
        let weight: f64 = match fields.next() {
            Some(w) => w
                .trim()
                .parse()
                .map_err(|_| parse_err(path, lineno, "weight is not a number"))?,
            None => 1.0,
        };
        if fields.next().is_some() {
            return Err(parse_err(path, lineno, "too many columns"));
        }
        if src == dst {
            return Err(parse_err(path, lineno, format!("self-loop at node {}", src)));
        }
        if !weight.is_finite() {
            return Err(parse_err(path, lineno, "non-finite weight"));
        }
        max_id = Some(max_id.map_or(src.max(dst), |m| m.max(src).max(dst)));
        edges.push(Edge { src, dst, weight });
    }
    let n = max_id.map_or(0, |m| m + 1);
    Graph::new(n, edges, directed)
}

/// Serialize a graph back to edge-list TSV.
pub fn write_edge_list(path: &Path, g: &Graph) -> Result<()> {
    let mut out = String::new();
    for e in g.edges() {
        out.push_str(&format!("{}\t{}\t{}\n", e.src, e.dst, e.weight));
    }
    write_string(path, &out)
}

/// Parse a dense numeric TSV file: rows of tab-separated numbers, an
/// optional single header row of node names, `#` comments ignored.
fn parse_dense(path: &Path) -> Result<(Vec<Vec<f64>>, Option<Vec<String>>)> {
    let text = read_to_string(path)?;
    let mut rows: Vec<Vec<f64>> = Vec::new();
    let mut names: Option<Vec<String>> = None;
    let mut first_data_line = true;
    for (idx, line) in text.lines().enumerate() {
        let lineno = idx + 1;
        let line = line.trim_end_matches('\r');
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let fields: Vec<&str> = line.split('\t').collect();
        if first_data_line {
            first_data_line = false;
            if fields.iter().any(|f| f.trim().parse::<f64>().is_err()) {
                names = Some(fields.iter().map(|s| s.trim().to_string()).collect());
                continue;
            }
        }
        let row: Vec<f64> = fields
            .iter()
            .enumerate()
            .map(|(col, f)| {
                f.trim()
                    .parse::<f64>()
                    .map_err(|_| parse_err(path, lineno, format!("column {} is not a number", col + 1)))
            })
            .collect::<Result<_>>()?;
        rows.push(row);
    }
    Ok((rows, names))
}

/// Read a square dense numeric TSV matrix (header row allowed, discarded).
pub fn read_dense_rows(path: &Path) -> Result<Vec<Vec<f64>>> {
    let (rows, _) = parse_dense(path)?;
    let n = rows.len();
    for (i, row) in rows.iter().enumerate() {
        if row.len() != n {
            return Err(Error::InvalidGraph(format!(
                "matrix in {} is not square: row {} has {} entries for {} rows",
                path.display(),
                i,
                row.len(),
                n
            )));
        }
    }
    Ok(rows)
}

/// Load a square numeric TSV matrix as a fully connected weighted undirected
/// graph. An optional single header row provides node names. The matrix must
/// be symmetric within 1e-9. Zero-weight entries are dropped (they carry no
/// label-propagation signal); with `zero_diagonal` the diagonal is discarded,
/// otherwise a nonzero diagonal entry is a self-loop error.
pub fn from_dense_matrix(path: &Path, zero_diagonal: bool) -> Result<Graph> {
    let (rows, names) = parse_dense(path)?;
    if let Some(names) = &names {
        if names.len() != rows.len() {
            return Err(Error::InvalidGraph(format!(
                "header has {} names but matrix has {} rows",
                names.len(),
                rows.len()
            )));
        }
    }
    let g = graph_from_dense(&rows, zero_diagonal)?;
    match names {
        Some(names) => g.with_names(names),
        None => Ok(g),
    }
}

/// Build an undirected graph from an in-memory dense symmetric matrix.
/// Shared by the file loader and the cohort pipelines.
pub fn graph_from_dense(rows: &[Vec<f64>], zero_diagonal: bool) -> Result<Graph> {
    let n = rows.len();
    for (i, row) in rows.iter().enumerate() {
        if row.len() != n {
            return Err(Error::InvalidGraph(format!(
                "matrix is not square: row {} has {} entries for {} rows",
                i,
                row.len(),
                n
            )));
        }
    }
    let mut edges = Vec::new();
    for i in 0..n {
        if !zero_diagonal && rows[i][i] != 0.0 {
            return Err(Error::InvalidGraph(format!(
                "nonzero diagonal entry at node {}",
                i
            )));
        }
        for j in (i + 1)..n {
            let (a, b) = (rows[i][j], rows[j][i]);
            if !a.is_finite() || !b.is_finite() {
                return Err(Error::InvalidGraph(format!(
                    "non-finite entry at ({}, {})",
                    i, j
                )));
            }
            if (a - b).abs() > 1e-9 {
                return Err(Error::InvalidGraph(format!(
                    "matrix asymmetric at ({}, {}): {} vs {}",
                    i, j, a, b
                )));
            }
            if a != 0.0 {
                edges.push(Edge {
                    src: i,
                    dst: j,
                    weight: a,
                });
            }
        }
    }
    Graph::new(n, edges, false)
}

/// Write a partition as `node<TAB>community` rows in node order.
pub fn write_partition(path: &Path, p: &Partition) -> Result<()> {
    write_string(path, &partition_to_string(p))
}

pub fn partition_to_string(p: &Partition) -> String {
    let mut out = String::new();
    for (v, &c) in p.assignment().iter().enumerate() {
        out.push_str(&format!("{}\t{}\n", v, c));
    }
    out
}

/// Read a partition written by [`write_partition`]. Every node in `0..n`
/// must appear exactly once and community ids must be dense.
pub fn read_partition(path: &Path) -> Result<Partition> {
    let text = read_to_string(path)?;
    let mut pairs: Vec<(usize, usize)> = Vec::new();
    for (idx, line) in text.lines().enumerate() {
        let lineno = idx + 1;
        let line = line.trim_end_matches('\r');
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let mut fields = line.split('\t');
        let node: usize = fields
            .next()
            .ok_or_else(|| parse_err(path, lineno, "missing node column"))?
            .trim()
            .parse()
            .map_err(|_| parse_err(path, lineno, "node is not an id"))?;
        let comm: usize = fields
            .next()
            .ok_or_else(|| parse_err(path, lineno, "missing community column"))?
            .trim()
            .parse()
            .map_err(|_| parse_err(path, lineno, "community is not an id"))?;
        if fields.next().is_some() {
            return Err(parse_err(path, lineno, "too many columns"));
        }
        pairs.push((node, comm));
    }
    let n = pairs.len();
    let mut assignment = vec![usize::MAX; n];
    for (node, comm) in pairs {
        if node >= n {
            return Err(Error::InvalidPartition(format!(
                "node id {} out of range for {} rows",
                node, n
            )));
        }
        if assignment[node] != usize::MAX {
            return Err(Error::InvalidPartition(format!("node {} listed twice", node)));
        }
        assignment[node] = comm;
    }
    Partition::new(assignment)
}

/// Write a cover as `node<TAB>c1,c2,...` rows in node order.
pub fn write_cover(path: &Path, c: &Cover) -> Result<()> {
    write_string(path, &cover_to_string(c))
}

pub fn cover_to_string(c: &Cover) -> String {
    let mut out = String::new();
    for v in 0..c.len() {
        let ids: Vec<String> = c.memberships_of(v).iter().map(|m| m.to_string()).collect();
        out.push_str(&format!("{}\t{}\n", v, ids.join(",")));
    }
    out
}

/// Read a cover written by [`write_cover`].
pub fn read_cover(path: &Path) -> Result<Cover> {
    let text = read_to_string(path)?;
    let mut rows: Vec<(usize, Vec<usize>)> = Vec::new();
    for (idx, line) in text.lines().enumerate() {
        let lineno = idx + 1;
        let line = line.trim_end_matches('\r');
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let mut fields = line.split('\t');
        let node: usize = fields
            .next()
            .ok_or_else(|| parse_err(path, lineno, "missing node column"))?
            .trim()
            .parse()
            .map_err(|_| parse_err(path, lineno, "node is not an id"))?;
        let ids = fields
            .next()
            .ok_or_else(|| parse_err(path, lineno, "missing membership column"))?;
        if fields.next().is_some() {
            return Err(parse_err(path, lineno, "too many columns"));
        }
        let memberships: Vec<usize> = ids
            .split(',')
            .map(|s| {
                s.trim()
                    .parse::<usize>()
                    .map_err(|_| parse_err(path, lineno, "community is not an id"))
            })
            .collect::<Result<_>>()?;
        rows.push((node, memberships));
    }
    let n = rows.len();
    let mut memberships: Vec<Option<Vec<usize>>> = vec![None; n];
    for (node, ms) in rows {
        if node >= n {
            return Err(Error::InvalidCover(format!(
                "node id {} out of range for {} rows",
                node, n
            )));
        }
        if memberships[node].is_some() {
            return Err(Error::InvalidCover(format!("node {} listed twice", node)));
        }
        memberships[node] = Some(ms);
    }
    Cover::new(memberships.into_iter().map(|m| m.unwrap()).collect())
}
