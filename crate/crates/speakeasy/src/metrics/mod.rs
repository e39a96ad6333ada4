//! Partition and cover comparison statistics plus community quality scores.
//!
//! Pairwise partition metrics (NMI, ARI, RI, JI, F-measure, NVD) share one
//! contingency-table substrate. Cover metrics (overlapping NMI, Omega index,
//! multi-community F-score) and the modularity family (Q, Qds) live in their
//! own submodules. Everything here is a pure function of immutable inputs.

mod contingency;
mod overlap;
mod quality;

pub use contingency::{ari, f_measure, jaccard_index, nmi, nvd, rand_index, ContingencyTable};
pub use overlap::{f_multi, omega_index, overlapping_nmi};
pub use quality::{modularity_density_qds, modularity_q};

use serde::Serialize;

/// Flat key-value metric report; absent metrics are omitted from the JSON.
#[derive(Debug, Clone, Default, Serialize)]
pub struct MetricReport {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub nmi: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub ari: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub ri: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub ji: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub f: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub nvd: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub q: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub qds: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub onmi: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub omega: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub fmulti: Option<f64>,
}

use crate::error::Result;
use crate::graph::{Cover, Graph, Partition};

/// All disjoint-partition comparison metrics at once.
pub fn compare_partitions(p: &Partition, q: &Partition) -> Result<MetricReport> {
    Ok(MetricReport {
        nmi: Some(nmi(p, q)?),
        ari: Some(ari(p, q)?),
        ri: Some(rand_index(p, q)?),
        ji: Some(jaccard_index(p, q)?),
        f: Some(f_measure(p, q)?),
        nvd: Some(nvd(p, q)?),
        ..MetricReport::default()
    })
}

/// All cover comparison metrics at once.
pub fn compare_covers(pred: &Cover, truth: &Cover) -> Result<MetricReport> {
    Ok(MetricReport {
        onmi: Some(overlapping_nmi(pred, truth)?),
        omega: Some(omega_index(pred, truth)?),
        fmulti: Some(f_multi(pred, truth)?),
        ..MetricReport::default()
    })
}

/// Attach quality scores for a partition of `g` to a report.
pub fn add_quality(report: &mut MetricReport, g: &Graph, p: &Partition) -> Result<()> {
    report.q = Some(modularity_q(g, p)?);
    report.qds = Some(modularity_density_qds(g, p)?);
    Ok(())
}
