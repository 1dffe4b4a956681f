//! Workload runs against the exact oracle, q-error summaries, and a
//! synthetic graph and workload generator.

mod generate;
mod workload;

pub use generate::{generate_graph, generate_workload, DegreeDistribution, GraphSpec, WorkloadSpec};
pub use workload::{
    load_workload, run_workload, subqueries, to_doc, write_csv, write_workload, BenchOptions, BenchRow, Skipped,
    WorkloadQuery, WorkloadReport,
};

use std::collections::BTreeMap;

use serde::Serialize;

/// `max(est / real, real / est)`; infinite when exactly one side is zero
/// and 1 when both are.
pub fn qerror(est: f64, real: f64) -> f64 {
    debug_assert!(est >= 0.0 && real >= 0.0);
    match (est == 0.0, real == 0.0) {
        (true, true) => 1.0,
        (true, false) | (false, true) => f64::INFINITY,
        _ => (est / real).max(real / est),
    }
}

/// Nearest-rank percentile of an already sorted slice.
pub fn percentile(sorted: &[f64], p: f64) -> f64 {
    if sorted.is_empty() {
        return f64::NAN;
    }
    let rank = ((p / 100.0) * sorted.len() as f64).ceil() as usize;
    sorted[rank.clamp(1, sorted.len()) - 1]
}

/// Lower median of a sorted slice.
pub fn median(sorted: &[f64]) -> f64 {
    percentile(sorted, 50.0)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Distribution {
    pub count: usize,
    pub median: f64,
    pub p90: f64,
    pub p99: f64,
    pub max: f64,
}

impl Distribution {
    pub fn of(values: impl IntoIterator<Item = f64>) -> Self {
        let mut v: Vec<f64> = values.into_iter().collect();
        v.sort_by(f64::total_cmp);
        Distribution {
            count: v.len(),
            median: median(&v),
            p90: percentile(&v, 90.0),
            p99: percentile(&v, 99.0),
            max: v.last().copied().unwrap_or(f64::NAN),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct QErrorSummary {
    pub config: String,
    pub qerror: Distribution,
    pub est_ms: Distribution,
    /// Q-errors split by the number of query edges.
    pub by_edges: BTreeMap<usize, Distribution>,
}

/// One summary per configuration, in order of first appearance.
pub fn summarize(rows: &[BenchRow]) -> Vec<QErrorSummary> {
    let mut order: Vec<&str> = Vec::new();
    for r in rows {
        if !order.contains(&r.config.as_str()) {
            order.push(&r.config);
        }
    }
    order
        .into_iter()
        .map(|cfg| {
            let mine: Vec<&BenchRow> = rows.iter().filter(|r| r.config == cfg).collect();
            let mut parts: BTreeMap<usize, Vec<f64>> = BTreeMap::new();
            for r in &mine {
                parts.entry(r.n_edge_ids).or_default().push(r.qerror);
            }
            QErrorSummary {
                config: cfg.to_string(),
                qerror: Distribution::of(mine.iter().map(|r| r.qerror)),
                est_ms: Distribution::of(mine.iter().map(|r| r.est_ms)),
                by_edges: parts.into_iter().map(|(k, v)| (k, Distribution::of(v))).collect(),
            }
        })
        .collect()
}
