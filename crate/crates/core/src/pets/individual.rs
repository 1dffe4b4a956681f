//! Estimates for single constraints from basic counts, exact lookups,
//! histograms, samples, and finally fixed default values.

use super::selectivity;
use crate::query::{Constraint, PartialEstimate, Predicate, Provenance};
use crate::stats::{Member, SampleType, StatisticsCatalog};

/// Fixed guesses used when nothing better is known about a value predicate.
pub fn default_selectivity(op: Predicate) -> f64 {
    match op {
        Predicate::Eq => 0.1,
        Predicate::Neq => 0.9,
        _ => 1.0 / 3.0,
    }
}

/// Estimate for one constraint. With `defaults_only`, value predicates
/// skip straight to the default values.
pub fn individual_estimate(c: &Constraint, cat: &StatisticsCatalog, defaults_only: bool) -> PartialEstimate {
    let b = &cat.basic;
    let single = |s: f64, p: Provenance| PartialEstimate::single(c.clone(), s, p);
    match c {
        Constraint::Vertex { .. } => single(selectivity(b.n_vertices as f64, b.n_ids, 1), Provenance::Exact),
        Constraint::Edge { .. } => single(selectivity(b.n_edges as f64, b.n_ids, 1), Provenance::Exact),
        Constraint::Src { .. } | Constraint::Trg { .. } => {
            single(selectivity(b.n_edges as f64, b.n_ids, 2), Provenance::Exact)
        }
        Constraint::HasLabel { label, .. } => {
            let n = b.label_sel.get(label).map_or(0, |l| l.total());
            single(selectivity(n as f64, b.n_ids, 1), Provenance::Exact)
        }
        Constraint::HasKey { key, .. } => {
            let n = b.key_sel.get(key).copied().unwrap_or(0);
            single(selectivity(n as f64, b.n_ids, 1), Provenance::Exact)
        }
        Constraint::PropValue { key, op, value, .. } => {
            if !defaults_only {
                if let Some(n) = b.exact(key, *op, value) {
                    return single(selectivity(n as f64, b.n_ids, 1), Provenance::Exact);
                }
                if let Some(n) = cat.histogram(key).and_then(|h| h.estimate_count(*op, value)) {
                    return single(selectivity(n, b.n_ids, 1), Provenance::Histogram);
                }
                if let Some(s) = sample_estimate(c, cat) {
                    return single(s, Provenance::Sampling);
                }
            }
            single(default_selectivity(*op), Provenance::Default)
        }
    }
}

/// Fraction of sampled elements satisfying `c`, scaled to all ids.
fn sample_estimate(c: &Constraint, cat: &StatisticsCatalog) -> Option<f64> {
    let b = &cat.basic;
    let sample = cat
        .samples
        .iter()
        .filter(|s| !s.members.is_empty())
        .min_by_key(|s| s.pattern_type)?;
    let hits = |data: &crate::stats::ElementData| data.satisfies(c);
    let (hit, n) = sample.members.iter().fold((0usize, 0usize), |(h, n), m| match m {
        Member::Element(d) => (h + hits(d) as usize, n + 1),
        Member::EdgePattern { edge, .. } => (h + hits(edge) as usize, n + 1),
    });
    let frac = hit as f64 / n as f64;
    let population = match sample.pattern_type {
        SampleType::Id => b.n_ids,
        SampleType::Vertex => b.n_vertices,
        SampleType::EdgePattern => b.n_edges,
    };
    Some(selectivity(frac * population as f64, b.n_ids, 1))
}
