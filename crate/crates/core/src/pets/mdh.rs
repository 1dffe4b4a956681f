use std::collections::BTreeSet;

use super::selectivity;
use crate::query::{Constraint, PartialEstimate, Predicate, Provenance, QueryPattern, QueryValue};
use crate::stats::StatisticsCatalog;

/// Joint estimates for value predicates on one id whose keys a
/// multidimensional histogram covers.
pub fn pet_md_histogram(q: &QueryPattern, cat: &StatisticsCatalog) -> Vec<PartialEstimate> {
    let mut out = Vec::new();
    for id in q.ids() {
        let preds: Vec<(&str, Predicate, &QueryValue)> = q
            .props()
            .iter()
            .filter(|(x, _)| *x == id)
            .map(|(_, p)| (p.key.as_str(), p.op, &p.value))
            .collect();
        let keys: BTreeSet<&str> = preds.iter().map(|p| p.0).collect();
        for h in &cat.md_histograms {
            if !h.keys.iter().all(|k| keys.contains(k.as_str())) {
                continue;
            }
            let on_axes: Vec<(usize, Predicate, &QueryValue)> = preds
                .iter()
                .filter_map(|(k, op, v)| h.keys.iter().position(|x| x == k).map(|a| (a, *op, *v)))
                .collect();
            let Some(fraction) = h.fraction(&on_axes) else {
                continue;
            };
            let mut constraints = crate::query::ConstraintSet::new();
            for (k, op, v) in &preds {
                if h.keys.iter().any(|x| x == k) {
                    constraints.insert(Constraint::has_key(&id, k));
                    constraints.insert(Constraint::PropValue {
                        id: id.clone(),
                        key: k.to_string(),
                        op: *op,
                        value: (*v).clone(),
                    });
                }
            }
            let s = selectivity(fraction * h.total as f64, cat.basic.n_ids, 1);
            out.push(PartialEstimate::new(constraints, s, Provenance::MdHistogram));
        }
    }
    out
}
