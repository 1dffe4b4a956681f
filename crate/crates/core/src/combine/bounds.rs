use std::collections::BTreeSet;

use serde::Serialize;

use crate::query::{ids_of, PartialEstimate, QId};

/// Above this many PEs the upper bound uses a greedy independent set.
pub const EXACT_UPPER_LIMIT: usize = 20;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Bounds {
    pub lower: f64,
    pub upper: f64,
    /// False when the upper bound came from the greedy search.
    pub exhaustive: bool,
}

/// Upper bound: the smallest product over sets of PEs with pairwise
/// disjoint ids. Lower bound: `1 - sum(1 - s)` over the PEs not contained
/// in another PE, floored at 0.
pub fn combine_bounds(cpes: &[PartialEstimate]) -> Bounds {
    if let Some(pe) = super::exact_cover(cpes, &super::union_of(cpes)) {
        return Bounds { lower: pe.selectivity, upper: pe.selectivity, exhaustive: true };
    }
    let (upper, exhaustive) = upper_bound(cpes);
    Bounds { lower: lower_bound(cpes), upper, exhaustive }
}

fn upper_bound(pes: &[PartialEstimate]) -> (f64, bool) {
    // PEs with s = 1 can only leave a product unchanged.
    let mut items: Vec<(f64, BTreeSet<QId>)> = pes
        .iter()
        .filter(|pe| pe.selectivity < 1.0)
        .map(|pe| (pe.selectivity, ids_of(&pe.constraints)))
        .collect();
    items.sort_by(|a, b| a.0.total_cmp(&b.0).then_with(|| a.1.cmp(&b.1)));
    if items.len() > EXACT_UPPER_LIMIT {
        let mut used = BTreeSet::new();
        let mut prod = 1.0;
        for (s, ids) in &items {
            if used.is_disjoint(ids) {
                prod *= s;
                used.extend(ids.iter().cloned());
            }
        }
        return (prod, false);
    }
    fn search(items: &[(f64, BTreeSet<QId>)], from: usize, used: &mut BTreeSet<QId>, prod: f64, best: &mut f64) {
        *best = best.min(prod);
        for j in from..items.len() {
            let (s, ids) = &items[j];
            if used.is_disjoint(ids) {
                used.extend(ids.iter().cloned());
                search(items, j + 1, used, prod * s, best);
                for id in ids {
                    used.remove(id);
                }
            }
        }
    }
    let mut best = 1.0;
    search(&items, 0, &mut BTreeSet::new(), 1.0, &mut best);
    (best, true)
}

fn lower_bound(pes: &[PartialEstimate]) -> f64 {
    let mut lb = 1.0;
    for (i, pe) in pes.iter().enumerate() {
        let dominated = pes.iter().enumerate().any(|(j, other)| {
            j != i
                && pe.constraints.is_subset(&other.constraints)
                && (pe.constraints.len() < other.constraints.len() || j < i)
        });
        if !dominated {
            lb -= 1.0 - pe.selectivity;
        }
    }
    lb.max(0.0)
}
