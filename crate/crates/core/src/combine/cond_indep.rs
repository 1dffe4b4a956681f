use serde::Serialize;

use super::sort::{sort_order, SortStrategy};
use super::Singletons;
use crate::query::{implied_closure, ConstraintSet, PartialEstimate, Provenance};

/// Nesting limit for estimating an overlap that no PE covers exactly.
pub const MAX_DEPTH: usize = 2;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub enum FactorKind {
    /// No overlap with what was combined before.
    Independent,
    /// Partial overlap: divided by the estimate of the shared part.
    Conditional,
    /// Everything already combined; contributes nothing.
    Skipped,
    /// A whole-query value from a technique without a factor trace.
    Joint,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Factor {
    pub constraints: String,
    pub selectivity: f64,
    pub kind: FactorKind,
    /// Estimate of the overlap the PE was conditioned on.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub overlap: Option<f64>,
    pub factor: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CondIndepResult {
    pub selectivity: f64,
    pub factors: Vec<Factor>,
}

/// Chain-rule combination of a complete PES under conditional
/// independence, processing PEs in the strategy's order.
pub fn combine_cond_indep(cpes: &[PartialEstimate], strategy: SortStrategy, singles: &Singletons) -> CondIndepResult {
    if let Some(pe) = super::exact_cover(cpes, &super::union_of(cpes)) {
        let factors = vec![Factor {
            constraints: pe.key(),
            selectivity: pe.selectivity,
            kind: FactorKind::Joint,
            overlap: None,
            factor: pe.selectivity,
        }];
        return CondIndepResult { selectivity: pe.selectivity, factors };
    }
    run(cpes, strategy, singles, 0)
}

fn run(pes: &[PartialEstimate], strategy: SortStrategy, singles: &Singletons, depth: usize) -> CondIndepResult {
    let closures: Vec<ConstraintSet> = pes.iter().map(|pe| implied_closure(&pe.constraints)).collect();
    let mut done = ConstraintSet::new();
    let mut est = 1.0;
    let mut factors = Vec::with_capacity(pes.len());
    for i in sort_order(pes, strategy, singles) {
        let pe = &pes[i];
        let cimpl = &closures[i];
        let inter: ConstraintSet = implied_closure(&done).intersection(cimpl).cloned().collect();
        let s = pe.selectivity;
        let (kind, overlap, factor) = if inter.is_empty() {
            (FactorKind::Independent, None, s)
        } else if inter != *cimpl {
            let o = sel_est(&inter, pes, &closures, strategy, singles, depth);
            let d = s.max(o);
            (FactorKind::Conditional, Some(o), if d > 0.0 { s / d } else { 0.0 })
        } else {
            (FactorKind::Skipped, None, 1.0)
        };
        est *= factor;
        factors.push(Factor { constraints: pe.key(), selectivity: s, kind, overlap, factor });
        done.extend(pe.constraints.iter().cloned());
    }
    CondIndepResult { selectivity: est.clamp(0.0, 1.0), factors }
}

/// Selectivity of a closed constraint set: a PE with exactly that closure
/// if one exists, otherwise a nested combination of the PEs inside it, and
/// past the depth limit the product of singleton estimates.
fn sel_est(
    set: &ConstraintSet,
    pes: &[PartialEstimate],
    closures: &[ConstraintSet],
    strategy: SortStrategy,
    singles: &Singletons,
    depth: usize,
) -> f64 {
    let resident = pes
        .iter()
        .zip(closures)
        .filter(|(_, c)| *c == set)
        .map(|(pe, _)| pe)
        .min_by(|a, b| {
            a.provenance
                .cmp(&b.provenance)
                .then_with(|| a.constraints.cmp(&b.constraints))
                .then_with(|| a.selectivity.total_cmp(&b.selectivity))
        });
    if let Some(pe) = resident {
        return pe.selectivity;
    }
    if depth + 1 >= MAX_DEPTH || set.len() == 1 {
        return singles.product(set);
    }
    let mut sub: Vec<PartialEstimate> = pes
        .iter()
        .zip(closures)
        .filter(|(_, c)| c.is_subset(set))
        .map(|(pe, _)| pe.clone())
        .collect();
    let covered: ConstraintSet = sub.iter().flat_map(|pe| pe.constraints.iter().cloned()).collect();
    for c in set.difference(&covered) {
        sub.push(PartialEstimate::single(c.clone(), singles.get(c), Provenance::Default));
    }
    run(&sub, strategy, singles, depth + 1).selectivity
}
