use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use super::Singletons;
use crate::error::{Error, Result};
use crate::query::{implied_closure, ConstraintSet, PartialEstimate};

/// PE orderings for the conditional-independence combiner. The first two
/// letters name the primary key and the last two the secondary one:
/// S = selectivity, N = number of constraints, Di = deviation from
/// independence, Mo = overlap with the constraints already combined,
/// a/d = ascending/descending.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SortStrategy {
    SaNd,
    Sd,
    NdSa,
    NdSd,
    NaSd,
    NaSa,
    Di,
    MoNd,
    MoDi,
}

pub const ALL_STRATEGIES: [SortStrategy; 9] = [
    SortStrategy::SaNd,
    SortStrategy::Sd,
    SortStrategy::NdSa,
    SortStrategy::NdSd,
    SortStrategy::NaSd,
    SortStrategy::NaSa,
    SortStrategy::Di,
    SortStrategy::MoNd,
    SortStrategy::MoDi,
];

impl FromStr for SortStrategy {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        ALL_STRATEGIES
            .iter()
            .copied()
            .find(|x| x.to_string() == s.trim())
            .ok_or_else(|| Error::Config(format!("unknown sort strategy {s:?}")))
    }
}

impl fmt::Display for SortStrategy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

#[derive(Clone, Copy)]
enum Key {
    Sa,
    Sd,
    Na,
    Nd,
    Di,
}

impl SortStrategy {
    fn keys(self) -> &'static [Key] {
        use Key::*;
        match self {
            SortStrategy::SaNd => &[Sa, Nd],
            SortStrategy::Sd => &[Sd],
            SortStrategy::NdSa => &[Nd, Sa],
            SortStrategy::NdSd => &[Nd, Sd],
            SortStrategy::NaSd => &[Na, Sd],
            SortStrategy::NaSa => &[Na, Sa],
            // Ties on deviation go to the more selective PE.
            SortStrategy::Di => &[Di, Sa],
            SortStrategy::MoNd => &[Nd],
            SortStrategy::MoDi => &[Di],
        }
    }

    fn dynamic(self) -> bool {
        matches!(self, SortStrategy::MoNd | SortStrategy::MoDi)
    }
}

/// `max(s / prod, prod / s)` over the singleton estimates; 1 for a
/// singleton, infinite when exactly one side is zero.
pub fn deviation_from_independence(pe: &PartialEstimate, singles: &Singletons) -> f64 {
    if pe.constraints.len() == 1 {
        return 1.0;
    }
    let prod = singles.product(&pe.constraints);
    let s = pe.selectivity;
    match (s == 0.0, prod == 0.0) {
        (true, true) => 1.0,
        (true, false) | (false, true) => f64::INFINITY,
        _ => (s / prod).max(prod / s),
    }
}

fn compare(keys: &[Key], pes: &[PartialEstimate], devs: &[f64], a: usize, b: usize) -> Ordering {
    let (pa, pb) = (&pes[a], &pes[b]);
    let mut ord = Ordering::Equal;
    for k in keys {
        ord = ord.then_with(|| match k {
            Key::Sa => pa.selectivity.total_cmp(&pb.selectivity),
            Key::Sd => pb.selectivity.total_cmp(&pa.selectivity),
            Key::Na => pa.constraints.len().cmp(&pb.constraints.len()),
            Key::Nd => pb.constraints.len().cmp(&pa.constraints.len()),
            Key::Di => devs[b].total_cmp(&devs[a]),
        });
    }
    ord.then_with(|| pa.constraints.cmp(&pb.constraints))
        .then_with(|| pa.provenance.cmp(&pb.provenance))
        .then_with(|| pa.selectivity.total_cmp(&pb.selectivity))
}

/// Indices of `pes` in the order the strategy processes them. The order
/// does not depend on the input order.
pub fn sort_order(pes: &[PartialEstimate], strategy: SortStrategy, singles: &Singletons) -> Vec<usize> {
    let devs: Vec<f64> = pes.iter().map(|pe| deviation_from_independence(pe, singles)).collect();
    let keys = strategy.keys();
    let mut order: Vec<usize> = (0..pes.len()).collect();
    if !strategy.dynamic() {
        order.sort_by(|&a, &b| compare(keys, pes, &devs, a, b));
        return order;
    }
    let closures: Vec<ConstraintSet> = pes.iter().map(|pe| implied_closure(&pe.constraints)).collect();
    let mut done = ConstraintSet::new();
    let mut out = Vec::with_capacity(pes.len());
    while !order.is_empty() {
        let overlap = |i: usize| closures[i].intersection(&done).count();
        let (pos, &best) = order
            .iter()
            .enumerate()
            .min_by(|(_, &a), (_, &b)| overlap(b).cmp(&overlap(a)).then_with(|| compare(keys, pes, &devs, a, b)))
            .expect("non-empty");
        order.swap_remove(pos);
        done.extend(closures[best].iter().cloned());
        out.push(best);
    }
    out
}
