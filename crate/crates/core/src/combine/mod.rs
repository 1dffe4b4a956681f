//! Completing a partial estimate set and combining it into one selectivity.

mod bounds;
mod cond_indep;
mod max_ent;
mod sort;

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

pub use bounds::{combine_bounds, Bounds, EXACT_UPPER_LIMIT};
pub use cond_indep::{combine_cond_indep, CondIndepResult, Factor, FactorKind, MAX_DEPTH};
pub use max_ent::{combine_max_ent, MaxEntResult, DEFAULT_MAX_ITER, DEFAULT_MPS, DEFAULT_TOL, MPS_CAP};
pub use sort::{deviation_from_independence, sort_order, SortStrategy, ALL_STRATEGIES};

use crate::error::{Error, Result};
use crate::pets::individual_estimate;
use crate::query::{implied_closure, Constraint, ConstraintSet, PartialEstimate, Provenance, QueryPattern};
use crate::stats::StatisticsCatalog;

/// Single-constraint selectivities used for deviation scores and as the
/// last resort when estimating overlaps.
#[derive(Debug, Clone, Default)]
pub struct Singletons(BTreeMap<Constraint, f64>);

impl Singletons {
    /// Takes singleton PEs from `pes` and fills every other constraint of
    /// the query or the PES from the individual estimates.
    pub fn new(pes: &[PartialEstimate], q: &QueryPattern, cat: &StatisticsCatalog, defaults_only: bool) -> Self {
        let mut map = Self::from_pes(pes).0;
        let mut all = q.constraints();
        for pe in pes {
            all.extend(pe.constraints.iter().cloned());
        }
        for c in all {
            map.entry(c.clone()).or_insert_with(|| individual_estimate(&c, cat, defaults_only).selectivity);
        }
        Singletons(map)
    }

    /// Only the singleton PEs; anything else counts as 1.
    pub fn from_pes(pes: &[PartialEstimate]) -> Self {
        let mut map = BTreeMap::new();
        for pe in pes.iter().filter(|pe| pe.constraints.len() == 1) {
            let c = pe.constraints.first().expect("singleton").clone();
            map.entry(c)
                .and_modify(|s: &mut f64| *s = s.min(pe.selectivity))
                .or_insert(pe.selectivity);
        }
        Singletons(map)
    }

    pub fn get(&self, c: &Constraint) -> f64 {
        self.0.get(c).copied().unwrap_or(1.0)
    }

    pub fn product<'a>(&self, set: impl IntoIterator<Item = &'a Constraint>) -> f64 {
        set.into_iter().map(|c| self.get(c)).product()
    }
}

/// Adds an individual estimate for every query constraint that no PE
/// mentions. A complete input comes back unchanged.
pub fn make_complete(
    pes: Vec<PartialEstimate>,
    q: &QueryPattern,
    cat: &StatisticsCatalog,
    defaults_only: bool,
) -> Vec<PartialEstimate> {
    let covered: ConstraintSet = pes.iter().flat_map(|pe| pe.constraints.iter().cloned()).collect();
    let mut out = pes;
    for c in q.constraints().difference(&covered) {
        out.push(individual_estimate(c, cat, defaults_only));
    }
    out
}

/// An exact PE whose closure holds all of `universe`. It settles the
/// answer, so every combination technique returns it unchanged.
pub fn exact_cover<'a>(cpes: &'a [PartialEstimate], universe: &ConstraintSet) -> Option<&'a PartialEstimate> {
    cpes.iter()
        .filter(|pe| pe.provenance == Provenance::Exact && implied_closure(&pe.constraints).is_superset(universe))
        .min_by_key(|pe| pe.key())
}

fn union_of(cpes: &[PartialEstimate]) -> ConstraintSet {
    cpes.iter().flat_map(|pe| pe.constraints.iter().cloned()).collect()
}

/// `s * |I|^|Q.I|`.
pub fn selectivity_to_cardinality(s: f64, q: &QueryPattern, cat: &StatisticsCatalog) -> f64 {
    s * (cat.basic.n_ids as f64).powi(q.n_ids() as i32)
}

/// Combination technique, written `condIndep(MoDi)`, `maxEnt(mps=12)` or
/// `bounds`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum CtTag {
    CondIndep(SortStrategy),
    MaxEnt { mps: usize, tol: f64, max_iter: usize },
    /// Reports the upper bound as the estimate.
    Bounds,
}

impl Default for CtTag {
    fn default() -> Self {
        CtTag::CondIndep(SortStrategy::MoDi)
    }
}

impl FromStr for CtTag {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let (name, args) = match s.split_once('(') {
            Some((n, rest)) => (
                n.trim(),
                rest.strip_suffix(')').ok_or_else(|| Error::Config(format!("unbalanced parentheses in {s:?}")))?,
            ),
            None => (s, ""),
        };
        match name {
            "condIndep" => Ok(CtTag::CondIndep(if args.is_empty() { SortStrategy::MoDi } else { args.parse()? })),
            "maxEnt" => {
                let (mut mps, mut tol, mut max_iter) = (DEFAULT_MPS, DEFAULT_TOL, DEFAULT_MAX_ITER);
                for kv in args.split(',').map(str::trim).filter(|x| !x.is_empty()) {
                    let (k, v) = kv.split_once('=').unwrap_or(("mps", kv));
                    let bad = || Error::Config(format!("bad maxEnt parameter {kv:?}"));
                    match k.trim() {
                        "mps" => mps = v.trim().parse().map_err(|_| bad())?,
                        "tol" => tol = v.trim().parse().map_err(|_| bad())?,
                        "iter" | "max_iter" => max_iter = v.trim().parse().map_err(|_| bad())?,
                        _ => return Err(bad()),
                    }
                }
                if mps == 0 || mps > MPS_CAP {
                    return Err(Error::Config(format!("maxEnt mps must be in 1..={MPS_CAP}")));
                }
                Ok(CtTag::MaxEnt { mps, tol, max_iter })
            }
            "bounds" if args.is_empty() => Ok(CtTag::Bounds),
            _ => Err(Error::Config(format!("unknown combination technique {s:?}"))),
        }
    }
}

impl fmt::Display for CtTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CtTag::CondIndep(s) => write!(f, "condIndep({s})"),
            CtTag::MaxEnt { mps, tol, max_iter } => {
                write!(f, "maxEnt(mps={mps}")?;
                if *tol != DEFAULT_TOL {
                    write!(f, ",tol={tol}")?;
                }
                if *max_iter != DEFAULT_MAX_ITER {
                    write!(f, ",iter={max_iter}")?;
                }
                f.write_str(")")
            }
            CtTag::Bounds => f.write_str("bounds"),
        }
    }
}
