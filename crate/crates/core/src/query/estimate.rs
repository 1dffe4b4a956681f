use std::fmt;

use serde::{Deserialize, Serialize};

use super::constraint::{set_key, Constraint, ConstraintSet};

/// Where a partial estimate came from. Declaration order is trust order:
/// when two techniques estimate the same constraint set, the earlier wins.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub enum Provenance {
    Exact,
    Synopsis,
    CharSets,
    SysR,
    Sampling,
    WanderJoin,
    MdHistogram,
    Histogram,
    BoundSketch,
    Implied,
    Implication,
    Default,
}

impl fmt::Display for Provenance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Provenance::Exact => "exact",
            Provenance::Synopsis => "synopsis",
            Provenance::CharSets => "charSets",
            Provenance::SysR => "sysR",
            Provenance::Sampling => "sampling",
            Provenance::WanderJoin => "wanderJoin",
            Provenance::MdHistogram => "mdHistogram",
            Provenance::Histogram => "histogram",
            Provenance::BoundSketch => "boundSketch",
            Provenance::Implied => "implied",
            Provenance::Implication => "implication",
            Provenance::Default => "default",
        };
        f.write_str(s)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PartialEstimate {
    pub constraints: ConstraintSet,
    pub selectivity: f64,
    pub provenance: Provenance,
    /// Set when the technique had too little evidence (e.g. no successful walk).
    #[serde(default, skip_serializing_if = "std::ops::Not::not")]
    pub low_confidence: bool,
}

impl PartialEstimate {
    /// Builds a PE, clamping the selectivity into `[0, 1]`.
    pub fn new(constraints: ConstraintSet, selectivity: f64, provenance: Provenance) -> Self {
        debug_assert!(!constraints.is_empty());
        debug_assert!(!selectivity.is_nan());
        PartialEstimate {
            constraints,
            selectivity: selectivity.clamp(0.0, 1.0),
            provenance,
            low_confidence: false,
        }
    }

    pub fn single(c: Constraint, selectivity: f64, provenance: Provenance) -> Self {
        Self::new(ConstraintSet::from([c]), selectivity, provenance)
    }

    pub fn key(&self) -> String {
        set_key(&self.constraints)
    }
}

/// Keeps one PE per constraint set: the most trusted provenance, then the
/// lower selectivity. Output is ordered by provenance, then set key.
pub fn dedup(pes: Vec<PartialEstimate>) -> Vec<PartialEstimate> {
    use std::collections::BTreeMap;
    let mut best: BTreeMap<ConstraintSet, PartialEstimate> = BTreeMap::new();
    for pe in pes {
        match best.get(&pe.constraints) {
            Some(cur)
                if (cur.provenance, cur.selectivity.to_bits())
                    <= (pe.provenance, pe.selectivity.to_bits()) => {}
            _ => {
                best.insert(pe.constraints.clone(), pe);
            }
        }
    }
    let mut out: Vec<PartialEstimate> = best.into_values().collect();
    out.sort_by(|a, b| a.provenance.cmp(&b.provenance).then_with(|| a.constraints.cmp(&b.constraints)));
    out
}
