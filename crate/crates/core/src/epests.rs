//! Techniques that extend a partial estimate set with derived estimates.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::query::{
    ids_of, implied_closure, Constraint, ConstraintSet, PartialEstimate, Provenance, QId, QueryPattern,
};

/// Scope an implication assumption is applied within.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PatternScope {
    Id,
    EdgePattern,
}

/// Which constraint kinds may take part in an implication assumption.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ConstraintClass {
    PropValue,
    Prop,
    All,
}

impl ConstraintClass {
    pub fn contains(self, c: &Constraint) -> bool {
        match self {
            ConstraintClass::PropValue => matches!(c, Constraint::PropValue { .. }),
            ConstraintClass::Prop => c.is_prop(),
            ConstraintClass::All => true,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EpestTag {
    /// Closure under src/trg and value-implies-key.
    Implied,
    Ip(PatternScope, ConstraintClass),
}

impl FromStr for EpestTag {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if s == "implied" {
            return Ok(EpestTag::Implied);
        }
        let bad = || Error::Config(format!("unknown extension technique {s:?}"));
        let inner = s
            .strip_prefix("IP(")
            .or_else(|| s.strip_prefix("IP["))
            .and_then(|r| r.strip_suffix(')').or_else(|| r.strip_suffix(']')))
            .ok_or_else(bad)?;
        let (p, c) = inner.split_once(',').ok_or_else(bad)?;
        let scope = match p.trim() {
            "id" => PatternScope::Id,
            "ep" => PatternScope::EdgePattern,
            _ => return Err(bad()),
        };
        let class = match c.trim() {
            "pv" => ConstraintClass::PropValue,
            "p" => ConstraintClass::Prop,
            "a" => ConstraintClass::All,
            _ => return Err(bad()),
        };
        Ok(EpestTag::Ip(scope, class))
    }
}

impl fmt::Display for EpestTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            EpestTag::Implied => f.write_str("implied"),
            EpestTag::Ip(p, c) => {
                let p = match p {
                    PatternScope::Id => "id",
                    PatternScope::EdgePattern => "ep",
                };
                let c = match c {
                    ConstraintClass::PropValue => "pv",
                    ConstraintClass::Prop => "p",
                    ConstraintClass::All => "a",
                };
                write!(f, "IP({p},{c})")
            }
        }
    }
}

pub fn parse_epest_tags(list: &str) -> Result<Vec<EpestTag>> {
    crate::pets::split_tags(list).iter().map(|t| t.parse()).collect()
}

/// Adds the implied closure of every PE that is not already closed, with
/// the selectivity unchanged.
pub fn epest_deterministic(pes: &[PartialEstimate], _q: &QueryPattern) -> Vec<PartialEstimate> {
    pes.iter()
        .filter_map(|pe| {
            let closed = implied_closure(&pe.constraints);
            (closed != pe.constraints).then(|| PartialEstimate::new(closed, pe.selectivity, Provenance::Implied))
        })
        .collect()
}

fn scopes(q: &QueryPattern, scope: PatternScope) -> Vec<BTreeSet<QId>> {
    match scope {
        PatternScope::Id => q.ids().into_iter().map(|i| BTreeSet::from([i])).collect(),
        PatternScope::EdgePattern => q
            .edges()
            .iter()
            .map(|e| BTreeSet::from([e.src.clone(), e.id.clone(), e.trg.clone()]))
            .collect(),
    }
}

/// Within each scope, assumes the most selective eligible PE implies the
/// union of all eligible PEs, and emits that union with the minimum
/// selectivity. Ties prefer more constraints, then the canonical order.
pub fn epest_ip(
    pes: &[PartialEstimate],
    q: &QueryPattern,
    scope: PatternScope,
    class: ConstraintClass,
) -> Vec<PartialEstimate> {
    let mut out = Vec::new();
    for ids in scopes(q, scope) {
        let group: Vec<&PartialEstimate> = pes
            .iter()
            .filter(|pe| pe.constraints.iter().all(|c| class.contains(c)))
            .filter(|pe| ids_of(&pe.constraints).is_subset(&ids))
            .collect();
        if group.len() < 2 {
            continue;
        }
        let min = group
            .iter()
            .min_by(|a, b| {
                a.selectivity
                    .total_cmp(&b.selectivity)
                    .then_with(|| b.constraints.len().cmp(&a.constraints.len()))
                    .then_with(|| a.constraints.cmp(&b.constraints))
            })
            .expect("non-empty group");
        let union: ConstraintSet = group.iter().flat_map(|pe| pe.constraints.iter().cloned()).collect();
        if union != min.constraints {
            out.push(PartialEstimate::new(union, min.selectivity, Provenance::Implication));
        }
    }
    out
}

pub fn run_epest(tag: EpestTag, pes: &[PartialEstimate], q: &QueryPattern) -> Vec<PartialEstimate> {
    match tag {
        EpestTag::Implied => epest_deterministic(pes, q),
        EpestTag::Ip(scope, class) => epest_ip(pes, q, scope, class),
    }
}
