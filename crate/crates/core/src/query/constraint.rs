use std::collections::BTreeSet;
use std::fmt;

use serde::{Deserialize, Serialize};

use super::predicate::{Predicate, QueryValue};
use super::QId;

/// An atomic condition on a mapping from query ids to graph elements.
///
/// The derived order is the canonical order used for deterministic
/// tie-breaking: kinds first (vertex, edge, src, trg, label, key, value),
/// then ids and payload.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "camelCase")]
pub enum Constraint {
    Vertex { id: QId },
    Edge { id: QId },
    Src { v: QId, e: QId },
    Trg { v: QId, e: QId },
    HasLabel { id: QId, label: String },
    HasKey { id: QId, key: String },
    PropValue { id: QId, key: String, op: Predicate, value: QueryValue },
}

impl Constraint {
    pub fn vertex(id: &QId) -> Self {
        Constraint::Vertex { id: id.clone() }
    }

    pub fn edge(id: &QId) -> Self {
        Constraint::Edge { id: id.clone() }
    }

    pub fn src(v: &QId, e: &QId) -> Self {
        Constraint::Src { v: v.clone(), e: e.clone() }
    }

    pub fn trg(v: &QId, e: &QId) -> Self {
        Constraint::Trg { v: v.clone(), e: e.clone() }
    }

    pub fn has_label(id: &QId, label: &str) -> Self {
        Constraint::HasLabel { id: id.clone(), label: label.to_string() }
    }

    pub fn has_key(id: &QId, key: &str) -> Self {
        Constraint::HasKey { id: id.clone(), key: key.to_string() }
    }

    /// The query ids the constraint talks about (`C.I`).
    pub fn ids(&self) -> Vec<&QId> {
        match self {
            Constraint::Src { v, e } | Constraint::Trg { v, e } => vec![v, e],
            Constraint::Vertex { id }
            | Constraint::Edge { id }
            | Constraint::HasLabel { id, .. }
            | Constraint::HasKey { id, .. }
            | Constraint::PropValue { id, .. } => vec![id],
        }
    }

    /// Label, key and value constraints; everything else is topological.
    pub fn is_data(&self) -> bool {
        matches!(
            self,
            Constraint::HasLabel { .. } | Constraint::HasKey { .. } | Constraint::PropValue { .. }
        )
    }

    pub fn is_prop(&self) -> bool {
        matches!(self, Constraint::HasKey { .. } | Constraint::PropValue { .. })
    }

    /// Constraints logically implied by this one (excluding itself).
    pub fn implied(&self) -> Vec<Constraint> {
        match self {
            Constraint::Src { v, e } | Constraint::Trg { v, e } => {
                vec![Constraint::vertex(v), Constraint::edge(e)]
            }
            Constraint::PropValue { id, key, .. } => vec![Constraint::has_key(id, key)],
            _ => Vec::new(),
        }
    }
}

impl fmt::Display for Constraint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Constraint::Vertex { id } => write!(f, "vertex({id})"),
            Constraint::Edge { id } => write!(f, "edge({id})"),
            Constraint::Src { v, e } => write!(f, "src({v},{e})"),
            Constraint::Trg { v, e } => write!(f, "trg({v},{e})"),
            Constraint::HasLabel { id, label } => write!(f, "hasLabel({id},{label})"),
            Constraint::HasKey { id, key } => write!(f, "hasKey({id},{key})"),
            Constraint::PropValue { id, key, op, value } => {
                write!(f, "propValue({id},{key} {op} {value})")
            }
        }
    }
}

pub type ConstraintSet = BTreeSet<Constraint>;

/// Adds every constraint implied by a member of `set`. Idempotent.
pub fn implied_closure(set: &ConstraintSet) -> ConstraintSet {
    let mut out = set.clone();
    for c in set {
        out.extend(c.implied());
    }
    out
}

/// Distinct ids mentioned by a constraint set, in canonical order.
pub fn ids_of<'a>(set: impl IntoIterator<Item = &'a Constraint>) -> BTreeSet<QId> {
    set.into_iter().flat_map(|c| c.ids().into_iter().cloned()).collect()
}

/// Canonical text of a constraint set, used as a stable sort key.
pub fn set_key(set: &ConstraintSet) -> String {
    let parts: Vec<String> = set.iter().map(|c| c.to_string()).collect();
    format!("{{{}}}", parts.join(", "))
}
