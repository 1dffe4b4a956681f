//! Query patterns, their constraint sets, and the subpatterns PETs target.

mod constraint;
mod estimate;
mod predicate;
mod subpattern;

use std::collections::{BTreeMap, BTreeSet, HashSet};
use std::path::Path;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

pub use constraint::{ids_of, implied_closure, set_key, Constraint, ConstraintSet};
pub use estimate::{dedup, PartialEstimate, Provenance};
pub use predicate::{Predicate, QueryValue, Value};
pub use subpattern::{chosen_label, enumerate_subpatterns, PatternClass, Subpattern};

use crate::error::{Error, Result};

/// A query-side identifier (vertex or edge).
pub type QId = Arc<str>;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PropConstraint {
    pub key: String,
    pub op: Predicate,
    pub value: QueryValue,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QueryEdge {
    pub id: QId,
    pub src: QId,
    pub trg: QId,
}

/// A basic property-graph query pattern. Vertex and edge lists keep
/// document order; all derived sets are ordered canonically.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct QueryPattern {
    vertices: Vec<QId>,
    edges: Vec<QueryEdge>,
    labels: BTreeMap<QId, BTreeSet<String>>,
    props: Vec<(QId, PropConstraint)>,
}

impl QueryPattern {
    pub fn new() -> Self {
        Self::default()
    }

    fn known(&self, id: &str) -> bool {
        self.vertices.iter().any(|v| &**v == id) || self.edges.iter().any(|e| &*e.id == id)
    }

    fn intern(&self, id: &str) -> Option<QId> {
        self.vertices
            .iter()
            .chain(self.edges.iter().map(|e| &e.id))
            .find(|v| &***v == id)
            .cloned()
    }

    pub fn add_vertex(&mut self, id: &str) -> Result<QId> {
        if self.known(id) {
            return Err(Error::Query(format!("duplicate id {id:?}")));
        }
        let id: QId = id.into();
        self.vertices.push(id.clone());
        Ok(id)
    }

    pub fn add_edge(&mut self, id: &str, src: &str, trg: &str) -> Result<QId> {
        if self.known(id) {
            return Err(Error::Query(format!("duplicate id {id:?}")));
        }
        let endpoint = |v: &str| {
            self.vertices
                .iter()
                .find(|x| &***x == v)
                .cloned()
                .ok_or_else(|| Error::Query(format!("edge {id:?} references undeclared vertex {v:?}")))
        };
        let (src, trg) = (endpoint(src)?, endpoint(trg)?);
        let id: QId = id.into();
        self.edges.push(QueryEdge { id: id.clone(), src, trg });
        Ok(id)
    }

    pub fn add_label(&mut self, id: &str, label: &str) -> Result<()> {
        let id = self
            .intern(id)
            .ok_or_else(|| Error::Query(format!("label on unknown id {id:?}")))?;
        self.labels.entry(id).or_default().insert(label.to_string());
        Ok(())
    }

    pub fn add_prop(&mut self, id: &str, key: &str, op: Predicate, value: QueryValue) -> Result<()> {
        let id = self
            .intern(id)
            .ok_or_else(|| Error::Query(format!("property constraint on unknown id {id:?}")))?;
        if !op.accepts(&value) {
            return Err(Error::Query(format!("operator {op} does not accept operand {value}")));
        }
        self.props.push((id, PropConstraint { key: key.to_string(), op, value }));
        Ok(())
    }

    pub fn vertices(&self) -> &[QId] {
        &self.vertices
    }

    pub fn edges(&self) -> &[QueryEdge] {
        &self.edges
    }

    pub fn edge(&self, id: &str) -> Option<&QueryEdge> {
        self.edges.iter().find(|e| &*e.id == id)
    }

    pub fn is_vertex(&self, id: &str) -> bool {
        self.vertices.iter().any(|v| &**v == id)
    }

    pub fn labels(&self, id: &str) -> impl Iterator<Item = &str> {
        self.labels.get(id).into_iter().flatten().map(String::as_str)
    }

    pub fn props(&self) -> &[(QId, PropConstraint)] {
        &self.props
    }

    /// All query ids (`Q.I`) in canonical order.
    pub fn ids(&self) -> BTreeSet<QId> {
        self.vertices.iter().chain(self.edges.iter().map(|e| &e.id)).cloned().collect()
    }

    pub fn n_ids(&self) -> usize {
        self.vertices.len() + self.edges.len()
    }

    pub fn is_empty(&self) -> bool {
        self.n_ids() == 0
    }

    /// `C(Q)`: membership, incidence, label, key and value constraints.
    pub fn constraints(&self) -> ConstraintSet {
        let mut out = ConstraintSet::new();
        for v in &self.vertices {
            out.insert(Constraint::vertex(v));
        }
        for e in &self.edges {
            out.insert(Constraint::edge(&e.id));
            out.insert(Constraint::src(&e.src, &e.id));
            out.insert(Constraint::trg(&e.trg, &e.id));
        }
        for (id, labels) in &self.labels {
            for l in labels {
                out.insert(Constraint::has_label(id, l));
            }
        }
        for (id, p) in &self.props {
            out.insert(Constraint::has_key(id, &p.key));
            out.insert(Constraint::PropValue {
                id: id.clone(),
                key: p.key.clone(),
                op: p.op,
                value: p.value.clone(),
            });
        }
        out
    }

    /// Data constraints (labels, keys, values) on one id.
    pub fn data_constraints(&self, id: &str) -> ConstraintSet {
        self.constraints()
            .into_iter()
            .filter(|c| c.is_data() && c.ids().iter().any(|x| &***x == id))
            .collect()
    }

    /// Whether every query id can be reached from every other through edges.
    pub fn is_connected(&self) -> bool {
        let ids = self.ids();
        let Some(start) = ids.iter().next() else {
            return true;
        };
        let mut seen: HashSet<QId> = HashSet::from([start.clone()]);
        let mut stack = vec![start.clone()];
        while let Some(x) = stack.pop() {
            for e in &self.edges {
                let group = [&e.id, &e.src, &e.trg];
                if group.iter().any(|g| **g == x) {
                    for g in group {
                        if seen.insert(g.clone()) {
                            stack.push(g.clone());
                        }
                    }
                }
            }
        }
        seen.len() == ids.len()
    }
}

/// Free function form of [`QueryPattern::constraints`].
pub fn extract_constraints(q: &QueryPattern) -> ConstraintSet {
    q.constraints()
}

// Document shapes.

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PropDoc {
    pub key: String,
    pub op: Predicate,
    pub value: QueryValue,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct VertexDoc {
    pub id: String,
    #[serde(default)]
    pub labels: Vec<String>,
    #[serde(default)]
    pub props: Vec<PropDoc>,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct EdgeDoc {
    pub id: String,
    pub src: String,
    pub trg: String,
    #[serde(default)]
    pub labels: Vec<String>,
    #[serde(default)]
    pub props: Vec<PropDoc>,
}

/// One alternative of a disjunction: extra labels and property constraints
/// attached to an existing id.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct Alternative {
    pub id: String,
    #[serde(default)]
    pub labels: Vec<String>,
    #[serde(default)]
    pub props: Vec<PropDoc>,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct QueryDoc {
    #[serde(default)]
    pub vertices: Vec<VertexDoc>,
    #[serde(default)]
    pub edges: Vec<EdgeDoc>,
    /// Each group lists alternatives, exactly one of which must hold.
    #[serde(default, rename = "anyOf", skip_serializing_if = "Vec::is_empty")]
    pub any_of: Vec<Vec<Alternative>>,
}

impl QueryDoc {
    pub fn from_json(text: &str) -> Result<QueryDoc> {
        Ok(serde_json::from_str(text)?)
    }

    pub fn read(path: &Path) -> Result<QueryDoc> {
        let text = std::fs::read_to_string(path)?;
        serde_json::from_str(&text).map_err(|e| Error::Parse {
            path: path.to_path_buf(),
            line: e.line(),
            message: e.to_string(),
        })
    }

    /// The conjunctive part of the document (disjunctions ignored).
    pub fn base_pattern(&self) -> Result<QueryPattern> {
        let mut q = QueryPattern::new();
        for v in &self.vertices {
            q.add_vertex(&v.id)?;
        }
        for e in &self.edges {
            q.add_edge(&e.id, &e.src, &e.trg)?;
        }
        for v in &self.vertices {
            apply(&mut q, &v.id, &v.labels, &v.props)?;
        }
        for e in &self.edges {
            apply(&mut q, &e.id, &e.labels, &e.props)?;
        }
        for group in &self.any_of {
            if group.is_empty() {
                return Err(Error::Query("empty anyOf group".into()));
            }
            for alt in group {
                if !q.known(&alt.id) {
                    return Err(Error::Query(format!("anyOf references unknown id {:?}", alt.id)));
                }
            }
        }
        Ok(q)
    }

    /// Number of conjunctive queries the disjunctions expand to.
    pub fn expansion_count(&self) -> usize {
        self.any_of.iter().fold(1usize, |n, g| n.saturating_mul(g.len()))
    }

    /// Cartesian expansion of all `anyOf` groups into conjunctive patterns.
    pub fn expand(&self, cap: usize) -> Result<Vec<QueryPattern>> {
        let count = self.expansion_count();
        if count > cap {
            return Err(Error::ExpansionCap { count, cap });
        }
        let mut out = vec![self.base_pattern()?];
        for group in &self.any_of {
            let mut next = Vec::with_capacity(out.len() * group.len());
            for q in &out {
                for alt in group {
                    let mut q = q.clone();
                    apply(&mut q, &alt.id, &alt.labels, &alt.props)?;
                    next.push(q);
                }
            }
            out = next;
        }
        Ok(out)
    }
}

fn apply(q: &mut QueryPattern, id: &str, labels: &[String], props: &[PropDoc]) -> Result<()> {
    for l in labels {
        q.add_label(id, l)?;
    }
    for p in props {
        q.add_prop(id, &p.key, p.op, p.value.clone())?;
    }
    Ok(())
}

/// Parses a query document that must not contain disjunctions.
pub fn parse_query(text: &str) -> Result<QueryPattern> {
    let doc = QueryDoc::from_json(text)?;
    if !doc.any_of.is_empty() {
        return Err(Error::Query("document has anyOf groups; expand it first".into()));
    }
    doc.base_pattern()
}
