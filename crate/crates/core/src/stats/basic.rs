use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::graph::PropertyGraph;
use crate::query::{Predicate, QueryValue};

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct LabelCount {
    pub vertices: u64,
    pub edges: u64,
}

impl LabelCount {
    pub fn total(&self) -> u64 {
        self.vertices + self.edges
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExactProp {
    pub key: String,
    pub op: Predicate,
    pub value: QueryValue,
    pub count: u64,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct BasicStats {
    pub n_vertices: u64,
    pub n_edges: u64,
    pub n_ids: u64,
    pub label_sel: BTreeMap<String, LabelCount>,
    pub key_sel: BTreeMap<String, u64>,
    /// Exact element counts for selected `(key, op, value)` triples, keyed
    /// by [`prop_key`].
    #[serde(default)]
    pub prop_exact: BTreeMap<String, ExactProp>,
}

/// Canonical text of a property predicate.
pub fn prop_key(key: &str, op: Predicate, value: &QueryValue) -> String {
    format!("{key} {op} {value}")
}

impl BasicStats {
    pub fn exact(&self, key: &str, op: Predicate, value: &QueryValue) -> Option<u64> {
        self.prop_exact.get(&prop_key(key, op, value)).map(|e| e.count)
    }

    pub fn knows_label(&self, label: &str) -> bool {
        self.label_sel.contains_key(label)
    }
}

pub fn build_basic(g: &PropertyGraph, exact: &[(String, Predicate, QueryValue)]) -> BasicStats {
    let mut s = BasicStats {
        n_vertices: g.n_vertices() as u64,
        n_edges: g.n_edges() as u64,
        n_ids: g.n_ids() as u64,
        ..BasicStats::default()
    };
    for x in g.elements() {
        for l in g.labels(x) {
            let c = s.label_sel.entry(l.clone()).or_default();
            if g.is_vertex(x) {
                c.vertices += 1;
            } else {
                c.edges += 1;
            }
        }
        for k in g.props(x).keys() {
            *s.key_sel.entry(k.clone()).or_default() += 1;
        }
    }
    for (key, op, value) in exact {
        let count = g
            .elements()
            .filter(|&x| g.prop(x, key).is_some_and(|v| op.eval(v, value)))
            .count() as u64;
        s.prop_exact.insert(
            prop_key(key, *op, value),
            ExactProp { key: key.clone(), op: *op, value: value.clone(), count },
        );
    }
    s
}
