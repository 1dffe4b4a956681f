#![allow(dead_code)]

use cardest::graph::{count_satisfying, GraphBuilder, PropertyGraph};
use cardest::query::{
    ids_of, Constraint, ConstraintSet, PartialEstimate, Predicate, Provenance, QueryPattern, QueryValue, Value,
};
use proptest::prelude::*;

const VLABELS: [&str; 2] = ["A", "B"];
const ELABELS: [&str; 2] = ["r", "s"];

#[derive(Debug, Clone)]
pub struct GraphPlan {
    pub vertices: Vec<(Option<usize>, Option<i64>)>,
    pub edges: Vec<(usize, usize, usize)>,
}

impl GraphPlan {
    pub fn build(&self) -> PropertyGraph {
        let mut b = GraphBuilder::new();
        for (i, (label, flag)) in self.vertices.iter().enumerate() {
            let labels: Vec<&str> = label.iter().map(|&l| VLABELS[l]).collect();
            let props: Vec<(&str, Value)> = flag.iter().map(|&f| ("flag", Value::Int(f))).collect();
            b.vertex(&format!("v{i}"), &labels, &props);
        }
        for (j, &(s, t, l)) in self.edges.iter().enumerate() {
            let n = self.vertices.len();
            b.edge(&format!("e{j}"), &format!("v{}", s % n), &format!("v{}", t % n), &[ELABELS[l]], &[]);
        }
        b.build().expect("valid plan")
    }
}

pub fn graph_plan(max_v: usize, max_e: usize) -> impl Strategy<Value = GraphPlan> {
    let vertex = (proptest::option::of(0..2usize), proptest::option::of(0..3i64));
    (proptest::collection::vec(vertex, 1..=max_v), proptest::collection::vec((0..8usize, 0..8usize, 0..2usize), 0..=max_e))
        .prop_map(|(vertices, edges)| GraphPlan { vertices, edges })
}

#[derive(Debug, Clone)]
pub struct QueryPlan {
    pub n_vertices: usize,
    pub edges: Vec<(usize, usize, Option<usize>)>,
    pub labels: Vec<Option<usize>>,
    pub props: Vec<Option<(usize, i64)>>,
}

const OPS: [Predicate; 4] = [Predicate::Eq, Predicate::Neq, Predicate::Lt, Predicate::Geq];

impl QueryPlan {
    pub fn build(&self) -> QueryPattern {
        let mut q = QueryPattern::new();
        for i in 0..self.n_vertices {
            let v = format!("x{i}");
            q.add_vertex(&v).unwrap();
            if let Some(l) = self.labels[i] {
                q.add_label(&v, VLABELS[l]).unwrap();
            }
            if let Some((op, val)) = self.props[i] {
                q.add_prop(&v, "flag", OPS[op], QueryValue::Scalar(Value::Int(val))).unwrap();
            }
        }
        for (j, &(s, t, l)) in self.edges.iter().enumerate() {
            let e = format!("y{j}");
            q.add_edge(&e, &format!("x{}", s % self.n_vertices), &format!("x{}", t % self.n_vertices)).unwrap();
            if let Some(l) = l {
                q.add_label(&e, ELABELS[l]).unwrap();
            }
        }
        q
    }
}

pub fn query_plan(max_edges: usize) -> impl Strategy<Value = QueryPlan> {
    (1..=max_edges + 1, 1..=max_edges).prop_flat_map(|(nv, ne)| {
        (
            Just(nv),
            proptest::collection::vec((0..nv, 0..nv, proptest::option::of(0..2usize)), ne),
            proptest::collection::vec(proptest::option::of(0..2usize), nv),
            proptest::collection::vec(proptest::option::of((0..4usize, 0..3i64)), nv),
        )
            .prop_map(|(n_vertices, edges, labels, props)| QueryPlan { n_vertices, edges, labels, props })
    })
}

/// Fraction of all assignments of the set's ids that satisfy it.
pub fn oracle(g: &PropertyGraph, cs: &ConstraintSet) -> f64 {
    let n = ids_of(cs).len() as i32;
    count_satisfying(g, cs).unwrap() as f64 / (g.n_ids() as f64).powi(n)
}

pub fn exact_pe(g: &PropertyGraph, cs: ConstraintSet) -> PartialEstimate {
    let s = oracle(g, &cs);
    PartialEstimate::new(cs, s, Provenance::Exact)
}

pub fn exact_singletons(g: &PropertyGraph, q: &QueryPattern) -> Vec<PartialEstimate> {
    q.constraints().into_iter().map(|c: Constraint| exact_pe(g, [c].into())).collect()
}

/// Picks subsets of `C(q)` by bit masks.
pub fn subsets(q: &QueryPattern, masks: &[u64]) -> Vec<ConstraintSet> {
    let all: Vec<Constraint> = q.constraints().into_iter().collect();
    masks
        .iter()
        .map(|m| all.iter().enumerate().filter(|(i, _)| m >> (i % 64) & 1 == 1).map(|(_, c)| c.clone()).collect())
        .filter(|s: &ConstraintSet| !s.is_empty())
        .collect()
}

pub fn at_least(est: f64, truth: f64) -> bool {
    est >= truth - 1e-12 * truth.max(1e-300)
}
