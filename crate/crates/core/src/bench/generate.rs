use rand::distributions::{Distribution, WeightedIndex};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::workload::{to_doc, WorkloadQuery};
use crate::error::{Error, Result};
use crate::graph::{Elem, GraphBuilder, PropertyGraph};
use crate::query::{Predicate, QueryPattern, QueryValue, Value};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "camelCase")]
pub enum DegreeDistribution {
    Uniform,
    /// Out-degree weight of the i-th vertex is `1 / (i + 1)^exponent`.
    Zipf { exponent: f64 },
}

/// Shape of a synthetic graph. Every knob is reproducible from `seed`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GraphSpec {
    pub n_vertices: usize,
    pub n_edges: usize,
    pub vertex_labels: Vec<String>,
    pub edge_labels: Vec<String>,
    pub degree: DegreeDistribution,
    /// Probability that an edge's label follows its source label and its
    /// target label follows the edge label. 0 gives independent labels.
    pub schema: f64,
    /// Base rate of `flag = 1` on vertices.
    pub prop_rate: f64,
    /// Pulls `P(flag = 1 | label)` towards 1 for the first vertex label and
    /// towards 0 for the others. 0 makes flag independent of labels.
    pub correlation: f64,
    pub seed: u64,
}

impl Default for GraphSpec {
    fn default() -> Self {
        GraphSpec {
            n_vertices: 100,
            n_edges: 200,
            vertex_labels: ["A", "B", "C"].map(String::from).to_vec(),
            edge_labels: ["r", "s"].map(String::from).to_vec(),
            degree: DegreeDistribution::Uniform,
            schema: 0.5,
            prop_rate: 0.3,
            correlation: 0.0,
            seed: 0,
        }
    }
}

impl GraphSpec {
    fn validate(&self) -> Result<()> {
        let unit = |x: f64| (0.0..=1.0).contains(&x);
        if self.n_vertices == 0 && self.n_edges > 0 {
            return Err(Error::Config("edges need at least one vertex".into()));
        }
        if self.vertex_labels.is_empty() || self.edge_labels.is_empty() {
            return Err(Error::Config("label alphabets must not be empty".into()));
        }
        if !unit(self.schema) || !unit(self.prop_rate) || !unit(self.correlation) {
            return Err(Error::Config("schema, prop_rate and correlation must lie in [0, 1]".into()));
        }
        if let DegreeDistribution::Zipf { exponent } = self.degree {
            if !(exponent >= 0.0 && exponent.is_finite()) {
                return Err(Error::Config("zipf exponent must be finite and non-negative".into()));
            }
        }
        Ok(())
    }
}

/// Builds a random labeled property graph. Vertices carry `flag` (0/1,
/// correlated with the label per the spec) and `score` (0..100, high
/// scores favour flagged vertices as correlation grows); edges carry `w`.
pub fn generate_graph(spec: &GraphSpec) -> Result<PropertyGraph> {
    spec.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let nvl = spec.vertex_labels.len();
    let nel = spec.edge_labels.len();
    let mut b = GraphBuilder::new();
    let mut label_of = Vec::with_capacity(spec.n_vertices);
    let mut by_label: Vec<Vec<usize>> = vec![Vec::new(); nvl];
    for i in 0..spec.n_vertices {
        let l = rng.gen_range(0..nvl);
        let hot = if l == 0 { 1.0 } else { 0.0 };
        let p = (1.0 - spec.correlation) * spec.prop_rate + spec.correlation * hot;
        let flag = rng.gen_bool(p);
        let score = if flag && rng.gen_bool(spec.correlation) { rng.gen_range(90..100) } else { rng.gen_range(0..100) };
        b.vertex(
            &format!("v{i}"),
            &[spec.vertex_labels[l].as_str()],
            &[("flag", Value::Int(flag as i64)), ("score", Value::Int(score))],
        );
        label_of.push(l);
        by_label[l].push(i);
    }
    let weights: Vec<f64> = (0..spec.n_vertices)
        .map(|i| match spec.degree {
            DegreeDistribution::Uniform => 1.0,
            DegreeDistribution::Zipf { exponent } => 1.0 / ((i + 1) as f64).powf(exponent),
        })
        .collect();
    if spec.n_edges > 0 {
        let src_dist = WeightedIndex::new(&weights).map_err(|e| Error::Config(e.to_string()))?;
        for j in 0..spec.n_edges {
            let s = src_dist.sample(&mut rng);
            let el = if rng.gen_bool(spec.schema) { label_of[s] % nel } else { rng.gen_range(0..nel) };
            let wanted = &by_label[(el + 1) % nvl];
            let t = if !wanted.is_empty() && rng.gen_bool(spec.schema) {
                wanted[rng.gen_range(0..wanted.len())]
            } else {
                rng.gen_range(0..spec.n_vertices)
            };
            b.edge(
                &format!("e{j}"),
                &format!("v{s}"),
                &format!("v{t}"),
                &[spec.edge_labels[el].as_str()],
                &[("w", Value::Int(rng.gen_range(0..10)))],
            );
        }
    }
    b.build()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WorkloadSpec {
    pub n_queries: usize,
    pub max_edges: usize,
    /// Probability that a query vertex keeps its data vertex's label.
    pub vertex_label_rate: f64,
    /// Probability that a query vertex gets an equality on `flag`.
    pub prop_rate: f64,
    pub seed: u64,
}

impl Default for WorkloadSpec {
    fn default() -> Self {
        WorkloadSpec { n_queries: 20, max_edges: 3, vertex_label_rate: 0.7, prop_rate: 0.0, seed: 0 }
    }
}

/// Random tree-shaped queries grown along the data, so each has at least
/// one match. Edges keep their data labels; vertices keep theirs and
/// their `flag` value at the configured rates.
pub fn generate_workload(g: &PropertyGraph, spec: &WorkloadSpec) -> Result<Vec<WorkloadQuery>> {
    if g.n_edges() == 0 || spec.max_edges == 0 {
        return Err(Error::Config("workload generation needs edges in the graph and max_edges >= 1".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let edges: Vec<Elem> = g.edges().collect();
    let mut out = Vec::with_capacity(spec.n_queries);
    for n in 0..spec.n_queries {
        let size = rng.gen_range(1..=spec.max_edges);
        // (query vertex name, data vertex)
        let mut verts: Vec<(String, Elem)> = Vec::new();
        let mut qedges: Vec<(String, String, String, Elem)> = Vec::new();
        let first = edges[rng.gen_range(0..edges.len())];
        let (s, t) = g.endpoints(first).expect("edge");
        verts.push(("x0".into(), s));
        verts.push(("x1".into(), t));
        qedges.push(("y0".into(), "x0".into(), "x1".into(), first));
        for _ in 1..size {
            // Grow from a random pattern vertex along an unused data edge.
            let (qv, dv) = verts[rng.gen_range(0..verts.len())].clone();
            let outgoing = rng.gen_bool(0.5);
            let cands: Vec<Elem> = if outgoing { g.out_edges(dv, None) } else { g.in_edges(dv, None) }
                .iter()
                .copied()
                .filter(|e| qedges.iter().all(|q| q.3 != *e))
                .collect();
            if cands.is_empty() {
                continue;
            }
            let e = cands[rng.gen_range(0..cands.len())];
            let (s, t) = g.endpoints(e).expect("edge");
            let nv = format!("x{}", verts.len());
            let ne = format!("y{}", qedges.len());
            if outgoing {
                verts.push((nv.clone(), t));
                qedges.push((ne, qv, nv, e));
            } else {
                verts.push((nv.clone(), s));
                qedges.push((ne, nv, qv, e));
            }
        }
        let mut q = QueryPattern::new();
        for (name, _) in &verts {
            q.add_vertex(name)?;
        }
        for (name, s, t, e) in &qedges {
            q.add_edge(name, s, t)?;
            if let Some(l) = g.labels(*e).first() {
                q.add_label(name, l)?;
            }
        }
        for (name, v) in &verts {
            if rng.gen_bool(spec.vertex_label_rate) {
                if let Some(l) = g.labels(*v).first() {
                    q.add_label(name, l)?;
                }
            }
            if rng.gen_bool(spec.prop_rate) {
                if let Some(val) = g.prop(*v, "flag") {
                    q.add_prop(name, "flag", Predicate::Eq, QueryValue::Scalar(val.clone()))?;
                }
            }
        }
        out.push(WorkloadQuery { id: format!("q{n:03}"), doc: to_doc(&q) });
    }
    Ok(out)
}
