//! Immutable property graphs with adjacency and label indexes, plus the
//! exact matcher used as ground truth.

mod io;
mod matcher;

use std::collections::{BTreeMap, HashMap};
use std::ops::Range;

use sha2::{Digest, Sha256};

pub use io::{load_graph, load_graph_dir, save_graph_dir, EdgeRecord, VertexRecord};
pub use matcher::{count_satisfying, exact_matches, Matcher, Semantics, DEFAULT_BUDGET};

use crate::error::{Error, Result};
use crate::query::{Constraint, QId, Value};

/// Dense internal element id. Vertices occupy `0..n_vertices`, edges follow.
pub type Elem = u32;

/// Assignment of query ids to graph elements.
pub type Mapping = HashMap<QId, Elem>;

#[derive(Debug, Clone, PartialEq)]
pub struct PropertyGraph {
    names: Vec<String>,
    by_name: HashMap<String, Elem>,
    n_vertices: usize,
    endpoints: Vec<(Elem, Elem)>,
    labels: Vec<Vec<String>>,
    props: Vec<BTreeMap<String, Value>>,
    out_adj: Vec<Vec<Elem>>,
    in_adj: Vec<Vec<Elem>>,
    labeled_out: HashMap<(Elem, String), Vec<Elem>>,
    labeled_in: HashMap<(Elem, String), Vec<Elem>>,
    by_label: BTreeMap<String, Vec<Elem>>,
}

#[derive(Debug, Default)]
pub struct GraphBuilder {
    vertices: Vec<VertexRecord>,
    edges: Vec<EdgeRecord>,
}

impl GraphBuilder {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn vertex(&mut self, id: &str, labels: &[&str], props: &[(&str, Value)]) -> &mut Self {
        self.vertices.push(VertexRecord {
            id: id.to_string(),
            labels: labels.iter().map(|s| s.to_string()).collect(),
            props: props.iter().map(|(k, v)| (k.to_string(), v.clone())).collect(),
        });
        self
    }

    pub fn edge(&mut self, id: &str, src: &str, trg: &str, labels: &[&str], props: &[(&str, Value)]) -> &mut Self {
        self.edges.push(EdgeRecord {
            id: id.to_string(),
            src: src.to_string(),
            trg: trg.to_string(),
            labels: labels.iter().map(|s| s.to_string()).collect(),
            props: props.iter().map(|(k, v)| (k.to_string(), v.clone())).collect(),
        });
        self
    }

    pub fn push_vertex(&mut self, r: VertexRecord) {
        self.vertices.push(r);
    }

    pub fn push_edge(&mut self, r: EdgeRecord) {
        self.edges.push(r);
    }

    pub fn build(self) -> Result<PropertyGraph> {
        PropertyGraph::from_records(self.vertices, self.edges)
    }
}

impl PropertyGraph {
    pub fn from_records(vertices: Vec<VertexRecord>, edges: Vec<EdgeRecord>) -> Result<Self> {
        let n_vertices = vertices.len();
        let n = n_vertices + edges.len();
        let mut g = PropertyGraph {
            names: Vec::with_capacity(n),
            by_name: HashMap::with_capacity(n),
            n_vertices,
            endpoints: Vec::with_capacity(edges.len()),
            labels: Vec::with_capacity(n),
            props: Vec::with_capacity(n),
            out_adj: vec![Vec::new(); n_vertices],
            in_adj: vec![Vec::new(); n_vertices],
            labeled_out: HashMap::new(),
            labeled_in: HashMap::new(),
            by_label: BTreeMap::new(),
        };
        let add = |g: &mut PropertyGraph, id: String, mut labels: Vec<String>, props| -> Result<Elem> {
            let elem = g.names.len() as Elem;
            if g.by_name.insert(id.clone(), elem).is_some() {
                return Err(Error::Integrity(format!("duplicate id {id:?}")));
            }
            labels.sort();
            labels.dedup();
            for l in &labels {
                g.by_label.entry(l.clone()).or_default().push(elem);
            }
            g.names.push(id);
            g.labels.push(labels);
            g.props.push(props);
            Ok(elem)
        };
        for v in vertices {
            add(&mut g, v.id, v.labels, v.props)?;
        }
        for e in edges {
            let lookup = |name: &str| {
                g.by_name
                    .get(name)
                    .copied()
                    .filter(|&x| (x as usize) < n_vertices)
                    .ok_or_else(|| Error::Integrity(format!("edge {:?} references unknown vertex {name:?}", e.id)))
            };
            let (s, t) = (lookup(&e.src)?, lookup(&e.trg)?);
            let elem = add(&mut g, e.id, e.labels, e.props)?;
            g.endpoints.push((s, t));
            g.out_adj[s as usize].push(elem);
            g.in_adj[t as usize].push(elem);
            for l in &g.labels[elem as usize] {
                g.labeled_out.entry((s, l.clone())).or_default().push(elem);
                g.labeled_in.entry((t, l.clone())).or_default().push(elem);
            }
        }
        Ok(g)
    }

    pub fn n_vertices(&self) -> usize {
        self.n_vertices
    }

    pub fn n_edges(&self) -> usize {
        self.endpoints.len()
    }

    pub fn n_ids(&self) -> usize {
        self.names.len()
    }

    pub fn vertices(&self) -> Range<Elem> {
        0..self.n_vertices as Elem
    }

    pub fn edges(&self) -> Range<Elem> {
        self.n_vertices as Elem..self.names.len() as Elem
    }

    pub fn elements(&self) -> Range<Elem> {
        0..self.names.len() as Elem
    }

    pub fn is_vertex(&self, x: Elem) -> bool {
        (x as usize) < self.n_vertices
    }

    pub fn is_edge(&self, x: Elem) -> bool {
        (x as usize) >= self.n_vertices && (x as usize) < self.names.len()
    }

    /// Source and target of an edge; `None` for vertices.
    pub fn endpoints(&self, e: Elem) -> Option<(Elem, Elem)> {
        if self.is_edge(e) {
            Some(self.endpoints[e as usize - self.n_vertices])
        } else {
            None
        }
    }

    pub fn name(&self, x: Elem) -> &str {
        &self.names[x as usize]
    }

    pub fn lookup(&self, name: &str) -> Option<Elem> {
        self.by_name.get(name).copied()
    }

    pub fn labels(&self, x: Elem) -> &[String] {
        &self.labels[x as usize]
    }

    pub fn has_label(&self, x: Elem, label: &str) -> bool {
        self.labels[x as usize].binary_search_by(|l| l.as_str().cmp(label)).is_ok()
    }

    pub fn props(&self, x: Elem) -> &BTreeMap<String, Value> {
        &self.props[x as usize]
    }

    pub fn prop(&self, x: Elem, key: &str) -> Option<&Value> {
        self.props[x as usize].get(key)
    }

    /// Edges leaving `v`, optionally restricted to those carrying `label`.
    /// Unknown vertices (and edges) yield an empty list.
    pub fn out_edges(&self, v: Elem, label: Option<&str>) -> &[Elem] {
        self.adjacent(v, label, &self.out_adj, &self.labeled_out)
    }

    pub fn in_edges(&self, v: Elem, label: Option<&str>) -> &[Elem] {
        self.adjacent(v, label, &self.in_adj, &self.labeled_in)
    }

    fn adjacent<'a>(
        &'a self,
        v: Elem,
        label: Option<&str>,
        all: &'a [Vec<Elem>],
        labeled: &'a HashMap<(Elem, String), Vec<Elem>>,
    ) -> &'a [Elem] {
        if !self.is_vertex(v) {
            return &[];
        }
        match label {
            None => &all[v as usize],
            Some(l) => labeled.get(&(v, l.to_string())).map_or(&[], Vec::as_slice),
        }
    }

    /// All elements (vertices and edges) carrying `label`, ascending.
    pub fn with_label(&self, label: &str) -> &[Elem] {
        self.by_label.get(label).map_or(&[], Vec::as_slice)
    }

    pub fn all_labels(&self) -> impl Iterator<Item = &str> {
        self.by_label.keys().map(String::as_str)
    }

    /// Content hash over the canonical record serialization.
    pub fn fingerprint(&self) -> String {
        let mut h = Sha256::new();
        for r in self.vertex_records() {
            h.update(serde_json::to_vec(&r).expect("serializable record"));
            h.update(b"\n");
        }
        h.update(b"--\n");
        for r in self.edge_records() {
            h.update(serde_json::to_vec(&r).expect("serializable record"));
            h.update(b"\n");
        }
        format!("{:x}", h.finalize())
    }

    pub fn vertex_records(&self) -> impl Iterator<Item = VertexRecord> + '_ {
        self.vertices().map(|v| VertexRecord {
            id: self.names[v as usize].clone(),
            labels: self.labels[v as usize].clone(),
            props: self.props[v as usize].clone(),
        })
    }

    pub fn edge_records(&self) -> impl Iterator<Item = EdgeRecord> + '_ {
        self.edges().map(|e| {
            let (s, t) = self.endpoints[e as usize - self.n_vertices];
            EdgeRecord {
                id: self.names[e as usize].clone(),
                src: self.names[s as usize].clone(),
                trg: self.names[t as usize].clone(),
                labels: self.labels[e as usize].clone(),
                props: self.props[e as usize].clone(),
            }
        })
    }

    /// Whether mapping `m` satisfies `c`. Every id of `c` must be assigned.
    pub fn check(&self, m: &Mapping, c: &Constraint) -> bool {
        let at = |id: &QId| *m.get(id).unwrap_or_else(|| panic!("id {id} is unassigned"));
        self.check_with(c, at)
    }

    /// Like [`check`](Self::check) with an arbitrary id lookup.
    pub fn check_with(&self, c: &Constraint, at: impl Fn(&QId) -> Elem) -> bool {
        match c {
            Constraint::Vertex { id } => self.is_vertex(at(id)),
            Constraint::Edge { id } => self.is_edge(at(id)),
            Constraint::Src { v, e } => self.endpoints(at(e)).is_some_and(|(s, _)| s == at(v)),
            Constraint::Trg { v, e } => self.endpoints(at(e)).is_some_and(|(_, t)| t == at(v)),
            Constraint::HasLabel { id, label } => self.has_label(at(id), label),
            Constraint::HasKey { id, key } => self.prop(at(id), key).is_some(),
            Constraint::PropValue { id, key, op, value } => {
                self.prop(at(id), key).is_some_and(|stored| op.eval(stored, value))
            }
        }
    }
}

/// Free-function form of [`PropertyGraph::check`].
pub fn check_constraint(g: &PropertyGraph, m: &Mapping, c: &Constraint) -> bool {
    g.check(m, c)
}
