use std::collections::BTreeSet;
use std::io::{BufRead, BufReader, Write};
use std::path::Path;
use std::time::Instant;

use serde::{Deserialize, Serialize};

use super::qerror;
use crate::error::{Error, Result};
use crate::framework::{estimate_with_disjunctions, EstimatorConfig};
use crate::graph::{Matcher, PropertyGraph};
use crate::query::{EdgeDoc, PropDoc, QueryDoc, QueryPattern, VertexDoc};
use crate::stats::StatisticsCatalog;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WorkloadQuery {
    pub id: String,
    #[serde(flatten)]
    pub doc: QueryDoc,
}

/// Reads a workload: a JSON-lines file of queries with an `id` field, or a
/// directory of `*.json` query documents named after their file stem.
pub fn load_workload(path: &Path) -> Result<Vec<WorkloadQuery>> {
    if path.is_dir() {
        let mut files: Vec<_> = std::fs::read_dir(path)?
            .filter_map(|e| e.ok().map(|e| e.path()))
            .filter(|p| p.extension().is_some_and(|x| x == "json"))
            .collect();
        files.sort();
        return files
            .iter()
            .map(|p| {
                let id = p.file_stem().and_then(|s| s.to_str()).unwrap_or("query").to_string();
                Ok(WorkloadQuery { id, doc: QueryDoc::read(p)? })
            })
            .collect();
    }
    let reader = BufReader::new(std::fs::File::open(path)?);
    let mut out = Vec::new();
    for (i, line) in reader.lines().enumerate() {
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        let q = serde_json::from_str(&line).map_err(|e| Error::Parse {
            path: path.to_path_buf(),
            line: i + 1,
            message: e.to_string(),
        })?;
        out.push(q);
    }
    Ok(out)
}

pub fn write_workload(path: &Path, queries: &[WorkloadQuery]) -> Result<()> {
    let mut f = std::io::BufWriter::new(std::fs::File::create(path)?);
    for q in queries {
        serde_json::to_writer(&mut f, q)?;
        f.write_all(b"\n")?;
    }
    f.flush()?;
    Ok(())
}

/// Document form of a conjunctive pattern.
pub fn to_doc(q: &QueryPattern) -> QueryDoc {
    let labels = |id: &str| q.labels(id).map(str::to_string).collect();
    let props = |id: &str| {
        q.props()
            .iter()
            .filter(|(i, _)| &**i == id)
            .map(|(_, p)| PropDoc { key: p.key.clone(), op: p.op, value: p.value.clone() })
            .collect()
    };
    QueryDoc {
        vertices: q.vertices().iter().map(|v| VertexDoc { id: v.to_string(), labels: labels(v), props: props(v) }).collect(),
        edges: q
            .edges()
            .iter()
            .map(|e| EdgeDoc {
                id: e.id.to_string(),
                src: e.src.to_string(),
                trg: e.trg.to_string(),
                labels: labels(&e.id),
                props: props(&e.id),
            })
            .collect(),
        any_of: Vec::new(),
    }
}

fn sub_pattern(q: &QueryPattern, edges: &[usize], with_props: bool) -> Result<QueryPattern> {
    let mut sub = QueryPattern::new();
    let chosen: Vec<_> = edges.iter().map(|&i| &q.edges()[i]).collect();
    let mut ids: Vec<&str> = Vec::new();
    for v in q.vertices() {
        if chosen.iter().any(|e| e.src == *v || e.trg == *v) {
            sub.add_vertex(v)?;
            ids.push(v);
        }
    }
    for e in &chosen {
        sub.add_edge(&e.id, &e.src, &e.trg)?;
        ids.push(&e.id);
    }
    for id in ids {
        for l in q.labels(id) {
            sub.add_label(id, l)?;
        }
    }
    if with_props {
        for (id, p) in q.props() {
            if sub.ids().contains(id) {
                sub.add_prop(id, &p.key, p.op, p.value.clone())?;
            }
        }
    }
    Ok(sub)
}

/// Connected subqueries with 1..=`max_edges` edges, each with its property
/// constraints and, when it has any, also without them. Property groups
/// stay whole per id. A query without edges yields itself.
pub fn subqueries(q: &QueryPattern, max_edges: usize) -> Result<Vec<(String, QueryPattern)>> {
    let edges = q.edges();
    if edges.is_empty() {
        return Ok(vec![(String::new(), q.clone())]);
    }
    let touches = |a: usize, b: usize| {
        let (x, y) = (&edges[a], &edges[b]);
        x.src == y.src || x.src == y.trg || x.trg == y.src || x.trg == y.trg
    };
    let mut seen: BTreeSet<Vec<usize>> = BTreeSet::new();
    let mut frontier: Vec<Vec<usize>> = (0..edges.len()).map(|i| vec![i]).collect();
    while let Some(set) = frontier.pop() {
        if !seen.insert(set.clone()) || set.len() >= max_edges {
            continue;
        }
        for j in 0..edges.len() {
            if !set.contains(&j) && set.iter().any(|&i| touches(i, j)) {
                let mut next = set.clone();
                next.push(j);
                next.sort_unstable();
                if !seen.contains(&next) {
                    frontier.push(next);
                }
            }
        }
    }
    let mut out = Vec::new();
    for set in seen.into_iter().filter(|s| s.len() <= max_edges) {
        let name = set.iter().map(|&i| edges[i].id.to_string()).collect::<Vec<_>>().join("+");
        let with = sub_pattern(q, &set, true)?;
        let has_props = !with.props().is_empty();
        out.push((name.clone(), with));
        if has_props {
            out.push((format!("{name}~np"), sub_pattern(q, &set, false)?));
        }
    }
    // Larger subqueries last, then by name.
    out.sort_by(|a, b| a.1.edges().len().cmp(&b.1.edges().len()).then_with(|| a.0.cmp(&b.0)));
    Ok(out)
}

#[derive(Debug, Clone)]
pub struct BenchOptions {
    pub oracle_budget: u64,
    /// Expand each query into its connected subqueries up to this size.
    pub subqueries: Option<usize>,
    /// Write zero timings so that reruns are byte-identical.
    pub reproducible: bool,
}

impl Default for BenchOptions {
    fn default() -> Self {
        BenchOptions { oracle_budget: crate::graph::DEFAULT_BUDGET, subqueries: None, reproducible: false }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BenchRow {
    pub query_id: String,
    pub n_edge_ids: usize,
    pub config: String,
    pub exact: u128,
    pub estimate: f64,
    pub qerror: f64,
    pub est_ms: f64,
    pub oracle_ms: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Skipped {
    pub query_id: String,
    pub reason: String,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct WorkloadReport {
    pub rows: Vec<BenchRow>,
    pub skipped: Vec<Skipped>,
}

fn exact_count(g: &PropertyGraph, doc: &QueryDoc, budget: u64, cap: usize) -> Result<u128> {
    let m = Matcher { budget, ..Matcher::default() };
    let mut total: u128 = 0;
    for q in doc.expand(cap)? {
        total = total.checked_add(m.count(g, &q.constraints())?).ok_or(Error::CountOverflow)?;
    }
    Ok(total)
}

/// Runs every configuration on every query (or subquery) and compares the
/// estimate with the oracle count. Queries the oracle cannot finish are
/// skipped and listed.
pub fn run_workload(
    g: &PropertyGraph,
    cat: &StatisticsCatalog,
    queries: &[WorkloadQuery],
    configs: &[EstimatorConfig],
    opts: &BenchOptions,
) -> Result<WorkloadReport> {
    for cfg in configs {
        cfg.validate(cat, Some(g))?;
    }
    let cap = configs.iter().map(|c| c.expansion_cap).max().unwrap_or(crate::framework::DEFAULT_EXPANSION_CAP);
    let mut items: Vec<(String, QueryDoc)> = Vec::new();
    for wq in queries {
        match opts.subqueries {
            Some(k) if wq.doc.any_of.is_empty() => {
                for (name, sub) in subqueries(&wq.doc.base_pattern()?, k)? {
                    let id = if name.is_empty() { wq.id.clone() } else { format!("{}#{name}", wq.id) };
                    items.push((id, to_doc(&sub)));
                }
            }
            _ => items.push((wq.id.clone(), wq.doc.clone())),
        }
    }
    let ms = |t: Instant| if opts.reproducible { 0.0 } else { t.elapsed().as_secs_f64() * 1e3 };
    let mut report = WorkloadReport::default();
    for (id, doc) in items {
        let t = Instant::now();
        let exact = match exact_count(g, &doc, opts.oracle_budget, cap) {
            Ok(n) => n,
            Err(e @ (Error::OracleBudget { .. } | Error::CountOverflow | Error::ExpansionCap { .. })) => {
                log::warn!("skipping {id}: {e}");
                report.skipped.push(Skipped { query_id: id, reason: e.to_string() });
                continue;
            }
            Err(e) => return Err(e),
        };
        let oracle_ms = ms(t);
        let n_edge_ids = doc.edges.len();
        for cfg in configs {
            let t = Instant::now();
            let r = estimate_with_disjunctions(&doc, Some(g), cat, cfg)?;
            report.rows.push(BenchRow {
                query_id: id.clone(),
                n_edge_ids,
                config: cfg.label(),
                exact,
                estimate: r.cardinality,
                qerror: qerror(r.cardinality, exact as f64),
                est_ms: ms(t),
                oracle_ms,
            });
        }
    }
    Ok(report)
}

pub fn write_csv<W: Write>(out: W, rows: &[BenchRow]) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    for r in rows {
        w.serialize(r)?;
    }
    w.flush()?;
    Ok(())
}
