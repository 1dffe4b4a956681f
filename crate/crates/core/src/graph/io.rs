use std::collections::BTreeMap;
use std::fs::File;
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::Path;

use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};

use super::PropertyGraph;
use crate::error::{Error, Result};
use crate::query::Value;

pub const VERTEX_FILE: &str = "vertices.jsonl";
pub const EDGE_FILE: &str = "edges.jsonl";

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VertexRecord {
    pub id: String,
    #[serde(default)]
    pub labels: Vec<String>,
    #[serde(default)]
    pub props: BTreeMap<String, Value>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EdgeRecord {
    pub id: String,
    pub src: String,
    pub trg: String,
    #[serde(default)]
    pub labels: Vec<String>,
    #[serde(default)]
    pub props: BTreeMap<String, Value>,
}

fn read_lines<T: DeserializeOwned>(path: &Path) -> Result<Vec<T>> {
    let reader = BufReader::new(File::open(path)?);
    let mut out = Vec::new();
    for (i, line) in reader.lines().enumerate() {
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        let rec = serde_json::from_str(&line).map_err(|e| Error::Parse {
            path: path.to_path_buf(),
            line: i + 1,
            message: e.to_string(),
        })?;
        out.push(rec);
    }
    Ok(out)
}

pub fn load_graph(vertex_file: &Path, edge_file: &Path) -> Result<PropertyGraph> {
    let g = PropertyGraph::from_records(read_lines(vertex_file)?, read_lines(edge_file)?)?;
    log::info!(
        "loaded graph: {} vertices, {} edges, {} ids",
        g.n_vertices(),
        g.n_edges(),
        g.n_ids()
    );
    Ok(g)
}

/// Loads `vertices.jsonl` and `edges.jsonl` from a directory.
pub fn load_graph_dir(dir: &Path) -> Result<PropertyGraph> {
    load_graph(&dir.join(VERTEX_FILE), &dir.join(EDGE_FILE))
}

pub fn save_graph_dir(g: &PropertyGraph, dir: &Path) -> Result<()> {
    std::fs::create_dir_all(dir)?;
    let mut w = BufWriter::new(File::create(dir.join(VERTEX_FILE))?);
    for r in g.vertex_records() {
        serde_json::to_writer(&mut w, &r)?;
        w.write_all(b"\n")?;
    }
    w.flush()?;
    let mut w = BufWriter::new(File::create(dir.join(EDGE_FILE))?);
    for r in g.edge_records() {
        serde_json::to_writer(&mut w, &r)?;
        w.write_all(b"\n")?;
    }
    w.flush()?;
    Ok(())
}
