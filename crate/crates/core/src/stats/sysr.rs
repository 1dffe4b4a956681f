use std::collections::{BTreeMap, HashSet};

use serde::{Deserialize, Serialize};

use super::{edge_pattern_options, ep_key};
use crate::graph::{Elem, PropertyGraph};

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct EdgePatternStats {
    pub n: u64,
    pub distinct_src: u64,
    pub distinct_trg: u64,
}

/// Cardinality and distinct endpoint counts per labeled edge pattern.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct SysRStats {
    pub entries: BTreeMap<String, EdgePatternStats>,
}

impl SysRStats {
    pub fn get(&self, key: &str) -> EdgePatternStats {
        self.entries.get(key).copied().unwrap_or_default()
    }
}

pub fn build_sysr(g: &PropertyGraph) -> SysRStats {
    let mut acc: BTreeMap<String, (u64, HashSet<Elem>, HashSet<Elem>)> = BTreeMap::new();
    for e in g.edges() {
        let (s, t) = g.endpoints(e).expect("edge");
        for (so, eo, to) in edge_pattern_options(g, e) {
            let slot = acc.entry(ep_key(so, eo, to)).or_default();
            slot.0 += 1;
            slot.1.insert(s);
            slot.2.insert(t);
        }
    }
    let entries = acc
        .into_iter()
        .map(|(k, (n, ds, dt))| {
            let st = EdgePatternStats { n, distinct_src: ds.len() as u64, distinct_trg: dt.len() as u64 };
            (k, st)
        })
        .collect();
    SysRStats { entries }
}
