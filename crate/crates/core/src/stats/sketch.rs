//! Partitioned (count, max degree) summaries for join upper bounds.

use std::collections::{BTreeMap, HashMap};

use serde::{Deserialize, Serialize};

use super::{edge_pattern_options, ep_key};
use crate::graph::{Elem, PropertyGraph};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Role {
    Src,
    Trg,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct BucketStat {
    pub bucket: u32,
    pub count: u64,
    pub max_degree: u64,
}

/// For each labeled edge pattern and join role, the non-empty buckets in
/// ascending order.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoundSketch {
    pub n_buckets: u32,
    pub seed: u64,
    pub entries: BTreeMap<String, Vec<BucketStat>>,
}

pub fn sketch_key(ep: &str, role: Role) -> String {
    format!("{ep}@{}", if role == Role::Src { "src" } else { "trg" })
}

impl BoundSketch {
    pub fn bucket_of(&self, v: Elem) -> u32 {
        let h = (u64::from(v) ^ self.seed).wrapping_mul(0x9E37_79B9_7F4A_7C15);
        ((h >> 32) % u64::from(self.n_buckets)) as u32
    }

    pub fn get(&self, ep: &str, role: Role) -> &[BucketStat] {
        self.entries.get(&sketch_key(ep, role)).map_or(&[], Vec::as_slice)
    }

    /// Upper bound on the number of stars whose edges match `parts`
    /// (edge pattern key, role of the shared center) around one center.
    pub fn star_bound(&self, parts: &[(String, Role)]) -> f64 {
        if parts.is_empty() {
            return 1.0;
        }
        let lists: Vec<BTreeMap<u32, BucketStat>> = parts
            .iter()
            .map(|(ep, role)| self.get(ep, *role).iter().map(|b| (b.bucket, *b)).collect())
            .collect();
        let mut total = 0.0;
        for (bucket, first) in &lists[0] {
            let stats: Option<Vec<&BucketStat>> = std::iter::once(Some(first))
                .chain(lists[1..].iter().map(|l| l.get(bucket)))
                .collect();
            let Some(stats) = stats else { continue };
            let bound = (0..stats.len())
                .map(|k| {
                    stats.iter().enumerate().fold(1.0f64, |acc, (j, b)| {
                        acc * if j == k { b.count as f64 } else { b.max_degree as f64 }
                    })
                })
                .fold(f64::INFINITY, f64::min);
            total += bound;
        }
        total
    }
}

pub fn build_bound_sketch(g: &PropertyGraph, n_buckets: u32, seed: u64) -> BoundSketch {
    let mut sketch = BoundSketch { n_buckets: n_buckets.max(1), seed, entries: BTreeMap::new() };
    // (entry key, center vertex) -> degree
    let mut degree: HashMap<(String, Elem), u64> = HashMap::new();
    for e in g.edges() {
        let (s, t) = g.endpoints(e).expect("edge");
        for (so, eo, to) in edge_pattern_options(g, e) {
            let ep = ep_key(so, eo, to);
            *degree.entry((sketch_key(&ep, Role::Src), s)).or_default() += 1;
            *degree.entry((sketch_key(&ep, Role::Trg), t)).or_default() += 1;
        }
    }
    let mut acc: BTreeMap<String, BTreeMap<u32, BucketStat>> = BTreeMap::new();
    for ((key, v), d) in degree {
        let bucket = sketch.bucket_of(v);
        let slot = acc
            .entry(key)
            .or_default()
            .entry(bucket)
            .or_insert(BucketStat { bucket, count: 0, max_degree: 0 });
        slot.count += d;
        slot.max_degree = slot.max_degree.max(d);
    }
    sketch.entries = acc.into_iter().map(|(k, m)| (k, m.into_values().collect())).collect();
    sketch
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::GraphBuilder;

    #[test]
    fn g4_single_bucket() {
        let mut b = GraphBuilder::new();
        b.vertex("g1", &[], &[]).vertex("g3", &[], &[]);
        b.edge("g2", "g1", "g3", &[], &[]).edge("g4", "g3", "g1", &[], &[]);
        let s = build_bound_sketch(&b.build().unwrap(), 1, 7);
        let ep = ep_key(None, None, None);
        assert_eq!(s.get(&ep, Role::Src), &[BucketStat { bucket: 0, count: 2, max_degree: 1 }]);
        // 2-chain: min(|ep|·d, d·|ep|) = 2.
        assert_eq!(s.star_bound(&[(ep.clone(), Role::Trg), (ep, Role::Src)]), 2.0);
    }

    #[test]
    fn global_bound_formula() {
        // Two in-edges and three out-edges at one vertex, one bucket.
        let mut b = GraphBuilder::new();
        for v in ["m", "a", "b", "x", "y", "z"] {
            b.vertex(v, &[], &[]);
        }
        b.edge("1", "a", "m", &["in"], &[]).edge("2", "b", "m", &["in"], &[]);
        for (i, t) in ["x", "y", "z"].iter().enumerate() {
            b.edge(&format!("o{i}"), "m", t, &["out"], &[]);
        }
        let g = b.build().unwrap();
        let s = build_bound_sketch(&g, 1, 0);
        let pin = ep_key(None, Some("in"), None);
        let pout = ep_key(None, Some("out"), None);
        let bound = s.star_bound(&[(pin, Role::Trg), (pout, Role::Src)]);
        assert_eq!(bound, 6.0);
    }

    #[test]
    fn empty() {
        let s = build_bound_sketch(&GraphBuilder::new().build().unwrap(), 8, 1);
        assert!(s.entries.is_empty());
        assert_eq!(s.star_bound(&[(ep_key(None, None, None), Role::Src)]), 0.0);
    }
}
