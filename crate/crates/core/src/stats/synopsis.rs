//! Exact cardinalities of small labeled chain and star patterns.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{Elem, PropertyGraph};

pub const MAX_SYNOPSIS_SIZE: usize = 4;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SynopsisClass {
    Edge,
    Chain,
    SourceStar,
    TargetStar,
}

impl SynopsisClass {
    fn name(self) -> &'static str {
        match self {
            SynopsisClass::Edge => "edge",
            SynopsisClass::Chain => "chain",
            SynopsisClass::SourceStar => "source_star",
            SynopsisClass::TargetStar => "target_star",
        }
    }
}

/// A synopsis request such as `edge`, `chain2`, `sstar3` or `tstar2`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct SynopsisSpec {
    pub class: SynopsisClass,
    pub max_size: usize,
}

impl FromStr for SynopsisSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let (class, rest) = if s.eq_ignore_ascii_case("edge") || s == "EP" {
            return Ok(SynopsisSpec { class: SynopsisClass::Edge, max_size: 1 });
        } else if let Some(r) = s.strip_prefix("chain").or_else(|| s.strip_prefix('c')) {
            (SynopsisClass::Chain, r)
        } else if let Some(r) = s.strip_prefix("sstar").or_else(|| s.strip_prefix('s')) {
            (SynopsisClass::SourceStar, r)
        } else if let Some(r) = s.strip_prefix("tstar").or_else(|| s.strip_prefix('t')) {
            (SynopsisClass::TargetStar, r)
        } else {
            return Err(Error::Config(format!("unknown synopsis {s:?}")));
        };
        let max_size = rest
            .parse()
            .map_err(|_| Error::Config(format!("synopsis {s:?} needs a numeric size")))?;
        Ok(SynopsisSpec { class, max_size })
    }
}

impl fmt::Display for SynopsisSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.class {
            SynopsisClass::Edge => f.write_str("EP"),
            SynopsisClass::Chain => write!(f, "c{}", self.max_size),
            SynopsisClass::SourceStar => write!(f, "s{}", self.max_size),
            SynopsisClass::TargetStar => write!(f, "t{}", self.max_size),
        }
    }
}

/// Key of a labeled pattern. Chains list labels in path order
/// (`v0, e1, v1, e2, v2, …`); stars list the center label followed by
/// `(edge label, leaf label)` pairs in sorted order. `None` is a wildcard.
pub fn synopsis_key(class: SynopsisClass, size: usize, labels: &[Option<&str>]) -> String {
    serde_json::to_string(&(class.name(), size, labels)).expect("serializable key")
}

/// Canonical star key from a center label and unordered leaf pairs.
pub fn star_key(
    class: SynopsisClass,
    center: Option<&str>,
    pairs: &[(Option<&str>, Option<&str>)],
) -> String {
    let mut pairs = pairs.to_vec();
    pairs.sort();
    let mut labels = vec![center];
    for (e, l) in pairs {
        labels.push(e);
        labels.push(l);
    }
    synopsis_key(class, labels.len() / 2, &labels)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LabeledTopoSynopsis {
    pub spec: SynopsisSpec,
    pub counts: BTreeMap<String, u64>,
}

impl LabeledTopoSynopsis {
    pub fn get(&self, key: &str) -> Option<u64> {
        self.counts.get(key).copied()
    }
}

/// Label options of an element: each of its labels plus the wildcard.
fn options(g: &PropertyGraph, x: Elem) -> impl Iterator<Item = Option<&str>> {
    g.labels(x).iter().map(|l| Some(l.as_str())).chain(std::iter::once(None))
}

pub fn build_labeled_synopsis(g: &PropertyGraph, spec: SynopsisSpec) -> Result<LabeledTopoSynopsis> {
    if spec.max_size == 0 {
        return Err(Error::Config("synopsis size must be at least 1".into()));
    }
    if spec.max_size > MAX_SYNOPSIS_SIZE {
        return Err(Error::ResourceGuard(format!(
            "synopsis size {} exceeds the limit of {MAX_SYNOPSIS_SIZE}",
            spec.max_size
        )));
    }
    let counts = match spec.class {
        SynopsisClass::Edge => chain_counts(g, SynopsisClass::Edge, 1),
        SynopsisClass::Chain => chain_counts(g, SynopsisClass::Chain, spec.max_size),
        SynopsisClass::SourceStar | SynopsisClass::TargetStar => star_counts(g, spec.class, spec.max_size),
    };
    Ok(LabeledTopoSynopsis { spec, counts })
}

fn chain_counts(g: &PropertyGraph, class: SynopsisClass, max: usize) -> BTreeMap<String, u64> {
    let mut out = BTreeMap::new();
    if g.n_edges() == 0 {
        return out;
    }
    let mut states: HashMap<(Vec<Option<&str>>, Elem), u64> = HashMap::new();
    for v in g.vertices() {
        for o in options(g, v) {
            states.insert((vec![o], v), 1);
        }
    }
    for size in 1..=max {
        let mut next: HashMap<(Vec<Option<&str>>, Elem), u64> = HashMap::new();
        for ((prefix, end), c) in &states {
            for &e in g.out_edges(*end, None) {
                let (_, t) = g.endpoints(e).expect("edge");
                for eo in options(g, e) {
                    for to in options(g, t) {
                        let mut key = prefix.clone();
                        key.push(eo);
                        key.push(to);
                        let slot = next.entry((key, t)).or_default();
                        *slot = slot.saturating_add(*c);
                    }
                }
            }
        }
        for ((key, _), c) in &next {
            let slot = out.entry(synopsis_key(class, size, key)).or_insert(0u64);
            *slot = slot.saturating_add(*c);
        }
        states = next;
    }
    out
}

fn multisets(n_options: usize, size: usize) -> Vec<Vec<usize>> {
    fn go(start: usize, n: usize, size: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == size {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            go(i, n, size, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(0, n_options, size, &mut Vec::new(), &mut out);
    out
}

fn star_counts(g: &PropertyGraph, class: SynopsisClass, max: usize) -> BTreeMap<String, u64> {
    let outgoing = class == SynopsisClass::SourceStar;
    let mut out = BTreeMap::new();
    for v in g.vertices() {
        let incident = if outgoing { g.out_edges(v, None) } else { g.in_edges(v, None) };
        if incident.is_empty() {
            continue;
        }
        let mut degrees: BTreeMap<(Option<&str>, Option<&str>), u64> = BTreeMap::new();
        for &e in incident {
            let (s, t) = g.endpoints(e).expect("edge");
            let leaf = if outgoing { t } else { s };
            for eo in options(g, e) {
                for lo in options(g, leaf) {
                    *degrees.entry((eo, lo)).or_default() += 1;
                }
            }
        }
        let opts: Vec<((Option<&str>, Option<&str>), u64)> = degrees.into_iter().collect();
        for size in 1..=max {
            for ms in multisets(opts.len(), size) {
                let count = ms.iter().fold(1u64, |acc, &i| acc.saturating_mul(opts[i].1));
                let pairs: Vec<_> = ms.iter().map(|&i| opts[i].0).collect();
                for co in options(g, v) {
                    let slot = out.entry(star_key(class, co, &pairs)).or_insert(0u64);
                    *slot = slot.saturating_add(count);
                }
            }
        }
    }
    out
}
