//! Statistics catalog: everything the estimation techniques look up.

mod basic;
mod charsets;
mod histogram;
mod sample;
mod sketch;
mod synopsis;
mod sysr;

use std::path::Path;

use serde::{Deserialize, Serialize};

pub use basic::{build_basic, prop_key, BasicStats, ExactProp, LabelCount};
pub use charsets::{build_char_sets, CharacteristicSetStore, CsEntry, CsItem, Direction};
pub use histogram::{
    build_histogram, build_histogram_with, build_md_histogram, Bucket, Domain, Histogram, HistogramKind,
    MdCell, MdHistogram, DEFAULT_PREFIX_LEN,
};
pub use sample::{build_sample, ElementData, Member, Sample, SampleType};
pub use sketch::{build_bound_sketch, BoundSketch, BucketStat, Role};
pub use synopsis::{
    build_labeled_synopsis, star_key, synopsis_key, LabeledTopoSynopsis, SynopsisClass, SynopsisSpec,
    MAX_SYNOPSIS_SIZE,
};
pub use sysr::{build_sysr, EdgePatternStats, SysRStats};

use crate::error::{Error, Result};
use crate::graph::{Elem, PropertyGraph};
use crate::query::{Predicate, QueryValue};

pub const CATALOG_VERSION: u32 = 1;

/// Key of a labeled edge pattern `(source label, edge label, target label)`.
pub fn ep_key(src: Option<&str>, edge: Option<&str>, trg: Option<&str>) -> String {
    serde_json::to_string(&[src, edge, trg]).expect("serializable key")
}

/// Every labeled edge pattern (with wildcards) an edge matches.
pub(crate) fn edge_pattern_options(
    g: &PropertyGraph,
    e: Elem,
) -> Vec<(Option<&str>, Option<&str>, Option<&str>)> {
    let (s, t) = g.endpoints(e).expect("edge");
    let opts = |x: Elem| {
        g.labels(x).iter().map(|l| Some(l.as_str())).chain(std::iter::once(None)).collect::<Vec<_>>()
    };
    let (so, eo, to) = (opts(s), opts(e), opts(t));
    let mut out = Vec::with_capacity(so.len() * eo.len() * to.len());
    for a in &so {
        for b in &eo {
            for c in &to {
                out.push((*a, *b, *c));
            }
        }
    }
    out
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SampleSpec {
    pub pattern_type: SampleType,
    pub probability: f64,
    pub seed: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HistogramSpec {
    pub key: String,
    pub kind: HistogramKind,
    pub n_buckets: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MdHistogramSpec {
    pub keys: Vec<String>,
    pub buckets_per_axis: usize,
}

/// What to build. Everything except the basic counts is opt-in.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct BuildConfig {
    pub synopses: Vec<SynopsisSpec>,
    pub sysr: bool,
    /// Budget for characteristic sets over outgoing edges.
    pub char_sets: Option<usize>,
    /// Budget for the mirrored store over incoming edges.
    pub char_sets_in: Option<usize>,
    pub samples: Vec<SampleSpec>,
    /// Bucket count and hash seed.
    pub sketch: Option<(u32, u64)>,
    pub histograms: Vec<HistogramSpec>,
    pub md_histograms: Vec<MdHistogramSpec>,
    pub prop_exact: Vec<(String, Predicate, QueryValue)>,
}

impl BuildConfig {
    /// Everything at small sizes; handy for desk-scale graphs.
    pub fn full() -> Self {
        BuildConfig {
            synopses: ["EP", "c2", "s2", "t2"].iter().map(|s| s.parse().expect("valid")).collect(),
            sysr: true,
            char_sets: Some(10_000),
            char_sets_in: Some(10_000),
            samples: Vec::new(),
            sketch: Some((16, 0x5eed)),
            histograms: Vec::new(),
            md_histograms: Vec::new(),
            prop_exact: Vec::new(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StatisticsCatalog {
    pub version: u32,
    pub fingerprint: String,
    pub basic: BasicStats,
    #[serde(default)]
    pub synopses: Vec<LabeledTopoSynopsis>,
    #[serde(default)]
    pub sysr: Option<SysRStats>,
    #[serde(default)]
    pub char_sets: Option<CharacteristicSetStore>,
    #[serde(default)]
    pub char_sets_in: Option<CharacteristicSetStore>,
    #[serde(default)]
    pub sketches: Vec<BoundSketch>,
    #[serde(default)]
    pub samples: Vec<Sample>,
    #[serde(default)]
    pub histograms: Vec<Histogram>,
    #[serde(default)]
    pub md_histograms: Vec<MdHistogram>,
}

impl StatisticsCatalog {
    /// A catalog holding only the given basic counts.
    pub fn from_basic(basic: BasicStats) -> Self {
        StatisticsCatalog {
            version: CATALOG_VERSION,
            fingerprint: String::new(),
            basic,
            synopses: Vec::new(),
            sysr: None,
            char_sets: None,
            char_sets_in: None,
            sketches: Vec::new(),
            samples: Vec::new(),
            histograms: Vec::new(),
            md_histograms: Vec::new(),
        }
    }

    pub fn build(g: &PropertyGraph, config: &BuildConfig) -> Result<Self> {
        let mut c = Self::from_basic(build_basic(g, &config.prop_exact));
        c.fingerprint = g.fingerprint();
        for spec in &config.synopses {
            c.synopses.push(build_labeled_synopsis(g, *spec)?);
        }
        if config.sysr {
            c.sysr = Some(build_sysr(g));
        }
        if let Some(n) = config.char_sets {
            c.char_sets = Some(build_char_sets(g, n, Direction::Out));
        }
        if let Some(n) = config.char_sets_in {
            c.char_sets_in = Some(build_char_sets(g, n, Direction::In));
        }
        for s in &config.samples {
            c.samples.push(build_sample(g, s.pattern_type, s.probability, s.seed)?);
        }
        if let Some((n, seed)) = config.sketch {
            c.sketches.push(build_bound_sketch(g, n, seed));
        }
        for h in &config.histograms {
            c.histograms.push(build_histogram(g, &h.key, h.kind, h.n_buckets));
        }
        for h in &config.md_histograms {
            c.md_histograms.push(build_md_histogram(g, &h.keys, h.buckets_per_axis)?);
        }
        Ok(c)
    }

    pub fn synopsis(&self, class: SynopsisClass) -> Option<&LabeledTopoSynopsis> {
        self.synopses
            .iter()
            .filter(|s| s.spec.class == class)
            .max_by_key(|s| s.spec.max_size)
    }

    pub fn histogram(&self, key: &str) -> Option<&Histogram> {
        self.histograms.iter().find(|h| h.key == key && h.total > 0)
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string(self)?)
    }

    pub fn save(&self, path: &Path) -> Result<()> {
        std::fs::write(path, self.to_json()?)?;
        Ok(())
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)?;
        let c: StatisticsCatalog = serde_json::from_str(&text).map_err(|e| Error::Parse {
            path: path.to_path_buf(),
            line: e.line(),
            message: e.to_string(),
        })?;
        if c.version != CATALOG_VERSION {
            return Err(Error::Catalog(format!(
                "catalog version {} is not supported (expected {CATALOG_VERSION})",
                c.version
            )));
        }
        Ok(c)
    }

    /// Whether the catalog was built from `g`; logs a warning when not.
    pub fn matches(&self, g: &PropertyGraph) -> bool {
        let ok = self.fingerprint == g.fingerprint();
        if !ok {
            log::warn!("statistics catalog is stale: built from a different graph");
        }
        ok
    }
}
