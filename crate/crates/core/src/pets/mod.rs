//! Partial estimation techniques: each maps subsets of a query's
//! constraints to selectivity estimates using catalog statistics.

mod charsets;
mod individual;
mod mdh;
mod sampling;
mod sketch;
mod synopsis;
mod sysr;
mod wander;

use std::fmt;
use std::str::FromStr;

pub use charsets::pet_char_sets;
pub use individual::{default_selectivity, individual_estimate};
pub use mdh::pet_md_histogram;
pub use sampling::{find_sample, pet_sampling};
pub use sketch::pet_bound_sketch;
pub use synopsis::pet_labeled_synopsis;
pub use sysr::pet_sysr;
pub use wander::{pet_wander_join, walk_order, wander_join_stats, WalkStats};

use crate::error::{Error, Result};
use crate::graph::PropertyGraph;
use crate::query::{chosen_label, PartialEstimate, QueryPattern, Subpattern};
use crate::stats::{ep_key, Role, SampleType, StatisticsCatalog, SynopsisSpec};

/// Largest star (in edges) the star techniques look at.
pub const MAX_STAR: usize = 4;

/// `card / n_ids^k`, or 0 for an empty graph.
pub fn selectivity(card: f64, n_ids: u64, k: usize) -> f64 {
    if n_ids == 0 {
        return 0.0;
    }
    (card / (n_ids as f64).powi(k as i32)).clamp(0.0, 1.0)
}

/// Whether every concrete label in a key is known to the catalog.
pub(crate) fn known(cat: &StatisticsCatalog, labels: &[Option<&str>]) -> bool {
    labels.iter().flatten().all(|l| cat.basic.knows_label(l))
}

/// Edge-pattern keys and center roles of a star, plus every label used.
pub(crate) fn star_parts<'a>(q: &'a QueryPattern, sp: &Subpattern) -> (Vec<(String, Role)>, Vec<Option<&'a str>>) {
    let center = sp.center.as_ref().expect("star center");
    let mut parts = Vec::new();
    let mut labels = Vec::new();
    for e in &sp.edges {
        let (s, l, t) = (chosen_label(q, &e.src), chosen_label(q, &e.id), chosen_label(q, &e.trg));
        let role = if e.src == *center { Role::Src } else { Role::Trg };
        parts.push((ep_key(s, l, t), role));
        labels.extend([s, l, t]);
    }
    (parts, labels)
}

/// A configured technique, written as in `EP,c2,s3,SysR,S(id,0.01),WJ(1000)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum PetTag {
    Synopsis(SynopsisSpec),
    SysR,
    CharSets,
    BoundSketch,
    Sampling(SampleType, Option<f64>),
    WanderJoin(usize),
    MdHistogram,
    /// Value predicates use the fixed default selectivities.
    Defaults,
}

impl FromStr for PetTag {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let args = |inner: &str| -> Vec<String> { inner.split(',').map(|x| x.trim().to_string()).collect() };
        if let Some(inner) = s.strip_prefix("S(").and_then(|r| r.strip_suffix(')')) {
            let a = args(inner);
            let pt: SampleType = a[0].parse()?;
            let pr = match a.get(1) {
                Some(p) => Some(p.parse::<f64>().map_err(|_| Error::Config(format!("bad probability in {s:?}")))?),
                None => None,
            };
            return Ok(PetTag::Sampling(pt, pr));
        }
        if let Some(inner) = s.strip_prefix("WJ(").and_then(|r| r.strip_suffix(')')) {
            let n = inner.trim().parse().map_err(|_| Error::Config(format!("bad walk count in {s:?}")))?;
            return Ok(PetTag::WanderJoin(n));
        }
        match s {
            "SysR" | "sysr" => Ok(PetTag::SysR),
            "CS" | "cs" => Ok(PetTag::CharSets),
            "BS" | "bs" => Ok(PetTag::BoundSketch),
            "MDH" | "mdh" => Ok(PetTag::MdHistogram),
            "defaults" => Ok(PetTag::Defaults),
            "WJ" => Ok(PetTag::WanderJoin(10_000)),
            other => other
                .parse::<SynopsisSpec>()
                .map(PetTag::Synopsis)
                .map_err(|_| Error::Config(format!("unknown technique {other:?}"))),
        }
    }
}

impl fmt::Display for PetTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PetTag::Synopsis(s) => s.fmt(f),
            PetTag::SysR => f.write_str("SysR"),
            PetTag::CharSets => f.write_str("CS"),
            PetTag::BoundSketch => f.write_str("BS"),
            PetTag::Sampling(pt, Some(pr)) => write!(f, "S({pt},{pr})"),
            PetTag::Sampling(pt, None) => write!(f, "S({pt})"),
            PetTag::WanderJoin(n) => write!(f, "WJ({n})"),
            PetTag::MdHistogram => f.write_str("MDH"),
            PetTag::Defaults => f.write_str("defaults"),
        }
    }
}

/// Splits a comma-separated tag list, keeping commas inside parentheses.
pub fn split_tags(list: &str) -> Vec<String> {
    let mut out = Vec::new();
    let mut depth = 0i32;
    let mut cur = String::new();
    for ch in list.chars() {
        match ch {
            '(' => depth += 1,
            ')' => depth -= 1,
            ',' if depth == 0 => {
                if !cur.trim().is_empty() {
                    out.push(cur.trim().to_string());
                }
                cur.clear();
                continue;
            }
            _ => {}
        }
        cur.push(ch);
    }
    if !cur.trim().is_empty() {
        out.push(cur.trim().to_string());
    }
    out
}

pub fn parse_pet_tags(list: &str) -> Result<Vec<PetTag>> {
    split_tags(list).iter().map(|t| t.parse()).collect()
}

/// One individual estimate per query constraint.
pub fn pet_individual(q: &QueryPattern, cat: &StatisticsCatalog, defaults_only: bool) -> Vec<PartialEstimate> {
    q.constraints().iter().map(|c| individual_estimate(c, cat, defaults_only)).collect()
}

/// Fails when the catalog (or graph) lacks what a technique reads.
pub fn check_available(tag: PetTag, cat: &StatisticsCatalog, g: Option<&PropertyGraph>) -> Result<()> {
    let ok = match tag {
        PetTag::Synopsis(spec) => cat.synopsis(spec.class).is_some(),
        PetTag::SysR => cat.sysr.is_some(),
        PetTag::CharSets => cat.char_sets.is_some() || cat.char_sets_in.is_some(),
        PetTag::BoundSketch => !cat.sketches.is_empty(),
        PetTag::Sampling(pt, pr) => find_sample(cat, pt, pr).is_some(),
        PetTag::WanderJoin(_) => g.is_some(),
        PetTag::MdHistogram => !cat.md_histograms.is_empty(),
        PetTag::Defaults => true,
    };
    if ok {
        Ok(())
    } else if let PetTag::WanderJoin(_) = tag {
        Err(Error::Config(format!("{tag} needs the graph")))
    } else {
        Err(Error::Catalog(format!("no statistics for {tag} in the catalog")))
    }
}

/// Runs one technique. Wander join needs the graph; without it nothing is
/// produced.
pub fn run_pet(
    tag: PetTag,
    q: &QueryPattern,
    cat: &StatisticsCatalog,
    g: Option<&PropertyGraph>,
    seed: u64,
) -> Vec<PartialEstimate> {
    match tag {
        PetTag::Synopsis(spec) => pet_labeled_synopsis(q, cat, spec),
        PetTag::SysR => pet_sysr(q, cat),
        PetTag::CharSets => pet_char_sets(q, cat),
        PetTag::BoundSketch => pet_bound_sketch(q, cat),
        PetTag::Sampling(pt, pr) => pet_sampling(q, cat, pt, pr),
        PetTag::WanderJoin(n) => g.and_then(|g| pet_wander_join(g, q, n, seed)).into_iter().collect(),
        PetTag::MdHistogram => pet_md_histogram(q, cat),
        PetTag::Defaults => Vec::new(),
    }
}
