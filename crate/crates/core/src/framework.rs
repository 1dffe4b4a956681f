//! End-to-end estimation: techniques, extensions, completion, combination.

use std::fmt;
use std::str::FromStr;
use std::time::Instant;

use serde::Serialize;

use crate::combine::{
    combine_bounds, combine_cond_indep, combine_max_ent, make_complete, selectivity_to_cardinality, CtTag, Factor,
    FactorKind, Singletons, SortStrategy,
};
use crate::epests::{parse_epest_tags, run_epest, EpestTag};
use crate::error::{Error, Result};
use crate::graph::PropertyGraph;
use crate::pets::{check_available, parse_pet_tags, pet_individual, run_pet, PetTag};
use crate::query::{dedup, set_key, PartialEstimate, Provenance, QueryDoc, QueryPattern};
use crate::stats::StatisticsCatalog;

pub const DEFAULT_EXPANSION_CAP: usize = 64;

#[derive(Debug, Clone, PartialEq)]
pub struct EstimatorConfig {
    /// Display name; derived from the tags when empty.
    pub name: String,
    pub pets: Vec<PetTag>,
    pub epests: Vec<EpestTag>,
    pub ct: CtTag,
    /// Seed for randomized techniques (wander join).
    pub seed: u64,
    pub expansion_cap: usize,
}

impl Default for EstimatorConfig {
    fn default() -> Self {
        EstimatorConfig {
            name: String::new(),
            pets: Vec::new(),
            epests: Vec::new(),
            ct: CtTag::default(),
            seed: 0,
            expansion_cap: DEFAULT_EXPANSION_CAP,
        }
    }
}

impl EstimatorConfig {
    pub fn new(pets: &str, epests: &str, ct: &str) -> Result<Self> {
        Ok(EstimatorConfig {
            pets: parse_pet_tags(pets)?,
            epests: parse_epest_tags(epests)?,
            ct: ct.parse()?,
            ..Default::default()
        })
    }

    pub fn with_name(mut self, name: &str) -> Self {
        self.name = name.to_string();
        self
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    /// The `defaults` tag makes value predicates use the default values.
    pub fn defaults_only(&self) -> bool {
        self.pets.contains(&PetTag::Defaults)
    }

    pub fn label(&self) -> String {
        if !self.name.is_empty() {
            return self.name.clone();
        }
        let join = |v: Vec<String>| v.join(",");
        format!(
            "{{{}}}+{{{}}}+{}",
            join(self.pets.iter().map(|t| t.to_string()).collect()),
            join(self.epests.iter().map(|t| t.to_string()).collect()),
            self.ct
        )
    }

    /// Checks that every configured technique has its statistics.
    pub fn validate(&self, cat: &StatisticsCatalog, g: Option<&PropertyGraph>) -> Result<()> {
        self.pets.iter().try_for_each(|t| check_available(*t, cat, g))
    }
}

/// One configuration per line: `name=...; pets=...; epests=...; ct=...;
/// seed=...`. Every field is optional; `#` starts a comment.
impl FromStr for EstimatorConfig {
    type Err = Error;

    fn from_str(line: &str) -> Result<Self> {
        let mut cfg = EstimatorConfig::default();
        for part in line.split(';').map(str::trim).filter(|p| !p.is_empty()) {
            let (k, v) = part
                .split_once('=')
                .ok_or_else(|| Error::Config(format!("expected key=value, got {part:?}")))?;
            let v = v.trim();
            match k.trim() {
                "name" => cfg.name = v.to_string(),
                "pets" => cfg.pets = parse_pet_tags(v)?,
                "epests" => cfg.epests = parse_epest_tags(v)?,
                "ct" => cfg.ct = v.parse()?,
                "seed" => cfg.seed = v.parse().map_err(|_| Error::Config(format!("bad seed {v:?}")))?,
                "cap" => cfg.expansion_cap = v.parse().map_err(|_| Error::Config(format!("bad cap {v:?}")))?,
                other => return Err(Error::Config(format!("unknown config field {other:?}"))),
            }
        }
        Ok(cfg)
    }
}

impl fmt::Display for EstimatorConfig {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.label())
    }
}

/// Reads a configuration file, one configuration per non-empty line.
pub fn parse_configs(text: &str) -> Result<Vec<EstimatorConfig>> {
    text.lines()
        .map(|l| l.split('#').next().unwrap_or("").trim())
        .filter(|l| !l.is_empty())
        .map(str::parse)
        .collect()
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PeTrace {
    pub constraints: String,
    pub selectivity: f64,
    pub provenance: Provenance,
    #[serde(skip_serializing_if = "std::ops::Not::not")]
    pub low_confidence: bool,
}

impl From<&PartialEstimate> for PeTrace {
    fn from(pe: &PartialEstimate) -> Self {
        PeTrace {
            constraints: pe.key(),
            selectivity: pe.selectivity,
            provenance: pe.provenance,
            low_confidence: pe.low_confidence,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EstimateReport {
    pub config: String,
    pub selectivity: f64,
    pub cardinality: f64,
    pub pes: Vec<PeTrace>,
    /// Ordered factors whose product is the selectivity.
    pub factors: Vec<Factor>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub lower_bound: Option<f64>,
    /// Notes on fallbacks and clamping.
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub flags: Vec<String>,
    /// One report per conjunctive expansion of a disjunctive query.
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub alternatives: Vec<EstimateReport>,
    pub elapsed_ms: f64,
}

impl EstimateReport {
    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }
}

impl fmt::Display for EstimateReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "config       {}", self.config)?;
        writeln!(f, "selectivity  {:e}", self.selectivity)?;
        writeln!(f, "cardinality  {}", self.cardinality)?;
        if let Some(lb) = self.lower_bound {
            writeln!(f, "lower bound  {lb:e}")?;
        }
        for flag in &self.flags {
            writeln!(f, "note         {flag}")?;
        }
        if !self.alternatives.is_empty() {
            writeln!(f, "\n{} alternatives summed", self.alternatives.len())?;
            return Ok(());
        }
        writeln!(f, "\n{:<12} {:>12}  constraints", "provenance", "s")?;
        for pe in &self.pes {
            writeln!(f, "{:<12} {:>12.4e}  {}", pe.provenance.to_string(), pe.selectivity, pe.constraints)?;
        }
        writeln!(f, "\n{:<12} {:>12}  constraints", "factor", "value")?;
        for x in &self.factors {
            let kind = match x.kind {
                FactorKind::Independent => "indep",
                FactorKind::Conditional => "cond",
                FactorKind::Skipped => "skip",
                FactorKind::Joint => "joint",
            };
            writeln!(f, "{:<12} {:>12.4e}  {}", kind, x.factor, x.constraints)?;
        }
        Ok(())
    }
}

/// Runs the configured techniques and extensions, returning the complete,
/// deduplicated PES.
pub fn partial_estimates(
    q: &QueryPattern,
    g: Option<&PropertyGraph>,
    cat: &StatisticsCatalog,
    cfg: &EstimatorConfig,
) -> Vec<PartialEstimate> {
    let defaults_only = cfg.defaults_only();
    let mut pes = pet_individual(q, cat, defaults_only);
    for tag in &cfg.pets {
        pes.extend(run_pet(*tag, q, cat, g, cfg.seed));
    }
    let pes = dedup(pes);
    // Every extension sees the same PES from the techniques.
    let mut extended = pes.clone();
    for tag in &cfg.epests {
        extended.extend(run_epest(*tag, &pes, q));
    }
    make_complete(dedup(extended), q, cat, defaults_only)
}

/// Combines a complete PES with the configured technique.
pub fn combine(
    cpes: &[PartialEstimate],
    q: &QueryPattern,
    cat: &StatisticsCatalog,
    cfg: &EstimatorConfig,
) -> (f64, Vec<Factor>, Option<f64>, Vec<String>) {
    let singles = Singletons::new(cpes, q, cat, cfg.defaults_only());
    let joint = |s: f64| {
        let all = q.constraints();
        vec![Factor { constraints: set_key(&all), selectivity: s, kind: FactorKind::Joint, overlap: None, factor: s }]
    };
    match cfg.ct {
        CtTag::CondIndep(st) => {
            let r = combine_cond_indep(cpes, st, &singles);
            (r.selectivity, r.factors, None, Vec::new())
        }
        CtTag::MaxEnt { mps, tol, max_iter } => match combine_max_ent(cpes, q, mps, tol, max_iter) {
            Ok(r) => {
                let flags = if r.dropped > 0 { vec![format!("maxEnt ignored {} PEs", r.dropped)] } else { Vec::new() };
                (r.selectivity, joint(r.selectivity), None, flags)
            }
            Err(e) => {
                let r = combine_cond_indep(cpes, SortStrategy::MoDi, &singles);
                (r.selectivity, r.factors, None, vec![format!("{e}; fell back to condIndep(MoDi)")])
            }
        },
        CtTag::Bounds => {
            let b = combine_bounds(cpes);
            let flags = if b.exhaustive { Vec::new() } else { vec!["greedy upper bound".to_string()] };
            (b.upper, joint(b.upper), Some(b.lower), flags)
        }
    }
}

/// Estimates one conjunctive query. The graph is only needed by techniques
/// that walk it.
pub fn estimate(
    q: &QueryPattern,
    g: Option<&PropertyGraph>,
    cat: &StatisticsCatalog,
    cfg: &EstimatorConfig,
) -> Result<EstimateReport> {
    let start = Instant::now();
    cfg.validate(cat, g)?;
    let cpes = partial_estimates(q, g, cat, cfg);
    let (selectivity, factors, lower_bound, mut flags) = combine(&cpes, q, cat, cfg);
    if cpes.iter().any(|pe| pe.low_confidence) {
        flags.push("low-confidence partial estimate".to_string());
    }
    Ok(EstimateReport {
        config: cfg.label(),
        selectivity,
        cardinality: selectivity_to_cardinality(selectivity, q, cat),
        pes: cpes.iter().map(PeTrace::from).collect(),
        factors,
        lower_bound,
        flags,
        alternatives: Vec::new(),
        elapsed_ms: start.elapsed().as_secs_f64() * 1e3,
    })
}

/// Expands `anyOf` groups, estimates every alternative and sums the
/// cardinalities, treating the alternatives' results as disjoint.
pub fn estimate_with_disjunctions(
    doc: &QueryDoc,
    g: Option<&PropertyGraph>,
    cat: &StatisticsCatalog,
    cfg: &EstimatorConfig,
) -> Result<EstimateReport> {
    let start = Instant::now();
    if doc.any_of.is_empty() {
        return estimate(&doc.base_pattern()?, g, cat, cfg);
    }
    let base = doc.base_pattern()?;
    let parts = doc
        .expand(cfg.expansion_cap)?
        .iter()
        .map(|q| estimate(q, g, cat, cfg))
        .collect::<Result<Vec<_>>>()?;
    let cardinality: f64 = parts.iter().map(|r| r.cardinality).sum();
    let space = selectivity_to_cardinality(1.0, &base, cat);
    let mut flags = Vec::new();
    let mut selectivity = if space > 0.0 { cardinality / space } else { 0.0 };
    if selectivity > 1.0 {
        selectivity = 1.0;
        flags.push("summed selectivity clamped to 1".to_string());
    }
    Ok(EstimateReport {
        config: cfg.label(),
        selectivity,
        cardinality,
        pes: Vec::new(),
        factors: Vec::new(),
        lower_bound: None,
        flags,
        alternatives: parts,
        elapsed_ms: start.elapsed().as_secs_f64() * 1e3,
    })
}
