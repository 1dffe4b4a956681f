//! Lookups in labeled chain and star synopses, with the Markov extension
//! for chains longer than the synopsis stores.

use super::{known, selectivity};
use crate::query::{chosen_label, enumerate_subpatterns, PartialEstimate, PatternClass, Provenance, QueryEdge, QueryPattern};
use crate::stats::{star_key, synopsis_key, LabeledTopoSynopsis, StatisticsCatalog, SynopsisClass, SynopsisSpec};

fn chain_labels<'a>(q: &'a QueryPattern, edges: &[QueryEdge]) -> Vec<Option<&'a str>> {
    let mut out = vec![chosen_label(q, &edges[0].src)];
    for e in edges {
        out.push(chosen_label(q, &e.id));
        out.push(chosen_label(q, &e.trg));
    }
    out
}

/// Selectivity of the chain whose labels are `labels` (path order), read
/// directly when short enough and extended otherwise. `None` when the key
/// mentions a label the catalog has never seen.
fn chain_selectivity(
    syn: &LabeledTopoSynopsis,
    class: SynopsisClass,
    max: usize,
    labels: &[Option<&str>],
    cat: &StatisticsCatalog,
) -> Option<f64> {
    if !known(cat, labels) {
        return None;
    }
    let n_ids = cat.basic.n_ids;
    let direct = |part: &[Option<&str>]| {
        let size = part.len() / 2;
        let count = if size == 0 {
            // A lone vertex: the label count (or every vertex for a wildcard).
            match part[0] {
                Some(l) => cat.basic.label_sel.get(l).map_or(0, |c| c.vertices),
                None => cat.basic.n_vertices,
            }
        } else {
            syn.get(&synopsis_key(class, size, part)).unwrap_or(0)
        };
        selectivity(count as f64, n_ids, part.len())
    };
    let m = labels.len() / 2;
    if m <= max {
        return Some(direct(labels));
    }
    let window = |start: usize, size: usize| &labels[2 * start..2 * (start + size) + 1];
    let mut s = direct(window(0, max));
    for i in 1..=m - max {
        let num = direct(window(i, max));
        let den = direct(window(i, max - 1));
        if num == 0.0 || den == 0.0 {
            return Some(0.0);
        }
        s *= num / den;
    }
    Some(s)
}

pub fn pet_labeled_synopsis(q: &QueryPattern, cat: &StatisticsCatalog, spec: SynopsisSpec) -> Vec<PartialEstimate> {
    let mut out = Vec::new();
    let Some(syn) = cat.synopsis(spec.class) else {
        return out;
    };
    let max = spec.max_size.min(syn.spec.max_size);
    let n_ids = cat.basic.n_ids;
    match spec.class {
        SynopsisClass::Edge | SynopsisClass::Chain => {
            let sizes = if spec.class == SynopsisClass::Edge { 1..=1 } else { 2..=q.edges().len() };
            for size in sizes {
                for sp in enumerate_subpatterns(q, PatternClass::Chain(size)) {
                    let labels = chain_labels(q, &sp.edges);
                    if let Some(s) = chain_selectivity(syn, spec.class, max.max(1), &labels, cat) {
                        out.push(PartialEstimate::new(sp.constraints, s, Provenance::Synopsis));
                    }
                }
            }
        }
        SynopsisClass::SourceStar | SynopsisClass::TargetStar => {
            let outgoing = spec.class == SynopsisClass::SourceStar;
            for size in 2..=max {
                let class = if outgoing { PatternClass::SourceStar(size) } else { PatternClass::TargetStar(size) };
                for sp in enumerate_subpatterns(q, class) {
                    let center = sp.center.as_ref().expect("star center");
                    let pairs: Vec<(Option<&str>, Option<&str>)> = sp
                        .edges
                        .iter()
                        .map(|e| {
                            let leaf = if outgoing { &e.trg } else { &e.src };
                            (chosen_label(q, &e.id), chosen_label(q, leaf))
                        })
                        .collect();
                    let mut all: Vec<Option<&str>> = vec![chosen_label(q, center)];
                    all.extend(pairs.iter().flat_map(|(a, b)| [*a, *b]));
                    if !known(cat, &all) {
                        continue;
                    }
                    let count = syn.get(&star_key(spec.class, chosen_label(q, center), &pairs)).unwrap_or(0);
                    let s = selectivity(count as f64, n_ids, 2 * size + 1);
                    out.push(PartialEstimate::new(sp.constraints, s, Provenance::Synopsis));
                }
            }
        }
    }
    out
}
