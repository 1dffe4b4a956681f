//! Estimates from Bernoulli samples of ids, vertices, or edge patterns.

use super::selectivity;
use crate::query::{enumerate_subpatterns, Constraint, PartialEstimate, PatternClass, Provenance, QueryPattern};
use crate::stats::{ElementData, Member, Sample, SampleType, StatisticsCatalog};

/// The sample of type `pt`, preferring one drawn with probability `pr`.
pub fn find_sample(cat: &StatisticsCatalog, pt: SampleType, pr: Option<f64>) -> Option<&Sample> {
    let of_type = || cat.samples.iter().filter(move |s| s.pattern_type == pt);
    pr.and_then(|p| of_type().find(|s| (s.probability - p).abs() <= 1e-12 * p.max(1.0)))
        .or_else(|| of_type().next())
}

fn edge_pattern_holds(c: &Constraint, ids: [&str; 3], m: [&ElementData; 3]) -> bool {
    match c {
        // Topology holds by construction of the sampled instance.
        Constraint::Src { .. } | Constraint::Trg { .. } => true,
        _ => {
            let id = c.ids()[0];
            let pos = ids.iter().position(|x| *x == &**id).expect("id of the edge pattern");
            m[pos].satisfies(c)
        }
    }
}

pub fn pet_sampling(q: &QueryPattern, cat: &StatisticsCatalog, pt: SampleType, pr: Option<f64>) -> Vec<PartialEstimate> {
    let mut out = Vec::new();
    let Some(sample) = find_sample(cat, pt, pr) else {
        return out;
    };
    if sample.members.is_empty() {
        return out;
    }
    let b = &cat.basic;
    match pt {
        SampleType::Id | SampleType::Vertex => {
            for sp in enumerate_subpatterns(q, PatternClass::PerId) {
                let id = sp.center.as_ref().expect("per-id pattern");
                let vertex = q.is_vertex(id);
                if pt == SampleType::Vertex && !vertex {
                    continue;
                }
                let (mut hit, mut n) = (0usize, 0usize);
                for m in &sample.members {
                    let Member::Element(d) = m else { continue };
                    if d.vertex != vertex {
                        continue;
                    }
                    n += 1;
                    if sp.constraints.iter().all(|c| d.satisfies(c)) {
                        hit += 1;
                    }
                }
                if n == 0 {
                    continue;
                }
                let population = if vertex { b.n_vertices } else { b.n_edges };
                let s = selectivity(hit as f64 / n as f64 * population as f64, b.n_ids, 1);
                out.push(PartialEstimate::new(sp.constraints, s, Provenance::Sampling));
            }
        }
        SampleType::EdgePattern => {
            for sp in enumerate_subpatterns(q, PatternClass::PerEdgePattern) {
                let e = &sp.edges[0];
                if e.src == e.trg || !sp.constraints.iter().any(Constraint::is_data) {
                    continue;
                }
                let ids = [&*e.src, &*e.id, &*e.trg];
                let hit = sample
                    .members
                    .iter()
                    .filter(|m| match m {
                        Member::EdgePattern { src, edge, trg } => {
                            sp.constraints.iter().all(|c| edge_pattern_holds(c, ids, [src, edge, trg]))
                        }
                        Member::Element(_) => false,
                    })
                    .count();
                let frac = hit as f64 / sample.members.len() as f64;
                let s = selectivity(frac * b.n_edges as f64, b.n_ids, 3);
                out.push(PartialEstimate::new(sp.constraints, s, Provenance::Sampling));
            }
        }
    }
    out
}
