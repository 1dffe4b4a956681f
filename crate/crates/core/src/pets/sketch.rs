use super::{known, selectivity, star_parts, MAX_STAR};
use crate::query::{enumerate_subpatterns, PartialEstimate, PatternClass, Provenance, QueryPattern};
use crate::stats::StatisticsCatalog;

/// Upper-bound estimates for labeled edges and stars (2-chains included).
pub fn pet_bound_sketch(q: &QueryPattern, cat: &StatisticsCatalog) -> Vec<PartialEstimate> {
    let mut out = Vec::new();
    let Some(sketch) = cat.sketches.first() else {
        return out;
    };
    for sp in enumerate_subpatterns(q, PatternClass::Edge) {
        let center = sp.edges[0].src.clone();
        let star = crate::query::Subpattern { center: Some(center), ..sp.clone() };
        let (parts, labels) = star_parts(q, &star);
        if !known(cat, &labels) {
            continue;
        }
        let card: u64 = sketch.get(&parts[0].0, parts[0].1).iter().map(|b| b.count).sum();
        let s = selectivity(card as f64, cat.basic.n_ids, 3);
        out.push(PartialEstimate::new(sp.constraints, s, Provenance::BoundSketch));
    }
    for size in 2..=MAX_STAR {
        for sp in enumerate_subpatterns(q, PatternClass::MixedStar(size)) {
            let (parts, labels) = star_parts(q, &sp);
            if !known(cat, &labels) {
                continue;
            }
            let s = selectivity(sketch.star_bound(&parts), cat.basic.n_ids, 2 * size + 1);
            out.push(PartialEstimate::new(sp.constraints, s, Provenance::BoundSketch));
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{count_satisfying, GraphBuilder};
    use crate::query::parse_query;
    use crate::stats::BuildConfig;

    #[test]
    fn bounds_dominate_truth_on_a_skewed_graph() {
        let mut b = GraphBuilder::new();
        for i in 0..8 {
            b.vertex(&format!("v{i}"), &[if i % 2 == 0 { "A" } else { "B" }], &[]);
        }
        let mut k = 0;
        for i in 0..8 {
            for j in 0..(i % 4) {
                b.edge(&format!("e{k}"), &format!("v{i}"), &format!("v{}", (i + j + 1) % 8), &["r"], &[]);
                k += 1;
            }
        }
        let g = b.build().unwrap();
        let mut cfg = BuildConfig::default();
        cfg.sketch = Some((3, 11));
        let cat = StatisticsCatalog::build(&g, &cfg).unwrap();
        let q = parse_query(
            r#"{"vertices":[{"id":"a","labels":["A"]},{"id":"b"},{"id":"c"}],
                "edges":[{"id":"x","src":"a","trg":"b","labels":["r"]},
                         {"id":"y","src":"b","trg":"c"}]}"#,
        )
        .unwrap();
        let pes = pet_bound_sketch(&q, &cat);
        assert_eq!(pes.len(), 3);
        for pe in pes {
            let truth = count_satisfying(&g, &pe.constraints).unwrap() as f64;
            let k = crate::query::ids_of(&pe.constraints).len() as i32;
            assert!(pe.selectivity * (g.n_ids() as f64).powi(k) >= truth - 1e-9);
        }
    }
}
