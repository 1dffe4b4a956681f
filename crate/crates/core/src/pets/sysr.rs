//! Star estimates from per-edge-pattern cardinalities and distinct counts
//! under inclusion and uniformity assumptions.

use super::{known, selectivity, star_parts, MAX_STAR};
use crate::query::{enumerate_subpatterns, PartialEstimate, PatternClass, Provenance, QueryPattern};
use crate::stats::{Role, StatisticsCatalog};

pub fn pet_sysr(q: &QueryPattern, cat: &StatisticsCatalog) -> Vec<PartialEstimate> {
    let mut out = Vec::new();
    let Some(sysr) = &cat.sysr else {
        return out;
    };
    for size in 2..=MAX_STAR {
        for sp in enumerate_subpatterns(q, PatternClass::MixedStar(size)) {
            let (parts, labels) = star_parts(q, &sp);
            if !known(cat, &labels) {
                continue;
            }
            let stats: Vec<(f64, f64)> = parts
                .iter()
                .map(|(ep, role)| {
                    let st = sysr.get(ep);
                    let distinct = if *role == Role::Src { st.distinct_src } else { st.distinct_trg };
                    (st.n as f64, distinct as f64)
                })
                .collect();
            let card = if stats.iter().any(|(n, _)| *n == 0.0) {
                0.0
            } else {
                let min = stats.iter().map(|s| s.1).fold(f64::INFINITY, f64::min);
                stats.iter().fold(min, |acc, (n, d)| acc * n / d)
            };
            let s = selectivity(card, cat.basic.n_ids, 2 * size + 1);
            out.push(PartialEstimate::new(sp.constraints, s, Provenance::SysR));
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{exact_matches, GraphBuilder, Semantics};
    use crate::query::parse_query;
    use crate::stats::BuildConfig;

    #[test]
    fn functional_star_is_exact() {
        // Every cast vertex has exactly one movie edge and one person edge.
        let mut b = GraphBuilder::new();
        for i in 0..4 {
            b.vertex(&format!("m{i}"), &["M"], &[]).vertex(&format!("p{i}"), &["P"], &[]);
        }
        for i in 0..6 {
            b.vertex(&format!("c{i}"), &["C"], &[]);
            b.edge(&format!("cm{i}"), &format!("c{i}"), &format!("m{}", i % 4), &["movie"], &[]);
            b.edge(&format!("cp{i}"), &format!("c{i}"), &format!("p{}", (i * 3) % 4), &["person"], &[]);
        }
        let g = b.build().unwrap();
        let mut cfg = BuildConfig::default();
        cfg.sysr = true;
        let cat = StatisticsCatalog::build(&g, &cfg).unwrap();
        let q = parse_query(
            r#"{"vertices":[{"id":"c","labels":["C"]},{"id":"m","labels":["M"]},{"id":"p","labels":["P"]}],
                "edges":[{"id":"x","src":"c","trg":"m","labels":["movie"]},
                         {"id":"y","src":"c","trg":"p","labels":["person"]}]}"#,
        )
        .unwrap();
        let pes = pet_sysr(&q, &cat);
        assert_eq!(pes.len(), 1);
        let exact = exact_matches(&g, &q, Semantics::Homomorphic).unwrap() as f64;
        let est = pes[0].selectivity * (g.n_ids() as f64).powi(5);
        assert!((est - exact).abs() < 1e-9 * exact, "{est} vs {exact}");
    }

    #[test]
    fn hand_evaluated_star() {
        // Two centers, each with two a-edges and two b-edges: n=4, distinct=2.
        let mut b = GraphBuilder::new();
        for v in ["u", "w", "x", "y"] {
            b.vertex(v, &[], &[]);
        }
        for (i, c) in ["u", "w"].iter().enumerate() {
            for (j, t) in ["x", "y"].iter().enumerate() {
                b.edge(&format!("a{i}{j}"), c, t, &["a"], &[]);
                b.edge(&format!("b{i}{j}"), c, t, &["b"], &[]);
            }
        }
        let g = b.build().unwrap();
        let mut cfg = BuildConfig::default();
        cfg.sysr = true;
        let cat = StatisticsCatalog::build(&g, &cfg).unwrap();
        let q = parse_query(
            r#"{"vertices":[{"id":"c"},{"id":"l1"},{"id":"l2"}],
                "edges":[{"id":"x","src":"c","trg":"l1","labels":["a"]},
                         {"id":"y","src":"c","trg":"l2","labels":["b"]}]}"#,
        )
        .unwrap();
        let pes = pet_sysr(&q, &cat);
        let est = pes[0].selectivity * (g.n_ids() as f64).powi(5);
        assert!((est - 8.0).abs() < 1e-9);
        assert_eq!(exact_matches(&g, &q, Semantics::Homomorphic).unwrap(), 8);
    }

    #[test]
    fn empty_pattern_gives_zero() {
        let mut b = GraphBuilder::new();
        b.vertex("u", &["U"], &[]).vertex("v", &["V"], &[]);
        b.edge("e", "u", "v", &["a"], &[]).edge("f", "u", "v", &["b"], &[]);
        let mut cfg = BuildConfig::default();
        cfg.sysr = true;
        let cat = StatisticsCatalog::build(&b.build().unwrap(), &cfg).unwrap();
        // No a-edge leaves a V vertex.
        let q = parse_query(
            r#"{"vertices":[{"id":"c","labels":["V"]},{"id":"l1"},{"id":"l2","labels":["U"]}],
                "edges":[{"id":"x","src":"c","trg":"l1","labels":["a"]},
                         {"id":"y","src":"l2","trg":"c","labels":["b"]}]}"#,
        )
        .unwrap();
        assert_eq!(pet_sysr(&q, &cat)[0].selectivity, 0.0);
    }
}
