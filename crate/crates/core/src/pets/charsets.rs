use super::selectivity;
use crate::query::{
    chosen_label, enumerate_subpatterns, Constraint, PartialEstimate, PatternClass, Provenance, QueryPattern,
};
use crate::stats::{CharacteristicSetStore, StatisticsCatalog};

fn run(
    q: &QueryPattern,
    store: &CharacteristicSetStore,
    class: PatternClass,
    n_ids: u64,
    out: &mut Vec<PartialEstimate>,
) {
    for sp in enumerate_subpatterns(q, class) {
        let labels: Vec<&str> = sp
            .edges
            .iter()
            .map(|e| chosen_label(q, &e.id).expect("cs patterns carry edge labels"))
            .collect();
        let keys: Vec<&str> = sp
            .constraints
            .iter()
            .filter_map(|c| match c {
                Constraint::HasKey { key, .. } => Some(key.as_str()),
                _ => None,
            })
            .collect();
        let card = store.estimate(&labels, &keys);
        let s = selectivity(card, n_ids, 2 * sp.edges.len() + 1);
        out.push(PartialEstimate::new(sp.constraints, s, Provenance::CharSets));
    }
}

/// Star estimates from characteristic sets (outgoing, and incoming when the
/// mirrored store was built).
pub fn pet_char_sets(q: &QueryPattern, cat: &StatisticsCatalog) -> Vec<PartialEstimate> {
    let mut out = Vec::new();
    if let Some(store) = &cat.char_sets {
        run(q, store, PatternClass::CsPattern, cat.basic.n_ids, &mut out);
    }
    if let Some(store) = &cat.char_sets_in {
        run(q, store, PatternClass::CsPatternIn, cat.basic.n_ids, &mut out);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{count_satisfying, GraphBuilder};
    use crate::query::{ids_of, parse_query, Value};
    use crate::stats::BuildConfig;

    #[test]
    fn functional_fixture_is_exact() {
        let mut b = GraphBuilder::new();
        for i in 0..5 {
            b.vertex(&format!("v{i}"), &[], &[("k", Value::Int(i))]);
        }
        b.vertex("w", &[], &[]);
        for i in 0..5 {
            b.edge(&format!("a{i}"), &format!("v{i}"), "w", &["a"], &[]);
            b.edge(&format!("b{i}"), &format!("v{i}"), &format!("v{}", (i + 1) % 5), &["b"], &[]);
        }
        let g = b.build().unwrap();
        let mut cfg = BuildConfig::default();
        cfg.char_sets = Some(100);
        let cat = StatisticsCatalog::build(&g, &cfg).unwrap();
        let q = parse_query(
            r#"{"vertices":[{"id":"c","props":[{"key":"k","op":">","value":1}]},{"id":"x"},{"id":"y"}],
                "edges":[{"id":"e","src":"c","trg":"x","labels":["a"]},
                         {"id":"f","src":"c","trg":"y","labels":["b"]}]}"#,
        )
        .unwrap();
        let pes = pet_char_sets(&q, &cat);
        // keys only, {a}, {b}, {a, b}
        assert_eq!(pes.len(), 4);
        for pe in &pes {
            let truth = count_satisfying(&g, &pe.constraints).unwrap() as f64;
            let est = pe.selectivity * (g.n_ids() as f64).powi(ids_of(&pe.constraints).len() as i32);
            assert!((est - truth).abs() < 1e-9, "{} {est} {truth}", pe.key());
        }
    }

    #[test]
    fn missing_label_is_zero() {
        let mut b = GraphBuilder::new();
        b.vertex("u", &[], &[]).vertex("v", &[], &[]);
        b.edge("e", "u", "v", &["a"], &[]);
        let mut cfg = BuildConfig::default();
        cfg.char_sets = Some(10);
        let cat = StatisticsCatalog::build(&b.build().unwrap(), &cfg).unwrap();
        let q = parse_query(
            r#"{"vertices":[{"id":"c"},{"id":"x"}],"edges":[{"id":"e","src":"c","trg":"x","labels":["zzz"]}]}"#,
        )
        .unwrap();
        assert_eq!(pet_char_sets(&q, &cat)[0].selectivity, 0.0);
    }
}
