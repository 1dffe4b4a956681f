mod common;

use cardest::combine::{combine_bounds, combine_cond_indep, combine_max_ent, Singletons, ALL_STRATEGIES};
use cardest::epests::{epest_ip, ConstraintClass, PatternScope};
use cardest::graph::{Elem, Matcher, PropertyGraph, Semantics};
use cardest::pets::pet_bound_sketch;
use cardest::query::{ids_of, ConstraintSet, PartialEstimate, Provenance, QId, QueryPattern};
use cardest::stats::{BuildConfig, StatisticsCatalog};
use common::*;
use proptest::prelude::*;

fn brute_force(g: &PropertyGraph, cs: &ConstraintSet, iso: bool) -> u128 {
    let vars: Vec<QId> = ids_of(cs).into_iter().collect();
    let n = g.n_ids() as Elem;
    let mut assign: Vec<Elem> = vec![0; vars.len()];
    let mut count = 0;
    loop {
        let distinct = !iso || {
            let mut seen = assign.clone();
            seen.sort_unstable();
            seen.windows(2).all(|w| w[0] != w[1])
        };
        if distinct {
            let at = |id: &QId| assign[vars.iter().position(|v| v == id).unwrap()];
            if cs.iter().all(|c| g.check_with(c, at)) {
                count += 1;
            }
        }
        // Odometer increment.
        let mut i = 0;
        loop {
            if i == assign.len() {
                return count;
            }
            assign[i] += 1;
            if assign[i] < n {
                break;
            }
            assign[i] = 0;
            i += 1;
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn matcher_agrees_with_enumeration(gp in graph_plan(4, 5), qp in query_plan(2)) {
        let g = gp.build();
        let cs = qp.build().constraints();
        for (sem, iso) in [(Semantics::Homomorphic, false), (Semantics::Isomorphic, true)] {
            let m = Matcher { semantics: sem, ..Matcher::default() };
            prop_assert_eq!(m.count(&g, &cs).unwrap(), brute_force(&g, &cs, iso));
        }
    }

    #[test]
    fn bound_sketch_never_underestimates(gp in graph_plan(8, 14), qp in query_plan(3), seed in 0u64..100) {
        let g = gp.build();
        let q = qp.build();
        let cat = StatisticsCatalog::build(&g, &BuildConfig { sketch: Some((3, seed)), ..Default::default() }).unwrap();
        for pe in pet_bound_sketch(&q, &cat) {
            let truth = oracle(&g, &pe.constraints);
            prop_assert!(at_least(pe.selectivity, truth), "{} < {}", pe.selectivity, truth);
        }
    }

    #[test]
    fn bounds_enclose_the_truth(gp in graph_plan(8, 14), qp in query_plan(3), masks in proptest::collection::vec(any::<u64>(), 0..6)) {
        let g = gp.build();
        let q = qp.build();
        let mut pes = exact_singletons(&g, &q);
        pes.extend(subsets(&q, &masks).into_iter().map(|s| exact_pe(&g, s)));
        let truth = oracle(&g, &q.constraints());
        let b = combine_bounds(&pes);
        prop_assert!(at_least(b.upper, truth), "upper {} < {}", b.upper, truth);
        prop_assert!(b.lower <= truth + 1e-12, "lower {} > {}", b.lower, truth);
    }

    #[test]
    fn implication_unions_never_underestimate(gp in graph_plan(8, 14), qp in query_plan(3), masks in proptest::collection::vec(any::<u64>(), 0..4)) {
        let g = gp.build();
        let q = qp.build();
        let mut pes = exact_singletons(&g, &q);
        pes.extend(subsets(&q, &masks).into_iter().map(|s| exact_pe(&g, s)));
        for scope in [PatternScope::Id, PatternScope::EdgePattern] {
            for class in [ConstraintClass::PropValue, ConstraintClass::Prop, ConstraintClass::All] {
                for pe in epest_ip(&pes, &q, scope, class) {
                    let truth = oracle(&g, &pe.constraints);
                    prop_assert!(at_least(pe.selectivity, truth), "{:?}: {} < {}", pe.constraints, pe.selectivity, truth);
                }
            }
        }
    }

    #[test]
    fn cond_indep_ignores_input_order(
        qp in query_plan(3),
        masks in proptest::collection::vec(any::<u64>(), 1..6),
        sels in proptest::collection::vec(0.001f64..1.0, 6),
        perm in Just((0..64usize).collect::<Vec<_>>()).prop_shuffle(),
    ) {
        let q = qp.build();
        let mut pes: Vec<PartialEstimate> = q
            .constraints()
            .into_iter()
            .map(|c| PartialEstimate::new([c].into(), 0.5, Provenance::Default))
            .collect();
        for (s, sel) in subsets(&q, &masks).into_iter().zip(&sels) {
            pes.push(PartialEstimate::new(s, *sel, Provenance::Synopsis));
        }
        let order: Vec<usize> = perm.into_iter().filter(|&i| i < pes.len()).collect();
        let shuffled: Vec<PartialEstimate> = order.iter().map(|&i| pes[i].clone()).collect();
        let singles = Singletons::from_pes(&pes);
        for st in ALL_STRATEGIES {
            let a = combine_cond_indep(&pes, st, &singles).selectivity;
            let b = combine_cond_indep(&shuffled, st, &singles).selectivity;
            prop_assert_eq!(a.to_bits(), b.to_bits(), "{}", st);
        }
    }

    #[test]
    fn max_ent_of_singletons_is_the_product(sels in proptest::collection::vec(0.01f64..0.99, 1..=6)) {
        let mut q = QueryPattern::new();
        let pes: Vec<PartialEstimate> = sels
            .iter()
            .enumerate()
            .map(|(i, &s)| {
                let id = q.add_vertex(&format!("v{i}")).unwrap();
                PartialEstimate::new([cardest::query::Constraint::vertex(&id)].into(), s, Provenance::Synopsis)
            })
            .collect();
        let r = combine_max_ent(&pes, &q, 12, 1e-12, 10_000).unwrap();
        let product: f64 = sels.iter().product();
        prop_assert!((r.selectivity - product).abs() < 1e-9);
    }
}
