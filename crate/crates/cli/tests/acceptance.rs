//! Acceptance checks. Prints one PASS/FAIL line per criterion and exits
//! non-zero if any fails.

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::process::Command;
use std::time::{Duration, Instant};

use cardest::bench::{generate_graph, generate_workload, DegreeDistribution, GraphSpec, WorkloadSpec};
use cardest::combine::{
    combine_bounds, combine_cond_indep, combine_max_ent, make_complete, selectivity_to_cardinality, Singletons,
    SortStrategy, ALL_STRATEGIES,
};
use cardest::epests::{epest_ip, ConstraintClass, PatternScope};
use cardest::framework::{combine, estimate, partial_estimates, EstimatorConfig};
use cardest::graph::{count_satisfying, exact_matches, GraphBuilder, PropertyGraph, Semantics};
use cardest::pets::{pet_bound_sketch, pet_individual, wander_join_stats};
use cardest::query::{
    ids_of, parse_query, Constraint, ConstraintSet, PartialEstimate, Predicate, Provenance, QId, QueryPattern,
    QueryValue, Value,
};
use cardest::stats::{BasicStats, BuildConfig, StatisticsCatalog};

type Outcome = Result<String, String>;

fn main() {
    let checks: [(&str, fn() -> Outcome); 11] = [
        ("worked figure on G4", c1_worked_figure),
        ("golden regression", c2_golden),
        ("lower-bound example", c3_lower_bound),
        ("default values", c4_defaults),
        ("upper-bound soundness", c5_upper_bounds),
        ("max-entropy factorization", c6_max_ent),
        ("wander-join unbiasedness", c7_wander_join),
        ("sorting-strategy degeneracy", c8_degenerate_strategies),
        ("direction of error", c9_direction),
        ("exactness ladder", c10_exactness),
        ("bench determinism", c11_determinism),
    ];
    let mut failed = 0;
    for (i, (name, check)) in checks.iter().enumerate() {
        let t = Instant::now();
        let out = catch_unwind(AssertUnwindSafe(check)).unwrap_or_else(|p| {
            let msg = p.downcast_ref::<String>().cloned().or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()));
            Err(format!("panicked: {}", msg.unwrap_or_default()))
        });
        let secs = t.elapsed().as_secs_f64();
        match out {
            Ok(detail) => println!("PASS {:>2} {name}: {detail} [{secs:.2}s]", i + 1),
            Err(detail) => {
                failed += 1;
                println!("FAIL {:>2} {name}: {detail} [{secs:.2}s]", i + 1);
            }
        }
    }
    if failed > 0 {
        println!("{failed} of {} criteria failed", checks.len());
        std::process::exit(1);
    }
}

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn within(limit: Duration, t: Instant) -> Result<(), String> {
    ensure(t.elapsed() < limit, || format!("took {:.1}s, limit {}s", t.elapsed().as_secs_f64(), limit.as_secs()))
}

fn rel_eq(a: f64, b: f64, tol: f64) -> bool {
    a == b || (a - b).abs() <= tol * a.abs().max(b.abs())
}

fn g4() -> PropertyGraph {
    let mut b = GraphBuilder::new();
    b.vertex("g1", &[], &[]).vertex("g3", &[], &[]);
    b.edge("g2", "g1", "g3", &[], &[]).edge("g4", "g3", "g1", &[], &[]);
    b.build().unwrap()
}

fn g4_query() -> QueryPattern {
    parse_query(r#"{"vertices":[{"id":"q1"},{"id":"q3"}],"edges":[{"id":"q2","src":"q1","trg":"q3"}]}"#).unwrap()
}

/// Fraction of all assignments of the set's ids that satisfy it.
fn oracle(g: &PropertyGraph, cs: &ConstraintSet) -> f64 {
    let k = ids_of(cs).len() as i32;
    count_satisfying(g, cs).unwrap() as f64 / (g.n_ids() as f64).powi(k)
}

fn exact_pe(g: &PropertyGraph, cs: ConstraintSet) -> PartialEstimate {
    let s = oracle(g, &cs);
    PartialEstimate::new(cs, s, Provenance::Exact)
}

/// Constraints of `q` whose ids all lie in `scope`.
fn on(q: &QueryPattern, scope: &[&QId]) -> ConstraintSet {
    q.constraints().into_iter().filter(|c| c.ids().iter().all(|id| scope.contains(id))).collect()
}

/// Exact PEs for every constraint, every id and every edge pattern, plus
/// pairs of edge patterns that share a vertex.
fn exact_pes(g: &PropertyGraph, q: &QueryPattern) -> Vec<PartialEstimate> {
    let mut sets: Vec<ConstraintSet> = q.constraints().into_iter().map(|c| [c].into()).collect();
    let ids = q.ids();
    sets.extend(ids.iter().map(|id| on(q, &[id])));
    for e in q.edges() {
        sets.push(on(q, &[&e.src, &e.id, &e.trg]));
        for f in q.edges().iter().filter(|f| f.id > e.id) {
            let ends = [&f.src, &f.trg];
            if ends.contains(&&e.src) || ends.contains(&&e.trg) {
                sets.push(on(q, &[&e.src, &e.id, &e.trg, &f.src, &f.id, &f.trg]));
            }
        }
    }
    sets.sort();
    sets.dedup();
    sets.into_iter().filter(|s| !s.is_empty()).map(|s| exact_pe(g, s)).collect()
}

fn exact_singletons(g: &PropertyGraph, q: &QueryPattern) -> Vec<PartialEstimate> {
    q.constraints().into_iter().map(|c: Constraint| exact_pe(g, [c].into())).collect()
}

/// Small random graphs (at most 60 ids) with three queries each.
fn fixture_suite(n: u64) -> Vec<(PropertyGraph, Vec<QueryPattern>)> {
    (0..n)
        .map(|seed| {
            let n_vertices = 4 + (seed % 17) as usize;
            let n_edges = (2 * n_vertices + (seed % 7) as usize).min(60 - n_vertices);
            let spec = GraphSpec {
                n_vertices,
                n_edges,
                vertex_labels: vec!["A".into(), "B".into()],
                edge_labels: vec!["r".into(), "s".into()],
                degree: if seed % 2 == 0 {
                    DegreeDistribution::Uniform
                } else {
                    DegreeDistribution::Zipf { exponent: 1.0 }
                },
                schema: 0.5,
                prop_rate: 0.4,
                correlation: (seed % 3) as f64 * 0.4,
                seed,
            };
            let g = generate_graph(&spec).unwrap();
            let w = WorkloadSpec { n_queries: 3, max_edges: 3, vertex_label_rate: 0.6, prop_rate: 0.4, seed };
            let qs = generate_workload(&g, &w).unwrap().iter().map(|q| q.doc.base_pattern().unwrap()).collect();
            (g, qs)
        })
        .collect()
}

fn c1_worked_figure() -> Outcome {
    let t = Instant::now();
    let g = g4();
    let q = g4_query();
    let m = exact_matches(&g, &q, Semantics::Homomorphic).map_err(|e| e.to_string())?;
    ensure(m == 2, || format!("exact_matches = {m}"))?;
    let s = oracle(&g, &q.constraints());
    ensure(s == 1.0 / 32.0, || format!("selectivity {s}"))?;
    let cat = StatisticsCatalog::build(&g, &BuildConfig::default()).map_err(|e| e.to_string())?;
    let cfg = EstimatorConfig::new("", "", "condIndep(MoDi)").unwrap();
    let r = estimate(&q, Some(&g), &cat, &cfg).map_err(|e| e.to_string())?;
    ensure((r.cardinality - 2.0).abs() <= 1e-9, || format!("cardinality {}", r.cardinality))?;
    within(Duration::from_secs(1), t)?;
    Ok(format!("matches 2, selectivity 1/32, estimate {}", r.cardinality))
}

fn c2_golden() -> Outcome {
    let q = parse_query(
        r#"{"vertices":[{"id":"id0","labels":["title"]},{"id":"id2","labels":["movie_info"]},
                        {"id":"id4","labels":["movie_info_idx"]},
                        {"id":"id6","labels":["cast_info"],
                         "props":[{"key":"note","op":"IN","value":["(producer)","(executive producer)"]}]},
                        {"id":"id8","labels":["person"],
                         "props":[{"key":"gender","op":"=","value":"m"},
                                  {"key":"name","op":"CONTAINS","value":"Tim"}]}],
            "edges":[{"id":"id1","src":"id0","trg":"id2","labels":["budget"]},
                     {"id":"id3","src":"id0","trg":"id4","labels":["votes"]},
                     {"id":"id5","src":"id6","trg":"id0","labels":["cast_info_movie"]},
                     {"id":"id7","src":"id6","trg":"id8","labels":["cast_info_person"]}]}"#,
    )
    .unwrap();
    let all = q.constraints();
    let topo = |keep: &[&str]| -> ConstraintSet {
        all.iter().filter(|c| !c.is_prop() && c.ids().iter().all(|i| keep.contains(&&***i))).cloned().collect()
    };
    let props =
        |id: &str| -> ConstraintSet { all.iter().filter(|c| c.is_prop() && &**c.ids()[0] == id).cloned().collect() };
    let mk = |cs: ConstraintSet, s: f64| PartialEstimate::new(cs, s, Provenance::SysR);
    let pes = vec![
        mk(topo(&["id0", "id1", "id2", "id3", "id4", "id5", "id6"]), 4.26e-52),
        mk(topo(&["id6", "id5", "id0", "id7", "id8"]), 2.41e-34),
        mk(topo(&["id6", "id5", "id0"]), 7.13e-18),
        mk(props("id8"), 1.50e-4),
        mk(props("id6"), 1.38e-2),
    ];
    let basic = BasicStats { n_ids: 171_983_550, ..Default::default() };
    let cat = StatisticsCatalog::from_basic(basic);
    let cpes = make_complete(pes, &q, &cat, false);
    let singles = Singletons::new(&cpes, &q, &cat, false);
    let s = combine_cond_indep(&cpes, SortStrategy::NdSa, &singles).selectivity;
    let card = selectivity_to_cardinality(s, &q, &cat);
    ensure(q.n_ids() == 9, || format!("{} query ids", q.n_ids()))?;
    ensure(rel_eq(s, 2.98e-74, 1e-2), || format!("selectivity {s:e}"))?;
    ensure(rel_eq(card, 3.93, 1e-2), || format!("cardinality {card}"))?;
    Ok(format!("selectivity {s:.4e}, cardinality {card:.4}"))
}

fn c3_lower_bound() -> Outcome {
    let pes: Vec<PartialEstimate> = [0.8, 0.7, 0.9]
        .iter()
        .enumerate()
        .map(|(i, &s)| PartialEstimate::new([Constraint::vertex(&QId::from(format!("v{i}")))].into(), s, Provenance::Synopsis))
        .collect();
    let b = combine_bounds(&pes);
    ensure(b.lower == 0.4, || format!("lower {}", b.lower))?;
    Ok(format!("lower {}, upper {}", b.lower, b.upper))
}

fn c4_defaults() -> Outcome {
    let empty = GraphBuilder::new().build().unwrap();
    let cat = StatisticsCatalog::build(&empty, &BuildConfig::default()).unwrap();
    let mut q = QueryPattern::new();
    q.add_vertex("x").unwrap();
    let cases = [
        (Predicate::Eq, 0.1),
        (Predicate::Neq, 0.9),
        (Predicate::Lt, 1.0 / 3.0),
        (Predicate::Leq, 1.0 / 3.0),
        (Predicate::Gt, 1.0 / 3.0),
        (Predicate::Geq, 1.0 / 3.0),
    ];
    for (op, _) in cases {
        q.add_prop("x", "k", op, QueryValue::Scalar(Value::Int(5))).unwrap();
    }
    let got: Vec<(Predicate, f64)> = pet_individual(&q, &cat, false)
        .into_iter()
        .filter_map(|pe| match pe.constraints.first() {
            Some(Constraint::PropValue { op, .. }) => Some((*op, pe.selectivity)),
            _ => None,
        })
        .collect();
    ensure(got.len() == cases.len(), || format!("{} value PEs", got.len()))?;
    for (op, want) in cases {
        let s = got.iter().find(|(o, _)| *o == op).map(|p| p.1);
        ensure(s == Some(want), || format!("{op:?}: {s:?} != {want}"))?;
    }
    Ok("= 0.1, != 0.9, ranges 1/3".into())
}

fn c5_upper_bounds() -> Outcome {
    let t = Instant::now();
    let suite = fixture_suite(200);
    let (mut checked, mut violations, mut sketch_pes) = (0, Vec::new(), 0);
    for (seed, (g, qs)) in suite.iter().enumerate() {
        ensure(g.n_ids() <= 60, || format!("fixture {seed} has {} ids", g.n_ids()))?;
        let bc = BuildConfig { sketch: Some((4, seed as u64)), ..Default::default() };
        let cat = StatisticsCatalog::build(g, &bc).unwrap();
        for q in qs {
            let truth = oracle(g, &q.constraints());
            let b = combine_bounds(&exact_pes(g, q));
            checked += 1;
            if b.upper < truth * (1.0 - 1e-12) {
                violations.push(format!("fixture {seed}: bounds upper {} < {truth}", b.upper));
            }
            for pe in pet_bound_sketch(q, &cat) {
                sketch_pes += 1;
                let real = oracle(g, &pe.constraints);
                if pe.selectivity < real * (1.0 - 1e-12) {
                    violations.push(format!("fixture {seed}: sketch {} < {real}", pe.selectivity));
                }
            }
        }
    }
    ensure(violations.is_empty(), || format!("{} violations, first: {}", violations.len(), violations[0]))?;
    within(Duration::from_secs(120), t)?;
    Ok(format!("{} graphs, {checked} queries, {sketch_pes} sketch PEs, 0 violations", suite.len()))
}

fn c6_max_ent() -> Outcome {
    let mut q = QueryPattern::new();
    let sels = [0.9, 0.5, 0.31, 0.07, 0.66, 0.2];
    let pes: Vec<PartialEstimate> = sels
        .iter()
        .enumerate()
        .map(|(i, &s)| {
            let id = q.add_vertex(&format!("v{i}")).unwrap();
            PartialEstimate::new([Constraint::vertex(&id)].into(), s, Provenance::Synopsis)
        })
        .collect();
    let r = combine_max_ent(&pes, &q, 12, 1e-12, 10_000).map_err(|e| e.to_string())?;
    let product: f64 = sels.iter().product();
    ensure((r.selectivity - product).abs() < 1e-6, || format!("{} vs product {product}", r.selectivity))?;

    let mut q2 = QueryPattern::new();
    let (a, b) = (q2.add_vertex("a").unwrap(), q2.add_vertex("b").unwrap());
    let (ca, cb) = (Constraint::vertex(&a), Constraint::vertex(&b));
    let system = vec![
        PartialEstimate::new([ca.clone()].into(), 0.5, Provenance::Synopsis),
        PartialEstimate::new([cb.clone()].into(), 0.5, Provenance::Synopsis),
        PartialEstimate::new([ca, cb].into(), 0.5, Provenance::Synopsis),
    ];
    let joint = combine_max_ent(&system, &q2, 2, 1e-12, 10_000).map_err(|e| e.to_string())?;
    ensure((joint.selectivity - 0.5).abs() < 1e-6, || format!("all-true mass {}", joint.selectivity))?;
    Ok(format!("|diff| {:.1e}, all-true mass {:.9}", (r.selectivity - product).abs(), joint.selectivity))
}

fn c7_wander_join() -> Outcome {
    let t = Instant::now();
    let spec = GraphSpec { n_vertices: 80, n_edges: 120, seed: 7, ..GraphSpec::default() };
    let g = generate_graph(&spec).unwrap();
    ensure(g.n_ids() == 200, || format!("{} elements", g.n_ids()))?;
    let q = parse_query(
        r#"{"vertices":[{"id":"a"},{"id":"b","labels":["B"]},{"id":"c"}],
            "edges":[{"id":"x","src":"a","trg":"b","labels":["r"]},{"id":"y","src":"b","trg":"c"}]}"#,
    )
    .unwrap();
    let truth = exact_matches(&g, &q, Semantics::Homomorphic).unwrap() as f64;
    let runs: Vec<f64> = (0..30).map(|seed| wander_join_stats(&g, &q, 10_000, seed).unwrap().mean).collect();
    let mean = runs.iter().sum::<f64>() / 30.0;
    let var = runs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / 29.0;
    let se = (var / 30.0).sqrt();
    ensure(truth > 0.0, || "query has no matches".into())?;
    ensure((mean - truth).abs() <= 3.0 * se, || format!("mean {mean} vs oracle {truth}, se {se}"))?;
    within(Duration::from_secs(30), t)?;
    Ok(format!("mean {mean:.3} vs oracle {truth}, {:.2} standard errors", (mean - truth).abs() / se))
}

fn c8_degenerate_strategies() -> Outcome {
    let spec = GraphSpec {
        n_vertices: 300,
        n_edges: 900,
        vertex_labels: ["A", "B", "C"].map(String::from).to_vec(),
        edge_labels: ["r", "s", "t"].map(String::from).to_vec(),
        schema: 0.9,
        seed: 11,
        ..GraphSpec::default()
    };
    let g = generate_graph(&spec).unwrap();
    let bc = BuildConfig { synopses: ["EP", "c2", "s2", "t2"].iter().map(|s| s.parse().unwrap()).collect(), ..Default::default() };
    let cat = StatisticsCatalog::build(&g, &bc).unwrap();
    let w = WorkloadSpec { n_queries: 40, max_edges: 3, vertex_label_rate: 0.7, prop_rate: 0.0, seed: 5 };
    let queries: Vec<QueryPattern> =
        generate_workload(&g, &w).unwrap().iter().map(|q| q.doc.base_pattern().unwrap()).collect();
    let base = EstimatorConfig::new("", "", "condIndep(MoDi)").unwrap();
    let rich = |st: &str| EstimatorConfig::new("EP,c2,s2,t2", "", &format!("condIndep({st})")).unwrap();
    let est = |q: &QueryPattern, cfg: &EstimatorConfig| estimate(q, Some(&g), &cat, cfg).unwrap().selectivity;
    let mut modi_differs = 0;
    for (i, q) in queries.iter().enumerate() {
        let b = est(q, &base);
        for st in ["Sd", "NaSd", "NaSa"] {
            let s = est(q, &rich(st));
            ensure(rel_eq(s, b, 1e-9), || format!("query {i}: {st} gives {s:e}, baseline {b:e}"))?;
        }
        if q.edges().len() >= 2 && !rel_eq(est(q, &rich("MoDi")), b, 1e-9) {
            modi_differs += 1;
        }
    }
    ensure(modi_differs >= 1, || "MoDi never differs from the baseline".into())?;
    Ok(format!("{} queries identical under Sd/NaSd/NaSa; MoDi differs on {modi_differs} multi-edge queries", queries.len()))
}

fn c9_direction() -> Outcome {
    let mut unions = 0;
    for (seed, (g, qs)) in fixture_suite(200).iter().enumerate() {
        for q in qs {
            let mut pes = exact_singletons(g, q);
            pes.extend(exact_pes(g, q).into_iter().filter(|pe| pe.constraints.len() > 1));
            for scope in [PatternScope::Id, PatternScope::EdgePattern] {
                for class in [ConstraintClass::PropValue, ConstraintClass::Prop, ConstraintClass::All] {
                    for pe in epest_ip(&pes, q, scope, class) {
                        unions += 1;
                        let truth = oracle(g, &pe.constraints);
                        ensure(pe.selectivity >= truth * (1.0 - 1e-12), || {
                            format!("fixture {seed}: union {:e} < oracle {truth:e}", pe.selectivity)
                        })?;
                    }
                }
            }
        }
    }
    ensure(unions > 0, || "no unions produced".into())?;

    // Flagged vertices skew towards label A and towards high scores.
    let mut pairs = 0;
    for seed in 0..20 {
        let spec = GraphSpec { n_vertices: 400, n_edges: 0, correlation: 0.7, prop_rate: 0.2, seed, ..GraphSpec::default() };
        let g = generate_graph(&spec).unwrap();
        let mut q = QueryPattern::new();
        q.add_vertex("x").unwrap();
        q.add_prop("x", "flag", Predicate::Eq, QueryValue::Scalar(Value::Int(1))).unwrap();
        let flag = q.constraints().into_iter().find(|c| matches!(c, Constraint::PropValue { .. })).unwrap();
        for other in [Constraint::has_label(&QId::from("x"), "A"), {
            let mut p = QueryPattern::new();
            p.add_vertex("x").unwrap();
            p.add_prop("x", "score", Predicate::Geq, QueryValue::Scalar(Value::Int(90))).unwrap();
            p.constraints().into_iter().find(|c| matches!(c, Constraint::PropValue { .. })).unwrap()
        }] {
            let x = QId::from("x");
            let v = Constraint::vertex(&x);
            let both: ConstraintSet = [v.clone(), flag.clone(), other.clone()].into();
            let truth = oracle(&g, &both);
            let (pv, pa, pb) = (oracle(&g, &[v.clone()].into()), oracle(&g, &[flag.clone()].into()), oracle(&g, &[other.clone()].into()));
            // Positive correlation among vertices: P(a, b | v) > P(a | v) P(b | v).
            ensure(truth * pv > pa * pb, || format!("seed {seed}: pair {other} is not positively correlated ({truth} {pv} {pa} {pb})"))?;
            let pes = vec![exact_pe(&g, [v].into()), exact_pe(&g, [flag.clone()].into()), exact_pe(&g, [other].into())];
            let singles = Singletons::from_pes(&pes);
            for st in ALL_STRATEGIES {
                let s = combine_cond_indep(&pes, st, &singles).selectivity;
                ensure(s <= truth, || format!("seed {seed}: {st} gives {s:e} > oracle {truth:e}"))?;
            }
            pairs += 1;
        }
    }
    Ok(format!("{unions} implication unions >= oracle; {pairs} correlated pairs underestimated by every strategy"))
}

fn c10_exactness() -> Outcome {
    let mut suite = fixture_suite(60);
    suite.push((g4(), vec![g4_query()]));
    let cts = ALL_STRATEGIES
        .iter()
        .map(|s| format!("condIndep({s})"))
        .chain(["maxEnt(mps=12)".to_string(), "maxEnt(mps=4)".to_string(), "bounds".to_string()])
        .collect::<Vec<_>>();
    let mut checked = 0;
    for (seed, (g, qs)) in suite.iter().enumerate() {
        let cat = StatisticsCatalog::build(g, &BuildConfig::full()).unwrap();
        for q in qs {
            let whole = exact_pe(g, q.constraints());
            for ct in &cts {
                for pets in ["EP,c2,s2,t2,SysR,CS,BS", ""] {
                    let cfg = EstimatorConfig::new(pets, "IP(id,a),IP(ep,a)", ct).unwrap();
                    let mut cpes = partial_estimates(q, Some(g), &cat, &cfg);
                    cpes.push(whole.clone());
                    let (s, ..) = combine(&cpes, q, &cat, &cfg);
                    ensure(s == whole.selectivity, || {
                        format!("fixture {seed}, {ct}, pets {pets:?}: {s:e} != {:e}", whole.selectivity)
                    })?;
                    checked += 1;
                }
            }
        }
    }
    Ok(format!("{checked} (query, PES, technique) combinations return the exact PE"))
}

fn c11_determinism() -> Outcome {
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let p = |name: &str| dir.path().join(name);
    let exe = env!("CARGO_BIN_EXE_cardest");
    let run = |args: &[&str]| -> Result<(), String> {
        let out = Command::new(exe).args(args).output().map_err(|e| e.to_string())?;
        ensure(out.status.success(), || format!("{args:?}: {}", String::from_utf8_lossy(&out.stderr)))
    };
    let s = |x: &std::path::Path| x.to_str().unwrap().to_string();
    run(&["generate", "graph", "--out", &s(&p("g")), "--vertices", "120", "--edges", "300", "--zipf", "1.1", "--correlation", "0.5", "--seed", "3"])?;
    run(&["generate", "workload", "--graph", &s(&p("g")), "--out", &s(&p("w.jsonl")), "--queries", "12", "--prop-rate", "0.3", "--seed", "4"])?;
    std::fs::write(
        p("configs.txt"),
        "# seeds fixed\nname=ci; pets=EP,c2,s2,t2; epests=IP(id,a); ct=condIndep(MoDi)\n\
         name=me; pets=EP,CS,BS; ct=maxEnt(mps=8)\nname=wj; pets=WJ(500); ct=bounds; seed=9\n",
    )
    .map_err(|e| e.to_string())?;
    for out in ["a.csv", "b.csv"] {
        run(&[
            "bench", "--graph", &s(&p("g")), "--workload", &s(&p("w.jsonl")), "--configs", &s(&p("configs.txt")),
            "--out", &s(&p(out)), "--subqueries", "2", "--reproducible",
        ])?;
    }
    let (a, b) = (std::fs::read(p("a.csv")).unwrap(), std::fs::read(p("b.csv")).unwrap());
    let rows = a.iter().filter(|&&c| c == b'\n').count().saturating_sub(1);
    ensure(rows > 0, || "empty report".into())?;
    ensure(a == b, || "reports differ".into())?;
    Ok(format!("two runs, {rows} rows, byte-identical"))
}
