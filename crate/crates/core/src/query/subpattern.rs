use std::collections::BTreeSet;
use std::fmt;

use super::{Constraint, ConstraintSet, QId, QueryEdge, QueryPattern};

/// Subpattern families targeted by the estimation techniques.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum PatternClass {
    Edge,
    Chain(usize),
    SourceStar(usize),
    TargetStar(usize),
    /// Star of `n` edges around a center, in either direction (a 2-chain is
    /// a mixed star of size 2).
    MixedStar(usize),
    /// Labeled source star plus the center's key-presence constraints.
    CsPattern,
    /// Mirror of `CsPattern` over incoming edges.
    CsPatternIn,
    PerId,
    PerEdgePattern,
}

impl fmt::Display for PatternClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PatternClass::Edge => f.write_str("edge"),
            PatternClass::Chain(n) => write!(f, "chain{n}"),
            PatternClass::SourceStar(n) => write!(f, "sstar{n}"),
            PatternClass::TargetStar(n) => write!(f, "tstar{n}"),
            PatternClass::MixedStar(n) => write!(f, "star{n}"),
            PatternClass::CsPattern => f.write_str("csPattern"),
            PatternClass::CsPatternIn => f.write_str("csPatternIn"),
            PatternClass::PerId => f.write_str("perId"),
            PatternClass::PerEdgePattern => f.write_str("perEdgePattern"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Subpattern {
    pub class: PatternClass,
    /// Chains: in path order. Stars: in document order.
    pub edges: Vec<QueryEdge>,
    /// Star center, or the single id for `PerId`.
    pub center: Option<QId>,
    pub constraints: ConstraintSet,
}

/// The label a labeled synopsis keys an id on: its smallest label, if any.
pub fn chosen_label<'a>(q: &'a QueryPattern, id: &str) -> Option<&'a str> {
    q.labels(id).next()
}

fn topology(edges: &[QueryEdge]) -> ConstraintSet {
    let mut out = ConstraintSet::new();
    for e in edges {
        out.insert(Constraint::vertex(&e.src));
        out.insert(Constraint::vertex(&e.trg));
        out.insert(Constraint::edge(&e.id));
        out.insert(Constraint::src(&e.src, &e.id));
        out.insert(Constraint::trg(&e.trg, &e.id));
    }
    out
}

fn labeled(q: &QueryPattern, edges: &[QueryEdge]) -> ConstraintSet {
    let mut out = topology(edges);
    for e in edges {
        for id in [&e.src, &e.id, &e.trg] {
            if let Some(l) = chosen_label(q, id) {
                out.insert(Constraint::has_label(id, l));
            }
        }
    }
    out
}

fn subsets<T: Clone>(items: &[T], n: usize) -> Vec<Vec<T>> {
    if n == 0 {
        return vec![Vec::new()];
    }
    if items.len() < n {
        return Vec::new();
    }
    let mut out = Vec::new();
    for (i, first) in items.iter().enumerate() {
        for mut rest in subsets(&items[i + 1..], n - 1) {
            rest.insert(0, first.clone());
            out.push(rest);
        }
    }
    out
}

fn star_edges(q: &QueryPattern, center: &QId, outgoing: bool) -> Vec<QueryEdge> {
    q.edges()
        .iter()
        .filter(|e| if outgoing { e.src == *center } else { e.trg == *center })
        .cloned()
        .collect()
}

fn leaf(e: &QueryEdge, outgoing: bool) -> &QId {
    if outgoing {
        &e.trg
    } else {
        &e.src
    }
}

/// The endpoint of `e` that is not `center`.
pub(crate) fn other_end<'a>(e: &'a QueryEdge, center: &QId) -> &'a QId {
    if e.src == *center {
        &e.trg
    } else {
        &e.src
    }
}

fn distinct_leaves(center: &QId, edges: &[QueryEdge], outgoing: bool) -> bool {
    let mut seen = BTreeSet::new();
    edges.iter().all(|e| {
        let l = leaf(e, outgoing);
        l != center && seen.insert(l.clone())
    })
}

fn chains(q: &QueryPattern, n: usize) -> Vec<Vec<QueryEdge>> {
    fn extend(q: &QueryPattern, path: &mut Vec<QueryEdge>, n: usize, out: &mut Vec<Vec<QueryEdge>>) {
        if path.len() == n {
            out.push(path.clone());
            return;
        }
        let last = path.last().expect("non-empty path").trg.clone();
        for e in q.edges() {
            let revisits = e.trg == path[0].src || path.iter().any(|p| p.trg == e.trg || p.id == e.id);
            if e.src == last && !revisits {
                path.push(e.clone());
                extend(q, path, n, out);
                path.pop();
            }
        }
    }
    let mut out = Vec::new();
    if n == 0 {
        return out;
    }
    for e in q.edges() {
        if e.src != e.trg {
            extend(q, &mut vec![e.clone()], n, &mut out);
        }
    }
    out
}

/// Enumerates the subpatterns of `q` belonging to `class`. Only patterns
/// whose query ids are pairwise distinct (no self-loops or repeated
/// vertices) are produced for the topological classes.
pub fn enumerate_subpatterns(q: &QueryPattern, class: PatternClass) -> Vec<Subpattern> {
    let mut out = Vec::new();
    let mut push = |edges: Vec<QueryEdge>, center: Option<QId>, constraints: ConstraintSet| {
        out.push(Subpattern { class, edges, center, constraints });
    };
    match class {
        PatternClass::Edge => {
            for e in q.edges() {
                if e.src != e.trg {
                    let edges = vec![e.clone()];
                    let c = labeled(q, &edges);
                    push(edges, None, c);
                }
            }
        }
        PatternClass::Chain(n) => {
            for edges in chains(q, n) {
                let c = labeled(q, &edges);
                push(edges, None, c);
            }
        }
        PatternClass::SourceStar(n) | PatternClass::TargetStar(n) => {
            let outgoing = matches!(class, PatternClass::SourceStar(_));
            for center in q.vertices() {
                for edges in subsets(&star_edges(q, center, outgoing), n) {
                    if n > 0 && distinct_leaves(center, &edges, outgoing) {
                        let c = labeled(q, &edges);
                        push(edges, Some(center.clone()), c);
                    }
                }
            }
        }
        PatternClass::MixedStar(n) => {
            for center in q.vertices() {
                let incident: Vec<QueryEdge> = q
                    .edges()
                    .iter()
                    .filter(|e| (e.src == *center) != (e.trg == *center))
                    .cloned()
                    .collect();
                for edges in subsets(&incident, n) {
                    let mut seen = BTreeSet::new();
                    if n > 0 && edges.iter().all(|e| seen.insert(other_end(e, center).clone())) {
                        let c = labeled(q, &edges);
                        push(edges, Some(center.clone()), c);
                    }
                }
            }
        }
        PatternClass::CsPattern | PatternClass::CsPatternIn => {
            let outgoing = class == PatternClass::CsPattern;
            for center in q.vertices() {
                let keys: ConstraintSet = q
                    .data_constraints(center)
                    .into_iter()
                    .filter(|c| matches!(c, Constraint::HasKey { .. }))
                    .collect();
                if !keys.is_empty() {
                    let mut c = keys.clone();
                    c.insert(Constraint::vertex(center));
                    push(Vec::new(), Some(center.clone()), c);
                }
                let candidates: Vec<QueryEdge> = star_edges(q, center, outgoing)
                    .into_iter()
                    .filter(|e| chosen_label(q, &e.id).is_some())
                    .collect();
                for n in 1..=candidates.len() {
                    for edges in subsets(&candidates, n) {
                        if !distinct_leaves(center, &edges, outgoing) {
                            continue;
                        }
                        let mut c = topology(&edges);
                        for e in &edges {
                            c.insert(Constraint::has_label(&e.id, chosen_label(q, &e.id).unwrap()));
                        }
                        c.extend(keys.iter().cloned());
                        push(edges, Some(center.clone()), c);
                    }
                }
            }
        }
        PatternClass::PerId => {
            for id in q.ids() {
                let data = q.data_constraints(&id);
                if data.is_empty() {
                    continue;
                }
                let mut c = data;
                c.insert(if q.is_vertex(&id) { Constraint::vertex(&id) } else { Constraint::edge(&id) });
                push(Vec::new(), Some(id), c);
            }
        }
        PatternClass::PerEdgePattern => {
            let all = q.constraints();
            for e in q.edges() {
                let ids = [&e.src, &e.id, &e.trg];
                let c = all
                    .iter()
                    .filter(|c| c.ids().iter().all(|x| ids.contains(x)))
                    .cloned()
                    .collect();
                push(vec![e.clone()], None, c);
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::query::parse_query;

    fn path3() -> QueryPattern {
        parse_query(
            r#"{"vertices":[{"id":"a","labels":["A"]},{"id":"b"},{"id":"c"},{"id":"d"}],
                "edges":[{"id":"x","src":"a","trg":"b","labels":["r"]},
                         {"id":"y","src":"b","trg":"c","labels":["s"]},
                         {"id":"z","src":"c","trg":"d"},
                         {"id":"w","src":"a","trg":"c","labels":["r","t"],
                          "props":[{"key":"k","op":"=","value":1}]}]}"#,
        )
        .unwrap()
    }

    #[test]
    fn chains_are_simple_paths() {
        let q = path3();
        let c2: Vec<Vec<String>> = enumerate_subpatterns(&q, PatternClass::Chain(2))
            .iter()
            .map(|s| s.edges.iter().map(|e| e.id.to_string()).collect())
            .collect();
        assert_eq!(c2, vec![vec!["x", "y"], vec!["y", "z"], vec!["w", "z"]]);
        assert_eq!(enumerate_subpatterns(&q, PatternClass::Chain(3)).len(), 1);
        assert!(enumerate_subpatterns(&q, PatternClass::Chain(4)).is_empty());
    }

    #[test]
    fn single_edge_has_no_chain2() {
        let q = parse_query(r#"{"vertices":[{"id":"a"},{"id":"b"}],"edges":[{"id":"e","src":"a","trg":"b"}]}"#)
            .unwrap();
        assert!(enumerate_subpatterns(&q, PatternClass::Chain(2)).is_empty());
        assert_eq!(enumerate_subpatterns(&q, PatternClass::Edge).len(), 1);
    }

    #[test]
    fn labeled_edge_uses_first_label() {
        let q = path3();
        let e = enumerate_subpatterns(&q, PatternClass::Edge);
        let w = e.iter().find(|s| &*s.edges[0].id == "w").unwrap();
        let labels: Vec<String> = w
            .constraints
            .iter()
            .filter_map(|c| match c {
                Constraint::HasLabel { label, .. } => Some(label.clone()),
                _ => None,
            })
            .collect();
        assert_eq!(labels, vec!["A", "r"]);
        assert_eq!(w.constraints.len(), 7);
    }

    #[test]
    fn stars_and_cs_patterns() {
        let q = path3();
        let s2 = enumerate_subpatterns(&q, PatternClass::SourceStar(2));
        assert_eq!(s2.len(), 1);
        assert_eq!(&**s2[0].center.as_ref().unwrap(), "a");
        let t2 = enumerate_subpatterns(&q, PatternClass::TargetStar(2));
        assert_eq!(t2.len(), 1);
        assert_eq!(&**t2[0].center.as_ref().unwrap(), "c");
        // a: {x}, {w}, {x, w}; b: {y}; c: z is unlabeled.
        assert_eq!(enumerate_subpatterns(&q, PatternClass::CsPattern).len(), 4);
        // b: {x}; c: {y}, {w}, {y, w}.
        assert_eq!(enumerate_subpatterns(&q, PatternClass::CsPatternIn).len(), 4);
        // b: x in, y out; c: y, w in, z out; a: x, w out.
        assert_eq!(enumerate_subpatterns(&q, PatternClass::MixedStar(2)).len(), 5);
    }

    #[test]
    fn per_id_and_per_edge_pattern() {
        let q = path3();
        let per_id = enumerate_subpatterns(&q, PatternClass::PerId);
        let w = per_id.iter().find(|s| &**s.center.as_ref().unwrap() == "w").unwrap();
        // edge(w), hasLabel r, hasLabel t, hasKey k, propValue k.
        assert_eq!(w.constraints.len(), 5);
        assert_eq!(per_id.len(), 4);
        let pep = enumerate_subpatterns(&q, PatternClass::PerEdgePattern);
        assert_eq!(pep.len(), 4);
        let x = &pep[0];
        // topology 5 + hasLabel(a,A) + hasLabel(x,r).
        assert_eq!(x.constraints.len(), 7);
    }
}
