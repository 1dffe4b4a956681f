//! Wander join: random walks over the graph along a fixed edge order, each
//! successful walk weighted by the inverse of its probability.

use std::collections::{BTreeMap, BTreeSet};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::selectivity;
use crate::graph::{Elem, PropertyGraph};
use crate::query::{chosen_label, PartialEstimate, Provenance, QId, QueryEdge, QueryPattern};

/// Lexicographically smallest edge order in which every edge after the
/// first touches a vertex bound earlier. `None` for disconnected queries.
pub fn walk_order(q: &QueryPattern) -> Option<Vec<QueryEdge>> {
    if q.edges().is_empty() || !q.is_connected() {
        return None;
    }
    let mut remaining: Vec<QueryEdge> = q.edges().to_vec();
    remaining.sort_by(|a, b| a.id.cmp(&b.id));
    let mut bound: BTreeSet<QId> = BTreeSet::new();
    let mut order = Vec::new();
    while !remaining.is_empty() {
        let pos = if order.is_empty() {
            0
        } else {
            remaining.iter().position(|e| bound.contains(&e.src) || bound.contains(&e.trg))?
        };
        let e = remaining.remove(pos);
        bound.insert(e.src.clone());
        bound.insert(e.trg.clone());
        order.push(e);
    }
    Some(order)
}

/// Result of a batch of walks, in cardinality units.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WalkStats {
    pub mean: f64,
    pub successes: usize,
    pub walks: usize,
}

struct Walker<'a> {
    g: &'a PropertyGraph,
    q: &'a QueryPattern,
    order: Vec<QueryEdge>,
    first: Vec<Elem>,
    constraints: Vec<crate::query::Constraint>,
}

impl<'a> Walker<'a> {
    fn new(g: &'a PropertyGraph, q: &'a QueryPattern, order: Vec<QueryEdge>) -> Self {
        let first = match chosen_label(q, &order[0].id) {
            Some(l) => g.with_label(l).iter().copied().filter(|&x| g.is_edge(x)).collect(),
            None => g.edges().collect(),
        };
        Walker { g, q, order, first, constraints: q.constraints().into_iter().collect() }
    }

    /// One walk: the inverse sampling probability when the walk satisfies
    /// every constraint, zero otherwise.
    fn walk(&self, rng: &mut impl Rng) -> f64 {
        let g = self.g;
        let mut m: BTreeMap<QId, Elem> = BTreeMap::new();
        let mut inv_p = 1.0;
        for (i, e) in self.order.iter().enumerate() {
            let label = chosen_label(self.q, &e.id);
            let cands: &[Elem] = if i == 0 {
                &self.first
            } else if let Some(&s) = m.get(&e.src) {
                g.out_edges(s, label)
            } else {
                g.in_edges(m[&e.trg], label)
            };
            if cands.is_empty() {
                return 0.0;
            }
            let x = cands[rng.gen_range(0..cands.len())];
            inv_p *= cands.len() as f64;
            let (s, t) = g.endpoints(x).expect("edge");
            for (id, v) in [(&e.src, s), (&e.trg, t)] {
                if *m.entry(id.clone()).or_insert(v) != v {
                    return 0.0;
                }
            }
            m.insert(e.id.clone(), x);
        }
        let ok = self.constraints.iter().all(|c| g.check_with(c, |id| m[id]));
        if ok {
            inv_p
        } else {
            0.0
        }
    }
}

/// Runs `walks` walks; `None` when no walk order exists.
pub fn wander_join_stats(g: &PropertyGraph, q: &QueryPattern, walks: usize, seed: u64) -> Option<WalkStats> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let walks = walks.max(1);
    if q.edges().is_empty() {
        // A single vertex: sample vertices uniformly.
        let [v] = q.vertices() else { return None };
        let n = g.n_vertices();
        let constraints = q.constraints();
        let mut sum = 0.0;
        let mut successes = 0;
        for _ in 0..walks {
            if n == 0 {
                break;
            }
            let x = rng.gen_range(0..n) as Elem;
            if constraints.iter().all(|c| g.check_with(c, |id| if id == v { x } else { unreachable!() })) {
                sum += n as f64;
                successes += 1;
            }
        }
        return Some(WalkStats { mean: sum / walks as f64, successes, walks });
    }
    let walker = Walker::new(g, q, walk_order(q)?);
    let mut sum = 0.0;
    let mut successes = 0;
    for _ in 0..walks {
        let w = walker.walk(&mut rng);
        if w > 0.0 {
            successes += 1;
            sum += w;
        }
    }
    Some(WalkStats { mean: sum / walks as f64, successes, walks })
}

/// PE over all of `C(q)` from random walks; flagged when no walk succeeded.
pub fn pet_wander_join(g: &PropertyGraph, q: &QueryPattern, walks: usize, seed: u64) -> Option<PartialEstimate> {
    let stats = wander_join_stats(g, q, walks, seed)?;
    let s = selectivity(stats.mean, g.n_ids() as u64, q.n_ids());
    let mut pe = PartialEstimate::new(q.constraints(), s, Provenance::WanderJoin);
    pe.low_confidence = stats.successes == 0;
    Some(pe)
}
