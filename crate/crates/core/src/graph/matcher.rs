//! Backtracking constraint-satisfaction counter over query ids.

use std::collections::BTreeMap;

use super::{Elem, PropertyGraph};
use crate::error::{Error, Result};
use crate::query::{ids_of, Constraint, ConstraintSet, QId, QueryPattern};

pub const DEFAULT_BUDGET: u64 = 100_000_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Semantics {
    #[default]
    Homomorphic,
    /// Additionally requires distinct query ids to map to distinct elements.
    Isomorphic,
}

#[derive(Debug, Clone, Copy)]
pub struct Matcher {
    pub budget: u64,
    pub semantics: Semantics,
}

impl Default for Matcher {
    fn default() -> Self {
        Matcher { budget: DEFAULT_BUDGET, semantics: Semantics::Homomorphic }
    }
}

/// Number of mappings of `q`'s ids into `g` satisfying all of `C(q)`.
pub fn exact_matches(g: &PropertyGraph, q: &QueryPattern, semantics: Semantics) -> Result<u128> {
    Matcher { semantics, ..Matcher::default() }.count(g, &q.constraints())
}

/// Number of mappings of the ids of `cs` satisfying every constraint in it.
pub fn count_satisfying(g: &PropertyGraph, cs: &ConstraintSet) -> Result<u128> {
    Matcher::default().count(g, cs)
}

struct Search<'a> {
    g: &'a PropertyGraph,
    vars: Vec<QId>,
    constraints: Vec<&'a Constraint>,
    // Per variable: indices of constraints mentioning it.
    touching: Vec<Vec<usize>>,
    // Per constraint: variable indices.
    scope: Vec<Vec<usize>>,
    assigned: Vec<Option<Elem>>,
    iso: bool,
    spent: u64,
    budget: u64,
}

impl Matcher {
    pub fn count(&self, g: &PropertyGraph, cs: &ConstraintSet) -> Result<u128> {
        let vars: Vec<QId> = ids_of(cs).into_iter().collect();
        let index: BTreeMap<&QId, usize> = vars.iter().enumerate().map(|(i, v)| (v, i)).collect();
        let constraints: Vec<&Constraint> = cs.iter().collect();
        let scope: Vec<Vec<usize>> = constraints
            .iter()
            .map(|c| c.ids().into_iter().map(|id| index[id]).collect())
            .collect();
        let mut touching = vec![Vec::new(); vars.len()];
        for (ci, s) in scope.iter().enumerate() {
            for &v in s {
                touching[v].push(ci);
            }
        }
        let iso = self.semantics == Semantics::Isomorphic;
        let components = if iso { vec![(0..vars.len()).collect()] } else { components(vars.len(), &scope) };
        let mut search = Search {
            g,
            assigned: vec![None; vars.len()],
            vars,
            constraints,
            touching,
            scope,
            iso,
            spent: 0,
            budget: self.budget,
        };
        let mut total: u128 = 1;
        for comp in components {
            let n = search.run(&comp)?;
            total = total.checked_mul(n).ok_or(Error::CountOverflow)?;
            if total == 0 {
                break;
            }
        }
        Ok(total)
    }
}

fn components(n: usize, scope: &[Vec<usize>]) -> Vec<Vec<usize>> {
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(p: &mut [usize], x: usize) -> usize {
        let mut r = x;
        while p[r] != r {
            r = p[r];
        }
        p[x] = r;
        r
    }
    for s in scope {
        for w in s.windows(2) {
            let (a, b) = (find(&mut parent, w[0]), find(&mut parent, w[1]));
            parent[a] = b;
        }
    }
    let mut groups: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for v in 0..n {
        let r = find(&mut parent, v);
        groups.entry(r).or_default().push(v);
    }
    groups.into_values().collect()
}

impl<'a> Search<'a> {
    fn run(&mut self, comp: &[usize]) -> Result<u128> {
        if comp.iter().all(|&v| self.assigned[v].is_some()) {
            return Ok(1);
        }
        // Most constrained unassigned variable.
        let (var, cands) = comp
            .iter()
            .filter(|&&v| self.assigned[v].is_none())
            .map(|&v| (v, self.candidates(v)))
            .min_by_key(|(v, c)| (c.len(), *v))
            .expect("an unassigned variable");
        let last = comp.iter().filter(|&&v| self.assigned[v].is_none()).count() == 1;
        let mut total: u128 = 0;
        for x in cands {
            self.spent += 1;
            if self.spent > self.budget {
                return Err(Error::OracleBudget { budget: self.budget });
            }
            if self.iso && self.assigned.contains(&Some(x)) {
                continue;
            }
            self.assigned[var] = Some(x);
            if self.consistent(var) {
                let n = if last { 1 } else { self.run(comp)? };
                total = total.checked_add(n).ok_or(Error::CountOverflow)?;
            }
            self.assigned[var] = None;
        }
        Ok(total)
    }

    fn consistent(&self, var: usize) -> bool {
        self.touching[var].iter().all(|&ci| {
            if self.scope[ci].iter().any(|&v| self.assigned[v].is_none()) {
                return true;
            }
            self.g.check_with(self.constraints[ci], |id| {
                let i = self.vars.iter().position(|v| v == id).expect("known id");
                self.assigned[i].expect("assigned")
            })
        })
    }

    fn value_of(&self, id: &QId) -> Option<Elem> {
        let i = self.vars.iter().position(|v| v == id)?;
        self.assigned[i]
    }

    fn candidates(&self, var: usize) -> Vec<Elem> {
        let g = self.g;
        let me = &self.vars[var];
        let mut best: Option<Vec<Elem>> = None;
        let mut offer = |c: Vec<Elem>| {
            if best.as_ref().is_none_or(|b| c.len() < b.len()) {
                best = Some(c);
            }
        };
        let mut kind = None;
        for &ci in &self.touching[var] {
            match self.constraints[ci] {
                Constraint::Src { v, e } | Constraint::Trg { v, e } => {
                    let is_src = matches!(self.constraints[ci], Constraint::Src { .. });
                    if v == me {
                        if let Some(x) = self.value_of(e) {
                            offer(match g.endpoints(x) {
                                Some((s, t)) => vec![if is_src { s } else { t }],
                                None => Vec::new(),
                            });
                        }
                    } else if let Some(x) = self.value_of(v) {
                        offer(if is_src { g.out_edges(x, None) } else { g.in_edges(x, None) }.to_vec());
                    }
                }
                Constraint::HasLabel { label, .. } => offer(g.with_label(label).to_vec()),
                Constraint::Vertex { .. } => kind = Some(true),
                Constraint::Edge { .. } => kind = Some(false),
                _ => {}
            }
        }
        best.unwrap_or_else(|| match kind {
            Some(true) => g.vertices().collect(),
            Some(false) => g.edges().collect(),
            None => g.elements().collect(),
        })
    }
}
