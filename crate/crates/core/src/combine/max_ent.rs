use std::collections::BTreeSet;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::query::{Constraint, ConstraintSet, PartialEstimate, QueryPattern};

/// Largest partition the solver accepts: 2^20 atoms.
pub const MPS_CAP: usize = 20;
pub const DEFAULT_MPS: usize = 12;
pub const DEFAULT_TOL: f64 = 1e-9;
pub const DEFAULT_MAX_ITER: usize = 10_000;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MaxEntResult {
    pub selectivity: f64,
    pub partitions: usize,
    /// PEs that did not fit into any partition and were ignored.
    pub dropped: usize,
    pub iterations: usize,
    pub residual: f64,
}

struct Partition {
    vars: BTreeSet<Constraint>,
    pes: Vec<usize>,
}

/// Greedy partitioning: PEs by size (largest first), each merged with every
/// partition it touches when the result stays within `mps` variables.
fn partition(pes: &[PartialEstimate], universe: &ConstraintSet, mps: usize) -> (Vec<Partition>, usize) {
    let mut order: Vec<usize> = (0..pes.len()).collect();
    order.sort_by(|&a, &b| {
        pes[b].constraints.len().cmp(&pes[a].constraints.len()).then_with(|| pes[a].constraints.cmp(&pes[b].constraints))
    });
    let mut parts: Vec<Partition> = Vec::new();
    let mut dropped = 0;
    for i in order {
        let cs = &pes[i].constraints;
        let touched: Vec<usize> = (0..parts.len()).filter(|&p| !parts[p].vars.is_disjoint(cs)).collect();
        let mut vars: BTreeSet<Constraint> = cs.clone();
        for &p in &touched {
            vars.extend(parts[p].vars.iter().cloned());
        }
        if vars.len() > mps {
            dropped += 1;
            continue;
        }
        let mut members = vec![i];
        for &p in touched.iter().rev() {
            members.extend(parts.remove(p).pes);
        }
        parts.push(Partition { vars, pes: members });
    }
    // Query constraints no kept PE mentions are unconstrained variables.
    for c in universe {
        if !parts.iter().any(|p| p.vars.contains(c)) {
            parts.push(Partition { vars: BTreeSet::from([c.clone()]), pes: Vec::new() });
        }
    }
    (parts, dropped)
}

/// Iterative proportional fitting over the 2^k atoms of one partition.
/// Returns the all-true mass, sweeps used and the final residual.
fn solve(k: usize, targets: &[(usize, f64)], tol: f64, max_iter: usize) -> (f64, usize, f64) {
    let n = 1usize << k;
    let mut p = vec![1.0 / n as f64; n];
    // Nested PEs with equal selectivity force the atoms between them to be
    // empty. Fitting would only approach that boundary slowly, so start
    // there.
    for &(m1, s1) in targets {
        for &(m2, s2) in targets {
            if m1 != m2 && m1 & m2 == m1 && (s1 - s2).abs() <= 1e-12 * s1.max(s2) {
                for (a, x) in p.iter_mut().enumerate() {
                    if a & m1 == m1 && a & m2 != m2 {
                        *x = 0.0;
                    }
                }
            }
        }
    }
    let marginal = |p: &[f64], m: usize| -> f64 { (0..n).filter(|a| a & m == m).map(|a| p[a]).sum() };
    let mut residual = f64::INFINITY;
    let mut sweeps = 0;
    while sweeps < max_iter {
        residual = targets.iter().map(|&(m, s)| (marginal(&p, m) - s).abs()).fold(0.0, f64::max);
        if residual < tol {
            break;
        }
        sweeps += 1;
        for &(m, s) in targets {
            let q = marginal(&p, m);
            let inside = if q > 0.0 { s / q } else { 1.0 };
            let outside = if q < 1.0 { (1.0 - s) / (1.0 - q) } else { 1.0 };
            for (a, x) in p.iter_mut().enumerate() {
                *x *= if a & m == m { inside } else { outside };
            }
        }
    }
    if residual >= tol {
        residual = targets.iter().map(|&(m, s)| (marginal(&p, m) - s).abs()).fold(0.0, f64::max);
    }
    (p[n - 1], sweeps, residual)
}

/// Maximum-entropy combination: the all-true mass of the most uniform
/// distribution over constraint outcomes that agrees with every kept PE,
/// taking partitions as independent.
pub fn combine_max_ent(
    cpes: &[PartialEstimate],
    q: &QueryPattern,
    mps: usize,
    tol: f64,
    max_iter: usize,
) -> Result<MaxEntResult> {
    if mps == 0 || mps > MPS_CAP {
        return Err(Error::Config(format!("maxEnt partition size must be in 1..={MPS_CAP}, got {mps}")));
    }
    let mut universe = q.constraints();
    for pe in cpes {
        universe.extend(pe.constraints.iter().cloned());
    }
    if let Some(pe) = super::exact_cover(cpes, &universe) {
        return Ok(MaxEntResult { selectivity: pe.selectivity, partitions: 1, dropped: 0, iterations: 0, residual: 0.0 });
    }
    let (parts, dropped) = partition(cpes, &universe, mps);
    let mut sel = 1.0;
    let mut iterations = 0;
    let mut worst = 0.0f64;
    for part in &parts {
        let vars: Vec<&Constraint> = part.vars.iter().collect();
        let targets: Vec<(usize, f64)> = part
            .pes
            .iter()
            .map(|&i| {
                let mask = cpes[i]
                    .constraints
                    .iter()
                    .map(|c| 1usize << vars.binary_search(&c).expect("partition variable"))
                    .fold(0, |m, b| m | b);
                (mask, cpes[i].selectivity)
            })
            .collect();
        let (mass, it, residual) = solve(vars.len(), &targets, tol, max_iter);
        if residual >= tol {
            return Err(Error::Convergence { residual, iterations: it });
        }
        sel *= mass;
        iterations = iterations.max(it);
        worst = worst.max(residual);
    }
    Ok(MaxEntResult {
        selectivity: sel.clamp(0.0, 1.0),
        partitions: parts.len(),
        dropped,
        iterations,
        residual: worst,
    })
}
