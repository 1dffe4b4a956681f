//! One-dimensional histograms and fixed-grid multidimensional histograms.
//!
//! Inside a bucket values are assumed spread uniformly between the smallest
//! and largest value seen, each distinct value equally frequent.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::PropertyGraph;
use crate::query::{Predicate, QueryValue, Value};

pub const DEFAULT_PREFIX_LEN: usize = 3;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum HistogramKind {
    EquiWidth,
    EquiDepth,
}

impl FromStr for HistogramKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "width" | "equi_width" | "ew" => Ok(HistogramKind::EquiWidth),
            "depth" | "equi_depth" | "ed" => Ok(HistogramKind::EquiDepth),
            other => Err(Error::Config(format!("unknown histogram kind {other:?}"))),
        }
    }
}

impl fmt::Display for HistogramKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            HistogramKind::EquiWidth => "equi_width",
            HistogramKind::EquiDepth => "equi_depth",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Domain {
    Numeric,
    StringPrefix { len: usize },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Bucket {
    pub lo: Value,
    pub hi: Value,
    pub count: u64,
    pub distinct: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Histogram {
    pub key: String,
    pub kind: HistogramKind,
    pub domain: Domain,
    pub buckets: Vec<Bucket>,
    pub total: u64,
}

/// Fraction of a bucket spanning `[lo, hi]` with `distinct` values that
/// satisfies `op x`, for the ordering and equality operators.
fn numeric_fraction(lo: f64, hi: f64, distinct: u64, op: Predicate, x: f64) -> f64 {
    let eq = if lo <= x && x <= hi { 1.0 / distinct.max(1) as f64 } else { 0.0 };
    let below = |inclusive: bool| {
        if x < lo || (x == lo && !inclusive && hi > lo) {
            0.0
        } else if x > hi || (x == hi && inclusive) {
            1.0
        } else if hi > lo {
            (x - lo) / (hi - lo)
        } else {
            // Single-valued bucket and x == lo == hi.
            if inclusive {
                1.0
            } else {
                0.0
            }
        }
    };
    match op {
        Predicate::Eq => eq,
        Predicate::Neq => 1.0 - eq,
        Predicate::Lt => below(false),
        Predicate::Leq => below(true),
        Predicate::Gt => 1.0 - below(true),
        Predicate::Geq => 1.0 - below(false),
        Predicate::In | Predicate::Contains => 0.0,
    }
}

fn prefix(s: &str, len: usize) -> String {
    s.chars().take(len).collect()
}

impl Histogram {
    /// Estimated number of elements whose value satisfies `op value`.
    /// `None` when the histogram cannot judge the predicate.
    pub fn estimate_count(&self, op: Predicate, value: &QueryValue) -> Option<f64> {
        match (op, value) {
            (Predicate::Contains, _) => None,
            (Predicate::In, QueryValue::List(vs)) => {
                let distinct: BTreeSet<&Value> = vs.iter().collect();
                let mut sum = 0.0;
                for v in distinct {
                    sum += self.estimate_scalar(Predicate::Eq, v)?;
                }
                Some(sum.min(self.total as f64))
            }
            (_, QueryValue::Scalar(v)) => self.estimate_scalar(op, v),
            _ => None,
        }
    }

    fn estimate_scalar(&self, op: Predicate, v: &Value) -> Option<f64> {
        match self.domain {
            Domain::Numeric => {
                let Some(x) = v.as_f64() else {
                    return Some(0.0);
                };
                let sum = self
                    .buckets
                    .iter()
                    .map(|b| {
                        let (lo, hi) = (b.lo.as_f64().unwrap_or(0.0), b.hi.as_f64().unwrap_or(0.0));
                        b.count as f64 * numeric_fraction(lo, hi, b.distinct, op, x)
                    })
                    .sum();
                Some(sum)
            }
            Domain::StringPrefix { len } => {
                let Some(s) = v.as_str() else {
                    return Some(0.0);
                };
                let p = prefix(s, len);
                let mut eq = 0.0;
                let mut below = 0.0;
                let mut straddle = 0.0;
                for b in &self.buckets {
                    let (lo, hi) = (b.lo.as_str().unwrap_or(""), b.hi.as_str().unwrap_or(""));
                    if hi < p.as_str() {
                        below += b.count as f64;
                    } else if lo <= p.as_str() {
                        eq += b.count as f64 / b.distinct.max(1) as f64;
                        straddle += b.count as f64;
                    }
                }
                let total = self.total as f64;
                let lt = below + (straddle - eq).max(0.0) / 2.0;
                Some(match op {
                    Predicate::Eq => eq,
                    Predicate::Neq => total - eq,
                    Predicate::Lt => lt,
                    Predicate::Leq => lt + eq,
                    Predicate::Gt => total - lt - eq,
                    Predicate::Geq => total - lt,
                    Predicate::In | Predicate::Contains => return None,
                })
            }
        }
    }
}

/// Splits sorted `(value, weight)` runs into consecutive groups.
fn groups<T>(runs: &[(T, u64)], n: usize, kind_depth: bool) -> Vec<std::ops::Range<usize>> {
    let n = n.max(1);
    if runs.is_empty() {
        return Vec::new();
    }
    if !kind_depth {
        let per = runs.len().div_ceil(n);
        return (0..runs.len()).step_by(per).map(|s| s..(s + per).min(runs.len())).collect();
    }
    let total: u64 = runs.iter().map(|r| r.1).sum();
    let mut out = Vec::new();
    let mut start = 0;
    let mut acc = 0u64;
    let mut k = 1;
    for (i, r) in runs.iter().enumerate() {
        acc += r.1;
        // Close the group once the cumulative count reaches the next quantile.
        if k < n && acc as f64 >= total as f64 * k as f64 / n as f64 {
            out.push(start..i + 1);
            start = i + 1;
            while k < n && acc as f64 >= total as f64 * k as f64 / n as f64 {
                k += 1;
            }
        }
    }
    if start < runs.len() {
        out.push(start..runs.len());
    }
    out
}

pub fn build_histogram(g: &PropertyGraph, key: &str, kind: HistogramKind, n_buckets: usize) -> Histogram {
    build_histogram_with(g, key, kind, n_buckets, DEFAULT_PREFIX_LEN)
}

pub fn build_histogram_with(
    g: &PropertyGraph,
    key: &str,
    kind: HistogramKind,
    n_buckets: usize,
    prefix_len: usize,
) -> Histogram {
    let mut nums: Vec<f64> = Vec::new();
    let mut strs: Vec<&str> = Vec::new();
    for x in g.elements() {
        match g.prop(x, key) {
            Some(Value::Str(s)) => strs.push(s),
            Some(v) => nums.extend(v.as_f64().filter(|f| f.is_finite())),
            None => {}
        }
    }
    let n = n_buckets.max(1);
    let depth = kind == HistogramKind::EquiDepth;
    if !nums.is_empty() && nums.len() >= strs.len() {
        nums.sort_by(f64::total_cmp);
        let mut runs: Vec<(f64, u64)> = Vec::new();
        for v in &nums {
            match runs.last_mut() {
                Some(r) if r.0 == *v => r.1 += 1,
                _ => runs.push((*v, 1)),
            }
        }
        let ranges = if depth {
            groups(&runs, n, true)
        } else {
            let (min, max) = (runs[0].0, runs[runs.len() - 1].0);
            let width = (max - min) / n as f64;
            let mut idx: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
            for (i, r) in runs.iter().enumerate() {
                let b = if width > 0.0 { (((r.0 - min) / width) as usize).min(n - 1) } else { 0 };
                idx.entry(b).or_default().push(i);
            }
            idx.into_values().map(|v| v[0]..v[v.len() - 1] + 1).collect()
        };
        let buckets = ranges
            .into_iter()
            .map(|r| Bucket {
                lo: Value::Float(runs[r.start].0),
                hi: Value::Float(runs[r.end - 1].0),
                count: runs[r.clone()].iter().map(|x| x.1).sum(),
                distinct: r.len() as u64,
            })
            .collect();
        return Histogram { key: key.into(), kind, domain: Domain::Numeric, buckets, total: nums.len() as u64 };
    }
    let domain = Domain::StringPrefix { len: prefix_len };
    let mut per_prefix: BTreeMap<String, (u64, BTreeSet<&str>)> = BTreeMap::new();
    for s in &strs {
        let e = per_prefix.entry(prefix(s, prefix_len)).or_default();
        e.0 += 1;
        e.1.insert(s);
    }
    let runs: Vec<(String, u64)> = per_prefix.iter().map(|(p, (c, _))| (p.clone(), *c)).collect();
    let buckets = groups(&runs, n, depth)
        .into_iter()
        .map(|r| {
            let distinct: usize = runs[r.clone()].iter().map(|(p, _)| per_prefix[p].1.len()).sum();
            Bucket {
                lo: Value::Str(runs[r.start].0.clone()),
                hi: Value::Str(runs[r.end - 1].0.clone()),
                count: runs[r.clone()].iter().map(|x| x.1).sum(),
                distinct: distinct as u64,
            }
        })
        .collect();
    Histogram { key: key.into(), kind, domain, buckets, total: strs.len() as u64 }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MdCell {
    pub coords: Vec<u32>,
    pub count: u64,
    /// Per axis: smallest and largest value, distinct values.
    pub lo: Vec<f64>,
    pub hi: Vec<f64>,
    pub distinct: Vec<u64>,
}

/// Equi-width grid over the numeric values of two or three keys, counting
/// elements that carry all of them.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MdHistogram {
    pub keys: Vec<String>,
    pub buckets_per_axis: usize,
    pub cells: Vec<MdCell>,
    pub total: u64,
}

impl MdHistogram {
    /// Fraction of counted elements satisfying every `(axis, op, value)`.
    /// `None` when a predicate is outside what the grid can judge.
    pub fn fraction(&self, preds: &[(usize, Predicate, &QueryValue)]) -> Option<f64> {
        if self.total == 0 {
            return Some(0.0);
        }
        let mut sum = 0.0;
        for cell in &self.cells {
            let mut f = 1.0;
            for &(axis, op, value) in preds {
                let (lo, hi, d) = (cell.lo[axis], cell.hi[axis], cell.distinct[axis]);
                f *= match (op, value) {
                    (Predicate::Contains, _) => return None,
                    (Predicate::In, QueryValue::List(vs)) => {
                        let xs: BTreeSet<&Value> = vs.iter().collect();
                        xs.iter()
                            .filter_map(|v| v.as_f64())
                            .map(|x| numeric_fraction(lo, hi, d, Predicate::Eq, x))
                            .sum::<f64>()
                            .min(1.0)
                    }
                    (_, QueryValue::Scalar(v)) => match v.as_f64() {
                        Some(x) => numeric_fraction(lo, hi, d, op, x),
                        None => 0.0,
                    },
                    _ => return None,
                };
            }
            sum += cell.count as f64 * f;
        }
        Some(sum / self.total as f64)
    }
}

pub fn build_md_histogram(g: &PropertyGraph, keys: &[String], n: usize) -> Result<MdHistogram> {
    if !(2..=3).contains(&keys.len()) {
        return Err(Error::Config("a multidimensional histogram needs 2 or 3 keys".into()));
    }
    let n = n.max(1);
    let rows: Vec<Vec<f64>> = g
        .elements()
        .filter_map(|x| {
            keys.iter()
                .map(|k| g.prop(x, k).and_then(Value::as_f64).filter(|f| f.is_finite()))
                .collect()
        })
        .collect();
    let axes: Vec<(f64, f64)> = (0..keys.len())
        .map(|a| {
            let min = rows.iter().map(|r| r[a]).fold(f64::INFINITY, f64::min);
            let max = rows.iter().map(|r| r[a]).fold(f64::NEG_INFINITY, f64::max);
            (min, (max - min) / n as f64)
        })
        .collect();
    let mut grid: BTreeMap<Vec<u32>, Vec<&Vec<f64>>> = BTreeMap::new();
    for r in &rows {
        let coords = r
            .iter()
            .zip(&axes)
            .map(|(v, (min, w))| if *w > 0.0 { (((v - min) / w) as usize).min(n - 1) as u32 } else { 0 })
            .collect();
        grid.entry(coords).or_default().push(r);
    }
    let cells = grid
        .into_iter()
        .map(|(coords, members)| {
            let per_axis = |a: usize| members.iter().map(move |r| r[a]);
            MdCell {
                count: members.len() as u64,
                lo: (0..keys.len()).map(|a| per_axis(a).fold(f64::INFINITY, f64::min)).collect(),
                hi: (0..keys.len()).map(|a| per_axis(a).fold(f64::NEG_INFINITY, f64::max)).collect(),
                distinct: (0..keys.len())
                    .map(|a| per_axis(a).map(f64::to_bits).collect::<BTreeSet<_>>().len() as u64)
                    .collect(),
                coords,
            }
        })
        .collect();
    Ok(MdHistogram { keys: keys.to_vec(), buckets_per_axis: n, cells, total: rows.len() as u64 })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::GraphBuilder;

    fn numbers(vals: impl IntoIterator<Item = i64>) -> PropertyGraph {
        let mut b = GraphBuilder::new();
        for (i, v) in vals.into_iter().enumerate() {
            b.vertex(&format!("v{i}"), &[], &[("x", Value::Int(v))]);
        }
        b.build().unwrap()
    }

    fn scalar(v: Value) -> QueryValue {
        QueryValue::Scalar(v)
    }

    #[test]
    fn equi_width_uniform() {
        let h = build_histogram(&numbers(1..=100), "x", HistogramKind::EquiWidth, 10);
        assert_eq!(h.buckets.len(), 10);
        assert!(h.buckets.iter().all(|b| b.count == 10 && b.distinct == 10));
        assert_eq!(h.estimate_count(Predicate::Eq, &scalar(Value::Int(37))), Some(1.0));
        assert_eq!(h.estimate_count(Predicate::Leq, &scalar(Value::Int(100))), Some(100.0));
        assert_eq!(h.estimate_count(Predicate::Gt, &scalar(Value::Int(100))), Some(0.0));
        assert_eq!(h.estimate_count(Predicate::Eq, &scalar(Value::Str("a".into()))), Some(0.0));
        assert_eq!(h.estimate_count(Predicate::Contains, &scalar(Value::Str("a".into()))), None);
    }

    #[test]
    fn equi_depth_balanced() {
        let h = build_histogram(&numbers((0..97).map(|i| i * i)), "x", HistogramKind::EquiDepth, 8);
        let counts: Vec<u64> = h.buckets.iter().map(|b| b.count).collect();
        assert_eq!(counts.iter().sum::<u64>(), 97);
        let (lo, hi) = (counts.iter().min().unwrap(), counts.iter().max().unwrap());
        assert!(hi - lo <= 1, "{counts:?}");
    }

    #[test]
    fn missing_key_is_empty() {
        let h = build_histogram(&numbers(0..3), "nope", HistogramKind::EquiDepth, 4);
        assert_eq!(h.total, 0);
        assert!(h.buckets.is_empty());
    }

    #[test]
    fn string_prefixes() {
        let mut b = GraphBuilder::new();
        for (i, s) in ["apple", "apricot", "banana", "berry", "cherry", "citrus"].iter().enumerate() {
            b.vertex(&format!("v{i}"), &[], &[("s", Value::Str(s.to_string()))]);
        }
        let g = b.build().unwrap();
        let h = build_histogram_with(&g, "s", HistogramKind::EquiWidth, 3, 1);
        assert_eq!(h.buckets.len(), 3);
        assert_eq!(h.estimate_count(Predicate::Eq, &scalar(Value::Str("banana".into()))), Some(1.0));
        assert_eq!(h.estimate_count(Predicate::Lt, &scalar(Value::Str("b".into()))), Some(2.0 + 0.5));
    }

    #[test]
    fn md_grid() {
        let mut b = GraphBuilder::new();
        for i in 0..10 {
            for j in 0..10 {
                b.vertex(&format!("v{i}_{j}"), &[], &[("a", Value::Int(i)), ("b", Value::Int(j))]);
            }
        }
        b.vertex("lonely", &[], &[("a", Value::Int(1))]);
        let g = b.build().unwrap();
        let h = build_md_histogram(&g, &["a".into(), "b".into()], 2).unwrap();
        assert_eq!(h.total, 100);
        assert_eq!(h.cells.len(), 4);
        let (lo, hi) = (scalar(Value::Int(0)), scalar(Value::Int(4)));
        let full = h
            .fraction(&[(0, Predicate::Geq, &lo), (0, Predicate::Leq, &hi), (1, Predicate::Leq, &hi)])
            .unwrap();
        assert!((full - 0.25).abs() < 1e-12);
        let point = h.fraction(&[(0, Predicate::Eq, &scalar(Value::Int(3)))]).unwrap();
        // Two cells on that column, 25 elements each, 5 distinct values.
        assert!((point - 2.0 * 25.0 / (100.0 * 5.0)).abs() < 1e-12);
        let outside = h.fraction(&[(1, Predicate::Gt, &scalar(Value::Int(50)))]).unwrap();
        assert_eq!(outside, 0.0);
    }
}
