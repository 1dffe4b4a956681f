//! Characteristic sets: per vertex, the labels on its incident edges (one
//! direction) together with its property keys.

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use crate::graph::PropertyGraph;

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CsItem {
    Label(String),
    Key(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Direction {
    Out,
    In,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CsEntry {
    pub items: BTreeSet<CsItem>,
    /// Vertices attributed to this set.
    pub count: u64,
    /// Edges per label leaving (or entering) those vertices.
    pub label_counts: BTreeMap<String, u64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CharacteristicSetStore {
    pub direction: Direction,
    pub max_entries: usize,
    pub entries: Vec<CsEntry>,
    pub merged: bool,
}

impl CharacteristicSetStore {
    /// Estimated number of stars with the given edge labels (one entry per
    /// query edge, repeats allowed) around a center having all `keys`.
    pub fn estimate(&self, labels: &[&str], keys: &[&str]) -> f64 {
        let wanted: BTreeSet<CsItem> = labels
            .iter()
            .map(|l| CsItem::Label(l.to_string()))
            .chain(keys.iter().map(|k| CsItem::Key(k.to_string())))
            .collect();
        self.entries
            .iter()
            .filter(|e| e.count > 0 && wanted.is_subset(&e.items))
            .map(|e| {
                let n = e.count as f64;
                labels.iter().fold(n, |acc, l| {
                    acc * e.label_counts.get(*l).copied().unwrap_or(0) as f64 / n
                })
            })
            .sum()
    }
}

pub fn build_char_sets(g: &PropertyGraph, max_entries: usize, direction: Direction) -> CharacteristicSetStore {
    let mut groups: BTreeMap<BTreeSet<CsItem>, CsEntry> = BTreeMap::new();
    for v in g.vertices() {
        let edges = match direction {
            Direction::Out => g.out_edges(v, None),
            Direction::In => g.in_edges(v, None),
        };
        let mut items = BTreeSet::new();
        let mut label_counts: BTreeMap<String, u64> = BTreeMap::new();
        for &e in edges {
            for l in g.labels(e) {
                items.insert(CsItem::Label(l.clone()));
                *label_counts.entry(l.clone()).or_default() += 1;
            }
        }
        items.extend(g.props(v).keys().map(|k| CsItem::Key(k.clone())));
        let entry = groups.entry(items.clone()).or_insert_with(|| CsEntry {
            items,
            count: 0,
            label_counts: BTreeMap::new(),
        });
        entry.count += 1;
        for (l, c) in label_counts {
            *entry.label_counts.entry(l).or_default() += c;
        }
    }
    let mut entries: Vec<CsEntry> = groups.into_values().collect();
    let max_entries = max_entries.max(1);
    let merged = entries.len() > max_entries;
    if merged {
        entries = merge(entries, max_entries);
    }
    CharacteristicSetStore { direction, max_entries, entries, merged }
}

fn merge(mut entries: Vec<CsEntry>, max_entries: usize) -> Vec<CsEntry> {
    entries.sort_by(|a, b| b.count.cmp(&a.count).then_with(|| a.items.cmp(&b.items)));
    let victims = entries.split_off(max_entries);
    let mut extra = Vec::new();
    for v in victims {
        if !place(&mut entries, &v.items, v.count, &v.label_counts) {
            extra.push(v);
        }
    }
    entries.extend(extra);
    entries
}

fn add_into(target: &mut CsEntry, items: &BTreeSet<CsItem>, count: u64, labels: &BTreeMap<String, u64>) {
    target.count += count;
    for (l, c) in labels {
        if items.contains(&CsItem::Label(l.clone())) {
            *target.label_counts.entry(l.clone()).or_default() += c;
        }
    }
}

/// Folds a set into the kept entries: into its smallest superset, or split
/// by the kept entry it overlaps most. Returns false when it overlaps none.
fn place(kept: &mut [CsEntry], items: &BTreeSet<CsItem>, count: u64, labels: &BTreeMap<String, u64>) -> bool {
    let superset = kept
        .iter()
        .enumerate()
        .filter(|(_, k)| items.is_subset(&k.items))
        .min_by(|(_, a), (_, b)| {
            a.items
                .len()
                .cmp(&b.items.len())
                .then(b.count.cmp(&a.count))
                .then_with(|| a.items.cmp(&b.items))
        })
        .map(|(i, _)| i);
    if let Some(i) = superset {
        add_into(&mut kept[i], items, count, labels);
        return true;
    }
    let best = kept
        .iter()
        .map(|k| (k, items.intersection(&k.items).count()))
        .filter(|(_, n)| *n > 0)
        .max_by(|(a, na), (b, nb)| {
            na.cmp(nb).then(a.count.cmp(&b.count)).then_with(|| b.items.cmp(&a.items))
        })
        .map(|(k, _)| k.items.clone());
    let Some(other) = best else {
        return false;
    };
    let first: BTreeSet<CsItem> = items.intersection(&other).cloned().collect();
    let rest: BTreeSet<CsItem> = items.difference(&other).cloned().collect();
    let placed = place(kept, &first, count, labels);
    debug_assert!(placed);
    // The vertices are attributed once; the remainder only carries its edges.
    place(kept, &rest, 0, labels);
    true
}
