//! Shared test helpers: random categorical datasets, and naive reference
//! implementations of the measures written independently of the library.

#![allow(dead_code)]

use std::collections::HashMap;

use featsel_core::{Column, Dataset, FeatureMask};
use proptest::prelude::*;

/// Categorical dataset from row-major feature codes and class codes.
pub fn build(features: &[Vec<u32>], class: &[u32]) -> Dataset {
    let n_features = features.first().map_or(0, Vec::len);
    let mut columns: Vec<Column> = (0..n_features)
        .map(|j| {
            let labels: Vec<String> = features.iter().map(|r| format!("v{}", r[j])).collect();
            Column::from_labels(format!("F{j}"), &labels).unwrap()
        })
        .collect();
    let labels: Vec<String> = class.iter().map(|c| format!("c{c}")).collect();
    columns.push(Column::from_labels("class", &labels).unwrap());
    Dataset::new(columns, "class").unwrap()
}

#[derive(Debug, Clone)]
pub struct Raw {
    pub rows: Vec<Vec<u32>>,
    pub class: Vec<u32>,
}

impl Raw {
    pub fn dataset(&self) -> Dataset {
        build(&self.rows, &self.class)
    }

    pub fn n_features(&self) -> usize {
        self.rows[0].len()
    }
}

/// Up to `max_features` features with 1–3 levels, up to `max_rows` rows,
/// 1–3 classes.
pub fn raw_dataset(max_features: usize, max_rows: usize) -> impl Strategy<Value = Raw> {
    (1..=max_features, 1..=max_rows, 1u32..=3, 1u32..=3).prop_flat_map(|(nf, nr, levels, classes)| {
        (
            prop::collection::vec(prop::collection::vec(0..levels, nf), nr),
            prop::collection::vec(0..classes, nr),
        )
            .prop_map(|(rows, class)| Raw { rows, class })
    })
}

/// Every non-empty mask of width `n`, in integer order.
pub fn all_masks(n: usize) -> Vec<FeatureMask> {
    (1u32..(1 << n))
        .map(|bits| FeatureMask::from_bits((0..n).map(|i| bits >> i & 1 == 1).collect()))
        .collect()
}

/// Pattern → class → count.
fn groups(raw: &Raw, mask: &FeatureMask) -> HashMap<Vec<u32>, HashMap<u32, usize>> {
    let mut g: HashMap<Vec<u32>, HashMap<u32, usize>> = HashMap::new();
    for (row, &c) in raw.rows.iter().zip(&raw.class) {
        let key: Vec<u32> = mask.indices().map(|j| row[j]).collect();
        *g.entry(key).or_default().entry(c).or_default() += 1;
    }
    g
}

fn entropy(counts: impl Iterator<Item = usize>, n: f64) -> f64 {
    counts
        .filter(|&c| c > 0)
        .map(|c| {
            let p = c as f64 / n;
            -p * p.log2()
        })
        .sum()
}

fn class_entropy(raw: &Raw) -> f64 {
    let mut counts: HashMap<u32, usize> = HashMap::new();
    for &c in &raw.class {
        *counts.entry(c).or_default() += 1;
    }
    entropy(counts.into_values(), raw.class.len() as f64)
}

fn pattern_entropy(raw: &Raw, mask: &FeatureMask) -> f64 {
    let n = raw.class.len() as f64;
    entropy(groups(raw, mask).values().map(|g| g.values().sum()), n)
}

pub fn mutual_information(raw: &Raw, mask: &FeatureMask) -> f64 {
    let n = raw.class.len() as f64;
    let conditional: f64 = groups(raw, mask)
        .values()
        .map(|g| {
            let size: usize = g.values().sum();
            size as f64 / n * entropy(g.values().copied(), size as f64)
        })
        .sum();
    class_entropy(raw) - conditional
}

pub fn gain_ratio(raw: &Raw, mask: &FeatureMask) -> f64 {
    let h = pattern_entropy(raw, mask);
    if h == 0.0 {
        0.0
    } else {
        mutual_information(raw, mask) / h
    }
}

pub fn symmetrical_uncertainty(raw: &Raw, mask: &FeatureMask) -> f64 {
    let denom = pattern_entropy(raw, mask) + class_entropy(raw);
    if denom == 0.0 {
        0.0
    } else {
        2.0 * mutual_information(raw, mask) / denom
    }
}

pub fn gini(raw: &Raw, mask: &FeatureMask) -> f64 {
    let n = raw.class.len() as f64;
    groups(raw, mask)
        .values()
        .map(|g| {
            let size: usize = g.values().sum();
            let purity: f64 = g.values().map(|&c| (c as f64 / size as f64).powi(2)).sum();
            size as f64 / n * purity
        })
        .sum()
}

pub fn binary_consistency(raw: &Raw, mask: &FeatureMask) -> f64 {
    if groups(raw, mask).values().all(|g| g.len() == 1) {
        1.0
    } else {
        0.0
    }
}

pub fn ie_consistency(raw: &Raw, mask: &FeatureMask) -> f64 {
    let inconsistent: usize = groups(raw, mask)
        .values()
        .map(|g| g.values().sum::<usize>() - g.values().max().unwrap())
        .sum();
    1.0 - inconsistent as f64 / raw.class.len() as f64
}

/// Enumerates row pairs directly.
pub fn iep_consistency(raw: &Raw, mask: &FeatureMask) -> f64 {
    let (mut same, mut discordant) = (0usize, 0usize);
    for i in 0..raw.rows.len() {
        for j in i + 1..raw.rows.len() {
            if mask.indices().all(|f| raw.rows[i][f] == raw.rows[j][f]) {
                same += 1;
                if raw.class[i] != raw.class[j] {
                    discordant += 1;
                }
            }
        }
    }
    if same == 0 {
        1.0
    } else {
        1.0 - discordant as f64 / same as f64
    }
}

pub fn roughset_consistency(raw: &Raw, mask: &FeatureMask) -> f64 {
    let positive: usize = groups(raw, mask)
        .values()
        .filter(|g| g.len() == 1)
        .map(|g| g.values().sum::<usize>())
        .sum();
    positive as f64 / raw.class.len() as f64
}

/// χ² of one feature against the class, no correction.
pub fn chi_squared(raw: &Raw, feature: usize) -> f64 {
    let n = raw.class.len() as f64;
    let mut cell: HashMap<(u32, u32), f64> = HashMap::new();
    let mut row_tot: HashMap<u32, f64> = HashMap::new();
    let mut col_tot: HashMap<u32, f64> = HashMap::new();
    for (r, &c) in raw.rows.iter().zip(&raw.class) {
        *cell.entry((r[feature], c)).or_default() += 1.0;
        *row_tot.entry(r[feature]).or_default() += 1.0;
        *col_tot.entry(c).or_default() += 1.0;
    }
    let mut chi = 0.0;
    for (&v, &rt) in &row_tot {
        for (&c, &ct) in &col_tot {
            let e = rt * ct / n;
            let o = cell.get(&(v, c)).copied().unwrap_or(0.0);
            chi += (o - e).powi(2) / e;
        }
    }
    chi
}

pub type Oracle = fn(&Raw, &FeatureMask) -> f64;

/// Library measure names paired with their naive references.
pub const SET_ORACLES: &[(&str, Oracle)] = &[
    ("binaryConsistency", binary_consistency),
    ("IEConsistency", ie_consistency),
    ("IEPConsistency", iep_consistency),
    ("roughsetConsistency", roughset_consistency),
    ("mutualInformation", mutual_information),
    ("gainRatio", gain_ratio),
    ("symmetricalUncertain", symmetrical_uncertainty),
    ("giniIndex", gini),
];
