//! Joint-pattern partitions and pattern × class contingency tables.

use std::borrow::Cow;
use std::collections::{BTreeMap, HashMap};

use crate::dataset::{equal_width_bins, ColumnData, Dataset, DiscretizationSpec};
use crate::error::{Error, Result};
use crate::mask::FeatureMask;

/// Categorical codes of feature `i`; numeric features are discretized.
pub(crate) fn feature_codes<'a>(
    data: &'a Dataset,
    i: usize,
    spec: &DiscretizationSpec,
) -> Cow<'a, [u32]> {
    match data.feature(i).data() {
        ColumnData::Categorical { codes, .. } => Cow::Borrowed(codes),
        ColumnData::Numeric(values) => Cow::Owned(equal_width_bins(values, spec.bins).1),
    }
}

/// Class codes and level count, or a typed error for regression targets.
pub(crate) fn class_codes<'a>(data: &'a Dataset, measure: &str) -> Result<(&'a [u32], usize)> {
    match data.class().as_codes() {
        Some((levels, codes)) => Ok((codes, levels.len())),
        None => Err(Error::MeasureInapplicable {
            measure: measure.to_string(),
            task: data.task().to_string(),
        }),
    }
}

/// Rows grouped by their joint value over a set of features. Group ids are
/// dense and assigned in order of first appearance.
pub(crate) struct Partition {
    pub ids: Vec<u32>,
    pub groups: usize,
}

impl Partition {
    pub fn from_codes<'a>(n_rows: usize, columns: impl IntoIterator<Item = Cow<'a, [u32]>>) -> Self {
        let mut ids = vec![0u32; n_rows];
        let mut groups = 1;
        for codes in columns {
            let mut relabel: HashMap<(u32, u32), u32> = HashMap::new();
            for (id, &code) in ids.iter_mut().zip(codes.iter()) {
                let next = relabel.len() as u32;
                *id = *relabel.entry((*id, code)).or_insert(next);
            }
            groups = relabel.len();
        }
        Partition { ids, groups }
    }

    pub fn of_mask(data: &Dataset, mask: &FeatureMask, spec: &DiscretizationSpec) -> Result<Self> {
        data.check_mask(mask)?;
        if mask.is_empty() {
            return Err(Error::EmptyMask);
        }
        Ok(Self::from_codes(
            data.n_rows(),
            mask.indices().map(|i| feature_codes(data, i, spec)),
        ))
    }
}

/// Pattern × class counts.
pub(crate) struct Table {
    pub counts: Vec<Vec<usize>>,
    pub group_totals: Vec<usize>,
    pub class_totals: Vec<usize>,
    pub n: usize,
}

impl Table {
    pub fn new(partition: &Partition, classes: &[u32], n_classes: usize) -> Self {
        let mut counts = vec![vec![0usize; n_classes]; partition.groups];
        for (&g, &c) in partition.ids.iter().zip(classes) {
            counts[g as usize][c as usize] += 1;
        }
        let group_totals = counts.iter().map(|r| r.iter().sum()).collect();
        let class_totals = (0..n_classes)
            .map(|c| counts.iter().map(|r| r[c]).sum())
            .collect();
        Table {
            counts,
            group_totals,
            class_totals,
            n: classes.len(),
        }
    }

    pub fn is_pure(&self, g: usize) -> bool {
        self.counts[g].iter().filter(|&&c| c > 0).count() <= 1
    }

    /// H(C) in bits.
    pub fn class_entropy(&self) -> f64 {
        entropy_of_counts(&self.class_totals, self.n)
    }

    /// H(S) in bits.
    pub fn pattern_entropy(&self) -> f64 {
        entropy_of_counts(&self.group_totals, self.n)
    }

    /// H(C | S) in bits.
    pub fn conditional_class_entropy(&self) -> f64 {
        let mut acc = LogSum::default();
        for (row, &ng) in self.counts.iter().zip(&self.group_totals) {
            for &ngc in row.iter().filter(|&&c| c > 0) {
                acc.add(ng, ngc, ngc);
            }
        }
        acc.total() / self.n as f64
    }
}

fn entropy_of_counts(counts: &[usize], n: usize) -> f64 {
    let mut acc = LogSum::default();
    for &c in counts.iter().filter(|&&c| c > 0) {
        acc.add(n, c, c);
    }
    acc.total() / n as f64
}

/// Accumulates Σ weight · log2(num / den) with terms grouped by the reduced
/// fraction, so equal multisets of ratios sum to bit-identical totals
/// regardless of how the rows were split into groups.
#[derive(Default)]
struct LogSum {
    terms: BTreeMap<(usize, usize), usize>,
}

impl LogSum {
    fn add(&mut self, num: usize, den: usize, weight: usize) {
        if num == den {
            return;
        }
        let g = gcd(num, den);
        *self.terms.entry((num / g, den / g)).or_default() += weight;
    }

    fn total(&self) -> f64 {
        self.terms
            .iter()
            .map(|(&(num, den), &w)| w as f64 * (num as f64 / den as f64).log2())
            .sum()
    }
}

fn gcd(mut a: usize, mut b: usize) -> usize {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn partition_relabels_in_first_appearance_order() {
        let a: Vec<u32> = vec![1, 1, 0, 0];
        let b: Vec<u32> = vec![0, 1, 0, 1];
        let p = Partition::from_codes(4, [Cow::from(&a[..]), Cow::from(&b[..])]);
        assert_eq!(p.groups, 4);
        assert_eq!(p.ids, [0, 1, 2, 3]);
        let p = Partition::from_codes(4, [Cow::from(&a[..])]);
        assert_eq!(p.ids, [0, 0, 1, 1]);
        assert_eq!(p.groups, 2);
    }

    #[test]
    fn entropies_of_balanced_binary_class() {
        let p = Partition::from_codes(4, [Cow::Owned(vec![0, 0, 1, 1])]);
        let t = Table::new(&p, &[0, 1, 0, 1], 2);
        assert_eq!(t.class_entropy(), 1.0);
        assert_eq!(t.pattern_entropy(), 1.0);
        assert_eq!(t.conditional_class_entropy(), 1.0);
    }

    #[test]
    fn grouped_log_sum_is_split_invariant() {
        // (3, 6) split into (1, 2) + (2, 4): same proportions
        let mut whole = LogSum::default();
        whole.add(9, 3, 3);
        whole.add(9, 6, 6);
        let mut split = LogSum::default();
        split.add(3, 1, 1);
        split.add(3, 2, 2);
        split.add(6, 2, 2);
        split.add(6, 4, 4);
        assert_eq!(whole.total().to_bits(), split.total().to_bits());
    }
}
