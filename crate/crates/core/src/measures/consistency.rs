//! Consistency measures over the joint pattern of the selected features.

use crate::dataset::{Dataset, DiscretizationSpec};
use crate::error::Result;
use crate::mask::FeatureMask;

use super::table::{class_codes, Partition, Table};
use super::{MeasureDescriptor, MeasureKind, SetMeasure};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ConsistencyKind {
    /// 1 if no pattern is shared by rows of different classes, else 0.
    Binary,
    /// 1 − Σ (pattern count − majority class count) / N.
    InconsistentExamples,
    /// 1 − discordant pairs / same-pattern pairs; 1 when no pair shares a pattern.
    InconsistentPairs,
    /// Dependency degree: fraction of rows in class-pure patterns.
    RoughSet,
}

impl ConsistencyKind {
    pub fn name(self) -> &'static str {
        match self {
            ConsistencyKind::Binary => "binaryConsistency",
            ConsistencyKind::InconsistentExamples => "IEConsistency",
            ConsistencyKind::InconsistentPairs => "IEPConsistency",
            ConsistencyKind::RoughSet => "roughsetConsistency",
        }
    }

    fn statistic(self, t: &Table) -> f64 {
        let groups = 0..t.counts.len();
        match self {
            ConsistencyKind::Binary => {
                if groups.into_iter().all(|g| t.is_pure(g)) {
                    1.0
                } else {
                    0.0
                }
            }
            ConsistencyKind::InconsistentExamples => {
                let inconsistent: usize = t
                    .counts
                    .iter()
                    .zip(&t.group_totals)
                    .map(|(row, &n)| n - row.iter().max().copied().unwrap_or(0))
                    .sum();
                1.0 - inconsistent as f64 / t.n as f64
            }
            ConsistencyKind::InconsistentPairs => {
                let pairs = |k: usize| k * k.saturating_sub(1) / 2;
                let total: usize = t.group_totals.iter().map(|&n| pairs(n)).sum();
                if total == 0 {
                    return 1.0;
                }
                let concordant: usize = t.counts.iter().flatten().map(|&k| pairs(k)).sum();
                1.0 - (total - concordant) as f64 / total as f64
            }
            ConsistencyKind::RoughSet => {
                let positive: usize = groups
                    .filter(|&g| t.is_pure(g))
                    .map(|g| t.group_totals[g])
                    .sum();
                positive as f64 / t.n as f64
            }
        }
    }
}

pub struct ConsistencyMeasure {
    desc: MeasureDescriptor,
    kind: ConsistencyKind,
    discretization: DiscretizationSpec,
}

impl ConsistencyMeasure {
    pub fn new(kind: ConsistencyKind, discretization: DiscretizationSpec) -> Self {
        ConsistencyMeasure {
            desc: MeasureDescriptor::new(kind.name(), true, MeasureKind::Set),
            kind,
            discretization,
        }
    }
}

impl SetMeasure for ConsistencyMeasure {
    fn descriptor(&self) -> &MeasureDescriptor {
        &self.desc
    }

    fn evaluate(&self, data: &Dataset, mask: &FeatureMask) -> Result<f64> {
        let (classes, n_classes) = class_codes(data, &self.desc.name)?;
        let partition = Partition::of_mask(data, mask, &self.discretization)?;
        Ok(self.kind.statistic(&Table::new(&partition, classes, n_classes)))
    }
}

pub fn binary_consistency() -> ConsistencyMeasure {
    ConsistencyMeasure::new(ConsistencyKind::Binary, DiscretizationSpec::default())
}

pub fn ie_consistency() -> ConsistencyMeasure {
    ConsistencyMeasure::new(ConsistencyKind::InconsistentExamples, DiscretizationSpec::default())
}

pub fn iep_consistency() -> ConsistencyMeasure {
    ConsistencyMeasure::new(ConsistencyKind::InconsistentPairs, DiscretizationSpec::default())
}

pub fn roughset_consistency() -> ConsistencyMeasure {
    ConsistencyMeasure::new(ConsistencyKind::RoughSet, DiscretizationSpec::default())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dataset::Column;
    use crate::error::Error;
    use crate::measures::fixtures::{inc, perf, xor};

    fn m(bits: &str) -> FeatureMask {
        FeatureMask::parse(bits).unwrap()
    }

    #[test]
    fn binary_consistency_values() {
        let b = binary_consistency();
        assert_eq!(b.evaluate(&xor(), &m("11")).unwrap(), 1.0);
        assert_eq!(b.evaluate(&xor(), &m("10")).unwrap(), 0.0);
        let single = Dataset::new(
            vec![
                Column::from_labels("A", &["x"]).unwrap(),
                Column::from_labels("C", &["y"]).unwrap(),
            ],
            "C",
        )
        .unwrap();
        assert_eq!(b.evaluate(&single, &m("1")).unwrap(), 1.0);
    }

    #[test]
    fn inconsistent_examples_values() {
        let ie = ie_consistency();
        assert_eq!(ie.evaluate(&inc(), &m("1")).unwrap(), 0.75);
        assert_eq!(ie.evaluate(&xor(), &m("11")).unwrap(), 1.0);
        assert_eq!(ie.evaluate(&xor(), &m("10")).unwrap(), 0.5);
    }

    #[test]
    fn inconsistent_pairs_values() {
        let iep = iep_consistency();
        assert!((iep.evaluate(&inc(), &m("1")).unwrap() - 1.0 / 3.0).abs() < 1e-12);
        assert_eq!(iep.evaluate(&xor(), &m("11")).unwrap(), 1.0);
        let twins = Dataset::new(
            vec![
                Column::from_labels("A", &["x", "x"]).unwrap(),
                Column::from_labels("C", &["y", "y"]).unwrap(),
            ],
            "C",
        )
        .unwrap();
        assert_eq!(iep.evaluate(&twins, &m("1")).unwrap(), 1.0);
    }

    #[test]
    fn rough_set_values() {
        let rs = roughset_consistency();
        assert_eq!(rs.evaluate(&inc(), &m("1")).unwrap(), 0.25);
        assert_eq!(rs.evaluate(&xor(), &m("11")).unwrap(), 1.0);
        assert_eq!(rs.evaluate(&xor(), &m("10")).unwrap(), 0.0);
    }

    #[test]
    fn empty_mask_and_regression_are_rejected() {
        let b = binary_consistency();
        assert!(matches!(b.evaluate(&perf(), &m("00")), Err(Error::EmptyMask)));
        let reg = Dataset::new(
            vec![
                Column::from_labels("A", &["x", "y"]).unwrap(),
                Column::numeric("C", vec![1.0, 2.0]).unwrap(),
            ],
            "C",
        )
        .unwrap();
        assert!(matches!(
            b.evaluate(&reg, &m("1")),
            Err(Error::MeasureInapplicable { .. })
        ));
    }
}
