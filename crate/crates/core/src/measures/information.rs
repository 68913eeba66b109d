//! Information-theoretic set measures. Entropies are in bits with plug-in
//! probabilities.

use crate::dataset::{Dataset, DiscretizationSpec};
use crate::error::Result;
use crate::mask::FeatureMask;

use super::table::{class_codes, Partition, Table};
use super::{MeasureDescriptor, MeasureKind, SetMeasure};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum InformationKind {
    /// I(S;C) = H(C) − H(C|S).
    MutualInformation,
    /// I(S;C) / H(S), 0 when H(S) = 0.
    GainRatio,
    /// 2·I(S;C) / (H(S) + H(C)), 0 when the denominator is 0.
    SymmetricalUncertainty,
    /// Σ_v p(v) Σ_c p(c|v)² over observed patterns v.
    Gini,
}

impl InformationKind {
    pub fn name(self) -> &'static str {
        match self {
            InformationKind::MutualInformation => "mutualInformation",
            InformationKind::GainRatio => "gainRatio",
            InformationKind::SymmetricalUncertainty => "symmetricalUncertain",
            InformationKind::Gini => "giniIndex",
        }
    }

    fn statistic(self, t: &Table) -> f64 {
        let mi = || (t.class_entropy() - t.conditional_class_entropy()).max(0.0);
        match self {
            InformationKind::MutualInformation => mi(),
            InformationKind::GainRatio => {
                let hs = t.pattern_entropy();
                if hs > 0.0 {
                    (mi() / hs).clamp(0.0, 1.0)
                } else {
                    0.0
                }
            }
            InformationKind::SymmetricalUncertainty => {
                let denom = t.pattern_entropy() + t.class_entropy();
                if denom > 0.0 {
                    (2.0 * mi() / denom).clamp(0.0, 1.0)
                } else {
                    0.0
                }
            }
            InformationKind::Gini => {
                let purity: f64 = t
                    .counts
                    .iter()
                    .zip(&t.group_totals)
                    .map(|(row, &ng)| {
                        let sq: usize = row.iter().map(|&c| c * c).sum();
                        sq as f64 / ng as f64
                    })
                    .sum();
                purity / t.n as f64
            }
        }
    }
}

pub struct InformationMeasure {
    desc: MeasureDescriptor,
    kind: InformationKind,
    discretization: DiscretizationSpec,
}

impl InformationMeasure {
    pub fn new(kind: InformationKind, discretization: DiscretizationSpec) -> Self {
        InformationMeasure {
            desc: MeasureDescriptor::new(kind.name(), true, MeasureKind::Set),
            kind,
            discretization,
        }
    }
}

impl SetMeasure for InformationMeasure {
    fn descriptor(&self) -> &MeasureDescriptor {
        &self.desc
    }

    fn evaluate(&self, data: &Dataset, mask: &FeatureMask) -> Result<f64> {
        let (classes, n_classes) = class_codes(data, &self.desc.name)?;
        let partition = Partition::of_mask(data, mask, &self.discretization)?;
        Ok(self.kind.statistic(&Table::new(&partition, classes, n_classes)))
    }
}

pub fn mutual_information() -> InformationMeasure {
    InformationMeasure::new(InformationKind::MutualInformation, DiscretizationSpec::default())
}

pub fn gain_ratio() -> InformationMeasure {
    InformationMeasure::new(InformationKind::GainRatio, DiscretizationSpec::default())
}

pub fn symmetrical_uncertainty() -> InformationMeasure {
    InformationMeasure::new(InformationKind::SymmetricalUncertainty, DiscretizationSpec::default())
}

pub fn gini_index() -> InformationMeasure {
    InformationMeasure::new(InformationKind::Gini, DiscretizationSpec::default())
}
