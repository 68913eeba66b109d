//! Feature evaluation measures.
//!
//! Every measure carries a [`MeasureDescriptor`] with its name, whether
//! larger values are better, and whether it scores single features
//! ([`MeasureKind::Individual`]) or feature sets ([`MeasureKind::Set`]).
//! Categorical measures discretize numeric features on the fly with the
//! [`DiscretizationSpec`](crate::dataset::DiscretizationSpec) they were
//! built with.

mod consistency;
mod individual;
mod information;
mod regression;
mod relief;
pub(crate) mod table;

use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::dataset::Dataset;
use crate::error::{Error, Result};
use crate::mask::FeatureMask;

pub use consistency::{
    binary_consistency, ie_consistency, iep_consistency, roughset_consistency, ConsistencyKind,
    ConsistencyMeasure,
};
pub use individual::{chi_squared, cramer_v, f_score, ChiSquared, CramerV, FScore, FISHER_EPSILON};
pub use information::{
    gain_ratio, gini_index, mutual_information, symmetrical_uncertainty, InformationKind,
    InformationMeasure,
};
pub use regression::{determination_coefficient, DeterminationCoefficient};
pub use relief::{relief, Relief, ReliefConfig};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum MeasureKind {
    Individual,
    Set,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MeasureDescriptor {
    pub name: String,
    pub maximize: bool,
    pub kind: MeasureKind,
}

impl MeasureDescriptor {
    pub fn new(name: impl Into<String>, maximize: bool, kind: MeasureKind) -> Self {
        MeasureDescriptor {
            name: name.into(),
            maximize,
            kind,
        }
    }

    /// `a` strictly better than `b` in this measure's orientation.
    pub fn better(&self, a: f64, b: f64) -> bool {
        if self.maximize {
            a > b
        } else {
            a < b
        }
    }

    /// `a` at least as good as `b`.
    pub fn at_least(&self, a: f64, b: f64) -> bool {
        if self.maximize {
            a >= b
        } else {
            a <= b
        }
    }

    /// Value worse than anything the measure can return.
    pub fn worst(&self) -> f64 {
        if self.maximize {
            f64::NEG_INFINITY
        } else {
            f64::INFINITY
        }
    }

    /// Value mapped so that larger is always better.
    pub fn oriented(&self, v: f64) -> f64 {
        if self.maximize {
            v
        } else {
            -v
        }
    }
}

/// Scores single features independently.
pub trait IndividualMeasure: Send + Sync {
    fn descriptor(&self) -> &MeasureDescriptor;

    /// One score per entry of `features` (feature indices), in order.
    fn score(&self, data: &Dataset, features: &[usize]) -> Result<Vec<f64>>;
}

/// Scores a non-empty feature subset as a whole.
pub trait SetMeasure: Send + Sync {
    fn descriptor(&self) -> &MeasureDescriptor;

    fn evaluate(&self, data: &Dataset, mask: &FeatureMask) -> Result<f64>;
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScoreVector {
    pub entries: Vec<(String, f64)>,
}

impl ScoreVector {
    pub fn scores(&self) -> Vec<f64> {
        self.entries.iter().map(|(_, s)| *s).collect()
    }
}

/// A measure of either kind, shareable across threads.
#[derive(Clone)]
pub enum Measure {
    Individual(Arc<dyn IndividualMeasure>),
    Set(Arc<dyn SetMeasure>),
}

impl std::fmt::Debug for Measure {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_tuple("Measure").field(self.descriptor()).finish()
    }
}

impl Measure {
    pub fn individual(m: impl IndividualMeasure + 'static) -> Self {
        Measure::Individual(Arc::new(m))
    }

    pub fn set(m: impl SetMeasure + 'static) -> Self {
        Measure::Set(Arc::new(m))
    }

    pub fn descriptor(&self) -> &MeasureDescriptor {
        match self {
            Measure::Individual(m) => m.descriptor(),
            Measure::Set(m) => m.descriptor(),
        }
    }

    /// The measure as a set measure; individual measures are rejected.
    pub fn as_set(&self) -> Result<&dyn SetMeasure> {
        match self {
            Measure::Set(m) => Ok(m.as_ref()),
            Measure::Individual(m) => Err(Error::KindMismatch(format!(
                "set search requires a set measure, but `{}` is an individual measure",
                m.descriptor().name
            ))),
        }
    }

    /// Per-feature scores. Set measures are applied to singleton masks.
    pub fn score_features(&self, data: &Dataset, features: &[usize]) -> Result<Vec<f64>> {
        match self {
            Measure::Individual(m) => m.score(data, features),
            Measure::Set(m) => features
                .iter()
                .map(|&i| m.evaluate(data, &FeatureMask::from_indices(data.n_features(), &[i])))
                .collect(),
        }
    }

    pub fn score_named<S: AsRef<str>>(&self, data: &Dataset, names: &[S]) -> Result<ScoreVector> {
        let idx = names
            .iter()
            .map(|n| data.feature_index(n.as_ref()))
            .collect::<Result<Vec<_>>>()?;
        let scores = self.score_features(data, &idx)?;
        Ok(ScoreVector {
            entries: names
                .iter()
                .map(|n| n.as_ref().to_string())
                .zip(scores)
                .collect(),
        })
    }
}

pub(crate) fn check_features(data: &Dataset, features: &[usize]) -> Result<()> {
    match features.iter().find(|&&i| i >= data.n_features()) {
        Some(&i) => Err(Error::UnknownFeature(format!("#{i}"))),
        None => Ok(()),
    }
}


#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn individual_measure_is_rejected_as_set_measure() {
        let m = Measure::individual(chi_squared());
        let err = m.as_set().err().unwrap();
        assert!(matches!(err, Error::KindMismatch(_)));
        assert!(Measure::set(gini_index()).as_set().is_ok());
    }

    #[test]
    fn set_measures_score_singletons() {
        let d = fixtures::perf();
        let m = Measure::set(gini_index());
        let sv = m.score_named(&d, &["B", "A"]).unwrap();
        assert_eq!(sv.entries, vec![("B".to_string(), 0.5), ("A".to_string(), 1.0)]);
        assert!(m.score_named(&d, &["Z"]).is_err());
    }

    #[test]
    fn orientation_helpers() {
        let max = MeasureDescriptor::new("m", true, MeasureKind::Set);
        let min = MeasureDescriptor::new("m", false, MeasureKind::Set);
        assert!(max.better(2.0, 1.0) && !max.better(1.0, 1.0));
        assert!(min.better(1.0, 2.0) && min.at_least(1.0, 1.0));
        assert!(max.better(0.0, max.worst()) && min.better(0.0, min.worst()));
    }
}
