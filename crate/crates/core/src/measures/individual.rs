use crate::dataset::{Dataset, DiscretizationSpec};
use crate::error::Result;

use super::table::{class_codes, feature_codes, Partition, Table};
use super::{check_features, IndividualMeasure, MeasureDescriptor, MeasureKind};

/// Floor applied to the Fisher-score denominator.
pub const FISHER_EPSILON: f64 = 1e-12;

fn feature_table(data: &Dataset, i: usize, spec: &DiscretizationSpec, name: &str) -> Result<Table> {
    let (classes, n_classes) = class_codes(data, name)?;
    let partition = Partition::from_codes(data.n_rows(), [feature_codes(data, i, spec)]);
    Ok(Table::new(&partition, classes, n_classes))
}

/// Pearson χ² of the feature × class table, no continuity correction.
fn chi_squared_statistic(t: &Table) -> f64 {
    let n = t.n as f64;
    let mut chi = 0.0;
    for (row, &ng) in t.counts.iter().zip(&t.group_totals) {
        for (&observed, &nc) in row.iter().zip(&t.class_totals) {
            let expected = ng as f64 * nc as f64 / n;
            if expected > 0.0 {
                chi += (observed as f64 - expected).powi(2) / expected;
            }
        }
    }
    chi
}

pub struct ChiSquared {
    desc: MeasureDescriptor,
    discretization: DiscretizationSpec,
}

impl ChiSquared {
    pub fn new(discretization: DiscretizationSpec) -> Self {
        ChiSquared {
            desc: MeasureDescriptor::new("chiSquared", true, MeasureKind::Individual),
            discretization,
        }
    }
}

impl IndividualMeasure for ChiSquared {
    fn descriptor(&self) -> &MeasureDescriptor {
        &self.desc
    }

    fn score(&self, data: &Dataset, features: &[usize]) -> Result<Vec<f64>> {
        check_features(data, features)?;
        features
            .iter()
            .map(|&i| {
                feature_table(data, i, &self.discretization, &self.desc.name)
                    .map(|t| chi_squared_statistic(&t))
            })
            .collect()
    }
}

pub struct CramerV {
    desc: MeasureDescriptor,
    discretization: DiscretizationSpec,
}

impl CramerV {
    pub fn new(discretization: DiscretizationSpec) -> Self {
        CramerV {
            desc: MeasureDescriptor::new("cramer", true, MeasureKind::Individual),
            discretization,
        }
    }
}

impl IndividualMeasure for CramerV {
    fn descriptor(&self) -> &MeasureDescriptor {
        &self.desc
    }

    fn score(&self, data: &Dataset, features: &[usize]) -> Result<Vec<f64>> {
        check_features(data, features)?;
        features
            .iter()
            .map(|&i| {
                let t = feature_table(data, i, &self.discretization, &self.desc.name)?;
                let rows = t.group_totals.iter().filter(|&&n| n > 0).count();
                let cols = t.class_totals.iter().filter(|&&n| n > 0).count();
                let dim = rows.min(cols).saturating_sub(1);
                if dim == 0 {
                    return Ok(0.0);
                }
                let v = (chi_squared_statistic(&t) / (t.n as f64 * dim as f64)).sqrt();
                Ok(v.min(1.0))
            })
            .collect()
    }
}

/// Fisher score on raw numeric values:
/// Σ_c n_c (μ_c − μ)² / max(Σ_c n_c σ²_c, ε) with population variances.
pub struct FScore {
    desc: MeasureDescriptor,
}

impl Default for FScore {
    fn default() -> Self {
        FScore {
            desc: MeasureDescriptor::new("fscore", true, MeasureKind::Individual),
        }
    }
}

impl IndividualMeasure for FScore {
    fn descriptor(&self) -> &MeasureDescriptor {
        &self.desc
    }

    fn score(&self, data: &Dataset, features: &[usize]) -> Result<Vec<f64>> {
        check_features(data, features)?;
        let (classes, n_classes) = class_codes(data, &self.desc.name)?;
        features
            .iter()
            .map(|&i| {
                let values = data.feature(i).as_numeric()?;
                Ok(fisher(values, classes, n_classes))
            })
            .collect()
    }
}

fn fisher(values: &[f64], classes: &[u32], n_classes: usize) -> f64 {
    let n = values.len() as f64;
    let mean = values.iter().sum::<f64>() / n;
    let mut count = vec![0usize; n_classes];
    let mut sum = vec![0.0; n_classes];
    for (&v, &c) in values.iter().zip(classes) {
        count[c as usize] += 1;
        sum[c as usize] += v;
    }
    let class_mean: Vec<f64> = sum
        .iter()
        .zip(&count)
        .map(|(s, &k)| if k > 0 { s / k as f64 } else { 0.0 })
        .collect();
    // n_c · σ²_c summed over classes is the within-class sum of squares
    let within: f64 = values
        .iter()
        .zip(classes)
        .map(|(&v, &c)| (v - class_mean[c as usize]).powi(2))
        .sum();
    let between: f64 = count
        .iter()
        .zip(&class_mean)
        .map(|(&k, &m)| k as f64 * (m - mean).powi(2))
        .sum();
    between / within.max(FISHER_EPSILON)
}

pub fn chi_squared() -> ChiSquared {
    ChiSquared::new(DiscretizationSpec::default())
}

pub fn cramer_v() -> CramerV {
    CramerV::new(DiscretizationSpec::default())
}

pub fn f_score() -> FScore {
    FScore::default()
}
