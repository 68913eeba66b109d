//! Relief feature weighting.
//!
//! For each sampled instance the `k` nearest hits (same class) and nearest
//! misses (any other class) are found under the Manhattan distance of the
//! per-feature diffs over *all* features. Each requested feature's weight
//! accumulates `diff(miss) − diff(hit)`, averaged over neighbors and samples.
//! Numeric diffs are `|a − b| / (max − min)` (0 for constant features),
//! categorical diffs are 0/1. Neighbor ties go to the lowest row index.

use rand::seq::index;

use crate::dataset::{ColumnData, Dataset};
use crate::error::{Error, Result};
use crate::rng::{self, Stream};

use super::table::class_codes;
use super::{check_features, IndividualMeasure, MeasureDescriptor, MeasureKind};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ReliefConfig {
    pub neighbors: usize,
    /// Number of instances drawn without replacement; `None` visits every row in order.
    pub sample: Option<usize>,
    pub seed: u64,
}

impl Default for ReliefConfig {
    fn default() -> Self {
        ReliefConfig {
            neighbors: 1,
            sample: None,
            seed: 0,
        }
    }
}

pub struct Relief {
    desc: MeasureDescriptor,
    config: ReliefConfig,
}

impl Relief {
    pub fn new(config: ReliefConfig) -> Result<Self> {
        if config.neighbors == 0 {
            return Err(Error::config("relief needs at least one neighbor"));
        }
        if config.sample == Some(0) {
            return Err(Error::config("relief sample size must be positive"));
        }
        Ok(Relief {
            desc: MeasureDescriptor::new("relief", true, MeasureKind::Individual),
            config,
        })
    }
}

pub fn relief() -> Relief {
    Relief::new(ReliefConfig::default()).expect("default relief config is valid")
}

enum Diff<'a> {
    Numeric { values: &'a [f64], range: f64 },
    Categorical(&'a [u32]),
}

impl Diff<'_> {
    fn of(column: &ColumnData) -> Diff<'_> {
        match column {
            ColumnData::Numeric(values) => {
                let (lo, hi) = values
                    .iter()
                    .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &v| (lo.min(v), hi.max(v)));
                Diff::Numeric {
                    values,
                    range: hi - lo,
                }
            }
            ColumnData::Categorical { codes, .. } => Diff::Categorical(codes),
        }
    }

    fn between(&self, a: usize, b: usize) -> f64 {
        match self {
            Diff::Numeric { values, range } => {
                if *range > 0.0 {
                    (values[a] - values[b]).abs() / range
                } else {
                    0.0
                }
            }
            Diff::Categorical(codes) => {
                if codes[a] == codes[b] {
                    0.0
                } else {
                    1.0
                }
            }
        }
    }
}

impl IndividualMeasure for Relief {
    fn descriptor(&self) -> &MeasureDescriptor {
        &self.desc
    }

    fn score(&self, data: &Dataset, features: &[usize]) -> Result<Vec<f64>> {
        check_features(data, features)?;
        let (classes, _) = class_codes(data, &self.desc.name)?;
        let (class_levels, _) = data.class_labels()?;
        let diffs: Vec<Diff> = data.features().map(|c| Diff::of(c.data())).collect();
        let n = data.n_rows();

        let rows: Vec<usize> = match self.config.sample {
            None => (0..n).collect(),
            Some(m) => {
                let mut rng = rng::stream(self.config.seed, Stream::Relief);
                index::sample(&mut rng, n, m.min(n)).into_vec()
            }
        };

        let mut weights = vec![0.0; features.len()];
        let mut hits: Vec<(f64, usize)> = Vec::with_capacity(n);
        let mut misses: Vec<(f64, usize)> = Vec::with_capacity(n);
        for &r in &rows {
            hits.clear();
            misses.clear();
            for j in (0..n).filter(|&j| j != r) {
                let d: f64 = diffs.iter().map(|f| f.between(r, j)).sum();
                if classes[j] == classes[r] {
                    hits.push((d, j));
                } else {
                    misses.push((d, j));
                }
            }
            let class = || class_levels[classes[r] as usize].clone();
            if hits.is_empty() {
                return Err(Error::NoHit { row: r + 1, class: class() });
            }
            if misses.is_empty() {
                return Err(Error::NoMiss { row: r + 1, class: class() });
            }
            let k_hit = self.config.neighbors.min(hits.len());
            let k_miss = self.config.neighbors.min(misses.len());
            let by_distance = |a: &(f64, usize), b: &(f64, usize)| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1));
            hits.sort_by(by_distance);
            misses.sort_by(by_distance);

            for (w, &f) in weights.iter_mut().zip(features) {
                let hit: f64 = hits[..k_hit].iter().map(|&(_, j)| diffs[f].between(r, j)).sum::<f64>();
                let miss: f64 = misses[..k_miss].iter().map(|&(_, j)| diffs[f].between(r, j)).sum::<f64>();
                *w += miss / k_miss as f64 - hit / k_hit as f64;
            }
        }
        let m = rows.len() as f64;
        Ok(weights.into_iter().map(|w| w / m).collect())
    }
}
