use nalgebra::{DMatrix, DVector};

use crate::dataset::{Dataset, TaskKind};
use crate::error::{Error, Result};
use crate::mask::FeatureMask;

use super::{MeasureDescriptor, MeasureKind, SetMeasure};

/// R² = 1 − SSE/SST of an ordinary least-squares fit with intercept of the
/// numeric class on the masked (raw) numeric features. Rank-deficient
/// designs use the minimum-norm solution.
pub struct DeterminationCoefficient {
    desc: MeasureDescriptor,
}

impl Default for DeterminationCoefficient {
    fn default() -> Self {
        DeterminationCoefficient {
            desc: MeasureDescriptor::new("determinationCoefficient", true, MeasureKind::Set),
        }
    }
}

pub fn determination_coefficient() -> DeterminationCoefficient {
    DeterminationCoefficient::default()
}

impl SetMeasure for DeterminationCoefficient {
    fn descriptor(&self) -> &MeasureDescriptor {
        &self.desc
    }

    fn evaluate(&self, data: &Dataset, mask: &FeatureMask) -> Result<f64> {
        data.check_mask(mask)?;
        if mask.is_empty() {
            return Err(Error::EmptyMask);
        }
        if data.task() != TaskKind::Regression {
            return Err(Error::MeasureInapplicable {
                measure: self.desc.name.clone(),
                task: data.task().to_string(),
            });
        }
        let y = data.class().as_numeric()?;
        let n = data.n_rows();
        let mean = y.iter().sum::<f64>() / n as f64;
        let sst: f64 = y.iter().map(|v| (v - mean).powi(2)).sum();
        if sst == 0.0 {
            return Err(Error::DegenerateTarget);
        }

        let cols = mask
            .indices()
            .map(|i| data.feature(i).as_numeric())
            .collect::<Result<Vec<_>>>()?;
        let x = DMatrix::from_fn(n, cols.len() + 1, |r, c| if c == 0 { 1.0 } else { cols[c - 1][r] });
        let target = DVector::from_column_slice(y);
        let beta = x
            .clone()
            .svd(true, true)
            .solve(&target, 1e-10 * n as f64)
            .map_err(|e| Error::InvalidDataset(format!("least squares failed: {e}")))?;
        let residual = &target - x * beta;
        let sse = residual.norm_squared();
        Ok((1.0 - sse / sst).clamp(0.0, 1.0))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dataset::Column;
    use rand::{Rng, SeedableRng};

    fn regression(features: Vec<(&str, Vec<f64>)>, y: Vec<f64>) -> Dataset {
        let mut cols: Vec<Column> = features
            .into_iter()
            .map(|(n, v)| Column::numeric(n, v).unwrap())
            .collect();
        cols.push(Column::numeric("Y", y).unwrap());
        Dataset::new(cols, "Y").unwrap()
    }

    /// R² from the normal equations (XᵀX)β = Xᵀy solved by Gaussian elimination.
    fn normal_equations_r2(x: &[Vec<f64>], y: &[f64]) -> f64 {
        let n = y.len();
        let p = x.len() + 1;
        let row = |r: usize| {
            std::iter::once(1.0)
                .chain(x.iter().map(move |c| c[r]))
                .collect::<Vec<_>>()
        };
        let mut a = vec![vec![0.0; p + 1]; p];
        for r in 0..n {
            let xr = row(r);
            for i in 0..p {
                for j in 0..p {
                    a[i][j] += xr[i] * xr[j];
                }
                a[i][p] += xr[i] * y[r];
            }
        }
        for col in 0..p {
            let pivot = (col..p).max_by(|&i, &j| a[i][col].abs().total_cmp(&a[j][col].abs())).unwrap();
            a.swap(col, pivot);
            for i in 0..p {
                if i != col {
                    let f = a[i][col] / a[col][col];
                    for j in col..=p {
                        a[i][j] -= f * a[col][j];
                    }
                }
            }
        }
        let beta: Vec<f64> = (0..p).map(|i| a[i][p] / a[i][i]).collect();
        let mean = y.iter().sum::<f64>() / n as f64;
        let sst: f64 = y.iter().map(|v| (v - mean).powi(2)).sum();
        let sse: f64 = (0..n)
            .map(|r| {
                let pred: f64 = row(r).iter().zip(&beta).map(|(a, b)| a * b).sum();
                (y[r] - pred).powi(2)
            })
            .sum();
        1.0 - sse / sst
    }

    #[test]
    fn exact_linear_fit() {
        let x: Vec<f64> = (0..20).map(f64::from).collect();
        let y = x.iter().map(|v| 2.0 * v + 1.0).collect();
        let d = regression(vec![("X", x)], y);
        let r2 = determination_coefficient().evaluate(&d, &FeatureMask::full(1)).unwrap();
        assert!((r2 - 1.0).abs() < 1e-9);
    }

    #[test]
    fn uncorrelated_noise_is_near_zero() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(3);
        let x: Vec<f64> = (0..1000).map(|_| rng.gen_range(-1.0..1.0)).collect();
        let y: Vec<f64> = (0..1000).map(|_| rng.gen_range(-1.0..1.0)).collect();
        let oracle = normal_equations_r2(&[x.clone()], &y);
        let d = regression(vec![("X", x)], y);
        let r2 = determination_coefficient().evaluate(&d, &FeatureMask::full(1)).unwrap();
        assert!(r2 < 0.02, "{r2}");
        assert!((r2 - oracle).abs() < 1e-9, "{r2} vs {oracle}");
    }

    #[test]
    fn class_copy_is_perfect_and_duplicates_are_tolerated() {
        let y: Vec<f64> = vec![1.0, 4.0, 2.0, 8.0, 5.0];
        let noise = vec![0.3, -1.0, 2.0, 0.0, 1.1];
        let d = regression(
            vec![("N", noise.clone()), ("Copy", y.clone()), ("Copy2", y.clone())],
            y,
        );
        let r2 = determination_coefficient()
            .evaluate(&d, &FeatureMask::full(3))
            .unwrap();
        assert!((r2 - 1.0).abs() < 1e-9, "{r2}");
    }

    #[test]
    fn multi_feature_matches_normal_equations() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(9);
        let x1: Vec<f64> = (0..50).map(|_| rng.gen_range(0.0..3.0)).collect();
        let x2: Vec<f64> = (0..50).map(|_| rng.gen_range(-2.0..2.0)).collect();
        let y: Vec<f64> = (0..50)
            .map(|i| 0.5 * x1[i] - x2[i] + rng.gen_range(-1.0..1.0))
            .collect();
        let oracle = normal_equations_r2(&[x1.clone(), x2.clone()], &y);
        let d = regression(vec![("A", x1), ("B", x2)], y);
        let r2 = determination_coefficient().evaluate(&d, &FeatureMask::full(2)).unwrap();
        assert!((r2 - oracle).abs() < 1e-9);
    }

    #[test]
    fn errors() {
        let d = regression(vec![("X", vec![1.0, 2.0, 3.0])], vec![5.0, 5.0, 5.0]);
        let m = determination_coefficient();
        assert!(matches!(m.evaluate(&d, &FeatureMask::full(1)), Err(Error::DegenerateTarget)));
        assert!(matches!(m.evaluate(&d, &FeatureMask::empty(1)), Err(Error::EmptyMask)));
        let cls = crate::measures::fixtures::perf();
        assert!(matches!(
            m.evaluate(&cls, &FeatureMask::full(2)),
            Err(Error::MeasureInapplicable { .. })
        ));
    }
}
