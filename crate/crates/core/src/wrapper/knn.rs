//! k-nearest-neighbors over mixed numeric/categorical points.

use crate::error::{Error, Result};

/// One row restricted to the selected features, already preprocessed.
#[derive(Debug, Clone, PartialEq)]
pub struct Point {
    pub numeric: Vec<f64>,
    pub categorical: Vec<u32>,
}

impl Point {
    /// Squared distance: squared differences on numeric features plus one
    /// per mismatching categorical feature.
    pub fn distance2(&self, other: &Point) -> f64 {
        let num: f64 = self
            .numeric
            .iter()
            .zip(&other.numeric)
            .map(|(a, b)| (a - b) * (a - b))
            .sum();
        let cat = self
            .categorical
            .iter()
            .zip(&other.categorical)
            .filter(|(a, b)| a != b)
            .count();
        num + cat as f64
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Targets {
    /// Class codes into a level list of size `levels`.
    Classes { codes: Vec<u32>, levels: usize },
    Values(Vec<f64>),
}

impl Targets {
    pub fn len(&self) -> usize {
        match self {
            Targets::Classes { codes, .. } => codes.len(),
            Targets::Values(v) => v.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Restricts to the given rows.
    pub fn subset(&self, rows: &[usize]) -> Targets {
        match self {
            Targets::Classes { codes, levels } => Targets::Classes {
                codes: rows.iter().map(|&r| codes[r]).collect(),
                levels: *levels,
            },
            Targets::Values(v) => Targets::Values(rows.iter().map(|&r| v[r]).collect()),
        }
    }

    /// Prediction from the targets at `rows`: majority vote (ties to the
    /// first level) or mean.
    pub(crate) fn aggregate(&self, rows: &[usize]) -> Prediction {
        match self {
            Targets::Classes { codes, levels } => {
                let mut votes = vec![0usize; *levels];
                for &r in rows {
                    votes[codes[r] as usize] += 1;
                }
                let mut best = 0;
                for (c, &v) in votes.iter().enumerate() {
                    if v > votes[best] {
                        best = c;
                    }
                }
                Prediction::Class(best as u32)
            }
            Targets::Values(v) => {
                Prediction::Value(rows.iter().map(|&r| v[r]).sum::<f64>() / rows.len() as f64)
            }
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Prediction {
    Class(u32),
    Value(f64),
}

/// The `k` training rows closest to `query`, nearest first; equal
/// distances are ordered by row index.
pub(crate) fn nearest(train: &[Point], query: &Point, k: usize) -> Vec<usize> {
    let mut d: Vec<(f64, usize)> = train.iter().enumerate().map(|(i, p)| (p.distance2(query), i)).collect();
    let cmp = |a: &(f64, usize), b: &(f64, usize)| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1));
    let k = k.min(d.len());
    if k < d.len() {
        d.select_nth_unstable_by(k, cmp);
        d.truncate(k);
    }
    d.sort_unstable_by(cmp);
    d.into_iter().map(|(_, i)| i).collect()
}

/// Fits on `train`/`targets` and predicts every `test` point.
pub fn knn_fit_predict(train: &[Point], targets: &Targets, test: &[Point], k: usize) -> Result<Vec<Prediction>> {
    if train.is_empty() {
        return Err(Error::config("knn needs a non-empty training set"));
    }
    if targets.len() != train.len() {
        return Err(Error::config("training points and targets differ in length"));
    }
    if k == 0 || k > train.len() {
        return Err(Error::config(format!(
            "k must lie in 1..={}, got {k}",
            train.len()
        )));
    }
    Ok(test
        .iter()
        .map(|q| targets.aggregate(&nearest(train, q, k)))
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(x: &[f64]) -> Point {
        Point {
            numeric: x.to_vec(),
            categorical: vec![],
        }
    }

    #[test]
    fn identical_point_takes_its_label() {
        let train = vec![p(&[0.0]), p(&[5.0]), p(&[9.0])];
        let y = Targets::Classes { codes: vec![0, 1, 2], levels: 3 };
        let out = knn_fit_predict(&train, &y, &[p(&[5.0])], 1).unwrap();
        assert_eq!(out, [Prediction::Class(1)]);
    }

    #[test]
    fn equidistant_majority() {
        let train = vec![p(&[1.0]), p(&[-1.0]), p(&[1.0])];
        // labels a, a, b with a = level 0
        let y = Targets::Classes { codes: vec![0, 0, 1], levels: 2 };
        let out = knn_fit_predict(&train, &y, &[p(&[0.0])], 3).unwrap();
        assert_eq!(out, [Prediction::Class(0)]);
    }

    #[test]
    fn vote_tie_goes_to_first_level() {
        let train = vec![p(&[1.0]), p(&[-1.0])];
        let y = Targets::Classes { codes: vec![1, 0], levels: 2 };
        let out = knn_fit_predict(&train, &y, &[p(&[0.0])], 2).unwrap();
        assert_eq!(out, [Prediction::Class(0)]);
    }

    #[test]
    fn distance_tie_goes_to_lower_row() {
        let train = vec![p(&[1.0]), p(&[-1.0])];
        let y = Targets::Classes { codes: vec![1, 0], levels: 2 };
        let out = knn_fit_predict(&train, &y, &[p(&[0.0])], 1).unwrap();
        assert_eq!(out, [Prediction::Class(1)]);
    }

    #[test]
    fn regression_mean() {
        let train = vec![p(&[0.0]), p(&[1.0]), p(&[10.0])];
        let y = Targets::Values(vec![2.0, 4.0, 100.0]);
        let out = knn_fit_predict(&train, &y, &[p(&[0.4])], 2).unwrap();
        assert_eq!(out, [Prediction::Value(3.0)]);
    }

    #[test]
    fn categorical_mismatch_counts_one() {
        let a = Point { numeric: vec![0.0], categorical: vec![1, 2] };
        let b = Point { numeric: vec![3.0], categorical: vec![1, 0] };
        assert_eq!(a.distance2(&b), 10.0);
    }

    #[test]
    fn bad_k_and_empty_train() {
        let y = Targets::Values(vec![1.0]);
        assert!(knn_fit_predict(&[p(&[0.0])], &y, &[], 2).is_err());
        assert!(knn_fit_predict(&[p(&[0.0])], &y, &[], 0).is_err());
        assert!(knn_fit_predict(&[], &Targets::Values(vec![]), &[], 1).is_err());
    }
}
