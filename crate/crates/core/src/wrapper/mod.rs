//! Wrapper measures: a learner scored by cross-validation on the selected
//! features, packaged as a set measure.
//!
//! Fold assignment: the row indices are shuffled (Fisher–Yates) with the
//! resampling stream of the seed. For stratified resampling the shuffled
//! order is then stably grouped by class level. Rows are finally dealt
//! round-robin into folds starting at fold 0.

mod knn;

use rand::seq::SliceRandom;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::dataset::{ColumnData, Dataset, TaskKind};
use crate::error::{Error, Result};
use crate::mask::FeatureMask;
use crate::measures::{MeasureDescriptor, MeasureKind, SetMeasure};
use crate::rng::{self, Stream};

pub use knn::{knn_fit_predict, Point, Prediction, Targets};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Algorithm {
    Knn,
    ZeroBaseline,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct LearnerSpec {
    pub algorithm: Algorithm,
    pub task: TaskKind,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ResamplingSpec {
    pub folds: usize,
    /// Only meaningful for classification.
    pub stratified: bool,
    pub seed: u64,
}

impl ResamplingSpec {
    pub fn cv(folds: usize, seed: u64) -> Self {
        ResamplingSpec {
            folds,
            stratified: true,
            seed,
        }
    }
}

impl Default for ResamplingSpec {
    fn default() -> Self {
        ResamplingSpec::cv(10, 0)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Metric {
    Accuracy,
    #[serde(rename = "RMSE")]
    Rmse,
}

impl Metric {
    pub fn maximize(self) -> bool {
        matches!(self, Metric::Accuracy)
    }

    pub fn task(self) -> TaskKind {
        match self {
            Metric::Accuracy => TaskKind::Classification,
            Metric::Rmse => TaskKind::Regression,
        }
    }

    pub fn for_task(task: TaskKind) -> Self {
        match task {
            TaskKind::Classification => Metric::Accuracy,
            TaskKind::Regression => Metric::Rmse,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FitSpec {
    pub center: bool,
    pub scale: bool,
    pub metric: Metric,
    /// Neighbor counts to try.
    pub grid: Vec<usize>,
}

impl FitSpec {
    /// Center and scale, k = 1..=20.
    pub fn standard(metric: Metric) -> Self {
        FitSpec {
            center: true,
            scale: true,
            metric,
            grid: (1..=20).collect(),
        }
    }
}

/// Center/scale parameters for the numeric features, fitted on one
/// training split.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Scaling {
    pub means: Vec<f64>,
    pub sds: Vec<f64>,
}

impl Scaling {
    pub fn fit(points: &[Point], rows: &[usize]) -> Self {
        let width = points.first().map_or(0, |p| p.numeric.len());
        let n = rows.len() as f64;
        let mut means = vec![0.0; width];
        let mut sds = vec![0.0; width];
        for j in 0..width {
            let mean = rows.iter().map(|&r| points[r].numeric[j]).sum::<f64>() / n;
            let var = rows
                .iter()
                .map(|&r| (points[r].numeric[j] - mean).powi(2))
                .sum::<f64>()
                / n;
            means[j] = mean;
            sds[j] = var.sqrt();
        }
        Scaling { means, sds }
    }

    fn apply(&self, p: &Point, center: bool, scale: bool) -> Point {
        let numeric = p
            .numeric
            .iter()
            .enumerate()
            .map(|(j, &x)| {
                let x = if center { x - self.means[j] } else { x };
                match (scale, self.sds[j]) {
                    (false, _) => x,
                    (true, sd) if sd > 0.0 => x / sd,
                    (true, _) => 0.0,
                }
            })
            .collect();
        Point {
            numeric,
            categorical: p.categorical.clone(),
        }
    }
}

/// Outcome of cross-validating one hyperparameter setting.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CvReport {
    pub score: f64,
    pub fold_scores: Vec<f64>,
    /// The neighbor count actually used (clamped to the smallest training
    /// split).
    pub k: usize,
    pub clamped: bool,
    pub scalings: Vec<Scaling>,
}

/// Row indices per fold.
pub fn assign_folds(d: &Dataset, resampling: &ResamplingSpec) -> Result<Vec<Vec<usize>>> {
    let n = d.n_rows();
    if resampling.folds < 2 || resampling.folds > n {
        return Err(Error::config(format!(
            "folds must lie in 2..={n}, got {}",
            resampling.folds
        )));
    }
    let mut order: Vec<usize> = (0..n).collect();
    order.shuffle(&mut rng::stream(resampling.seed, Stream::Resampling));
    if resampling.stratified {
        if let ColumnData::Categorical { codes, .. } = d.class().data() {
            order.sort_by_key(|&r| codes[r]);
        }
    }
    let mut folds = vec![Vec::new(); resampling.folds];
    for (i, r) in order.into_iter().enumerate() {
        folds[i % resampling.folds].push(r);
    }
    Ok(folds)
}

fn points(d: &Dataset, mask: &FeatureMask) -> Result<Vec<Point>> {
    d.check_mask(mask)?;
    if mask.is_empty() {
        return Err(Error::EmptyMask);
    }
    let mut rows = vec![
        Point {
            numeric: Vec::new(),
            categorical: Vec::new()
        };
        d.n_rows()
    ];
    for i in mask.indices() {
        match d.feature(i).data() {
            ColumnData::Numeric(v) => rows.iter_mut().zip(v).for_each(|(p, &x)| p.numeric.push(x)),
            ColumnData::Categorical { codes, .. } => {
                rows.iter_mut().zip(codes).for_each(|(p, &c)| p.categorical.push(c))
            }
        }
    }
    Ok(rows)
}

fn targets(d: &Dataset) -> Targets {
    match d.class().data() {
        ColumnData::Categorical { levels, codes } => Targets::Classes {
            codes: codes.clone(),
            levels: levels.len(),
        },
        ColumnData::Numeric(v) => Targets::Values(v.clone()),
    }
}

fn fold_metric(metric: Metric, predictions: &[Prediction], truth: &Targets, rows: &[usize]) -> f64 {
    match (metric, truth) {
        (Metric::Accuracy, Targets::Classes { codes, .. }) => {
            let hits = predictions
                .iter()
                .zip(rows)
                .filter(|(p, &r)| **p == Prediction::Class(codes[r]))
                .count();
            hits as f64 / rows.len() as f64
        }
        (Metric::Rmse, Targets::Values(v)) => {
            let sse: f64 = predictions
                .iter()
                .zip(rows)
                .map(|(p, &r)| match p {
                    Prediction::Value(x) => (x - v[r]).powi(2),
                    Prediction::Class(_) => unreachable!("regression predicts values"),
                })
                .sum();
            (sse / rows.len() as f64).sqrt()
        }
        _ => unreachable!("metric and task are checked before fitting"),
    }
}

struct Protocol<'a> {
    learner: &'a LearnerSpec,
    resampling: &'a ResamplingSpec,
    fitting: &'a FitSpec,
}

struct GridOutcome {
    /// Per grid point: per-fold metric.
    scores: Vec<Vec<f64>>,
    ks: Vec<usize>,
    clamped: bool,
    scalings: Vec<Scaling>,
}

impl Protocol<'_> {
    fn check(&self, d: &Dataset) -> Result<()> {
        let task = d.task();
        if task != self.learner.task || task != self.fitting.metric.task() {
            return Err(Error::MeasureInapplicable {
                measure: "wrapper".into(),
                task: task.to_string(),
            });
        }
        Ok(())
    }

    fn run(&self, d: &Dataset, mask: &FeatureMask, grid: &[usize]) -> Result<GridOutcome> {
        self.check(d)?;
        let pts = points(d, mask)?;
        let truth = targets(d);
        let folds = assign_folds(d, self.resampling)?;
        let n = d.n_rows();
        let min_train = folds.iter().map(|f| n - f.len()).min().unwrap_or(0);
        let ks: Vec<usize> = grid.iter().map(|&k| k.min(min_train)).collect();
        let clamped = ks.iter().zip(grid).any(|(a, b)| a != b);
        let k_max = ks.iter().copied().max().unwrap_or(1);

        let per_fold: Vec<Result<(Vec<f64>, Scaling)>> = folds
            .par_iter()
            .enumerate()
            .map(|(f, test_rows)| {
                let train_rows: Vec<usize> = (0..n).filter(|r| !test_rows.contains(r)).collect();
                if train_rows.is_empty() {
                    return Err(Error::EmptyTrainingSplit { fold: f });
                }
                let scaling = Scaling::fit(&pts, &train_rows);
                let (c, s) = (self.fitting.center, self.fitting.scale);
                let train: Vec<Point> = train_rows.iter().map(|&r| scaling.apply(&pts[r], c, s)).collect();
                let train_truth = truth.subset(&train_rows);
                let mut predictions = vec![Vec::with_capacity(test_rows.len()); ks.len()];
                for &r in test_rows {
                    match self.learner.algorithm {
                        Algorithm::Knn => {
                            let near = knn::nearest(&train, &scaling.apply(&pts[r], c, s), k_max);
                            for (g, &k) in ks.iter().enumerate() {
                                predictions[g].push(train_truth.aggregate(&near[..k]));
                            }
                        }
                        Algorithm::ZeroBaseline => {
                            let all: Vec<usize> = (0..train.len()).collect();
                            let p = train_truth.aggregate(&all);
                            predictions.iter_mut().for_each(|v| v.push(p));
                        }
                    }
                }
                let scores = predictions
                    .iter()
                    .map(|p| fold_metric(self.fitting.metric, p, &truth, test_rows))
                    .collect();
                Ok((scores, scaling))
            })
            .collect();

        let mut scores = vec![Vec::with_capacity(folds.len()); ks.len()];
        let mut scalings = Vec::with_capacity(folds.len());
        for r in per_fold {
            let (fold_scores, scaling) = r?;
            for (g, s) in fold_scores.into_iter().enumerate() {
                scores[g].push(s);
            }
            scalings.push(scaling);
        }
        Ok(GridOutcome {
            scores,
            ks,
            clamped,
            scalings,
        })
    }
}

fn mean(v: &[f64]) -> f64 {
    v.iter().sum::<f64>() / v.len() as f64
}

/// Cross-validates the learner with `k` neighbors on the masked features.
pub fn cross_validate(
    d: &Dataset,
    mask: &FeatureMask,
    learner: &LearnerSpec,
    k: usize,
    resampling: &ResamplingSpec,
    fitting: &FitSpec,
) -> Result<CvReport> {
    if k == 0 {
        return Err(Error::config("k must be at least 1"));
    }
    let protocol = Protocol {
        learner,
        resampling,
        fitting,
    };
    let mut out = protocol.run(d, mask, &[k])?;
    let fold_scores = out.scores.remove(0);
    Ok(CvReport {
        score: mean(&fold_scores),
        fold_scores,
        k: out.ks[0],
        clamped: out.clamped,
        scalings: out.scalings,
    })
}

/// A learner + resampling + fitting protocol usable as a set measure: the
/// value of a mask is the best mean CV metric over the grid.
#[derive(Debug, Clone)]
pub struct WrapperEvaluator {
    pub learner: LearnerSpec,
    pub resampling: ResamplingSpec,
    pub fitting: FitSpec,
    descriptor: MeasureDescriptor,
}

pub fn make_wrapper_evaluator(
    learner: LearnerSpec,
    resampling: ResamplingSpec,
    fitting: FitSpec,
) -> Result<WrapperEvaluator> {
    if fitting.metric.task() != learner.task {
        return Err(Error::config(format!(
            "metric {:?} does not fit a {} learner",
            fitting.metric, learner.task
        )));
    }
    if fitting.grid.is_empty() || fitting.grid.contains(&0) {
        return Err(Error::config("the grid must be non-empty with every k ≥ 1"));
    }
    if resampling.folds < 2 {
        return Err(Error::config("at least two folds are required"));
    }
    let descriptor = MeasureDescriptor::new("wrapper", fitting.metric.maximize(), MeasureKind::Set);
    Ok(WrapperEvaluator {
        learner,
        resampling,
        fitting,
        descriptor,
    })
}

impl WrapperEvaluator {
    /// Mean CV metric of every grid point, in grid order.
    pub fn grid_scores(&self, d: &Dataset, mask: &FeatureMask) -> Result<Vec<f64>> {
        let protocol = Protocol {
            learner: &self.learner,
            resampling: &self.resampling,
            fitting: &self.fitting,
        };
        let out = protocol.run(d, mask, &self.fitting.grid)?;
        Ok(out.scores.iter().map(|s| mean(s)).collect())
    }
}

impl SetMeasure for WrapperEvaluator {
    fn descriptor(&self) -> &MeasureDescriptor {
        &self.descriptor
    }

    fn evaluate(&self, d: &Dataset, mask: &FeatureMask) -> Result<f64> {
        let scores = self.grid_scores(d, mask)?;
        let mut best = scores[0];
        for &s in &scores[1..] {
            if self.descriptor.better(s, best) {
                best = s;
            }
        }
        Ok(best)
    }
}
